#include "doctest.h"

#include <cmath>

#include "archprog/compiler.hpp"
#include "archprog/error.hpp"
#include "archprog/metrics.hpp"
#include "archprog/rng.hpp"

using namespace archprog;

namespace {

std::vector<Vec3> random_points(Rng& rng, std::size_t n, double spread = 1.0) {
    std::vector<Vec3> v(n);
    for (Vec3& p : v) p = {rng.uniform(-spread, spread), rng.uniform(-spread, spread), rng.uniform(-spread, spread)};
    return v;
}

double oracle_hd(const std::vector<Vec3>& a, const std::vector<Vec3>& b) {
    auto one = [](const std::vector<Vec3>& x, const std::vector<Vec3>& y) {
        double w = 0.0;
        for (const Vec3& p : x) {
            double m = INFINITY;
            for (const Vec3& q : y) m = std::min(m, std::sqrt((p.x - q.x) * (p.x - q.x) + (p.y - q.y) * (p.y - q.y) + (p.z - q.z) * (p.z - q.z)));
            w = std::max(w, m);
        }
        return w;
    };
    return std::max(one(a, b), one(b, a));
}

// Axis-aligned box [0,1]^3 + shift, outward winding; the top face optionally
// as a 4-triangle fan around its centre.
Mesh cube(Vec3 shift = {}, bool fan_top = false) {
    Mesh m;
    for (int i = 0; i < 8; ++i) m.vertices.push_back(Vec3{double(i & 1), double((i >> 1) & 1), double((i >> 2) & 1)} + shift);
    auto quad = [&](std::uint32_t a, std::uint32_t b, std::uint32_t c, std::uint32_t d) {
        m.triangles.push_back({a, b, c});
        m.triangles.push_back({a, c, d});
    };
    quad(0, 2, 3, 1); // z = 0
    quad(0, 1, 5, 4); // y = 0
    quad(2, 6, 7, 3); // y = 1
    quad(0, 4, 6, 2); // x = 0
    quad(1, 3, 7, 5); // x = 1
    if (fan_top) {
        m.vertices.push_back(Vec3{0.5, 0.5, 1.0} + shift);
        const std::uint32_t ring[4] = {4, 5, 7, 6};
        for (int k = 0; k < 4; ++k) m.triangles.push_back({8, ring[k], ring[(k + 1) % 4]});
    } else {
        quad(4, 5, 7, 6);
    }
    m.tags.assign(m.triangles.size(), FaceTag{});
    return m;
}

} // namespace

TEST_CASE("hausdorff examples") {
    const std::vector<Vec3> a{{0, 0, 0}}, b{{1, 0, 0}};
    CHECK(hausdorff(a, b) == 1.0);
    CHECK(hausdorff_bruteforce(a, b) == 1.0);
    Rng rng(3);
    const auto c = random_points(rng, 300);
    CHECK(hausdorff(c, c) == 0.0);
    const std::vector<Vec3> empty;
    CHECK_THROWS_AS(hausdorff(empty, a), GeometryError);
    CHECK_THROWS_AS(hausdorff_bruteforce(a, empty), GeometryError);
}

TEST_CASE("kd-tree result equals the linear scan exactly") {
    Rng rng(11);
    for (int t = 0; t < 100; ++t) {
        const auto a = random_points(rng, 200);
        const auto b = random_points(rng, 200, 0.5 + 0.01 * t);
        const double ref = hausdorff_bruteforce(a, b);
        CHECK(hausdorff(a, b, Exec::Parallel) == ref);
        CHECK(hausdorff(a, b, Exec::Serial) == ref);
        CHECK(ref == doctest::Approx(oracle_hd(a, b)).epsilon(1e-14));
    }
}

TEST_CASE("kd-tree handles duplicates and degenerate layouts") {
    std::vector<Vec3> line, dup(50, Vec3{0.25, 0.25, 0.25});
    for (int i = 0; i < 100; ++i) line.push_back({0.01 * i, 0.0, 0.0});
    CHECK(hausdorff(line, dup) == hausdorff_bruteforce(line, dup));
    CHECK(hausdorff(dup, dup) == 0.0);
    const KdTree tree(line);
    CHECK(tree.nearest_squared({0.505, 1.0, 0.0}) == doctest::Approx(0.005 * 0.005 + 1.0));
}

TEST_CASE("hausdorff is a metric on random triples") {
    Rng rng(5);
    for (int t = 0; t < 50; ++t) {
        const auto a = random_points(rng, 80), b = random_points(rng, 60), c = random_points(rng, 70);
        CHECK(hausdorff(a, b) == hausdorff(b, a));
        CHECK(hausdorff(a, c) <= hausdorff(a, b) + hausdorff(b, c) + 1e-15);
        CHECK(hausdorff(a, b) > 0.0);
    }
}

TEST_CASE("mesh hausdorff") {
    const Mesh c = cube();
    const MeshDistance self = mesh_hausdorff(c, c, 2000, 9);
    CHECK(self.value == 0.0);
    CHECK(self.samples == 2000);
    CHECK(self.seed == 9);

    const MeshDistance shifted = mesh_hausdorff(c, cube({0.1, 0, 0}), 4000);
    CHECK(shifted.value >= 0.1);
    CHECK(shifted.value <= 0.1 + 0.1);
    const MeshDistance finer = mesh_hausdorff(c, cube({0.1, 0, 0}), 16000);
    CHECK(finer.value >= 0.1);
    CHECK(finer.value <= shifted.value + 0.1);
    CHECK(mesh_hausdorff(c, cube({0.1, 0, 0}), 4000).value == shifted.value);
    CHECK_THROWS_AS(mesh_hausdorff(c, c, 999), GeometryError);
    CHECK_THROWS_AS(mesh_hausdorff(c, Mesh{}, 1000), GeometryError);
}

TEST_CASE("mesh stats") {
    const MeshStats s = mesh_stats(cube());
    CHECK(s.n_vertices == 8);
    CHECK(s.n_faces == 12);
    CHECK(s.n_planes == 6);

    const MeshStats fan = mesh_stats(cube({}, true));
    CHECK(fan.n_faces == 14);
    CHECK(fan.n_vertices == 9);
    CHECK(fan.n_planes == 6);

    Mesh square;
    square.vertices = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}};
    square.triangles = {{0, 1, 2}, {0, 2, 3}};
    CHECK(mesh_stats(square).n_planes == 1);

    // Same square as 8 triangles around the centre and the edge midpoints.
    Mesh eight;
    eight.vertices = {{0, 0, 0}, {0.5, 0, 0}, {1, 0, 0}, {1, 0.5, 0}, {1, 1, 0}, {0.5, 1, 0}, {0, 1, 0}, {0, 0.5, 0}, {0.5, 0.5, 0}};
    for (std::uint32_t k = 0; k < 8; ++k) eight.triangles.push_back({8, k, (k + 1) % 8});
    const MeshStats e = mesh_stats(eight);
    CHECK(e.n_faces == 8);
    CHECK(e.n_planes == 1);

    // Two separate coplanar patches stay two planes.
    Mesh two = square;
    for (Vec3 v : square.vertices) two.vertices.push_back(v + Vec3{2, 0, 0});
    two.triangles.push_back({4, 5, 6});
    two.triangles.push_back({4, 6, 7});
    CHECK(mesh_stats(two).n_planes == 2);
}

TEST_CASE("plane tolerances") {
    Mesh bent;
    bent.vertices = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 1e-6}};
    bent.triangles = {{0, 1, 2}, {0, 2, 3}};
    CHECK(mesh_stats(bent).n_planes == 1);
    bent.vertices[3].z = 0.01;
    CHECK(mesh_stats(bent).n_planes == 2);
    CHECK(mesh_stats(bent, 1.0, 1e-2).n_planes == 1);

    Mesh degenerate;
    degenerate.vertices = {{0, 0, 0}, {1, 0, 0}, {2, 0, 0}};
    degenerate.triangles = {{0, 1, 2}};
    const MeshStats d = mesh_stats(degenerate);
    CHECK(d.n_faces == 1);
    CHECK(d.n_planes == 0);
}

TEST_CASE("stats of compiled stacked boxes") {
    const Program p = parse_program(
        "ground = 0\n"
        "L1 = layer(parent=Phi, h=0.5, c=[(-0.5,-0.5),(0.5,-0.5),(0.5,0.5),(-0.5,0.5)])\n"
        "L2 = layer(parent=L1, h=0.5, c=[(-0.25,-0.25),(0.25,-0.25),(0.25,0.25),(-0.25,0.25)])\n");
    const Mesh m = compile(p);
    const MeshStats s = mesh_stats(m);
    CHECK(s.n_planes == 11);
    CHECK(s.n_faces == m.triangles.size());
    CHECK(s.n_vertices == 16);
}
