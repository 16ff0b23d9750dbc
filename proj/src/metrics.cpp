#include "archprog/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "archprog/error.hpp"
#include "archprog/pointcloud.hpp"

namespace archprog {

namespace {

constexpr std::uint32_t kLeafSize = 8;

double coord(Vec3 p, int axis) { return axis == 0 ? p.x : axis == 1 ? p.y : p.z; }

void require_points(std::span<const Vec3> a, std::span<const Vec3> b) {
    if (a.empty() || b.empty()) throw GeometryError("hausdorff of an empty point set");
}

struct Dsu {
    std::vector<std::size_t> parent;
    explicit Dsu(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

} // namespace

KdTree::KdTree(std::span<const Vec3> points) : points_(points.begin(), points.end()) {
    if (!points_.empty()) build(0, static_cast<std::uint32_t>(points_.size()));
}

int KdTree::build(std::uint32_t begin, std::uint32_t end) {
    const int id = static_cast<int>(nodes_.size());
    nodes_.push_back({begin, end});
    if (end - begin <= kLeafSize) return id;

    Vec3 lo = points_[begin], hi = points_[begin];
    for (std::uint32_t i = begin; i < end; ++i) {
        const Vec3 p = points_[i];
        lo = {std::min(lo.x, p.x), std::min(lo.y, p.y), std::min(lo.z, p.z)};
        hi = {std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z)};
    }
    const Vec3 ext = hi - lo;
    const int axis = ext.x >= ext.y && ext.x >= ext.z ? 0 : ext.y >= ext.z ? 1 : 2;
    const std::uint32_t mid = begin + (end - begin) / 2;
    std::nth_element(points_.begin() + begin, points_.begin() + mid, points_.begin() + end,
                     [axis](Vec3 a, Vec3 b) { return coord(a, axis) < coord(b, axis); });
    const double split = coord(points_[mid], axis);
    const int left = build(begin, mid);
    const int right = build(mid, end);
    Node& n = nodes_[static_cast<std::size_t>(id)];
    n.axis = static_cast<std::uint8_t>(axis);
    n.split = split;
    n.left = left;
    n.right = right;
    return id;
}

void KdTree::search(int id, Vec3 q, double& best) const {
    const Node& n = nodes_[static_cast<std::size_t>(id)];
    if (n.left < 0) {
        for (std::uint32_t i = n.begin; i < n.end; ++i) best = std::min(best, squared_distance(q, points_[i]));
        return;
    }
    // Left holds coordinates <= split, right holds >= split.
    const double diff = coord(q, n.axis) - n.split;
    const int near = diff < 0.0 ? n.left : n.right;
    const int far = diff < 0.0 ? n.right : n.left;
    search(near, q, best);
    if (diff * diff < best) search(far, q, best);
}

double KdTree::nearest_squared(Vec3 q) const {
    double best = INFINITY;
    if (!nodes_.empty()) search(0, q, best);
    return best;
}

double directed_hausdorff(std::span<const Vec3> a, std::span<const Vec3> b, Exec exec) {
    require_points(a, b);
    const KdTree tree(b);
    const auto n = static_cast<std::ptrdiff_t>(a.size());
    double worst = 0.0;
    if (exec == Exec::Parallel) {
#pragma omp parallel for reduction(max : worst) schedule(static)
        for (std::ptrdiff_t i = 0; i < n; ++i) worst = std::max(worst, tree.nearest_squared(a[static_cast<std::size_t>(i)]));
    } else {
        for (std::ptrdiff_t i = 0; i < n; ++i) worst = std::max(worst, tree.nearest_squared(a[static_cast<std::size_t>(i)]));
    }
    return std::sqrt(worst);
}

double hausdorff(std::span<const Vec3> a, std::span<const Vec3> b, Exec exec) {
    return std::max(directed_hausdorff(a, b, exec), directed_hausdorff(b, a, exec));
}

double hausdorff_bruteforce(std::span<const Vec3> a, std::span<const Vec3> b) {
    require_points(a, b);
    auto directed = [](std::span<const Vec3> x, std::span<const Vec3> y) {
        double worst = 0.0;
        for (const Vec3& p : x) {
            double best = INFINITY;
            for (const Vec3& q : y) best = std::min(best, squared_distance(p, q));
            worst = std::max(worst, best);
        }
        return worst;
    };
    return std::sqrt(std::max(directed(a, b), directed(b, a)));
}

MeshDistance mesh_hausdorff(const Mesh& a, const Mesh& b, std::size_t samples, std::uint64_t seed) {
    if (samples < kMinMeshSamples) throw GeometryError("mesh_hausdorff needs at least 1000 samples");
    Rng ra(seed), rb(seed);
    const PointCloud pa = sample_surface(a, samples, {}, ra);
    const PointCloud pb = sample_surface(b, samples, {}, rb);
    return {hausdorff(pa.points, pb.points), samples, seed};
}

MeshStats mesh_stats(const Mesh& m, double tol_deg, double tol_offset) {
    MeshStats s;
    s.n_faces = m.triangles.size();

    // Weld by exact position so unwelded inputs share edges.
    std::map<std::tuple<double, double, double>, std::uint32_t> ids;
    std::vector<std::array<std::uint32_t, 3>> tri(m.triangles.size());
    for (std::size_t f = 0; f < m.triangles.size(); ++f)
        for (int k = 0; k < 3; ++k) {
            const Vec3 p = m.corner(f, k);
            tri[f][static_cast<std::size_t>(k)] =
                ids.try_emplace({p.x, p.y, p.z}, static_cast<std::uint32_t>(ids.size())).first->second;
        }
    s.n_vertices = ids.size();

    std::vector<Vec3> normal(tri.size());
    std::vector<double> offset(tri.size());
    std::vector<bool> live(tri.size());
    for (std::size_t f = 0; f < tri.size(); ++f) {
        const Vec3 c = cross(m.corner(f, 1) - m.corner(f, 0), m.corner(f, 2) - m.corner(f, 0));
        const double len = norm(c);
        live[f] = len > 1e-14;
        if (!live[f]) continue;
        normal[f] = c * (1.0 / len);
        offset[f] = dot(normal[f], (m.corner(f, 0) + m.corner(f, 1) + m.corner(f, 2)) * (1.0 / 3.0));
    }

    std::map<std::pair<std::uint32_t, std::uint32_t>, std::vector<std::size_t>> edges;
    for (std::size_t f = 0; f < tri.size(); ++f) {
        if (!live[f]) continue;
        for (int k = 0; k < 3; ++k) {
            const std::uint32_t u = tri[f][static_cast<std::size_t>(k)], v = tri[f][static_cast<std::size_t>((k + 1) % 3)];
            edges[{std::min(u, v), std::max(u, v)}].push_back(f);
        }
    }

    const double cos_tol = std::cos(tol_deg * M_PI / 180.0);
    Dsu dsu(tri.size());
    for (const auto& [e, faces] : edges)
        for (std::size_t i = 0; i < faces.size(); ++i)
            for (std::size_t j = i + 1; j < faces.size(); ++j) {
                const std::size_t f = faces[i], g = faces[j];
                if (dot(normal[f], normal[g]) >= cos_tol && std::abs(offset[f] - offset[g]) <= tol_offset)
                    dsu.unite(f, g);
            }
    for (std::size_t f = 0; f < tri.size(); ++f) s.n_planes += live[f] && dsu.find(f) == f;
    return s;
}

} // namespace archprog
