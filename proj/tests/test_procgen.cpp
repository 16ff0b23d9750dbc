#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "archprog/dsl.hpp"
#include "archprog/error.hpp"
#include "archprog/procgen.hpp"

using namespace archprog;

namespace {

// Independent oracles; none of them call into the library's geometry code.

double shoelace(const std::vector<Vec2>& v) {
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const Vec2& a = v[i];
        const Vec2& b = v[(i + 1) % v.size()];
        s += a.x * b.y - b.x * a.y;
    }
    return 0.5 * std::abs(s);
}

double seg_len(Vec2 a, Vec2 b) { return std::hypot(b.x - a.x, b.y - a.y); }

// Unsigned angle between the two incident edges, in degrees.
double corner_angle(Vec2 prev, Vec2 at, Vec2 next) {
    const double ux = prev.x - at.x, uy = prev.y - at.y, wx = next.x - at.x, wy = next.y - at.y;
    const double c = (ux * wx + uy * wy) / (std::hypot(ux, uy) * std::hypot(wx, wy));
    return std::acos(std::clamp(c, -1.0, 1.0)) * 180.0 / M_PI;
}

double dist_to_seg(Vec2 p, Vec2 a, Vec2 b) {
    const double dx = b.x - a.x, dy = b.y - a.y;
    double t = ((p.x - a.x) * dx + (p.y - a.y) * dy) / (dx * dx + dy * dy);
    t = std::clamp(t, 0.0, 1.0);
    return std::hypot(p.x - (a.x + t * dx), p.y - (a.y + t * dy));
}

bool on_boundary(Vec2 p, const std::vector<Vec2>& v, double tol = 1e-9) {
    for (std::size_t i = 0; i < v.size(); ++i)
        if (dist_to_seg(p, v[i], v[(i + 1) % v.size()]) <= tol) return true;
    return false;
}

bool ray_inside(Vec2 p, const std::vector<Vec2>& v) {
    bool in = false;
    for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++) {
        if ((v[i].y > p.y) != (v[j].y > p.y) &&
            p.x < (v[j].x - v[i].x) * (p.y - v[i].y) / (v[j].y - v[i].y) + v[i].x)
            in = !in;
    }
    return in;
}

double side(Vec2 a, Vec2 b, Vec2 c) { return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x); }

bool proper_cross(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
    const double s1 = side(a, b, c), s2 = side(a, b, d), s3 = side(c, d, a), s4 = side(c, d, b);
    const double e = 1e-12;
    return ((s1 > e && s2 < -e) || (s1 < -e && s2 > e)) && ((s3 > e && s4 < -e) || (s3 < -e && s4 > e));
}

// Child contained in parent: every vertex inside or on the boundary, no
// proper edge crossing, and edge midpoints inside or on the boundary.
bool contained(const std::vector<Vec2>& child, const std::vector<Vec2>& parent) {
    for (std::size_t i = 0; i < child.size(); ++i) {
        const Vec2 a = child[i], b = child[(i + 1) % child.size()];
        const Vec2 mid{(a.x + b.x) / 2, (a.y + b.y) / 2};
        for (const Vec2& q : {a, mid})
            if (!on_boundary(q, parent) && !ray_inside(q, parent)) return false;
        for (std::size_t j = 0; j < parent.size(); ++j)
            if (proper_cross(a, b, parent[j], parent[(j + 1) % parent.size()])) return false;
    }
    return true;
}

bool simple(const std::vector<Vec2>& v) {
    const std::size_t n = v.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            if (j == i + 1 || (i == 0 && j == n - 1)) continue;
            const Vec2 a = v[i], b = v[(i + 1) % n], c = v[j], d = v[(j + 1) % n];
            if (proper_cross(a, b, c, d)) return false;
            if (dist_to_seg(c, a, b) < 1e-12 || dist_to_seg(a, c, d) < 1e-12) return false;
        }
    return true;
}

// The validator rules, recomputed from scratch.
void check_rules(const Polygon2D& child, const Polygon2D& parent) {
    const auto& c = child.vertices;
    REQUIRE(c.size() >= 3);
    CHECK(simple(c));
    double lo = 1e300, hi = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        const double a = corner_angle(c[(i + c.size() - 1) % c.size()], c[i], c[(i + 1) % c.size()]);
        CHECK(a >= 20.0 - 1e-9);
        CHECK(a <= 160.0 + 1e-9);
        const double l = seg_len(c[i], c[(i + 1) % c.size()]);
        lo = std::min(lo, l);
        hi = std::max(hi, l);
    }
    // Strict bound; a ratio equal to 10 up to rounding must not pass.
    CHECK(hi / lo < 10.0 * (1.0 - 1e-12));
    const double ratio = shoelace(c) / shoelace(parent.vertices);
    // Inclusive bounds; the slack absorbs rounding between area formulas.
    CHECK(ratio >= 0.15 - 1e-12);
    CHECK(ratio <= 0.85 + 1e-12);
    CHECK(contained(c, parent.vertices));
}

bool on_lattice(double v) {
    const double k = std::round(v * 100.0);
    return std::abs(v * 100.0 - k) < 1e-6 && static_cast<long long>(std::abs(k)) % 2 == 1;
}

Polygon2D square(double x0, double y0, double side) {
    return {{{x0, y0}, {x0 + side, y0}, {x0 + side, y0 + side}, {x0, y0 + side}}};
}

const Polygon2D kUnit = square(-0.5, -0.5, 1.0);
const Polygon2D kL{{{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}}};

} // namespace

TEST_CASE("validator accepts a centred half-size square") {
    const Polygon2D child = square(-0.25, -0.25, 0.5);
    CHECK(validate_contour(child, kUnit).ok());
    check_rules(child, kUnit);
}

TEST_CASE("validator rejects a 15 degree sliver") {
    const double t = 15.0 * M_PI / 180.0;
    const Polygon2D sliver{{{-0.4, -0.3}, {0.4, -0.3}, {-0.4 + 0.8 * std::cos(t) * std::cos(t), -0.3 + 0.8 * std::cos(t) * std::sin(t)}}};
    REQUIRE(corner_angle(sliver[2], sliver[0], sliver[1]) == doctest::Approx(15.0));
    const ValidationResult r = validate_contour(sliver, kUnit, {.check_area = false});
    REQUIRE_FALSE(r.ok());
    CHECK(r.reasons[0].find("angle") != std::string::npos);
}

TEST_CASE("validator rejects edge ratio 12 and accepts just under 10") {
    const Polygon2D thin{{{-0.3, -0.025}, {0.3, -0.025}, {0.3, 0.025}, {-0.3, 0.025}}};
    REQUIRE(seg_len(thin[0], thin[1]) / seg_len(thin[1], thin[2]) == doctest::Approx(12.0));
    const ValidationResult r = validate_contour(thin, kUnit, {.check_area = false});
    REQUIRE(r.reasons.size() == 1);
    CHECK(r.reasons[0].find("edge ratio") != std::string::npos);

    const Polygon2D ok{{{-0.3, -0.0301}, {0.3, -0.0301}, {0.3, 0.0301}, {-0.3, 0.0301}}};
    CHECK(validate_contour(ok, kUnit, {.check_area = false}).ok());

    // Exactly 10 on the lattice; the quotient rounds to just below 10.
    const Polygon2D ten{{{-0.09, -0.01}, {0.11, -0.01}, {0.11, 0.01}, {-0.09, 0.01}}};
    CHECK_FALSE(validate_contour(ten, kUnit, {.check_area = false}).ok());
}

TEST_CASE("validator area bounds and containment") {
    // 0.9^2 = 0.81 passes, 0.95^2 = 0.9025 does not, 0.3^2 = 0.09 does not.
    CHECK(validate_contour(square(-0.45, -0.45, 0.9), kUnit).ok());
    CHECK_FALSE(validate_contour(square(-0.475, -0.475, 0.95), kUnit).ok());
    CHECK_FALSE(validate_contour(square(-0.15, -0.15, 0.3), kUnit).ok());
    // Sharing boundary with the parent is allowed; leaving it is not.
    CHECK(validate_contour(square(-0.5, -0.5, 0.6), kUnit).ok());
    const ValidationResult out = validate_contour(square(-0.2, -0.2, 0.8), kUnit);
    REQUIRE_FALSE(out.ok());
    CHECK(out.reasons.back() == "outside parent");
    const Polygon2D bow{{{-0.3, -0.3}, {0.3, 0.3}, {0.3, -0.3}, {-0.3, 0.3}}};
    CHECK(validate_contour(bow, kUnit).reasons == std::vector<std::string>{"non-simple polygon"});
}

TEST_CASE("offset of every square edge by 0.1 gives the centred 0.8 square") {
    const double d[] = {0.1, 0.1, 0.1, 0.1};
    const auto child = offset_edges(kUnit, d);
    REQUIRE(child);
    const Polygon2D expect = square(-0.4, -0.4, 0.8);
    REQUIRE(child->size() == 4);
    for (const Vec2& v : child->vertices) {
        bool hit = false;
        for (const Vec2& e : expect.vertices) hit = hit || (std::abs(v.x - e.x) < 1e-12 && std::abs(v.y - e.y) < 1e-12);
        CHECK(hit);
    }
    CHECK(shoelace(child->vertices) / shoelace(kUnit.vertices) == doctest::Approx(0.64).epsilon(1e-12));
    CHECK(validate_contour(*child, kUnit).ok());
}

TEST_CASE("zero contraction is rejected by the area rule") {
    const double d[] = {0.0, 0.0, 0.0, 0.0};
    const auto child = offset_edges(kUnit, d);
    REQUIRE(child);
    CHECK(shoelace(child->vertices) / shoelace(kUnit.vertices) == doctest::Approx(1.0));
    const ValidationResult r = validate_contour(*child, kUnit);
    REQUIRE(r.reasons.size() == 1);
    CHECK(r.reasons[0].rfind("area ratio", 0) == 0);
}

TEST_CASE("offset collapse returns nothing") {
    const double d[] = {0.6, 0.0, 0.6, 0.0};
    CHECK_FALSE(offset_edges(kUnit, d));
    const double wrong_count[] = {0.1};
    CHECK_THROWS_AS(offset_edges(kUnit, wrong_count), GeometryError);
}

TEST_CASE("single-edge contraction of an L stays simple and inside") {
    for (std::size_t e = 0; e < kL.size(); ++e) {
        std::vector<double> d(kL.size(), 0.0);
        d[e] = 0.3;
        const auto child = offset_edges(kL, d);
        REQUIRE(child);
        CHECK(simple(child->vertices));
        CHECK(contained(child->vertices, kL.vertices));
        CHECK(shoelace(child->vertices) < shoelace(kL.vertices));
    }
}

TEST_CASE("contract_child output passes the rules and the lattice") {
    SynthConfig cfg;
    const Polygon2D parent = normalize_footprint(kL);
    for (std::uint64_t s = 0; s < 200; ++s) {
        Rng rng(s);
        const Polygon2D child = contract_child(parent, cfg, rng);
        check_rules(child, parent);
        for (const Vec2& v : child.vertices) CHECK((on_lattice(v.x) && on_lattice(v.y)));
    }
}

TEST_CASE("reflex extension splits an L into its two rectangles") {
    const CutLine cut{{1, 1}, {-1, 0}};
    auto cells = bisect_with_lines(kL, std::span(&cut, 1));
    REQUIRE(cells.size() == 2);
    std::vector<double> areas{shoelace(cells[0].vertices), shoelace(cells[1].vertices)};
    std::sort(areas.begin(), areas.end());
    CHECK(areas[0] == doctest::Approx(1.0));
    CHECK(areas[1] == doctest::Approx(2.0));
    for (const Polygon2D& c : cells) CHECK(c.size() == 4);
    CHECK(cells_adjacent(cells[0], cells[1]));
}

TEST_CASE("one cut splits a square into two rectangles") {
    const Polygon2D sq = square(-0.49, -0.49, 0.98);
    const CutLine cut{{0.0, 0.09}, {1, 0}};
    const auto cells = bisect_with_lines(sq, std::span(&cut, 1));
    REQUIRE(cells.size() == 2);
    CHECK(shoelace(cells[0].vertices) + shoelace(cells[1].vertices) == doctest::Approx(shoelace(sq.vertices)).epsilon(1e-12));
    for (const Polygon2D& c : cells) CHECK(c.size() == 4);
}

TEST_CASE("square bisection gives rectilinear unions of cells") {
    SynthConfig cfg;
    const Polygon2D sq = square(-0.49, -0.49, 0.98);
    for (std::uint64_t s = 0; s < 50; ++s) {
        Rng rng(s);
        const auto kids = bisect_children(sq, 2, cfg, rng);
        REQUIRE(kids.size() == 2);
        CHECK(shoelace(kids[0].vertices) + shoelace(kids[1].vertices) <= shoelace(sq.vertices) + 1e-12);
        for (const Polygon2D& k : kids) {
            CHECK((k.size() == 4 || k.size() == 6));
            for (std::size_t e = 0; e < k.size(); ++e)
                CHECK((k[e].x == k.next(e).x || k[e].y == k.next(e).y));
            check_rules(k, sq);
        }
    }
}

TEST_CASE("bisection edges lie on parent edge directions") {
    SynthConfig cfg;
    for (std::uint64_t s = 0; s < 100; ++s) {
        Rng rng(s);
        const Polygon2D parent = sample_root_contour(cfg, rng);
        std::vector<Polygon2D> kids;
        try {
            kids = bisect_children(parent, 2 + static_cast<int>(s % 2), cfg, rng);
        } catch (const GenerationError&) {
            continue;
        }
        double total = 0.0;
        for (std::size_t i = 0; i < kids.size(); ++i) {
            check_rules(kids[i], parent);
            total += shoelace(kids[i].vertices);
            for (std::size_t e = 0; e < kids[i].size(); ++e) {
                const Vec2 a = kids[i][e], b = kids[i].next(e);
                bool parallel = false;
                for (std::size_t j = 0; j < parent.size(); ++j) {
                    const Vec2 p = parent[j], q = parent.next(j);
                    const double c = (b.x - a.x) * (q.y - p.y) - (b.y - a.y) * (q.x - p.x);
                    parallel = parallel || std::abs(c) <= 1e-9 * seg_len(a, b) * seg_len(p, q) + 1e-12;
                }
                CHECK(parallel);
            }
            for (std::size_t j = i + 1; j < kids.size(); ++j)
                for (const Vec2& v : kids[j].vertices)
                    CHECK((on_boundary(v, kids[i].vertices) || !ray_inside(v, kids[i].vertices)));
        }
        CHECK(total <= shoelace(parent.vertices) + 1e-12);
    }
}

TEST_CASE("more children than cells is a generation error") {
    SynthConfig cfg;
    Rng rng(3);
    // A square's arrangement has at most 4 cells: two translates, no reflex corners.
    CHECK_THROWS_AS(bisect_children(square(-0.49, -0.49, 0.98), 5, cfg, rng), GenerationError);
    CHECK_THROWS_AS(bisect_children(kUnit, 1, cfg, rng), GenerationError);
}

TEST_CASE("synthetic roots are deterministic and valid") {
    SynthConfig cfg;
    Rng a(7), b(7);
    CHECK(sample_root_contour(cfg, a) == sample_root_contour(cfg, b));

    ContourValidatorSpec no_area;
    no_area.check_area = false;
    Rng rng(11);
    for (int i = 0; i < 1000; ++i) {
        const Polygon2D p = sample_root_contour(cfg, rng);
        CHECK(validate_contour(p, kUnit, no_area).ok());
        CHECK(simple(p.vertices));
        CHECK(contained(p.vertices, kUnit.vertices));
        for (const Vec2& v : p.vertices) CHECK((on_lattice(v.x) && on_lattice(v.y)));
    }
}

TEST_CASE("footprint file") {
    const auto dir = std::filesystem::temp_directory_path() / "archprog_test_procgen";
    std::filesystem::create_directories(dir);
    const auto path = (dir / "fp.jsonl").string();
    {
        std::ofstream os(path);
        os << R"({"vertices": [[10, 10], [30, 10], [30, 30], [10, 30]]})" << "\n\n";
    }
    const auto pool = load_footprints(path);
    REQUIRE(pool.size() == 1);
    CHECK(pool[0] == square(-0.49, -0.49, 0.98));

    SynthConfig cfg;
    cfg.footprint_file = path;
    Rng rng(1);
    CHECK(sample_root_contour(cfg, rng, pool) == pool[0]);

    {
        std::ofstream os(path);
        os << R"({"vertices": [[0, 0], [1, 0]]})" << "\n";
    }
    CHECK_THROWS_AS(load_footprints(path), ConfigError);
    {
        std::ofstream os(path);
        os << "not json\n";
    }
    CHECK_THROWS_AS(load_footprints(path), ConfigError);
    std::filesystem::remove_all(dir);
    CHECK_THROWS_AS(load_footprints(path), IoError);
}

TEST_CASE("config checks") {
    SynthConfig cfg;
    CHECK_NOTHROW(cfg.check());
    cfg.template_weights = {0, 0, 0, 0, 0, 0, 0};
    CHECK_THROWS_AS(cfg.check(), ConfigError);
    cfg = {};
    cfg.template_weights[2] = -1;
    CHECK_THROWS_AS(cfg.check(), ConfigError);
    cfg = {};
    cfg.height_lo = 0.7;
    CHECK_THROWS_AS(cfg.check(), ConfigError);
    cfg = {};
    cfg.max_layers = 17;
    CHECK_THROWS_AS(cfg.check(), ConfigError);
    CHECK(template_from_name("root2+1") == TreeTemplate::Root2Child);
    CHECK_FALSE(template_from_name("tower"));
    CHECK(std::string(template_name(TreeTemplate::Chain3)) == "chain3");
}

TEST_CASE("templates produce their tree shapes") {
    struct Shape {
        TreeTemplate t;
        std::size_t nodes;
        std::size_t root_children;
    };
    for (const Shape& s : {Shape{TreeTemplate::Single, 1, 0}, Shape{TreeTemplate::Chain2, 2, 1},
                           Shape{TreeTemplate::Chain3, 3, 1}, Shape{TreeTemplate::Root2, 3, 2},
                           Shape{TreeTemplate::Root2Child, 4, 2}, Shape{TreeTemplate::Root3, 4, 3}}) {
        SynthConfig cfg;
        cfg.template_weights = {};
        cfg.template_weights[static_cast<std::size_t>(s.t)] = 1.0;
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            Rng rng(seed);
            const SynthTree st = synth_tree(cfg, rng);
            CHECK(st.shape == s.t);
            REQUIRE(st.tree.nodes.size() == s.nodes);
            REQUIRE(st.tree.roots.size() == 1);
            CHECK(st.tree.nodes[st.tree.roots[0]].children.size() == s.root_children);
        }
    }
}

TEST_CASE("synthesized trees are deterministic and valid") {
    SynthConfig cfg;
    {
        Rng a(42), b(42);
        const SynthTree x = synth_tree(cfg, a), y = synth_tree(cfg, b);
        CHECK(print_program(tree_to_program(x.ground, x.tree)) == print_program(tree_to_program(y.ground, y.tree)));
    }
    for (int mode = 0; mode < 2; ++mode) {
        if (mode == 1) {
            cfg.template_weights = {0, 0, 0, 0, 0, 0, 1};
            cfg.max_layers = 16;
            cfg.max_depth = 4;
        }
        Rng rng(5);
        for (int i = 0; i < 500; ++i) {
            const SynthTree st = synth_tree(cfg, rng);
            const ArchTree& t = st.tree;
            CHECK(t.nodes.size() <= static_cast<std::size_t>(cfg.max_layers));
            CHECK(on_lattice(st.ground));
            for (const ArchNode& n : t.nodes) {
                CHECK(n.height >= cfg.height_lo - 0.01);
                CHECK(n.height <= cfg.height_hi + 0.01);
                for (std::size_t c : n.children) check_rules(t.nodes[c].contour, n.contour);
            }
            const Program p = tree_to_program(st.ground, t);
            CHECK(validate_program(p).empty());
            CHECK(parse_program(print_program(p)) == p);
        }
    }
}
