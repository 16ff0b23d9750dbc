#include "archprog/procgen.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>

#include "json.hpp"

#include "archprog/clip.hpp"
#include "archprog/error.hpp"
#include "archprog/tokens.hpp"

namespace archprog {

ValidationResult validate_contour(const Polygon2D& child, const Polygon2D& parent, const ContourValidatorSpec& spec) {
    ValidationResult r;
    if (child.size() < 3 || !is_simple(child)) {
        r.reasons.emplace_back("non-simple polygon");
        return r;
    }
    for (double a : vertex_angles_deg(child)) {
        if (a < spec.min_angle_deg || a > spec.max_angle_deg) {
            r.reasons.push_back("interior angle " + std::to_string(a) + " outside [" + std::to_string(spec.min_angle_deg) +
                                ", " + std::to_string(spec.max_angle_deg) + "]");
            break;
        }
    }
    // The bound is strict: a ratio within rounding of the limit counts as equal.
    const double ratio = edge_length_ratio(child);
    if (!(ratio * (1.0 + 1e-12) < spec.max_edge_ratio)) r.reasons.push_back("edge ratio " + std::to_string(ratio));
    if (spec.check_area) {
        const double ar = std::abs(signed_area(child)) / std::abs(signed_area(parent));
        if (ar < spec.min_area_ratio || ar > spec.max_area_ratio) r.reasons.push_back("area ratio " + std::to_string(ar));
    }
    if (area_outside(child, parent) > spec.containment_tol) r.reasons.emplace_back("outside parent");
    return r;
}

namespace {

constexpr const char* kTemplateNames[kTemplateCount] = {"single", "chain2", "chain3", "root2", "root2+1", "root3", "free"};

} // namespace

const char* template_name(TreeTemplate t) { return kTemplateNames[static_cast<std::size_t>(t)]; }

std::optional<TreeTemplate> template_from_name(const std::string& name) {
    for (std::size_t i = 0; i < kTemplateCount; ++i)
        if (name == kTemplateNames[i]) return static_cast<TreeTemplate>(i);
    return std::nullopt;
}

void SynthConfig::check() const {
    double total = 0.0;
    for (double w : template_weights) {
        if (!(w >= 0.0)) throw ConfigError("template weights must be non-negative");
        total += w;
    }
    if (!(total > 0.0)) throw ConfigError("at least one template weight must be positive");
    double mt = 0.0;
    for (double w : m_weights) {
        if (!(w >= 0.0)) throw ConfigError("M weights must be non-negative");
        mt += w;
    }
    if (!(mt > 0.0)) throw ConfigError("at least one M weight must be positive");
    if (!(height_lo > 0.0 && height_lo <= height_hi && height_hi <= 0.99))
        throw ConfigError("height range must satisfy 0 < lo <= hi <= 0.99");
    if (max_layers < 1 || max_layers > 16) throw ConfigError("max_layers must be in [1, 16]");
    if (max_depth < 1) throw ConfigError("max_depth must be at least 1");
    if (!(contract_lo > 0.0 && contract_lo <= contract_hi)) throw ConfigError("contraction range must satisfy 0 < lo <= hi");
    if (max_attempts < 1 || tree_retries < 1) throw ConfigError("attempt budgets must be positive");
    if (max_vertices < 3) throw ConfigError("max_vertices must be at least 3");
}

Polygon2D snap_polygon(const Polygon2D& p) {
    Polygon2D s;
    s.vertices.reserve(p.size());
    for (const Vec2& v : p.vertices) s.vertices.push_back({Quantizer::snap(v.x), Quantizer::snap(v.y)});
    s = remove_collinear(s);
    return s.size() >= 3 ? to_ccw(s) : s;
}

Polygon2D normalize_footprint(const Polygon2D& p, double extent) {
    if (p.size() < 3) throw GeometryError("footprint has fewer than 3 vertices");
    double x0 = p[0].x, x1 = p[0].x, y0 = p[0].y, y1 = p[0].y;
    for (const Vec2& v : p.vertices) {
        x0 = std::min(x0, v.x);
        x1 = std::max(x1, v.x);
        y0 = std::min(y0, v.y);
        y1 = std::max(y1, v.y);
    }
    const double span = std::max(x1 - x0, y1 - y0);
    if (!(span > 0.0)) throw GeometryError("footprint has zero extent");
    const Vec2 c{(x0 + x1) / 2.0, (y0 + y1) / 2.0};
    Polygon2D out;
    for (const Vec2& v : p.vertices) out.vertices.push_back((v - c) * (extent / span));
    return snap_polygon(out);
}

std::vector<Polygon2D> load_footprints(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot read footprint file " + path);
    std::vector<Polygon2D> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const std::string where = path + ":" + std::to_string(lineno);
        try {
            const auto j = nlohmann::json::parse(line);
            Polygon2D p;
            for (const auto& v : j.at("vertices")) p.vertices.push_back({v.at(0).get<double>(), v.at(1).get<double>()});
            out.push_back(normalize_footprint(p));
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError(where + ": " + e.what());
        } catch (const GeometryError& e) {
            throw ConfigError(where + ": " + e.what());
        }
    }
    if (out.empty()) throw ConfigError("footprint file " + path + " holds no polygons");
    return out;
}

namespace {

Polygon2D unit_square() { return {{{-0.5, -0.5}, {0.5, -0.5}, {0.5, 0.5}, {-0.5, 0.5}}}; }

// Rectilinear outline before rotation: width a in [1, 2], height 1.
Polygon2D rectilinear_outline(Rng& rng) {
    const double a = rng.uniform(1.0, 2.0);
    const double b = 1.0;
    switch (rng.uniform_int(0, 3)) {
    case 0: return {{{0, 0}, {a, 0}, {a, b}, {0, b}}};
    case 1: {
        const double cx = a * rng.uniform(0.3, 0.7);
        const double cy = b * rng.uniform(0.3, 0.7);
        return {{{0, 0}, {a, 0}, {a, cy}, {cx, cy}, {cx, b}, {0, b}}};
    }
    case 2: {
        const double x1 = a * rng.uniform(0.2, 0.4);
        const double x2 = a * rng.uniform(0.6, 0.8);
        const double y1 = b * rng.uniform(0.3, 0.7);
        return {{{0, 0}, {a, 0}, {a, b}, {x2, b}, {x2, y1}, {x1, y1}, {x1, b}, {0, b}}};
    }
    default: {
        const double x1 = a * rng.uniform(0.2, 0.4);
        const double x2 = a * rng.uniform(0.6, 0.8);
        const double y1 = b * rng.uniform(0.3, 0.6);
        return {{{x1, 0}, {x2, 0}, {x2, y1}, {a, y1}, {a, b}, {0, b}, {0, y1}, {x1, y1}}};
    }
    }
}

// Cuts one convex corner at 45 degrees.
Polygon2D chamfer(const Polygon2D& p, Rng& rng) {
    std::vector<std::size_t> convex;
    for (std::size_t i = 0; i < p.size(); ++i)
        if (orient(p.prev(i), p[i], p.next(i)) > 0.0) convex.push_back(i);
    const std::size_t i = convex[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(convex.size()) - 1))];
    const Vec2 v = p[i];
    const Vec2 a = p.prev(i) - v;
    const Vec2 b = p.next(i) - v;
    const double t = std::min(norm(a), norm(b)) * rng.uniform(0.2, 0.4);
    Polygon2D out;
    for (std::size_t k = 0; k < p.size(); ++k) {
        if (k != i) {
            out.vertices.push_back(p[k]);
            continue;
        }
        out.vertices.push_back(v + a * (t / norm(a)));
        out.vertices.push_back(v + b * (t / norm(b)));
    }
    return out;
}

Polygon2D synthetic_footprint(Rng& rng) {
    Polygon2D p = rectilinear_outline(rng);
    if (rng.bernoulli(0.25)) p = chamfer(p, rng);
    const auto quarter_turns = rng.uniform_int(0, 3);
    const bool mirror = rng.bernoulli(0.5);
    for (Vec2& v : p.vertices) {
        if (mirror) v.x = -v.x;
        for (std::int64_t k = 0; k < quarter_turns; ++k) v = {-v.y, v.x};
    }
    return normalize_footprint(to_ccw(p));
}

} // namespace

Polygon2D sample_root_contour(const SynthConfig& cfg, Rng& rng, std::span<const Polygon2D> pool) {
    ContourValidatorSpec spec = cfg.validator;
    spec.check_area = false;
    const Polygon2D frame = unit_square();
    if (!pool.empty()) {
        const auto start = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(pool.size()) - 1));
        for (std::size_t k = 0; k < pool.size(); ++k) {
            const Polygon2D& p = pool[(start + k) % pool.size()];
            if (static_cast<int>(p.size()) <= cfg.max_vertices && validate_contour(p, frame, spec)) return p;
        }
        throw GenerationError("no footprint in the file passes the contour validator");
    }
    for (int attempt = 0; attempt < 1000; ++attempt) {
        Polygon2D p = synthetic_footprint(rng);
        if (static_cast<int>(p.size()) <= cfg.max_vertices && validate_contour(p, frame, spec)) return p;
    }
    throw GenerationError("synthetic footprint generator failed validation 1000 times");
}

std::optional<Polygon2D> offset_edges(const Polygon2D& parent, std::span<const double> distances) {
    const std::size_t n = parent.size();
    if (n < 3 || distances.size() != n) throw GeometryError("offset_edges needs one distance per edge");
    std::vector<Vec2> origin(n), dir(n), normal(n);
    for (std::size_t i = 0; i < n; ++i) {
        dir[i] = parent.next(i) - parent[i];
        const double len = norm(dir[i]);
        normal[i] = Vec2{-dir[i].y, dir[i].x} * (1.0 / len);
        origin[i] = parent[i] + normal[i] * distances[i];
    }
    Polygon2D out;
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t i = (j + n - 1) % n;
        if (const auto hit = line_intersection(origin[i], dir[i], origin[j], dir[j])) {
            out.vertices.push_back(*hit);
        } else {
            if (std::abs(distances[i] - distances[j]) > kGeomEps) return std::nullopt;
            out.vertices.push_back(parent[j] + normal[j] * distances[j]);
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        if (dot(out.next(i) - out[i], dir[i]) <= 0.0) return std::nullopt;
    if (!(signed_area(out) > 0.0) || !is_simple(out)) return std::nullopt;
    return out;
}

Polygon2D contract_child(const Polygon2D& parent, const SynthConfig& cfg, Rng& rng) {
    const Polygon2D p = to_ccw(parent);
    const double diam = diameter(p);
    std::vector<double> d(p.size());
    for (int attempt = 0; attempt < cfg.max_attempts; ++attempt) {
        bool any = false;
        while (!any) {
            for (double& di : d) {
                di = rng.bernoulli(0.5) ? rng.uniform(cfg.contract_lo, cfg.contract_hi) * diam : 0.0;
                any = any || di > 0.0;
            }
        }
        const auto raw = offset_edges(p, d);
        if (!raw) continue;
        Polygon2D child = snap_polygon(*raw);
        if (static_cast<int>(child.size()) > cfg.max_vertices) continue;
        if (validate_contour(child, p, cfg.validator)) return child;
    }
    throw GenerationError("contraction found no valid child in " + std::to_string(cfg.max_attempts) + " attempts");
}

std::vector<Polygon2D> bisect_with_lines(const Polygon2D& parent, std::span<const CutLine> lines) {
    std::vector<Polygon2D> cells{to_ccw(parent)};
    for (const CutLine& line : lines) {
        std::vector<Polygon2D> next;
        for (const Polygon2D& cell : cells) {
            for (Polygon2D& piece : clip_left_of_line(cell, line.origin, line.dir))
                if (std::abs(signed_area(piece)) > 1e-12) next.push_back(std::move(piece));
            for (Polygon2D& piece : clip_left_of_line(cell, line.origin, line.dir * -1.0))
                if (std::abs(signed_area(piece)) > 1e-12) next.push_back(std::move(piece));
        }
        cells = std::move(next);
    }
    return cells;
}

std::vector<CutLine> candidate_cut_lines(const Polygon2D& parent, Rng& rng) {
    const Polygon2D p = to_ccw(parent);
    std::vector<CutLine> lines;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (orient(p.prev(i), p[i], p.next(i)) >= 0.0) continue;
        lines.push_back({p[i], p[i] - p.prev(i)});
        lines.push_back({p[i], p.next(i) - p[i]});
    }
    std::vector<Vec2> dirs;
    for (std::size_t i = 0; i < p.size(); ++i) {
        Vec2 d = p.next(i) - p[i];
        d = d * (1.0 / norm(d));
        if (d.x < 0.0 || (d.x == 0.0 && d.y < 0.0)) d = d * -1.0;
        const bool seen = std::any_of(dirs.begin(), dirs.end(), [&](Vec2 e) { return std::abs(cross(d, e)) <= 1e-9; });
        if (!seen) dirs.push_back(d);
    }
    for (const Vec2& d : dirs) {
        const Vec2 n{-d.y, d.x};
        double lo = dot(p[0], n), hi = lo;
        for (const Vec2& v : p.vertices) {
            lo = std::min(lo, dot(v, n));
            hi = std::max(hi, dot(v, n));
        }
        const double s = rng.uniform(lo + 0.2 * (hi - lo), hi - 0.2 * (hi - lo));
        Vec2 origin = n * s;
        // Axis-aligned cuts land on bin centres so cells stay on the lattice.
        if (d.y == 0.0) origin = {0.0, Quantizer::snap(origin.y)};
        if (d.x == 0.0) origin = {Quantizer::snap(origin.x), 0.0};
        lines.push_back({origin, d});
    }
    return lines;
}

namespace {

double shared_length(Vec2 a0, Vec2 a1, Vec2 b0, Vec2 b1) {
    const Vec2 u = a1 - a0;
    const double len = norm(u);
    if (std::abs(orient(a0, a1, b0)) > kGeomEps * len || std::abs(orient(a0, a1, b1)) > kGeomEps * len) return 0.0;
    const double t0 = dot(b0 - a0, u) / len;
    const double t1 = dot(b1 - a0, u) / len;
    return std::min(len, std::max(t0, t1)) - std::max(0.0, std::min(t0, t1));
}

// Every edge of `child` runs parallel to some edge of `parent`. Snapping a
// crossing with a slanted cut to the lattice can tilt an edge.
bool edges_follow_parent(const Polygon2D& child, const Polygon2D& parent) {
    for (std::size_t i = 0; i < child.size(); ++i) {
        const Vec2 u = child.next(i) - child[i];
        bool found = false;
        for (std::size_t j = 0; j < parent.size() && !found; ++j) {
            const Vec2 w = parent.next(j) - parent[j];
            found = std::abs(cross(u, w)) <= 1e-9 * norm(u) * norm(w);
        }
        if (!found) return false;
    }
    return true;
}

double boundary_distance(const Polygon2D& a, const Polygon2D& b) {
    double best = std::numeric_limits<double>::infinity();
    for (const Vec2& v : a.vertices) best = std::min(best, distance_to_boundary(v, b));
    for (const Vec2& v : b.vertices) best = std::min(best, distance_to_boundary(v, a));
    return best;
}

} // namespace

bool cells_adjacent(const Polygon2D& a, const Polygon2D& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            if (shared_length(a[i], a.next(i), b[j], b.next(j)) > kGeomEps) return true;
    return false;
}

std::vector<Polygon2D> bisect_children(const Polygon2D& parent, int m, const SynthConfig& cfg, Rng& rng) {
    if (m < 2) throw GenerationError("bisection needs m >= 2");
    const Polygon2D p = to_ccw(parent);
    const std::vector<CutLine> all = candidate_cut_lines(p, rng);
    const std::size_t max_cells = bisect_with_lines(p, all).size();
    if (max_cells < static_cast<std::size_t>(m))
        throw GenerationError("arrangement yields " + std::to_string(max_cells) + " cells, fewer than m = " +
                              std::to_string(m));

    for (int attempt = 0; attempt < cfg.max_attempts; ++attempt) {
        std::vector<CutLine> chosen;
        for (const CutLine& l : candidate_cut_lines(p, rng))
            if (rng.bernoulli(0.5)) chosen.push_back(l);
        const std::vector<Polygon2D> cells = bisect_with_lines(p, chosen);
        const std::size_t nc = cells.size();
        if (nc < static_cast<std::size_t>(m)) continue;

        std::vector<std::vector<std::size_t>> adj(nc);
        std::vector<double> cell_area(nc);
        for (std::size_t i = 0; i < nc; ++i) {
            cell_area[i] = std::abs(signed_area(cells[i]));
            for (std::size_t j = i + 1; j < nc; ++j)
                if (cells_adjacent(cells[i], cells[j])) {
                    adj[i].push_back(j);
                    adj[j].push_back(i);
                }
        }

        // Seeded region growing: the smallest open group takes a random
        // unassigned neighbour; a group closes with probability 0.3 per step.
        std::vector<std::size_t> order(nc);
        std::iota(order.begin(), order.end(), 0u);
        rng.shuffle(order);
        std::vector<int> owner(nc, -1);
        std::vector<std::vector<std::size_t>> groups(static_cast<std::size_t>(m));
        std::vector<double> group_area(static_cast<std::size_t>(m));
        std::vector<bool> open(static_cast<std::size_t>(m), true);
        for (std::size_t g = 0; g < groups.size(); ++g) {
            owner[order[g]] = static_cast<int>(g);
            groups[g].push_back(order[g]);
            group_area[g] = cell_area[order[g]];
        }
        for (;;) {
            std::ptrdiff_t pick = -1;
            std::vector<std::size_t> frontier;
            for (std::size_t g = 0; g < groups.size(); ++g) {
                if (!open[g]) continue;
                std::vector<std::size_t> f;
                for (std::size_t c : groups[g])
                    for (std::size_t nb : adj[c])
                        if (owner[nb] < 0 && std::find(f.begin(), f.end(), nb) == f.end()) f.push_back(nb);
                if (f.empty()) {
                    open[g] = false;
                    continue;
                }
                if (pick < 0 || group_area[g] < group_area[static_cast<std::size_t>(pick)]) {
                    pick = static_cast<std::ptrdiff_t>(g);
                    frontier = std::move(f);
                }
            }
            if (pick < 0) break;
            const auto g = static_cast<std::size_t>(pick);
            std::sort(frontier.begin(), frontier.end());
            const std::size_t c = frontier[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(frontier.size()) - 1))];
            owner[c] = static_cast<int>(g);
            groups[g].push_back(c);
            group_area[g] += cell_area[c];
            if (rng.bernoulli(0.3)) open[g] = false;
        }

        std::vector<Polygon2D> children;
        bool ok = true;
        for (const auto& group : groups) {
            std::vector<Polygon2D> parts;
            for (std::size_t c : group) parts.push_back(cells[c]);
            const auto merged = polygon_union(parts);
            if (merged.size() != 1 || !merged[0].holes.empty()) {
                ok = false;
                break;
            }
            Polygon2D child = snap_polygon(merged[0].outer);
            if (static_cast<int>(child.size()) > cfg.max_vertices || !edges_follow_parent(child, p) ||
                !validate_contour(child, p, cfg.validator)) {
                ok = false;
                break;
            }
            children.push_back(std::move(child));
        }
        for (std::size_t i = 0; ok && i < children.size(); ++i) {
            for (std::size_t j = i + 1; ok && j < children.size(); ++j) {
                if (overlap_area(children[i], children[j]) > 1e-9) ok = false;
                else if (boundary_distance(children[i], children[j]) <= kGeomEps && !cells_adjacent(children[i], children[j]))
                    ok = false;
            }
        }
        if (ok) return children;
    }
    throw GenerationError("bisection found no valid grouping into " + std::to_string(m) + " children in " +
                          std::to_string(cfg.max_attempts) + " attempts");
}

namespace {

class TreeBuilder {
public:
    TreeBuilder(const SynthConfig& cfg, Rng& rng) : cfg_(cfg), rng_(rng) {}

    void root(Polygon2D contour) {
        tree_.nodes.push_back({0.0, std::move(contour), {}});
        tree_.roots.push_back(0);
        depth_.push_back(1);
    }

    // Adds m children under node; the tree is unchanged on failure.
    void spawn(std::size_t node, int m) {
        const Polygon2D& parent = tree_.nodes[node].contour;
        std::vector<Polygon2D> kids;
        if (m == 1) kids.push_back(contract_child(parent, cfg_, rng_));
        else kids = bisect_children(parent, m, cfg_, rng_);
        for (Polygon2D& k : kids) {
            tree_.nodes[node].children.push_back(tree_.nodes.size());
            tree_.nodes.push_back({0.0, std::move(k), {}});
            depth_.push_back(depth_[node] + 1);
        }
    }

    void grow_free() {
        const int target = static_cast<int>(rng_.uniform_int(1, cfg_.max_layers));
        std::vector<bool> exhausted(tree_.nodes.size(), false);
        while (static_cast<int>(tree_.nodes.size()) < target) {
            std::vector<std::size_t> leaves;
            for (std::size_t i = 0; i < tree_.nodes.size(); ++i)
                if (tree_.nodes[i].children.empty() && depth_[i] < cfg_.max_depth && !exhausted[i]) leaves.push_back(i);
            if (leaves.empty()) break;
            const std::size_t leaf = leaves[pick(leaves.size())];
            int m = static_cast<int>(rng_.weighted_index(cfg_.m_weights)) + 1;
            m = std::min(m, target - static_cast<int>(tree_.nodes.size()));
            try {
                spawn(leaf, m);
            } catch (const GenerationError&) {
                exhausted[leaf] = true;
            }
            exhausted.resize(tree_.nodes.size(), false);
        }
    }

    std::size_t pick(std::size_t n) { return static_cast<std::size_t>(rng_.uniform_int(0, static_cast<std::int64_t>(n) - 1)); }

    ArchTree& tree() { return tree_; }

    double finish_heights() {
        for (ArchNode& n : tree_.nodes) n.height = std::max(Quantizer::snap(rng_.uniform(cfg_.height_lo, cfg_.height_hi)), 0.01);
        double tallest = 0.0;
        std::vector<double> top(tree_.nodes.size(), 0.0);
        // Nodes are appended after their parents, so one forward pass suffices.
        for (std::size_t r : tree_.roots) top[r] = tree_.nodes[r].height;
        for (std::size_t i = 0; i < tree_.nodes.size(); ++i) {
            for (std::size_t c : tree_.nodes[i].children) top[c] = top[i] + tree_.nodes[c].height;
            tallest = std::max(tallest, top[i]);
        }
        return Quantizer::snap(-tallest / 2.0);
    }

private:
    const SynthConfig& cfg_;
    Rng& rng_;
    ArchTree tree_;
    std::vector<int> depth_;
};

} // namespace

SynthTree synth_tree(const SynthConfig& cfg, Rng& rng, std::span<const Polygon2D> pool) {
    cfg.check();
    SynthTree out;
    for (int retry = 0; retry < cfg.tree_retries; ++retry) {
        const auto shape = static_cast<TreeTemplate>(rng.weighted_index(cfg.template_weights));
        TreeBuilder b(cfg, rng);
        try {
            b.root(sample_root_contour(cfg, rng, pool));
            switch (shape) {
            case TreeTemplate::Single: break;
            case TreeTemplate::Chain2: b.spawn(0, 1); break;
            case TreeTemplate::Chain3:
                b.spawn(0, 1);
                b.spawn(1, 1);
                break;
            case TreeTemplate::Root2: b.spawn(0, 2); break;
            case TreeTemplate::Root2Child:
                b.spawn(0, 2);
                b.spawn(1 + b.pick(2), 1);
                break;
            case TreeTemplate::Root3: b.spawn(0, 3); break;
            case TreeTemplate::Free: b.grow_free(); break;
            }
        } catch (const GenerationError&) {
            ++out.retries;
            continue;
        }
        out.ground = b.finish_heights();
        out.tree = std::move(b.tree());
        out.shape = shape;
        return out;
    }
    throw GenerationError("tree generation failed after " + std::to_string(cfg.tree_retries) + " attempts");
}

} // namespace archprog
