#include "archprog/refine.hpp"

#include <cmath>
#include <cstdio>
#include <deque>

#include "json.hpp"

#include "archprog/error.hpp"

namespace archprog {

namespace {

constexpr double kOnTarget = 1e-12;

struct Snap {
    SnapAction action = SnapAction::None;
    Vec2 target;
    double displacement = 0.0;
};

Snap snap_vertex(Vec2 v, const Polygon2D& parent, double threshold) {
    std::size_t best_vertex = 0;
    double dv = INFINITY;
    for (std::size_t i = 0; i < parent.size(); ++i) {
        const double d = norm(v - parent[i]);
        if (d < dv) {
            dv = d;
            best_vertex = i;
        }
    }
    if (dv <= threshold) {
        if (dv <= kOnTarget) return {};
        return {SnapAction::ToVertex, parent[best_vertex], dv};
    }
    Vec2 foot;
    double de = INFINITY;
    for (std::size_t i = 0; i < parent.size(); ++i) {
        const Vec2 f = closest_point_on_segment(v, parent[i], parent.next(i));
        const double d = norm(v - f);
        if (d < de) {
            de = d;
            foot = f;
        }
    }
    if (de > threshold || de <= kOnTarget) return {};
    for (const Vec2& w : parent.vertices)
        if (norm(foot - w) <= threshold) return {};
    return {SnapAction::ToEdge, foot, de};
}

Polygon2D merge_repeats(const Polygon2D& p) {
    Polygon2D out;
    for (const Vec2& v : p.vertices)
        if (out.vertices.empty() || !(out.vertices.back() == v)) out.vertices.push_back(v);
    while (out.size() > 1 && out.vertices.front() == out.vertices.back()) out.vertices.pop_back();
    return out;
}

} // namespace

const char* snap_action_name(SnapAction a) {
    switch (a) {
    case SnapAction::None: return "none";
    case SnapAction::ToVertex: return "to_vertex";
    case SnapAction::ToEdge: return "to_edge";
    }
    return "none";
}

std::size_t SnapReport::count(SnapAction a) const {
    std::size_t n = 0;
    for (const SnapRecord& r : records) n += r.action == a;
    return n;
}

std::string SnapReport::to_json() const {
    nlohmann::ordered_json j;
    j["threshold"] = threshold;
    j["counts"] = {{"none", count(SnapAction::None)},
                   {"to_vertex", count(SnapAction::ToVertex)},
                   {"to_edge", count(SnapAction::ToEdge)}};
    j["rolled_back"] = rolled_back;
    auto& recs = j["records"] = nlohmann::ordered_json::array();
    for (const SnapRecord& r : records) {
        nlohmann::ordered_json e;
        e["layer"] = r.layer;
        e["vertex"] = r.vertex;
        e["action"] = snap_action_name(r.action);
        e["target"] = {r.target.x, r.target.y};
        e["displacement"] = r.displacement;
        recs.push_back(std::move(e));
    }
    return j.dump(2);
}

ArchTree refine_tree(const ArchTree& t, double threshold, SnapReport* report) {
    if (!(threshold >= 0.0)) throw GeometryError("snap threshold must be non-negative");
    const std::vector<std::ptrdiff_t> parents = t.parents();
    ArchTree out = t;
    if (report) {
        report->threshold = threshold;
        report->records.clear();
        report->rolled_back.clear();
    }
    // Breadth-first, matching tree_to_program's numbering.
    std::deque<std::size_t> queue(t.roots.begin(), t.roots.end());
    LayerLabel label = 0;
    while (!queue.empty()) {
        const std::size_t node = queue.front();
        queue.pop_front();
        ++label;
        for (std::size_t c : t.nodes[node].children) queue.push_back(c);
        if (parents[node] < 0) continue;

        const Polygon2D& parent = out.nodes[static_cast<std::size_t>(parents[node])].contour;
        const Polygon2D& orig = t.nodes[node].contour;
        Polygon2D moved = orig;
        std::vector<SnapRecord> recs;
        for (std::size_t i = 0; i < orig.size(); ++i) {
            const Snap s = snap_vertex(orig[i], parent, threshold);
            if (s.action != SnapAction::None) moved.vertices[i] = s.target;
            recs.push_back({label, i, s.action, s.action == SnapAction::None ? orig[i] : s.target, s.displacement});
        }
        moved = merge_repeats(moved);
        const bool same_side = (signed_area(moved) > 0.0) == (signed_area(orig) > 0.0);
        if (moved.size() >= 3 && is_simple(moved) && same_side) {
            out.nodes[node].contour = std::move(moved);
        } else {
            for (SnapRecord& r : recs) {
                r.action = SnapAction::None;
                r.target = orig[r.vertex];
                r.displacement = 0.0;
            }
            if (report) report->rolled_back.push_back(label);
        }
        if (report) report->records.insert(report->records.end(), recs.begin(), recs.end());
    }
    return out;
}

Program refine_program(const Program& p, double threshold, SnapReport* report) {
    const TreeForm tf = program_to_tree(p);
    return tree_to_program(tf.ground, refine_tree(tf.tree, threshold, report));
}

} // namespace archprog
