#include "archprog/triangulate.hpp"

#include <algorithm>
#include <cmath>

#include "archprog/error.hpp"

namespace archprog {

double Triangulation::area() const {
    double total = 0.0;
    for (const auto& t : triangles) total += 0.5 * orient(points[t[0]], points[t[1]], points[t[2]]);
    return total;
}

namespace {

// Ear clipping over a circular doubly linked list of ring nodes, with hole
// bridging after Eberly. Node links are indices into a pool so that bridge
// duplicates can be appended without invalidating anything.
class EarClipper {
public:
    explicit EarClipper(const std::vector<Vec2>& pts) : pts_(pts) {}

    void run(std::span<const std::size_t> ring_starts) {
        const std::size_t outer_end = ring_starts.size() > 1 ? ring_starts[1] : pts_.size();
        int outer = link_ring(0, outer_end, true);
        if (outer < 0) return;
        if (ring_starts.size() > 1) outer = eliminate_holes(ring_starts, outer);
        clip(lowest_index(outer), 0);
    }

    std::vector<std::array<std::uint32_t, 3>> triangles;

private:
    struct Node {
        std::uint32_t i;
        double x, y;
        int prev = -1;
        int next = -1;
        bool removed = false;
    };

    double area(int p, int q, int r) const {
        const Node& a = nodes_[p];
        const Node& b = nodes_[q];
        const Node& c = nodes_[r];
        return (b.y - a.y) * (c.x - b.x) - (b.x - a.x) * (c.y - b.y);
    }
    bool equals(int a, int b) const { return nodes_[a].x == nodes_[b].x && nodes_[a].y == nodes_[b].y; }
    int nx(int p) const { return nodes_[p].next; }
    int pv(int p) const { return nodes_[p].prev; }

    int insert(std::uint32_t i, int last) {
        nodes_.push_back({i, pts_[i].x, pts_[i].y});
        const int p = static_cast<int>(nodes_.size()) - 1;
        if (last < 0) {
            nodes_[p].prev = nodes_[p].next = p;
        } else {
            nodes_[p].next = nodes_[last].next;
            nodes_[p].prev = last;
            nodes_[nodes_[last].next].prev = p;
            nodes_[last].next = p;
        }
        return p;
    }

    void remove(int p) {
        nodes_[p].removed = true;
        nodes_[nodes_[p].next].prev = nodes_[p].prev;
        nodes_[nodes_[p].prev].next = nodes_[p].next;
    }

    // Links [begin, end) as a ring; outer rings run counter-clockwise, holes clockwise.
    int link_ring(std::size_t begin, std::size_t end, bool outer) {
        if (end - begin < 3) return -1;
        double sum = 0.0;
        for (std::size_t i = begin, j = end - 1; i < end; j = i++)
            sum += (pts_[j].x - pts_[i].x) * (pts_[i].y + pts_[j].y);
        int last = -1;
        if (outer == (sum > 0)) {
            for (std::size_t i = begin; i < end; ++i) last = insert(static_cast<std::uint32_t>(i), last);
        } else {
            for (std::size_t i = end; i-- > begin;) last = insert(static_cast<std::uint32_t>(i), last);
        }
        if (last >= 0 && equals(last, nx(last))) {
            const int n = nx(last);
            remove(last);
            last = n;
        }
        return last;
    }

    int lowest_index(int start) const {
        int best = start;
        int p = nx(start);
        while (p != start) {
            if (nodes_[p].i < nodes_[best].i) best = p;
            p = nx(p);
        }
        return best;
    }

    int filter(int start, int end = -1) {
        if (end < 0) end = start;
        int p = start;
        bool again;
        do {
            again = false;
            if (equals(p, nx(p)) || area(pv(p), p, nx(p)) == 0.0) {
                remove(p);
                p = end = pv(p);
                if (p == nx(p)) break;
                again = true;
            } else {
                p = nx(p);
            }
        } while (again || p != end);
        return end;
    }

    void emit(int a, int b, int c) {
        triangles.push_back({nodes_[a].i, nodes_[b].i, nodes_[c].i});
    }

    void clip(int ear, int pass) {
        if (ear < 0) return;
        int stop = ear;
        while (pv(ear) != nx(ear)) {
            const int prev = pv(ear);
            const int next = nx(ear);
            if (equals(prev, next) && nx(next) != prev) {
                // Zero-width spike prev -> ear -> next(= prev), left behind at a pinch vertex.
                remove(ear);
                remove(next);
                ear = stop = nx(prev);
                continue;
            }
            if (is_ear(ear)) {
                emit(prev, ear, next);
                remove(ear);
                int keep = unspike(next);
                if (!nodes_[prev].removed) keep = unspike(prev);
                const int from = nodes_[next].removed ? keep : next;
                ear = nx(from);
                stop = nx(from);
                continue;
            }
            ear = next;
            if (ear == stop) {
                if (pass == 0) {
                    clip(filter(ear), 1);
                } else if (pass == 1) {
                    clip(cure_local_intersections(filter(ear)), 2);
                } else {
                    split(ear);
                }
                break;
            }
        }
    }

    // Removes zero-width spikes p' -> p -> p' centred at p, walking back while
    // the removal exposes new ones; returns a surviving node.
    int unspike(int p) {
        while (nx(p) != pv(p) && nx(nx(p)) != pv(p) && equals(pv(p), nx(p))) {
            const int q = pv(p);
            remove(nx(p));
            remove(p);
            p = q;
        }
        return p;
    }

    bool point_in_triangle(double ax, double ay, double bx, double by, double cx, double cy, double px,
                           double py) const {
        return (cx - px) * (ay - py) - (ax - px) * (cy - py) >= 0 && (ax - px) * (by - py) - (bx - px) * (ay - py) >= 0 &&
               (bx - px) * (cy - py) - (cx - px) * (by - py) >= 0;
    }

    bool is_ear(int ear) const {
        const int a = pv(ear);
        const int b = ear;
        const int c = nx(ear);
        if (area(a, b, c) >= 0) return false;
        const Node& na = nodes_[a];
        const Node& nb = nodes_[b];
        const Node& nc = nodes_[c];
        int p = nx(c);
        while (p != a) {
            const Node& np = nodes_[p];
            int corner = -1;
            if (np.x == na.x && np.y == na.y) corner = 0;
            else if (np.x == nb.x && np.y == nb.y) corner = 1;
            else if (np.x == nc.x && np.y == nc.y) corner = 2;
            if (corner < 0) {
                if (point_in_triangle(na.x, na.y, nb.x, nb.y, nc.x, nc.y, np.x, np.y) && area(pv(p), p, nx(p)) >= 0)
                    return false;
            } else if (enters_corner(a, b, c, corner, pv(p)) || enters_corner(a, b, c, corner, nx(p))) {
                // A pinch vertex (hole touching the ring) whose edge runs into the ear.
                return false;
            }
            p = nx(p);
        }
        return true;
    }

    // True when the direction from the given corner of ear (a, b, c) towards q
    // lies strictly inside the ear's angle there.
    bool enters_corner(int a, int b, int c, int corner, int q) const {
        const bool ab = area(a, b, q) < 0;
        const bool bc = area(b, c, q) < 0;
        const bool ca = area(c, a, q) < 0;
        if (corner == 0) return ab && ca;
        if (corner == 1) return ab && bc;
        return bc && ca;
    }

    bool intersects(int p1, int q1, int p2, int q2) const {
        auto sgn = [](double v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); };
        auto on_seg = [&](int p, int q, int r) {
            const Node& a = nodes_[p];
            const Node& b = nodes_[q];
            const Node& c = nodes_[r];
            return b.x <= std::max(a.x, c.x) && b.x >= std::min(a.x, c.x) && b.y <= std::max(a.y, c.y) &&
                   b.y >= std::min(a.y, c.y);
        };
        const int o1 = sgn(area(p1, q1, p2));
        const int o2 = sgn(area(p1, q1, q2));
        const int o3 = sgn(area(p2, q2, p1));
        const int o4 = sgn(area(p2, q2, q1));
        if (o1 != o2 && o3 != o4) return true;
        if (o1 == 0 && on_seg(p1, p2, q1)) return true;
        if (o2 == 0 && on_seg(p1, q2, q1)) return true;
        if (o3 == 0 && on_seg(p2, p1, q2)) return true;
        if (o4 == 0 && on_seg(p2, q1, q2)) return true;
        return false;
    }

    bool locally_inside(int a, int b) const {
        return area(pv(a), a, nx(a)) < 0 ? area(a, b, nx(a)) >= 0 && area(a, pv(a), b) >= 0
                                         : area(a, b, pv(a)) < 0 || area(a, nx(a), b) < 0;
    }

    int cure_local_intersections(int start) {
        int p = start;
        do {
            const int a = pv(p);
            const int b = nx(nx(p));
            if (!equals(a, b) && intersects(a, p, nx(p), b) && locally_inside(a, b) && locally_inside(b, a)) {
                emit(a, p, b);
                remove(p);
                remove(nx(p));
                p = start = b;
            }
            p = nx(p);
        } while (p != start);
        return filter(p);
    }

    bool intersects_polygon(int a, int b) const {
        int p = a;
        do {
            const std::uint32_t pi = nodes_[p].i;
            const std::uint32_t qi = nodes_[nx(p)].i;
            if (pi != nodes_[a].i && qi != nodes_[a].i && pi != nodes_[b].i && qi != nodes_[b].i &&
                intersects(p, nx(p), a, b))
                return true;
            p = nx(p);
        } while (p != a);
        return false;
    }

    bool middle_inside(int a, int b) const {
        int p = a;
        bool inside = false;
        const double px = (nodes_[a].x + nodes_[b].x) / 2;
        const double py = (nodes_[a].y + nodes_[b].y) / 2;
        do {
            const Node& n = nodes_[p];
            const Node& m = nodes_[nx(p)];
            if (((n.y > py) != (m.y > py)) && m.y != n.y && (px < (m.x - n.x) * (py - n.y) / (m.y - n.y) + n.x))
                inside = !inside;
            p = nx(p);
        } while (p != a);
        return inside;
    }

    bool valid_diagonal(int a, int b) const {
        return nodes_[nx(a)].i != nodes_[b].i && nodes_[pv(a)].i != nodes_[b].i && !intersects_polygon(a, b) &&
               locally_inside(a, b) && locally_inside(b, a) && middle_inside(a, b);
    }

    // Links a and b with a bridge; returns the duplicate of b on the second ring.
    int split_polygon(int a, int b) {
        nodes_.push_back({nodes_[a].i, nodes_[a].x, nodes_[a].y});
        const int a2 = static_cast<int>(nodes_.size()) - 1;
        nodes_.push_back({nodes_[b].i, nodes_[b].x, nodes_[b].y});
        const int b2 = static_cast<int>(nodes_.size()) - 1;
        const int an = nx(a);
        const int bp = pv(b);
        nodes_[a].next = b;
        nodes_[b].prev = a;
        nodes_[a2].next = an;
        nodes_[an].prev = a2;
        nodes_[b2].next = a2;
        nodes_[a2].prev = b2;
        nodes_[bp].next = b2;
        nodes_[b2].prev = bp;
        return b2;
    }

    void split(int start) {
        int a = start;
        do {
            int b = nx(nx(a));
            while (b != pv(a)) {
                if (nodes_[a].i != nodes_[b].i && valid_diagonal(a, b)) {
                    int c = split_polygon(a, b);
                    a = filter(a, nx(a));
                    c = filter(c, nx(c));
                    clip(a, 0);
                    clip(c, 0);
                    return;
                }
                b = nx(b);
            }
            a = nx(a);
        } while (a != start);
    }

    int leftmost(int start) const {
        int p = start;
        int best = start;
        do {
            if (nodes_[p].x < nodes_[best].x || (nodes_[p].x == nodes_[best].x && nodes_[p].y < nodes_[best].y))
                best = p;
            p = nx(p);
        } while (p != start);
        return best;
    }

    int eliminate_holes(std::span<const std::size_t> ring_starts, int outer) {
        std::vector<int> queue;
        for (std::size_t r = 1; r < ring_starts.size(); ++r) {
            const std::size_t end = r + 1 < ring_starts.size() ? ring_starts[r + 1] : pts_.size();
            const int list = link_ring(ring_starts[r], end, false);
            if (list >= 0) queue.push_back(leftmost(list));
        }
        std::stable_sort(queue.begin(), queue.end(), [&](int a, int b) {
            return nodes_[a].x < nodes_[b].x || (nodes_[a].x == nodes_[b].x && nodes_[a].y < nodes_[b].y);
        });
        for (int hole : queue) {
            const int bridge = find_hole_bridge(hole, outer);
            if (bridge < 0) throw GeometryError("hole lies outside the outer ring");
            const int b = split_polygon(bridge, hole);
            filter(b, nx(b));
            outer = filter(outer, nx(outer));
        }
        return outer;
    }

    // David Eberly, "Triangulation by Ear Clipping", hole bridging.
    int find_hole_bridge(int hole, int outer) {
        int p = outer;
        const double hx = nodes_[hole].x;
        const double hy = nodes_[hole].y;
        double qx = -INFINITY;
        int m = -1;
        do {
            const Node& a = nodes_[p];
            const Node& b = nodes_[nx(p)];
            if (hy <= a.y && hy >= b.y && b.y != a.y) {
                const double x = a.x + (hy - a.y) * (b.x - a.x) / (b.y - a.y);
                if (x <= hx && x > qx) {
                    qx = x;
                    if (x == hx) {
                        if (hy == a.y) return p;
                        if (hy == b.y) return nx(p);
                    }
                    m = a.x < b.x ? p : nx(p);
                }
            }
            p = nx(p);
        } while (p != outer);
        if (m < 0) return -1;
        if (hx == qx) return m;

        const int stop = m;
        const double mx = nodes_[m].x;
        const double my = nodes_[m].y;
        double tan_min = INFINITY;
        p = m;
        do {
            const Node& n = nodes_[p];
            if (hx >= n.x && n.x >= mx && hx != n.x &&
                point_in_triangle(hy < my ? hx : qx, hy, mx, my, hy < my ? qx : hx, hy, n.x, n.y)) {
                const double tan_cur = std::abs(hy - n.y) / (hx - n.x);
                if (locally_inside(p, hole) &&
                    (tan_cur < tan_min || (tan_cur == tan_min && (n.x > nodes_[m].x || (n.x == nodes_[m].x &&
                                                                                       sector_contains(m, p)))))) {
                    m = p;
                    tan_min = tan_cur;
                }
            }
            p = nx(p);
        } while (p != stop);
        return m;
    }

    bool sector_contains(int m, int p) const {
        return area(pv(m), m, pv(p)) < 0 && area(nx(p), m, nx(m)) < 0;
    }

    const std::vector<Vec2>& pts_;
    std::vector<Node> nodes_;
};

} // namespace

namespace {

// Splits every edge at vertices of the other rings lying on it, so that a
// hole touching an edge meets it at a shared vertex.
std::vector<Polygon2D> split_touching_edges(const Polygon2D& outer, std::span<const Polygon2D> holes) {
    std::vector<const Polygon2D*> rings{&outer};
    for (const Polygon2D& h : holes) rings.push_back(&h);
    std::vector<Polygon2D> out;
    for (std::size_t r = 0; r < rings.size(); ++r) {
        const Polygon2D& ring = *rings[r];
        Polygon2D split;
        for (std::size_t i = 0; i < ring.size(); ++i) {
            const Vec2 a = ring[i];
            const Vec2 b = ring.next(i);
            split.vertices.push_back(a);
            const Vec2 d = b - a;
            const double len2 = dot(d, d);
            if (len2 == 0.0) continue;
            std::vector<std::pair<double, Vec2>> hits;
            for (std::size_t o = 0; o < rings.size(); ++o) {
                if (o == r) continue;
                for (const Vec2& v : rings[o]->vertices) {
                    if (v == a || v == b || distance_to_segment(v, a, b) > kGeomEps) continue;
                    const double t = dot(v - a, d) / len2;
                    if (t > 0.0 && t < 1.0) hits.emplace_back(t, v);
                }
            }
            std::sort(hits.begin(), hits.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
            for (const auto& [t, v] : hits)
                if (split.vertices.back() != v) split.vertices.push_back(v);
        }
        out.push_back(std::move(split));
    }
    return out;
}

} // namespace

Triangulation triangulate_with_holes(const Polygon2D& outer, std::span<const Polygon2D> holes) {
    if (outer.size() < 3) throw GeometryError("outer ring has fewer than 3 vertices");
    Triangulation out;
    std::vector<std::size_t> starts{0};
    for (const Polygon2D& ring : split_touching_edges(outer, holes)) {
        if (!out.points.empty()) starts.push_back(out.points.size());
        out.points.insert(out.points.end(), ring.vertices.begin(), ring.vertices.end());
    }

    EarClipper clipper(out.points);
    clipper.run(starts);
    for (auto t : clipper.triangles) {
        const Vec2 p0 = out.points[t[0]], p1 = out.points[t[1]], p2 = out.points[t[2]];
        const double a = orient(p0, p1, p2);
        // Slivers whose height is below the coordinate epsilon (collinear
        // up to rounding) carry no area and would leave T-junctions.
        const double longest = std::max({norm(p1 - p0), norm(p2 - p1), norm(p0 - p2)});
        if (std::abs(a) <= kGeomEps * longest) continue;
        if (a < 0.0) std::swap(t[1], t[2]);
        out.triangles.push_back(t);
    }

    double expected = std::abs(signed_area(outer));
    for (const Polygon2D& h : holes) expected -= std::abs(signed_area(h));
    const double got = out.area();
    if (std::abs(got - expected) > 1e-9 * std::max(1.0, std::abs(expected)))
        throw GeometryError("unresolvable self-intersection: triangulated area " + std::to_string(got) +
                            " differs from polygon area " + std::to_string(expected));
    return out;
}

} // namespace archprog
