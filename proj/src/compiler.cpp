#include "archprog/compiler.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <tuple>

#include "archprog/clip.hpp"
#include "archprog/error.hpp"
#include "archprog/triangulate.hpp"

namespace archprog {

std::vector<PlacedLayer> place_layers(const Program& p) {
    std::vector<PlacedLayer> out;
    out.reserve(p.layers.size());
    for (const LayerStatement& st : p.layers) {
        const std::string where = "L" + std::to_string(st.label);
        Polygon2D c = remove_duplicates(st.contour);
        if (c.size() < 3 || std::abs(signed_area(c)) <= kGeomEps * kGeomEps || !is_simple(c))
            throw GeometryError("degenerate contour in " + where);
        if (st.parent < kGround || st.parent >= st.label) throw GeometryError("undeclared parent of " + where);
        PlacedLayer pl;
        pl.label = st.label;
        pl.parent = st.parent;
        pl.z_base = st.parent == kGround ? p.ground : out[static_cast<std::size_t>(st.parent - 1)].z_top;
        pl.z_top = pl.z_base + st.height;
        pl.contour = to_ccw(c);
        out.push_back(std::move(pl));
    }
    return out;
}

namespace {

class MeshBuilder {
public:
    std::uint32_t vertex(Vec3 v) {
        const auto key = std::make_tuple(v.x, v.y, v.z);
        const auto it = index_.find(key);
        if (it != index_.end()) return it->second;
        const auto id = static_cast<std::uint32_t>(mesh_.vertices.size());
        mesh_.vertices.push_back(v);
        index_.emplace(key, id);
        return id;
    }

    void triangle(Vec3 a, Vec3 b, Vec3 c, FaceTag tag) {
        const double longest = std::max({norm(b - a), norm(c - b), norm(a - c)});
        if (norm(cross(b - a, c - a)) <= kGeomEps * longest) return;
        mesh_.triangles.push_back({vertex(a), vertex(b), vertex(c)});
        mesh_.tags.push_back(tag);
    }

    void cap(const PolygonWithHoles& region, double z, bool up, FaceTag tag) {
        const Triangulation tri = triangulate_with_holes(region.outer, region.holes);
        for (const auto& t : tri.triangles) {
            const Vec2 a = tri.points[t[0]];
            const Vec2 b = tri.points[t[1]];
            const Vec2 c = tri.points[t[2]];
            if (up)
                triangle({a.x, a.y, z}, {b.x, b.y, z}, {c.x, c.y, z}, tag);
            else
                triangle({a.x, a.y, z}, {c.x, c.y, z}, {b.x, b.y, z}, tag);
        }
    }

    Mesh finish() {
        weld();
        split_t_junctions();
        compact();
        return std::move(mesh_);
    }

private:
    // Merges vertices closer than kGeomEps (boolean outputs may differ from
    // wall vertices in the last bits).
    void weld() {
        const std::size_t n = mesh_.vertices.size();
        std::vector<std::uint32_t> order(n);
        std::iota(order.begin(), order.end(), 0u);
        std::sort(order.begin(), order.end(), [&](auto a, auto b) {
            return mesh_.vertices[a].x < mesh_.vertices[b].x || (mesh_.vertices[a].x == mesh_.vertices[b].x && a < b);
        });
        std::vector<std::uint32_t> rep(n);
        std::iota(rep.begin(), rep.end(), 0u);
        auto find = [&](std::uint32_t v) {
            while (rep[v] != v) v = rep[v] = rep[rep[v]];
            return v;
        };
        for (std::size_t i = 0; i < n; ++i) {
            const Vec3 vi = mesh_.vertices[order[i]];
            for (std::size_t j = i + 1; j < n && mesh_.vertices[order[j]].x - vi.x <= kGeomEps; ++j) {
                if (squared_distance(vi, mesh_.vertices[order[j]]) > kGeomEps * kGeomEps) continue;
                const std::uint32_t a = find(order[i]);
                const std::uint32_t b = find(order[j]);
                if (a != b) rep[std::max(a, b)] = std::min(a, b);
            }
        }
        for (std::uint32_t i = 0; i < n; ++i) rep[i] = find(i);
        remap(rep);
    }

    void remap(const std::vector<std::uint32_t>& rep) {
        std::vector<std::array<std::uint32_t, 3>> tris;
        std::vector<FaceTag> tags;
        for (std::size_t f = 0; f < mesh_.triangles.size(); ++f) {
            auto t = mesh_.triangles[f];
            for (auto& i : t) i = rep[i];
            if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2]) continue;
            tris.push_back(t);
            tags.push_back(mesh_.tags[f]);
        }
        mesh_.triangles = std::move(tris);
        mesh_.tags = std::move(tags);
    }

    // Splits triangle edges that pass through another mesh vertex.
    void split_t_junctions() {
        const auto& V = mesh_.vertices;
        // Only vertices still referenced after welding.
        std::vector<bool> live(V.size(), false);
        for (const auto& t : mesh_.triangles)
            for (std::uint32_t i : t) live[i] = true;
        std::vector<std::uint32_t> by_x;
        for (std::uint32_t i = 0; i < V.size(); ++i)
            if (live[i]) by_x.push_back(i);
        std::sort(by_x.begin(), by_x.end(), [&](auto a, auto b) { return V[a].x < V[b].x || (V[a].x == V[b].x && a < b); });

        auto find_on_edge = [&](std::uint32_t a, std::uint32_t b, std::uint32_t c) -> std::int64_t {
            const Vec3 pa = V[a];
            const Vec3 pb = V[b];
            const Vec3 ab = pb - pa;
            const double len2 = dot(ab, ab);
            const double lo = std::min(pa.x, pb.x) - kGeomEps;
            const double hi = std::max(pa.x, pb.x) + kGeomEps;
            auto it = std::lower_bound(by_x.begin(), by_x.end(), lo, [&](std::uint32_t i, double x) { return V[i].x < x; });
            std::int64_t best = -1;
            double best_t = 2.0;
            for (; it != by_x.end() && V[*it].x <= hi; ++it) {
                const std::uint32_t p = *it;
                if (p == a || p == b || p == c) continue;
                const Vec3 pp = V[p];
                if (pp.y < std::min(pa.y, pb.y) - kGeomEps || pp.y > std::max(pa.y, pb.y) + kGeomEps) continue;
                if (pp.z < std::min(pa.z, pb.z) - kGeomEps || pp.z > std::max(pa.z, pb.z) + kGeomEps) continue;
                const double t = dot(pp - pa, ab) / len2;
                if (t <= 0.0 || t >= 1.0) continue;
                if (squared_distance(pp, pa) <= kGeomEps * kGeomEps || squared_distance(pp, pb) <= kGeomEps * kGeomEps) continue;
                if (squared_distance(pp, pa + ab * t) > kGeomEps * kGeomEps) continue;
                if (t < best_t) {
                    best_t = t;
                    best = p;
                }
            }
            return best;
        };

        std::vector<std::array<std::uint32_t, 3>> done;
        std::vector<FaceTag> done_tags;
        std::vector<std::pair<std::array<std::uint32_t, 3>, FaceTag>> stack;
        for (std::size_t f = mesh_.triangles.size(); f-- > 0;) stack.emplace_back(mesh_.triangles[f], mesh_.tags[f]);
        while (!stack.empty()) {
            auto [t, tag] = stack.back();
            stack.pop_back();
            bool split = false;
            for (int k = 0; k < 3 && !split; ++k) {
                const std::uint32_t a = t[static_cast<std::size_t>(k)];
                const std::uint32_t b = t[static_cast<std::size_t>((k + 1) % 3)];
                const std::uint32_t c = t[static_cast<std::size_t>((k + 2) % 3)];
                const std::int64_t p = find_on_edge(a, b, c);
                if (p < 0) continue;
                const auto pi = static_cast<std::uint32_t>(p);
                stack.push_back({{pi, b, c}, tag});
                stack.push_back({{a, pi, c}, tag});
                split = true;
            }
            if (!split) {
                done.push_back(t);
                done_tags.push_back(tag);
            }
        }
        mesh_.triangles = std::move(done);
        mesh_.tags = std::move(done_tags);
    }

    // Drops unreferenced vertices, numbering the rest by first use.
    void compact() {
        std::vector<std::int64_t> map(mesh_.vertices.size(), -1);
        std::vector<Vec3> verts;
        for (auto& t : mesh_.triangles) {
            for (auto& i : t) {
                if (map[i] < 0) {
                    map[i] = static_cast<std::int64_t>(verts.size());
                    verts.push_back(mesh_.vertices[i]);
                }
                i = static_cast<std::uint32_t>(map[i]);
            }
        }
        mesh_.vertices = std::move(verts);
    }

    Mesh mesh_;
    std::map<std::tuple<double, double, double>, std::uint32_t> index_;
};

struct WallCut {
    double s0, s1; ///< range along the wall edge
    double z0, z1;
};

// Parts of the wall over edge a->d of layer i that coincide with an
// oppositely facing wall of another layer (e.g. siblings sharing a
// boundary). Both copies lie inside the solid and are left out.
std::vector<WallCut> shared_wall_parts(const std::vector<PlacedLayer>& placed, std::size_t i, Vec2 a, Vec2 d) {
    std::vector<WallCut> cuts;
    const double len = norm(d - a);
    const Vec2 u = (d - a) * (1.0 / len);
    const PlacedLayer& L = placed[i];
    for (std::size_t j = 0; j < placed.size(); ++j) {
        if (j == i) continue;
        const PlacedLayer& M = placed[j];
        const double zlo = std::max(L.z_base, M.z_base);
        const double zhi = std::min(L.z_top, M.z_top);
        if (zhi - zlo <= kGeomEps) continue;
        const Polygon2D& c = M.contour;
        for (std::size_t k = 0; k < c.size(); ++k) {
            const Vec2 e0 = c[k];
            const Vec2 e1 = c.next(k);
            if (dot(e1 - e0, u) >= 0.0) continue;
            if (std::abs(cross(u, e0 - a)) > kGeomEps || std::abs(cross(u, e1 - a)) > kGeomEps) continue;
            const double t0 = std::max(0.0, dot(e1 - a, u));
            const double t1 = std::min(len, dot(e0 - a, u));
            if (t1 - t0 > kGeomEps) cuts.push_back({t0, t1, zlo, zhi});
        }
    }
    return cuts;
}

} // namespace

Mesh compile(const Program& p) {
    if (p.layers.empty()) throw GeometryError("nothing to compile: program has no layers");
    const std::vector<PlacedLayer> placed = place_layers(p);
    std::vector<std::vector<std::size_t>> children(placed.size());
    for (std::size_t i = 0; i < placed.size(); ++i)
        if (placed[i].parent != kGround) children[static_cast<std::size_t>(placed[i].parent - 1)].push_back(i);

    MeshBuilder b;
    for (std::size_t i = 0; i < placed.size(); ++i) {
        const PlacedLayer& L = placed[i];
        const Polygon2D& c = L.contour;
        const double z0 = L.z_base;
        const double z1 = L.z_top;

        const FaceTag side{L.label, FaceRole::Side};
        for (std::size_t k = 0; k < c.size(); ++k) {
            const Vec2 a = c[k];
            const Vec2 d = c.next(k);
            const std::vector<WallCut> cuts = shared_wall_parts(placed, i, a, d);
            if (cuts.empty()) {
                b.triangle({a.x, a.y, z0}, {d.x, d.y, z0}, {d.x, d.y, z1}, side);
                b.triangle({a.x, a.y, z0}, {d.x, d.y, z1}, {a.x, a.y, z1}, side);
                continue;
            }
            const double len = norm(d - a);
            const Vec2 u = (d - a) * (1.0 / len);
            std::vector<double> breaks{0.0, len};
            for (const WallCut& w : cuts) breaks.insert(breaks.end(), {w.s0, w.s1});
            std::sort(breaks.begin(), breaks.end());
            for (std::size_t q = 0; q + 1 < breaks.size(); ++q) {
                const double s0 = breaks[q];
                const double s1 = breaks[q + 1];
                if (s1 - s0 <= kGeomEps) continue;
                const double mid = (s0 + s1) / 2.0;
                std::vector<std::pair<double, double>> removed;
                for (const WallCut& w : cuts)
                    if (w.s0 < mid && mid < w.s1) removed.emplace_back(w.z0, w.z1);
                std::sort(removed.begin(), removed.end());
                const Vec2 p0 = s0 == 0.0 ? a : a + u * s0;
                const Vec2 p1 = s1 == len ? d : a + u * s1;
                double lo = z0;
                auto emit = [&](double zlo, double zhi) {
                    if (zhi - zlo <= kGeomEps) return;
                    b.triangle({p0.x, p0.y, zlo}, {p1.x, p1.y, zlo}, {p1.x, p1.y, zhi}, side);
                    b.triangle({p0.x, p0.y, zlo}, {p1.x, p1.y, zhi}, {p0.x, p0.y, zhi}, side);
                };
                for (const auto& [rlo, rhi] : removed) {
                    emit(lo, std::min(rlo, z1));
                    lo = std::max(lo, rhi);
                }
                emit(lo, z1);
            }
        }

        try {
            std::vector<Polygon2D> footprints;
            for (std::size_t ch : children[i]) footprints.push_back(placed[ch].contour);
            for (const PolygonWithHoles& region : polygon_difference(c, footprints))
                b.cap(region, z1, true, {L.label, FaceRole::Top});

            if (L.parent == kGround) {
                b.cap({c, {}}, z0, false, {L.label, FaceRole::Bottom});
            } else {
                const Polygon2D& parent = placed[static_cast<std::size_t>(L.parent - 1)].contour;
                const Polygon2D parents[] = {parent};
                for (const PolygonWithHoles& overhang : polygon_difference(c, parents))
                    b.cap(overhang, z0, false, {L.label, FaceRole::Bottom});
            }
        } catch (const GeometryError& e) {
            throw GeometryError("L" + std::to_string(L.label) + ": " + e.what());
        }
    }
    return b.finish();
}

} // namespace archprog
