#include "archprog/mesh.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "archprog/error.hpp"

namespace archprog {

const char* role_name(FaceRole r) {
    switch (r) {
    case FaceRole::Side: return "side";
    case FaceRole::Top: return "top";
    case FaceRole::Bottom: return "bottom";
    }
    return "?";
}

double Mesh::surface_area() const {
    double total = 0.0;
    for (std::size_t f = 0; f < triangles.size(); ++f) total += face_area(f);
    return total;
}

bool is_closed_manifold(const Mesh& m) {
    // (min, max) -> (count in min->max direction, count in max->min direction)
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::pair<int, int>> edges;
    for (const auto& t : m.triangles) {
        for (int k = 0; k < 3; ++k) {
            const std::uint32_t a = t[static_cast<std::size_t>(k)];
            const std::uint32_t b = t[static_cast<std::size_t>((k + 1) % 3)];
            auto& slot = edges[{std::min(a, b), std::max(a, b)}];
            (a < b ? slot.first : slot.second) += 1;
        }
    }
    for (const auto& [key, count] : edges)
        if (count.first != 1 || count.second != 1) return false;
    return !m.triangles.empty();
}

VolumeResult mesh_volume(const Mesh& m) {
    VolumeResult out;
    double six = 0.0;
    for (const auto& t : m.triangles) six += dot(m.vertices[t[0]], cross(m.vertices[t[1]], m.vertices[t[2]]));
    out.value = six / 6.0;
    out.closed = is_closed_manifold(m);
    return out;
}

void write_obj(std::ostream& os, const Mesh& m, bool groups) {
    char buf[128];
    for (const Vec3& v : m.vertices) {
        std::snprintf(buf, sizeof buf, "v %.17g %.17g %.17g\n", v.x, v.y, v.z);
        os << buf;
    }
    int current = -1;
    for (std::size_t f = 0; f < m.triangles.size(); ++f) {
        if (groups && f < m.tags.size() && m.tags[f].layer != current) {
            current = m.tags[f].layer;
            os << "g layer_" << current << "\n";
        }
        const auto& t = m.triangles[f];
        os << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << "\n";
    }
}

namespace {

long parse_index(std::string_view tok, std::size_t nverts, std::size_t line) {
    const auto slash = tok.find('/');
    if (slash != std::string_view::npos) tok = tok.substr(0, slash);
    long idx = 0;
    const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), idx);
    if (res.ec != std::errc() || idx == 0) throw IoError("OBJ line " + std::to_string(line) + ": bad face index");
    if (idx < 0) idx = static_cast<long>(nverts) + idx + 1;
    if (idx < 1 || static_cast<std::size_t>(idx) > nverts)
        throw IoError("OBJ line " + std::to_string(line) + ": face index out of range");
    return idx - 1;
}

} // namespace

Mesh read_obj(std::istream& is) {
    Mesh m;
    std::string line;
    std::size_t lineno = 0;
    int layer = 0;
    while (std::getline(is, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string kind;
        ls >> kind;
        if (kind == "v") {
            Vec3 v;
            if (!(ls >> v.x >> v.y >> v.z)) throw IoError("OBJ line " + std::to_string(lineno) + ": bad vertex");
            m.vertices.push_back(v);
        } else if (kind == "f") {
            std::vector<std::uint32_t> idx;
            std::string tok;
            while (ls >> tok) idx.push_back(static_cast<std::uint32_t>(parse_index(tok, m.vertices.size(), lineno)));
            if (idx.size() < 3) throw IoError("OBJ line " + std::to_string(lineno) + ": face with fewer than 3 vertices");
            for (std::size_t k = 1; k + 1 < idx.size(); ++k) {
                m.triangles.push_back({idx[0], idx[k], idx[k + 1]});
                m.tags.push_back({layer, FaceRole::Side});
            }
        } else if (kind == "g") {
            std::string name;
            ls >> name;
            layer = 0;
            if (name.rfind("layer_", 0) == 0) std::from_chars(name.data() + 6, name.data() + name.size(), layer);
        }
    }
    return m;
}

void save_obj(const std::string& path, const Mesh& m, bool groups) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot write " + path);
    write_obj(os, m, groups);
    if (!os) throw IoError("error writing " + path);
}

Mesh load_obj(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot read " + path);
    return read_obj(is);
}

} // namespace archprog
