#include "archprog/pointcloud.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "archprog/error.hpp"

namespace archprog {

namespace {

constexpr const char* kNoiseNames[] = {"none", "uniform", "perlin"};

} // namespace

const char* noise_name(NoiseKind k) { return kNoiseNames[static_cast<std::size_t>(k)]; }

std::optional<NoiseKind> noise_from_name(const std::string& name) {
    for (std::size_t i = 0; i < 3; ++i)
        if (name == kNoiseNames[i]) return static_cast<NoiseKind>(i);
    return std::nullopt;
}

PointCloud sample_surface(const Mesh& m, std::size_t count, std::span<const double> weights, Rng& rng) {
    if (m.triangles.empty()) throw GeometryError("cannot sample an empty mesh");
    if (!weights.empty() && weights.size() != m.triangles.size())
        throw GeometryError("face weights: expected " + std::to_string(m.triangles.size()) + ", got " +
                            std::to_string(weights.size()));
    std::vector<double> cdf(m.triangles.size());
    double total = 0.0;
    for (std::size_t f = 0; f < m.triangles.size(); ++f) {
        const double w = weights.empty() ? 1.0 : weights[f];
        if (!(w >= 0.0)) throw GeometryError("face weights must be non-negative");
        total += m.face_area(f) * w;
        cdf[f] = total;
    }
    if (!(total > 0.0)) throw GeometryError("every face has zero weighted area");
    std::size_t last_positive = cdf.size() - 1;
    while (last_positive > 0 && cdf[last_positive] == cdf[last_positive - 1]) --last_positive;

    PointCloud pc;
    pc.points.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double u = rng.uniform() * total;
        // upper_bound never lands on a zero-weight face, whose cumulative
        // value equals its predecessor's.
        auto f = static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
        if (f == cdf.size()) f = last_positive;
        double r1 = rng.uniform();
        double r2 = rng.uniform();
        if (r1 + r2 > 1.0) {
            r1 = 1.0 - r1;
            r2 = 1.0 - r2;
        }
        const Vec3 a = m.corner(f, 0);
        const Vec3 b = m.corner(f, 1);
        const Vec3 c = m.corner(f, 2);
        pc.points.push_back(a + (b - a) * r1 + (c - a) * r2);
    }
    pc.meta.n_target = count;
    return pc;
}

std::vector<double> random_face_weights(std::size_t faces, Rng& rng, double lo, double hi) {
    std::vector<double> w(faces);
    for (double& x : w) x = rng.uniform(lo, hi);
    return w;
}

PointCloud make_incomplete(const PointCloud& pc, std::size_t n_target, double r, std::span<const Vec3> anchors,
                           Rng& rng, HoleReport* report) {
    const std::size_t n = pc.points.size();
    if (n_target > n)
        throw GeometryError("n_target " + std::to_string(n_target) + " exceeds the " + std::to_string(n) + " input points");
    if (!(r >= 0.0 && r < 1.0)) throw GeometryError("incompleteness ratio must be in [0, 1)");
    if (anchors.empty() && r > 0.0) throw GeometryError("hole cutting needs at least one anchor");

    std::vector<double> d2(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double best = INFINITY;
        for (const Vec3& a : anchors) best = std::min(best, squared_distance(pc.points[i], a));
        d2[i] = best;
    }
    const auto wanted = static_cast<std::size_t>(std::llround(r * static_cast<double>(n)));
    const std::size_t removed = std::min(wanted, n - n_target);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    auto nearer = [&](std::size_t a, std::size_t b) { return d2[a] < d2[b] || (d2[a] == d2[b] && a < b); };
    std::nth_element(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(removed), order.end(), nearer);
    std::vector<bool> gone(n, false);
    double radius = 0.0;
    for (std::size_t k = 0; k < removed; ++k) {
        gone[order[k]] = true;
        radius = std::max(radius, std::sqrt(d2[order[k]]));
    }

    std::vector<std::size_t> keep;
    keep.reserve(n - removed);
    for (std::size_t i = 0; i < n; ++i)
        if (!gone[i]) keep.push_back(i);
    // Partial Fisher-Yates picks n_target survivors; sorting restores input order.
    for (std::size_t k = 0; k < n_target; ++k) {
        const auto j = static_cast<std::size_t>(rng.uniform_int(static_cast<std::int64_t>(k),
                                                                static_cast<std::int64_t>(keep.size()) - 1));
        std::swap(keep[k], keep[j]);
    }
    keep.resize(n_target);
    std::sort(keep.begin(), keep.end());

    PointCloud out;
    out.meta = pc.meta;
    out.meta.n_target = n_target;
    out.meta.incomplete_ratio = r;
    out.meta.anchors = static_cast<int>(anchors.size());
    out.points.reserve(n_target);
    for (std::size_t i : keep) out.points.push_back(pc.points[i]);
    if (report) {
        report->anchors.assign(anchors.begin(), anchors.end());
        report->radius = radius;
        report->removed = removed;
    }
    return out;
}

PointCloud make_incomplete(const PointCloud& pc, std::size_t n_target, double r, Rng& rng, int k_lo, int k_hi,
                           HoleReport* report) {
    if (pc.points.empty()) throw GeometryError("cannot cut holes into an empty cloud");
    if (k_lo < 1 || k_lo > k_hi) throw GeometryError("anchor count range must satisfy 1 <= lo <= hi");
    const auto k = rng.uniform_int(k_lo, k_hi);
    std::vector<Vec3> anchors;
    for (std::int64_t i = 0; i < k; ++i)
        anchors.push_back(pc.points[static_cast<std::size_t>(
            rng.uniform_int(0, static_cast<std::int64_t>(pc.points.size()) - 1))]);
    return make_incomplete(pc, n_target, r, anchors, rng, report);
}

PerlinField::PerlinField(std::uint64_t seed) {
    Rng rng(seed);
    for (int axis = 0; axis < 3; ++axis) {
        std::vector<std::uint8_t> p(256);
        std::iota(p.begin(), p.end(), 0);
        rng.shuffle(p);
        perm_[axis].resize(512);
        for (int i = 0; i < 512; ++i) perm_[axis][static_cast<std::size_t>(i)] = p[static_cast<std::size_t>(i & 255)];
        offset_[axis] = {rng.uniform(0.0, 256.0), rng.uniform(0.0, 256.0), rng.uniform(0.0, 256.0)};
    }
}

namespace {

double fade(double t) { return t * t * t * (t * (t * 6 - 15) + 10); }
double lerp(double t, double a, double b) { return a + t * (b - a); }

double grad(int hash, double x, double y, double z) {
    const int h = hash & 15;
    const double u = h < 8 ? x : y;
    const double v = h < 4 ? y : (h == 12 || h == 14 ? x : z);
    return ((h & 1) == 0 ? u : -u) + ((h & 2) == 0 ? v : -v);
}

} // namespace

// Improved Perlin noise (2002 reference implementation) on one axis's table.
double PerlinField::noise(int axis, double x, double y, double z) const {
    const auto& p = perm_[axis];
    const double fx = std::floor(x), fy = std::floor(y), fz = std::floor(z);
    const int X = static_cast<int>(static_cast<std::int64_t>(fx) & 255);
    const int Y = static_cast<int>(static_cast<std::int64_t>(fy) & 255);
    const int Z = static_cast<int>(static_cast<std::int64_t>(fz) & 255);
    x -= fx;
    y -= fy;
    z -= fz;
    const double u = fade(x), v = fade(y), w = fade(z);
    auto P = [&](int i) { return static_cast<int>(p[static_cast<std::size_t>(i)]); };
    const int A = P(X) + Y, AA = P(A) + Z, AB = P(A + 1) + Z;
    const int B = P(X + 1) + Y, BA = P(B) + Z, BB = P(B + 1) + Z;
    return lerp(w,
                lerp(v, lerp(u, grad(P(AA), x, y, z), grad(P(BA), x - 1, y, z)),
                     lerp(u, grad(P(AB), x, y - 1, z), grad(P(BB), x - 1, y - 1, z))),
                lerp(v, lerp(u, grad(P(AA + 1), x, y, z - 1), grad(P(BA + 1), x - 1, y, z - 1)),
                     lerp(u, grad(P(AB + 1), x, y - 1, z - 1), grad(P(BB + 1), x - 1, y - 1, z - 1))));
}

Vec3 PerlinField::operator()(Vec3 q) const {
    double c[3];
    for (int axis = 0; axis < 3; ++axis) {
        double sum = 0.0, amp = 1.0, freq = kBaseFrequency, norm_amp = 0.0;
        for (int o = 0; o < kOctaves; ++o) {
            const Vec3 s = q * freq + offset_[axis];
            sum += amp * noise(axis, s.x, s.y, s.z);
            norm_amp += amp;
            amp *= kPersistence;
            freq *= 2.0;
        }
        c[axis] = std::clamp(sum / norm_amp, -1.0, 1.0);
    }
    const Vec3 g{c[0], c[1], c[2]};
    const double len = norm(g);
    return len > 1.0 ? g * (1.0 / len) : g;
}

PointCloud add_noise(const PointCloud& pc, NoiseKind kind, double scale, Rng& rng) {
    if (!(scale >= 0.0)) throw ConfigError("noise scale must be non-negative");
    PointCloud out = pc;
    out.meta.noise = kind;
    out.meta.noise_scale = scale;
    switch (kind) {
    case NoiseKind::None: break;
    case NoiseKind::Uniform:
        for (Vec3& p : out.points) {
            // Draw even at scale 0 so the stream does not depend on it.
            const double dx = rng.uniform(-scale, scale);
            const double dy = rng.uniform(-scale, scale);
            const double dz = rng.uniform(-scale, scale);
            if (scale > 0.0) p = p + Vec3{dx, dy, dz};
        }
        break;
    case NoiseKind::Perlin: {
        const PerlinField field(rng.next());
        if (scale > 0.0)
            for (Vec3& p : out.points) p = p + field(p) * scale;
        break;
    }
    }
    return out;
}

PointCloud normalize(const PointCloud& pc) {
    if (pc.points.empty()) throw GeometryError("cannot normalize an empty cloud");
    Vec3 lo = pc.points[0], hi = pc.points[0];
    for (const Vec3& p : pc.points) {
        lo = {std::min(lo.x, p.x), std::min(lo.y, p.y), std::min(lo.z, p.z)};
        hi = {std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z)};
    }
    const double extent = std::max({hi.x - lo.x, hi.y - lo.y, hi.z - lo.z});
    PointCloud out;
    out.meta = pc.meta;
    out.meta.transform = {(lo + hi) * 0.5, extent > 0.0 ? 1.0 / extent : 1.0};
    out.points.reserve(pc.points.size());
    for (const Vec3& p : pc.points) out.points.push_back(out.meta.transform.apply(p));
    return out;
}

PointCloud denormalize(const PointCloud& pc) {
    PointCloud out;
    out.meta = pc.meta;
    out.meta.transform = {};
    out.points.reserve(pc.points.size());
    for (const Vec3& p : pc.points) out.points.push_back(pc.meta.transform.invert(p));
    return out;
}

void AugmentSpec::check() const {
    if (n_lo < 1 || n_lo > n_hi) throw ConfigError("point count range must satisfy 1 <= lo <= hi");
    if (oversample < 1) throw ConfigError("oversample factor must be at least 1");
    if (!(weight_lo >= 0.0 && weight_lo <= weight_hi && weight_hi > 0.0))
        throw ConfigError("face weight range must satisfy 0 <= lo <= hi, hi > 0");
    if (!(r_lo >= 0.0 && r_lo <= r_hi && r_hi < 1.0)) throw ConfigError("incompleteness range must satisfy 0 <= lo <= hi < 1");
    if (anchors_lo < 1 || anchors_lo > anchors_hi) throw ConfigError("anchor count range must satisfy 1 <= lo <= hi");
    if (!(noise_scale >= 0.0)) throw ConfigError("noise scale must be non-negative");
}

PointCloud augment(const Mesh& m, const AugmentSpec& spec, Rng& rng) {
    spec.check();
    const auto n = static_cast<std::size_t>(
        rng.uniform_int(static_cast<std::int64_t>(spec.n_lo), static_cast<std::int64_t>(spec.n_hi)));
    const std::vector<double> weights = random_face_weights(m.triangles.size(), rng, spec.weight_lo, spec.weight_hi);
    const PointCloud dense = sample_surface(m, spec.oversample * n, weights, rng);
    const double r = rng.uniform(spec.r_lo, spec.r_hi);
    const PointCloud holed = make_incomplete(dense, n, r, rng, spec.anchors_lo, spec.anchors_hi);
    NoiseKind kind = NoiseKind::None;
    if (!spec.noise_kinds.empty())
        kind = spec.noise_kinds[static_cast<std::size_t>(
            rng.uniform_int(0, static_cast<std::int64_t>(spec.noise_kinds.size()) - 1))];
    return add_noise(holed, kind, spec.noise_scale, rng);
}

namespace {

template <typename T>
T from_le(const char* bytes) {
    char buf[sizeof(T)];
    std::memcpy(buf, bytes, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(buf, buf + sizeof(T));
    T v;
    std::memcpy(&v, buf, sizeof(T));
    return v;
}

template <typename T>
void put_le(std::ostream& os, T v) {
    char buf[sizeof(T)];
    std::memcpy(buf, &v, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(buf, buf + sizeof(T));
    os.write(buf, sizeof(T));
}

struct PlyProperty {
    std::string name;
    std::string type;
    std::size_t size = 0;
};

std::size_t ply_type_size(const std::string& t) {
    if (t == "char" || t == "uchar" || t == "int8" || t == "uint8") return 1;
    if (t == "short" || t == "ushort" || t == "int16" || t == "uint16") return 2;
    if (t == "int" || t == "uint" || t == "int32" || t == "uint32" || t == "float" || t == "float32") return 4;
    if (t == "double" || t == "float64") return 8;
    throw IoError("PLY: unsupported property type '" + t + "'");
}

double ply_value(const PlyProperty& p, const char* bytes) {
    const std::string& t = p.type;
    if (t == "float" || t == "float32") return from_le<float>(bytes);
    if (t == "double" || t == "float64") return from_le<double>(bytes);
    if (t == "char" || t == "int8") return from_le<std::int8_t>(bytes);
    if (t == "uchar" || t == "uint8") return from_le<std::uint8_t>(bytes);
    if (t == "short" || t == "int16") return from_le<std::int16_t>(bytes);
    if (t == "ushort" || t == "uint16") return from_le<std::uint16_t>(bytes);
    if (t == "int" || t == "int32") return from_le<std::int32_t>(bytes);
    return from_le<std::uint32_t>(bytes);
}

} // namespace

void write_ply(std::ostream& os, const std::vector<Vec3>& points) {
    os << "ply\nformat binary_little_endian 1.0\nelement vertex " << points.size()
       << "\nproperty double x\nproperty double y\nproperty double z\nend_header\n";
    for (const Vec3& p : points) {
        put_le(os, p.x);
        put_le(os, p.y);
        put_le(os, p.z);
    }
    if (!os) throw IoError("PLY: write failed");
}

std::vector<Vec3> read_ply(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line.substr(0, 3) != "ply") throw IoError("PLY: missing 'ply' magic");
    std::string format;
    std::size_t count = 0;
    bool in_vertex = false, seen_vertex = false, vertex_first = true;
    std::vector<PlyProperty> props;
    for (;;) {
        if (!std::getline(is, line)) throw IoError("PLY: header ends before end_header");
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        if (key == "end_header") break;
        if (key == "format") {
            ls >> format;
        } else if (key == "element") {
            std::string name;
            std::size_t n = 0;
            ls >> name >> n;
            in_vertex = name == "vertex";
            if (in_vertex) {
                seen_vertex = true;
                count = n;
            } else if (!seen_vertex) {
                vertex_first = false;
            }
        } else if (key == "property" && in_vertex) {
            PlyProperty p;
            ls >> p.type;
            if (p.type == "list") throw IoError("PLY: list properties on vertices are not supported");
            ls >> p.name;
            p.size = ply_type_size(p.type);
            props.push_back(p);
        }
    }
    if (!seen_vertex) throw IoError("PLY: no vertex element");
    if (!vertex_first) throw IoError("PLY: the vertex element must come first");
    int ix = -1, iy = -1, iz = -1;
    for (std::size_t i = 0; i < props.size(); ++i) {
        if (props[i].name == "x") ix = static_cast<int>(i);
        if (props[i].name == "y") iy = static_cast<int>(i);
        if (props[i].name == "z") iz = static_cast<int>(i);
    }
    if (ix < 0 || iy < 0 || iz < 0) throw IoError("PLY: vertex element lacks x, y or z");

    std::vector<Vec3> out;
    out.reserve(count);
    if (format == "ascii") {
        for (std::size_t v = 0; v < count; ++v) {
            std::vector<double> vals(props.size());
            for (double& x : vals)
                if (!(is >> x)) throw IoError("PLY: truncated ascii vertex " + std::to_string(v));
            out.push_back({vals[static_cast<std::size_t>(ix)], vals[static_cast<std::size_t>(iy)],
                           vals[static_cast<std::size_t>(iz)]});
        }
    } else if (format == "binary_little_endian") {
        std::size_t stride = 0;
        std::vector<std::size_t> offset;
        for (const PlyProperty& p : props) {
            offset.push_back(stride);
            stride += p.size;
        }
        std::vector<char> rec(stride);
        for (std::size_t v = 0; v < count; ++v) {
            if (!is.read(rec.data(), static_cast<std::streamsize>(stride)))
                throw IoError("PLY: truncated binary vertex " + std::to_string(v));
            auto get = [&](int i) {
                return ply_value(props[static_cast<std::size_t>(i)], rec.data() + offset[static_cast<std::size_t>(i)]);
            };
            out.push_back({get(ix), get(iy), get(iz)});
        }
    } else {
        throw IoError("PLY: unsupported format '" + format + "'");
    }
    return out;
}

void save_ply(const std::string& path, const std::vector<Vec3>& points) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot write " + path);
    write_ply(os, points);
}

std::vector<Vec3> load_ply(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot read " + path);
    return read_ply(is);
}

void write_xyz(std::ostream& os, const std::vector<Vec3>& points) {
    char buf[96];
    for (const Vec3& p : points) {
        std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g\n", p.x, p.y, p.z);
        os << buf;
    }
    if (!os) throw IoError("XYZ: write failed");
}

std::vector<Vec3> read_xyz(std::istream& is) {
    std::vector<Vec3> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos || line[line.find_first_not_of(" \t")] == '#') continue;
        std::istringstream ls(line);
        Vec3 p;
        if (!(ls >> p.x >> p.y >> p.z)) throw IoError("XYZ: line " + std::to_string(lineno) + " is not 'x y z'");
        out.push_back(p);
    }
    return out;
}

namespace {

bool has_suffix(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && std::equal(suffix.rbegin(), suffix.rend(), s.rbegin(),
                                                   [](char a, char b) { return std::tolower(a) == b; });
}

} // namespace

std::vector<Vec3> load_points(const std::string& path) {
    if (has_suffix(path, ".ply")) return load_ply(path);
    std::ifstream is(path);
    if (!is) throw IoError("cannot read " + path);
    return read_xyz(is);
}

void save_points(const std::string& path, const std::vector<Vec3>& points) {
    if (has_suffix(path, ".ply")) return save_ply(path, points);
    std::ofstream os(path);
    if (!os) throw IoError("cannot write " + path);
    write_xyz(os, points);
}

} // namespace archprog
