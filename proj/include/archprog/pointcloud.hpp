#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "archprog/mesh.hpp"
#include "archprog/rng.hpp"

namespace archprog {

enum class NoiseKind : std::uint8_t { None, Uniform, Perlin };

const char* noise_name(NoiseKind k);
std::optional<NoiseKind> noise_from_name(const std::string& name);

/// normalized = (p - centre) * scale
struct NormalizeTransform {
    Vec3 centre;
    double scale = 1.0;

    Vec3 apply(Vec3 p) const { return (p - centre) * scale; }
    Vec3 invert(Vec3 p) const { return p * (1.0 / scale) + centre; }
};

struct CloudMeta {
    std::size_t n_target = 0;
    NoiseKind noise = NoiseKind::None;
    double noise_scale = 0.0;
    double incomplete_ratio = 0.0;
    int anchors = 0;
    std::uint64_t seed = 0;
    NormalizeTransform transform;
};

struct PointCloud {
    std::vector<Vec3> points;
    CloudMeta meta;
};

/// Draws `count` points: a face is chosen with probability proportional to
/// area * weight, then a uniform barycentric point inside it. Empty `weights`
/// means unit weights. Throws GeometryError for an empty mesh or when every
/// face has zero weighted area.
PointCloud sample_surface(const Mesh& m, std::size_t count, std::span<const double> weights, Rng& rng);

/// One weight per face, uniform in [lo, hi].
std::vector<double> random_face_weights(std::size_t faces, Rng& rng, double lo = 0.1, double hi = 1.0);

struct HoleReport {
    std::vector<Vec3> anchors;
    /// Distance from the nearest anchor of the last removed point; every
    /// survivor is at least this far from all anchors.
    double radius = 0.0;
    std::size_t removed = 0;
};

/// Removes the round(r * |pc|) points nearest to their closest anchor (capped
/// so that n_target points remain), then subsamples uniformly to exactly
/// n_target, keeping input order. Throws GeometryError when n_target > |pc|
/// or r is outside [0, 1).
PointCloud make_incomplete(const PointCloud& pc, std::size_t n_target, double r, std::span<const Vec3> anchors,
                           Rng& rng, HoleReport* report = nullptr);

/// As above with K ~ U{k_lo..k_hi} anchors drawn from the cloud itself.
PointCloud make_incomplete(const PointCloud& pc, std::size_t n_target, double r, Rng& rng, int k_lo = 1,
                           int k_hi = 3, HoleReport* report = nullptr);

/// Seeded 3-octave gradient-noise vector field (base frequency 4 cycles per
/// unit, persistence 0.5), one independent Perlin field per axis, clamped to
/// the unit ball.
class PerlinField {
public:
    explicit PerlinField(std::uint64_t seed);

    Vec3 operator()(Vec3 p) const;

    static constexpr int kOctaves = 3;
    static constexpr double kBaseFrequency = 4.0;
    static constexpr double kPersistence = 0.5;

private:
    double noise(int axis, double x, double y, double z) const;

    std::vector<std::uint8_t> perm_[3];
    Vec3 offset_[3];
};

/// Uniform: every coordinate moves by U(-scale, scale). Perlin: p moves by
/// scale * g(p) for a PerlinField seeded from rng. Throws ConfigError for a
/// negative scale.
PointCloud add_noise(const PointCloud& pc, NoiseKind kind, double scale, Rng& rng);

/// Centres the bounding box at the origin and scales the largest extent to
/// 1. A zero-extent cloud is only centred. Records the transform in meta.
PointCloud normalize(const PointCloud& pc);
PointCloud denormalize(const PointCloud& pc);

struct AugmentSpec {
    std::size_t n_lo = 200;
    std::size_t n_hi = 2000;
    std::size_t oversample = 5;
    double weight_lo = 0.1;
    double weight_hi = 1.0;
    double r_lo = 0.10;
    double r_hi = 0.50;
    int anchors_lo = 1;
    int anchors_hi = 3;
    /// One kind is drawn uniformly per cloud.
    std::vector<NoiseKind> noise_kinds{NoiseKind::Uniform, NoiseKind::Perlin};
    double noise_scale = 0.02;

    /// Throws ConfigError describing the first invalid field.
    void check() const;
};

/// The full degradation pipeline: n ~ U{n_lo..n_hi}, oversample * n surface
/// points under random face weights, anchor holes with r ~ U(r_lo, r_hi),
/// subsampling to n, then noise. Points stay in the mesh frame.
PointCloud augment(const Mesh& m, const AugmentSpec& spec, Rng& rng);

/// Binary little-endian PLY with float64 x, y, z.
void write_ply(std::ostream& os, const std::vector<Vec3>& points);
/// Accepts ascii and binary_little_endian vertex elements with float or
/// double x, y, z (other scalar properties are skipped).
std::vector<Vec3> read_ply(std::istream& is);
void save_ply(const std::string& path, const std::vector<Vec3>& points);
std::vector<Vec3> load_ply(const std::string& path);

/// One "x y z" line per point.
void write_xyz(std::ostream& os, const std::vector<Vec3>& points);
std::vector<Vec3> read_xyz(std::istream& is);

/// Dispatches on the extension: .ply or .xyz (anything else is read as xyz).
std::vector<Vec3> load_points(const std::string& path);
void save_points(const std::string& path, const std::vector<Vec3>& points);

} // namespace archprog
