#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "archprog/mesh.hpp"

namespace archprog {

/// Static 3-d tree for exact nearest-neighbour distance queries.
class KdTree {
public:
    explicit KdTree(std::span<const Vec3> points);

    /// Smallest squared_distance(q, p) over the indexed points; bit-identical
    /// to the linear scan because the same expression is evaluated.
    double nearest_squared(Vec3 q) const;

    std::size_t size() const { return points_.size(); }

private:
    struct Node {
        std::uint32_t begin, end; ///< range in points_
        std::int32_t left = -1, right = -1;
        std::uint8_t axis = 0;
        double split = 0.0;
    };

    int build(std::uint32_t begin, std::uint32_t end);
    void search(int node, Vec3 q, double& best) const;

    std::vector<Vec3> points_;
    std::vector<Node> nodes_;
};

enum class Exec : std::uint8_t { Serial, Parallel };

/// max over a of min over b of |a - b|, through a KdTree on b. Throws
/// GeometryError when either set is empty.
double directed_hausdorff(std::span<const Vec3> a, std::span<const Vec3> b, Exec exec = Exec::Parallel);
/// Symmetric Hausdorff distance.
double hausdorff(std::span<const Vec3> a, std::span<const Vec3> b, Exec exec = Exec::Parallel);
/// O(|a||b|) reference.
double hausdorff_bruteforce(std::span<const Vec3> a, std::span<const Vec3> b);

inline constexpr std::size_t kMinMeshSamples = 1000;
inline constexpr std::uint64_t kDefaultMetricSeed = 0x5eed;

struct MeshDistance {
    double value = 0.0;
    std::size_t samples = 0; ///< per mesh
    std::uint64_t seed = 0;  ///< both meshes are sampled from a fresh Rng(seed)
};

/// Hausdorff distance between area-uniform surface samples of both meshes.
/// Throws GeometryError for fewer than kMinMeshSamples samples or an empty mesh.
MeshDistance mesh_hausdorff(const Mesh& a, const Mesh& b, std::size_t samples = 4096,
                            std::uint64_t seed = kDefaultMetricSeed);

struct MeshStats {
    std::size_t n_vertices = 0; ///< distinct positions used by faces
    std::size_t n_faces = 0;    ///< triangles
    std::size_t n_planes = 0;   ///< connected groups of coplanar non-degenerate faces
};

/// Faces sharing an edge (by position) join a plane when their normals differ
/// by at most `tol_deg` degrees and their plane offsets by at most `tol_offset`.
MeshStats mesh_stats(const Mesh& m, double tol_deg = 0.1, double tol_offset = 1e-5);

} // namespace archprog
