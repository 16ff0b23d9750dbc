#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "archprog/geometry.hpp"

namespace archprog {

enum class FaceRole : std::uint8_t { Side, Top, Bottom };

const char* role_name(FaceRole r);

struct FaceTag {
    int layer = 0; ///< 1-based layer label, 0 when unknown (e.g. loaded meshes)
    FaceRole role = FaceRole::Side;

    friend bool operator==(const FaceTag&, const FaceTag&) = default;
};

/// Indexed triangle mesh with per-face provenance.
struct Mesh {
    std::vector<Vec3> vertices;
    std::vector<std::array<std::uint32_t, 3>> triangles;
    std::vector<FaceTag> tags; ///< parallel to triangles

    friend bool operator==(const Mesh&, const Mesh&) = default;

    Vec3 corner(std::size_t face, int k) const { return vertices[triangles[face][static_cast<std::size_t>(k)]]; }
    double face_area(std::size_t face) const { return triangle_area(corner(face, 0), corner(face, 1), corner(face, 2)); }
    double surface_area() const;
};

struct VolumeResult {
    double value = 0.0;
    /// False when some edge is not shared by exactly two oppositely wound faces;
    /// `value` is then only a best-effort figure.
    bool closed = true;
};

/// Signed volume by the divergence theorem; positive for outward winding.
VolumeResult mesh_volume(const Mesh& m);

/// Every undirected edge is used by exactly two faces with opposite directions.
bool is_closed_manifold(const Mesh& m);

/// Writes ASCII OBJ (1-based). With `groups`, emits `g layer_<i>` whenever the
/// face layer changes.
void write_obj(std::ostream& os, const Mesh& m, bool groups = true);
/// Reads `v` and `f` records; polygonal faces are fan-triangulated and
/// `g layer_<i>` groups restore face layer tags.
Mesh read_obj(std::istream& is);

void save_obj(const std::string& path, const Mesh& m, bool groups = true);
Mesh load_obj(const std::string& path);

} // namespace archprog
