#pragma once

#include <filesystem>
#include <stdexcept>

#include "see/mesh.hpp"

namespace see {

class MeshLoadError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Loads PLY (ASCII or binary little-endian) or OBJ by file extension.
/// Polygons are fan-triangulated; coordinates are multiplied by `scale`.
TriangleMesh load_mesh(const std::filesystem::path& path, double scale = 1.0);

TriangleMesh load_obj(const std::filesystem::path& path, double scale = 1.0);
TriangleMesh load_ply(const std::filesystem::path& path, double scale = 1.0);

void save_obj(const TriangleMesh& mesh, const std::filesystem::path& path);

enum class PlyEncoding { ascii, binary_little_endian };
void save_ply(const TriangleMesh& mesh, const std::filesystem::path& path, PlyEncoding encoding);

} // namespace see
