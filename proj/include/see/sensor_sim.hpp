#pragma once

#include <cstdint>
#include <vector>

#include "see/mesh.hpp"
#include "see/view_planning.hpp"

namespace see {

/// Square-frustum pinhole depth camera.
struct SensorSpec {
    double fov = 1.0471975511965976;  ///< full field of view in both axes [rad]
    int width = 600;                  ///< [px]
    int height = 600;                 ///< [px]
    double noise_sigma = 0.01;        ///< range noise std-dev [m]
    std::uint64_t seed = 0;

    void validate() const;
};

/// Measurements outside this box are discarded.
struct SceneBounds {
    Aabb box;
};

/// Camera up vector: world Z projected off the viewing direction, or world X
/// when the direction is within 1e-6 of +-Z.
Vec3 camera_up(const Vec3& direction);

/// Unit direction of the ray through pixel (col, row); row 0 is the top.
Vec3 pixel_direction(const ViewPose& pose, const SensorSpec& spec, int col, int row);

/// One ray per pixel; each nearest hit is displaced along its ray by
/// N(0, sigma^2) noise drawn in row-major pixel order from spec.seed. Misses
/// and points outside `bounds` are dropped.
std::vector<Vec3> capture(const ViewPose& pose, const SensorSpec& spec, const TriangleMesh& mesh,
                          const SceneBounds& bounds);

/// True iff the open segment between the two points meets the mesh.
/// Edges count as surface (inclusive barycentric test). Throws InputError if from == to.
bool path_blocked(const Vec3& from, const Vec3& to, const TriangleMesh& mesh);

/// Half the bounding-box diagonal plus `offset` [m].
double view_distance_from_scene(const TriangleMesh& mesh, double offset);

} // namespace see
