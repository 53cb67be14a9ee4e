#include "see/sensor_sim.hpp"

#include <cmath>
#include <numbers>

#include "see/rng.hpp"

namespace see {

void SensorSpec::validate() const {
    if (!(fov > 0.0 && fov < std::numbers::pi)) throw InputError("sensor fov must lie in (0, pi)");
    if (width < 1 || height < 1) throw InputError("sensor dimensions must be at least 1 px");
    if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) throw InputError("sensor noise must be >= 0");
}

Vec3 camera_up(const Vec3& direction) {
    const Vec3 z = Vec3::UnitZ();
    if (std::abs(std::abs(direction.dot(z)) - 1.0) <= 1e-6) {
        const Vec3 x = Vec3::UnitX();
        return (x - x.dot(direction) * direction).normalized();
    }
    return (z - z.dot(direction) * direction).normalized();
}

Vec3 pixel_direction(const ViewPose& pose, const SensorSpec& spec, int col, int row) {
    const Vec3 up = camera_up(pose.direction);
    const Vec3 right = pose.direction.cross(up);
    const double half = std::tan(spec.fov / 2.0);
    const double sx = (2.0 * (col + 0.5) / spec.width - 1.0) * half;
    const double sy = (1.0 - 2.0 * (row + 0.5) / spec.height) * half;
    return (pose.direction + sx * right + sy * up).normalized();
}

std::vector<Vec3> capture(const ViewPose& pose, const SensorSpec& spec, const TriangleMesh& mesh,
                          const SceneBounds& bounds) {
    spec.validate();
    Rng rng(spec.seed);
    std::vector<Vec3> points;
    for (int row = 0; row < spec.height; ++row) {
        for (int col = 0; col < spec.width; ++col) {
            const Vec3 dir = pixel_direction(pose, spec, col, row);
            const std::optional<RayHit> hit = mesh.raycast(pose.position, dir);
            if (!hit) continue;
            double range = hit->t;
            if (spec.noise_sigma > 0.0) range += spec.noise_sigma * rng.normal();
            const Vec3 p = pose.position + range * dir;
            if (bounds.box.contains(p)) points.push_back(p);
        }
    }
    return points;
}

bool path_blocked(const Vec3& from, const Vec3& to, const TriangleMesh& mesh) {
    if (from == to) throw InputError("path_blocked: empty segment");
    return mesh.segment_blocked(from, to);
}

double view_distance_from_scene(const TriangleMesh& mesh, double offset) {
    if (!(offset >= 0.0)) throw InputError("view offset must be non-negative");
    return mesh.bounds().diagonal() / 2.0 + offset;
}

} // namespace see
