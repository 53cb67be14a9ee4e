#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "see/simd/kernels.hpp"
#include "see/types.hpp"

namespace see {

struct Aabb {
    Vec3 min = Vec3::Constant(std::numeric_limits<double>::infinity());
    Vec3 max = Vec3::Constant(-std::numeric_limits<double>::infinity());

    void extend(const Vec3& p) {
        min = min.cwiseMin(p);
        max = max.cwiseMax(p);
    }
    void extend(const Aabb& b) {
        min = min.cwiseMin(b.min);
        max = max.cwiseMax(b.max);
    }
    bool valid() const { return (min.array() <= max.array()).all(); }
    bool contains(const Vec3& p) const { return (p.array() >= min.array()).all() && (p.array() <= max.array()).all(); }
    Vec3 center() const { return 0.5 * (min + max); }
    double diagonal() const { return (max - min).norm(); }
    Aabb expanded(double margin) const { return {min - Vec3::Constant(margin), max + Vec3::Constant(margin)}; }
};

using Triangle = std::array<std::uint32_t, 3>;

struct RayHit {
    double t;                ///< distance along the ray in units of its direction vector
    std::uint32_t triangle;  ///< index into TriangleMesh::triangles()
};

/// Immutable triangle mesh with a bounding-volume hierarchy for ray queries.
/// Safe to share across threads once constructed.
class TriangleMesh {
public:
    TriangleMesh(std::vector<Vec3> vertices, std::vector<Triangle> triangles);

    const std::vector<Vec3>& vertices() const { return vertices_; }
    const std::vector<Triangle>& triangles() const { return triangles_; }
    const Aabb& bounds() const { return bounds_; }

    /// Closest hit with t_min < t < t_max along origin + t * direction. Exact
    /// ties resolve to the lowest triangle index.
    std::optional<RayHit> raycast(const Vec3& origin, const Vec3& direction, double t_min = 0.0,
                                  double t_max = std::numeric_limits<double>::infinity()) const;

    /// True if any triangle meets the open segment (from, to).
    bool segment_blocked(const Vec3& from, const Vec3& to) const;

    /// Same contract as raycast, testing every triangle (no hierarchy).
    std::optional<RayHit> raycast_brute_force(const Vec3& origin, const Vec3& direction, double t_min = 0.0,
                                              double t_max = std::numeric_limits<double>::infinity()) const;

    double surface_area() const;

    /// Distance from p to the closest point on the surface (brute force).
    double distance_to_surface(const Vec3& p) const;

private:
    struct Node {
        Aabb box;
        std::uint32_t first = 0;  // leaf: first slot; inner: left child index
        std::uint32_t count = 0;  // leaf: triangle count; inner: 0
        std::uint32_t right = 0;
    };

    struct Soa {
        std::vector<double> v0x, v0y, v0z, e1x, e1y, e1z, e2x, e2y, e2z;
        simd::TrianglesView view(std::size_t first, std::size_t count) const;
        void push(const Vec3& a, const Vec3& b, const Vec3& c);
    };

    std::uint32_t build(std::vector<std::uint32_t>& order, std::uint32_t first, std::uint32_t count,
                        const std::vector<Vec3>& centroids);

    std::vector<Vec3> vertices_;
    std::vector<Triangle> triangles_;
    Aabb bounds_;
    std::vector<Node> nodes_;
    Soa leaf_tris_;                  // triangles in hierarchy order
    std::vector<std::uint32_t> leaf_to_mesh_;
    Soa mesh_tris_;                  // triangles in mesh order
};

/// Procedural test scenes, all in metres.
namespace shapes {

/// Square plate of edge `size` centred at the origin in the z = 0 plane.
TriangleMesh plate(double size, int subdivisions);

/// Closed axis-aligned cube of edge `size` centred at the origin.
TriangleMesh cube(double size, int subdivisions);

/// Icosphere; subdivision level s gives 20 * 4^s triangles.
TriangleMesh sphere(double radius, int subdivisions);

/// Two square half-planes of edge `size` meeting at a right angle along the
/// x axis: one in the z = 0 plane (y >= 0), one in the y = 0 plane (z >= 0).
TriangleMesh right_angle(double size, int subdivisions);

} // namespace shapes

} // namespace see
