#pragma once

// Per-element scalar bodies shared by the reference kernels and the SIMD
// tails, so both paths evaluate identical expressions.

#include "see/simd/kernels.hpp"

namespace see::simd::detail {

inline double squared_distance(PointsView pts, std::size_t i, double cx, double cy, double cz) {
    const double dx = pts.x[i] - cx;
    const double dy = pts.y[i] - cy;
    const double dz = pts.z[i] - cz;
    return dx * dx + dy * dy + dz * dz;
}

/// Moller-Trumbore for one triangle. Returns false on miss, else writes t.
inline bool intersect_one(TrianglesView tris, std::size_t i, const Ray& ray, double& t_out) {
    const double px = ray.dy * tris.e2z[i] - ray.dz * tris.e2y[i];
    const double py = ray.dz * tris.e2x[i] - ray.dx * tris.e2z[i];
    const double pz = ray.dx * tris.e2y[i] - ray.dy * tris.e2x[i];
    const double det = tris.e1x[i] * px + tris.e1y[i] * py + tris.e1z[i] * pz;
    if (det == 0.0) return false;
    const double inv = 1.0 / det;
    const double tx = ray.ox - tris.v0x[i];
    const double ty = ray.oy - tris.v0y[i];
    const double tz = ray.oz - tris.v0z[i];
    const double u = (tx * px + ty * py + tz * pz) * inv;
    if (!(u >= 0.0 && u <= 1.0)) return false;
    const double qx = ty * tris.e1z[i] - tz * tris.e1y[i];
    const double qy = tz * tris.e1x[i] - tx * tris.e1z[i];
    const double qz = tx * tris.e1y[i] - ty * tris.e1x[i];
    const double v = (ray.dx * qx + ray.dy * qy + ray.dz * qz) * inv;
    if (!(v >= 0.0 && u + v <= 1.0)) return false;
    t_out = (tris.e2x[i] * qx + tris.e2y[i] * qy + tris.e2z[i] * qz) * inv;
    return true;
}

} // namespace see::simd::detail
