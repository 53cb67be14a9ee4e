#pragma once

#include <span>

#include "see/types.hpp"

namespace see {

/// Local surface frame at a frontier point. normal, frontier and boundary are
/// orthonormal with boundary = normal x frontier.
struct FrontierFrame {
    Vec3 normal;       ///< faces the sensor that observed the point
    Vec3 frontier;     ///< in-plane, away from the observed mass
    Vec3 boundary;     ///< along the observed/unobserved boundary
    Vec3 mean_offset;  ///< mean of (p_i - frontier point) over the neighbourhood [m]
};

/// Eigen-decomposition of a symmetric 3x3 matrix: values ascending, vectors as
/// matching unit columns.
struct SymmetricEigen {
    Vec3 values;
    Mat3 vectors;
};

SymmetricEigen eigen_symmetric(const Mat3& a);

/// Scatter about the frontier point, sum_i (p_i - f)(p_i - f)^T.
Mat3 scatter_about(const Vec3& frontier_pt, std::span<const Vec3> neighbours);

/// Mean offsets below this norm leave the frontier direction undefined [m].
inline constexpr double kMeanOffsetTolerance = 1e-12;

/// Second eigenvalue at or below this fraction of the largest means the
/// neighbourhood is (nearly) collinear and has no plane.
inline constexpr double kRankTolerance = 1e-10;

/// Estimates the frame at `frontier_pt` from its r-neighbourhood.
///
/// The normal is the least-variance eigenvector of the scatter about the
/// frontier point, oriented against `view_dir`. The frontier vector is the
/// remaining eigenvector most aligned with the mean neighbour offset, oriented
/// away from it.
///
/// Throws InputError for fewer than 3 neighbours or an all-coincident
/// neighbourhood, DegenerateGeometry when the plane or the frontier direction
/// is undefined (collinear points, symmetric neighbourhood, or a view direction
/// lying in the estimated plane).
FrontierFrame estimate_frame(const Vec3& frontier_pt, std::span<const Vec3> neighbours, const Vec3& view_dir);

} // namespace see
