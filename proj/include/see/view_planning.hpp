#pragma once

#include <cstddef>
#include <limits>
#include <span>

#include "see/frontier_geometry.hpp"
#include "see/types.hpp"

namespace see {

/// Sensor position [m] and unit viewing direction.
struct ViewPose {
    Vec3 position = Vec3::Zero();
    Vec3 direction = Vec3::UnitZ();
};

struct Proposal {
    PointId frontier;
    ViewPose pose;
};

/// View at `view_distance` along the surface normal, looking back at the frontier point.
ViewPose propose_view(const FrontierFrame& frame, const Vec3& frontier_pt, double view_distance);

/// Chooses the next best view.
///
/// Proposals strictly closer than `resolution` to the current position are
/// preferred, taking the one closest to the origin pose; if there are none,
/// the proposal closest to the current position wins. Exact distance ties go
/// to the lowest frontier id. Throws ContractViolation when `proposals` is empty.
Proposal select_nbv(std::span<const Proposal> proposals, const ViewPose& current, const ViewPose& origin,
                    double resolution);

/// Skew-symmetric cross-product matrix, hat(u) * v == u.cross(v).
Mat3 hat(const Vec3& u);

/// Rotation by `angle` [rad] about the unit `axis`.
Mat3 rodrigues(const Vec3& axis, double angle);

enum class AdjustmentPhase { normal_axis, observation_axis };

/// Progress of the local view adjustment for one frontier point.
struct AdjustmentState {
    PointId target = 0;
    int count = 0;                 ///< adjustments made in the current phase
    double distance_factor = 1.0;  ///< 2^count
    double previous_distance = std::numeric_limits<double>::infinity();
    AdjustmentPhase phase = AdjustmentPhase::normal_axis;
    ViewPose observing;            ///< pose that first measured the target

    void enter_observation_axis();
};

/// Intermediate quantities of one adjustment step, exposed for testing.
struct AdjustmentTerms {
    Vec3 displacement;     ///< R_d^T (f_c - c), components along (n, f, b)
    double shift_frontier; ///< translation along f [m]
    double shift_boundary; ///< translation along b [m]
    double angle_boundary; ///< rotation about b [rad]
    double angle_frontier; ///< rotation about f [rad]
    Mat3 rot_boundary;
    Mat3 rot_frontier;
};

AdjustmentTerms adjustment_terms(double distance_factor, const FrontierFrame& frame, const Vec3& frontier_pt,
                                 const Vec3& observed_center, double view_distance);

/// Translates and rotates the current view so the centre of observed points
/// moves toward the frontier point; the result looks at `frontier_pt` from
/// exactly `view_distance`. Throws DegenerateGeometry if the moved position
/// coincides with the frontier point.
ViewPose adjust_view(const AdjustmentState& state, const FrontierFrame& frame, const Vec3& frontier_pt,
                     const Vec3& observed_center, const ViewPose& current, double view_distance);

enum class AdjustmentOutcome { continue_adjusting, switch_to_observation_axis, retire_as_outlier, frontier_expanded };

inline constexpr double kAdjustmentEpsilon = 1e-4;  ///< [m]
inline constexpr int kMaxAdjustmentsPerPhase = 10;

/// Decides what follows an observation taken at an adjusted pose. The phase
/// stalls when the frontier-to-centre distance fails to drop by more than
/// `epsilon` or the per-phase cap is reached.
AdjustmentOutcome adjustment_step_outcome(const AdjustmentState& state, double new_distance, bool still_frontier,
                                          double epsilon = kAdjustmentEpsilon,
                                          int max_adjustments = kMaxAdjustmentsPerPhase);

/// View on the axis from which the frontier point was measured, no farther than
/// that observation or `view_distance`. Throws ContractViolation if the two points coincide.
ViewPose reinitialise_on_observation_axis(const Vec3& frontier_pt, const Vec3& observing_position,
                                          double view_distance);

} // namespace see
