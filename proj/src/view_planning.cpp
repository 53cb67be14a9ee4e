#include "see/view_planning.hpp"

#include <algorithm>
#include <cmath>

namespace see {

ViewPose propose_view(const FrontierFrame& frame, const Vec3& frontier_pt, double view_distance) {
    return {frontier_pt + view_distance * frame.normal, -frame.normal};
}

Proposal select_nbv(std::span<const Proposal> proposals, const ViewPose& current, const ViewPose& origin,
                    double resolution) {
    if (proposals.empty()) throw ContractViolation("select_nbv: no proposals");

    const auto better = [](double d, PointId id, double best_d, PointId best_id) {
        return d < best_d || (d == best_d && id < best_id);
    };

    const Proposal* local_best = nullptr;
    double local_best_origin = 0.0;
    const Proposal* nearest = nullptr;
    double nearest_d = 0.0;
    for (const Proposal& p : proposals) {
        const double to_current = (p.pose.position - current.position).norm();
        if (to_current < resolution) {
            const double to_origin = (p.pose.position - origin.position).norm();
            if (local_best == nullptr || better(to_origin, p.frontier, local_best_origin, local_best->frontier)) {
                local_best = &p;
                local_best_origin = to_origin;
            }
        }
        if (nearest == nullptr || better(to_current, p.frontier, nearest_d, nearest->frontier)) {
            nearest = &p;
            nearest_d = to_current;
        }
    }
    return local_best != nullptr ? *local_best : *nearest;
}

Mat3 hat(const Vec3& u) {
    Mat3 m;
    m << 0.0, -u.z(), u.y(),
         u.z(), 0.0, -u.x(),
         -u.y(), u.x(), 0.0;
    return m;
}

Mat3 rodrigues(const Vec3& axis, double angle) {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    return c * Mat3::Identity() + s * hat(axis) + (1.0 - c) * (axis * axis.transpose());
}

void AdjustmentState::enter_observation_axis() {
    phase = AdjustmentPhase::observation_axis;
    count = 0;
    distance_factor = 1.0;
    previous_distance = std::numeric_limits<double>::infinity();
}

AdjustmentTerms adjustment_terms(double distance_factor, const FrontierFrame& frame, const Vec3& frontier_pt,
                                 const Vec3& observed_center, double view_distance) {
    Mat3 local;
    local.col(0) = frame.normal;
    local.col(1) = frame.frontier;
    local.col(2) = frame.boundary;
    const Vec3 delta = local.transpose() * (frontier_pt - observed_center);

    const double dt = distance_factor;
    const double dv = view_distance;
    const double along_f = delta[1];
    const double along_b = delta[2];

    AdjustmentTerms terms;
    terms.displacement = delta;
    terms.shift_frontier = along_f * (dt + 1.0);
    terms.shift_boundary = along_b * (dt + 1.0);
    terms.angle_boundary = std::atan(dv * along_f * dt / (dv * dv + along_f * along_f * (dt + 1.0)));
    terms.angle_frontier = std::atan(dv * along_b * dt / (dv * dv + along_b * along_b * (dt + 1.0)));
    terms.rot_boundary = rodrigues(frame.boundary, terms.angle_boundary);
    terms.rot_frontier = rodrigues(frame.frontier, terms.angle_frontier);
    return terms;
}

ViewPose adjust_view(const AdjustmentState& state, const FrontierFrame& frame, const Vec3& frontier_pt,
                     const Vec3& observed_center, const ViewPose& current, double view_distance) {
    const AdjustmentTerms terms =
        adjustment_terms(state.distance_factor, frame, frontier_pt, observed_center, view_distance);

    // Rotations act about the frontier point.
    const Vec3 offset = current.position - frontier_pt;
    const Vec3 shifted = offset + terms.shift_frontier * frame.frontier + terms.shift_boundary * frame.boundary;
    const Vec3 moved = terms.rot_frontier * (terms.rot_boundary * shifted);
    const Vec3 toward = -moved;
    const double len = toward.norm();
    if (!(len > 0.0)) throw DegenerateGeometry("adjust_view: adjusted position coincides with the frontier point");
    const Vec3 direction = toward / len;
    return {frontier_pt - view_distance * direction, direction};
}

AdjustmentOutcome adjustment_step_outcome(const AdjustmentState& state, double new_distance, bool still_frontier,
                                          double epsilon, int max_adjustments) {
    if (!still_frontier) return AdjustmentOutcome::frontier_expanded;
    const bool stalled = !(new_distance < state.previous_distance - epsilon) || state.count >= max_adjustments;
    if (!stalled) return AdjustmentOutcome::continue_adjusting;
    return state.phase == AdjustmentPhase::normal_axis ? AdjustmentOutcome::switch_to_observation_axis
                                                       : AdjustmentOutcome::retire_as_outlier;
}

ViewPose reinitialise_on_observation_axis(const Vec3& frontier_pt, const Vec3& observing_position,
                                          double view_distance) {
    const Vec3 axis = frontier_pt - observing_position;
    const double len = axis.norm();
    if (!(len > 0.0)) throw ContractViolation("reinitialise_on_observation_axis: sensor on the frontier point");
    const Vec3 direction = axis / len;
    return {frontier_pt - std::min(len, view_distance) * direction, direction};
}

} // namespace see
