#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "see/classification.hpp"
#include "see/view_planning.hpp"

namespace see {

struct PlannerConfig {
    double resolution = 0.02;       ///< classification radius r [m]
    std::size_t k_min = 10;
    double view_distance = 1.0;     ///< d_v [m]
    double frame_radius = 0.0;      ///< neighbourhood radius for frame estimation; 0 means `resolution`
    double adjustment_epsilon = kAdjustmentEpsilon;
    int max_adjustments = kMaxAdjustmentsPerPhase;
};

enum class StepKind { complete, proposal, adjustment, observation_axis };

struct PlanStep {
    StepKind kind = StepKind::complete;
    ViewPose pose;
    PointId target = 0;

    bool complete() const { return kind == StepKind::complete; }
};

struct PlannerStats {
    std::size_t proposals_selected = 0;
    std::size_t adjustments = 0;
    std::size_t observation_axis_switches = 0;
    std::size_t retirements = 0;
    std::size_t fallback_retirements = 0;
    std::size_t degenerate_frames = 0;
    std::size_t rejected_views = 0;
};

/// Next-best-view planner state: the classified cloud, the pose history, and
/// the adjustment in progress (if any).
///
/// Usage per view: observe() the measurements taken at the current pose, then
/// plan_next(). If the returned pose cannot be reached, reject_last() yields
/// the next candidate.
class Planner {
public:
    /// `origin` is the pose of the first scene observation.
    Planner(const PlannerConfig& config, const ViewPose& origin);

    ClassificationDelta observe(const ViewPose& pose, std::span<const Vec3> measurements);

    /// Complete once no frontier remains. Requires at least one observe().
    PlanStep plan_next();

    /// The pose from the last plan_next()/reject_last() is unreachable.
    PlanStep reject_last();

    const ClassifiedCloud& cloud() const { return cloud_; }
    const PlannerStats& stats() const { return stats_; }
    const ViewPose& current() const { return current_; }
    const ViewPose& origin() const { return origin_; }
    const std::optional<AdjustmentState>& adjustment() const { return adjustment_; }
    const PlannerConfig& config() const { return config_; }

    /// Frame at a stored point, using its r-neighbourhood and the direction it was observed from.
    FrontierFrame frame_at(PointId id) const;

    /// Centre of the latest observation near `target`: measurements within r,
    /// else the k_min nearest. Empty if the latest observation had no points.
    std::optional<Vec3> observed_center(const Vec3& target) const;

    const ViewPose& observing_pose(PointId id) const { return views_[observed_by_[id]]; }

private:
    std::optional<PlanStep> continue_adjustment();
    PlanStep select_new();
    PlanStep stall_adjustment();
    void retire(PointId id);
    void retire_nearest_frontier();

    PlannerConfig config_;
    ClassifiedCloud cloud_;
    ViewPose origin_;
    ViewPose current_;
    std::vector<ViewPose> views_;
    std::vector<std::uint32_t> observed_by_;
    std::vector<PointId> latest_;
    std::optional<AdjustmentState> adjustment_;
    std::vector<Proposal> candidates_;
    std::set<PointId> blocked_;
    PlanStep last_;
    PlannerStats stats_;
};

} // namespace see
