#include "see/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace see {

Planner::Planner(const PlannerConfig& config, const ViewPose& origin)
    : config_(config), cloud_(config.resolution, config.k_min), origin_(origin), current_(origin) {
    if (!(config.view_distance > 0.0)) throw InputError("planner: view distance must be positive");
    if (config_.frame_radius <= 0.0) config_.frame_radius = config_.resolution;
}

ClassificationDelta Planner::observe(const ViewPose& pose, std::span<const Vec3> measurements) {
    current_ = pose;
    const auto view_index = static_cast<std::uint32_t>(views_.size());
    views_.push_back(pose);
    const auto first = static_cast<PointId>(cloud_.size());
    ClassificationDelta delta = cloud_.ingest(measurements);
    observed_by_.resize(cloud_.size(), view_index);
    latest_.clear();
    for (PointId id = first; id < cloud_.size(); ++id) latest_.push_back(id);
    blocked_.clear();
    candidates_.clear();
    return delta;
}

FrontierFrame Planner::frame_at(PointId id) const {
    const Vec3& p = cloud_.store().position(id);
    const std::vector<PointId> ids = cloud_.store().radius_query(p, config_.frame_radius);
    std::vector<Vec3> neighbours;
    neighbours.reserve(ids.size());
    for (PointId q : ids) neighbours.push_back(cloud_.store().position(q));
    const Vec3 seen_along = p - observing_pose(id).position;
    return estimate_frame(p, neighbours, seen_along);
}

std::optional<Vec3> Planner::observed_center(const Vec3& target) const {
    if (latest_.empty()) return std::nullopt;
    const auto& store = cloud_.store();
    const double r2 = config_.resolution * config_.resolution;
    Vec3 sum = Vec3::Zero();
    std::size_t n = 0;
    for (PointId id : latest_) {
        if ((store.position(id) - target).squaredNorm() <= r2) {
            sum += store.position(id);
            ++n;
        }
    }
    if (n > 0) return Vec3(sum / static_cast<double>(n));

    std::vector<std::pair<double, PointId>> by_distance;
    by_distance.reserve(latest_.size());
    for (PointId id : latest_) by_distance.emplace_back((store.position(id) - target).squaredNorm(), id);
    const std::size_t k = std::min(cloud_.k_min(), by_distance.size());
    std::partial_sort(by_distance.begin(), by_distance.begin() + static_cast<std::ptrdiff_t>(k), by_distance.end());
    for (std::size_t i = 0; i < k; ++i) sum += store.position(by_distance[i].second);
    return Vec3(sum / static_cast<double>(k));
}

void Planner::retire(PointId id) {
    cloud_.suppress(id);
    ++stats_.retirements;
}

void Planner::retire_nearest_frontier() {
    const auto& frontier = cloud_.frontier_set();
    PointId best = *frontier.begin();
    double best_d = std::numeric_limits<double>::infinity();
    for (PointId id : frontier) {
        const double d = (cloud_.store().position(id) - current_.position).norm();
        if (d < best_d) {
            best_d = d;
            best = id;
        }
    }
    if (adjustment_ && adjustment_->target == best) adjustment_.reset();
    cloud_.suppress(best);
    ++stats_.fallback_retirements;
}

PlanStep Planner::plan_next() {
    if (views_.empty()) throw ContractViolation("plan_next: no observation ingested yet");
    while (true) {
        if (cloud_.frontier_set().empty()) {
            adjustment_.reset();
            last_ = PlanStep{};
            return last_;
        }
        if (adjustment_) {
            if (std::optional<PlanStep> step = continue_adjustment()) return *step;
            if (cloud_.frontier_set().empty()) continue;
        }
        return select_new();
    }
}

std::optional<PlanStep> Planner::continue_adjustment() {
    AdjustmentState& state = *adjustment_;
    const PointId target = state.target;
    const bool still_frontier = cloud_.label(target) == Label::frontier;
    const Vec3& fc = cloud_.store().position(target);

    std::optional<Vec3> center;
    double distance = std::numeric_limits<double>::infinity();
    if (still_frontier) {
        center = observed_center(fc);
        if (center) distance = (fc - *center).norm();
    }

    switch (adjustment_step_outcome(state, distance, still_frontier, config_.adjustment_epsilon,
                                    config_.max_adjustments)) {
    case AdjustmentOutcome::frontier_expanded:
        adjustment_.reset();
        return std::nullopt;
    case AdjustmentOutcome::switch_to_observation_axis:
    case AdjustmentOutcome::retire_as_outlier:
        return stall_adjustment();
    case AdjustmentOutcome::continue_adjusting:
        break;
    }

    state.previous_distance = distance;
    try {
        const FrontierFrame frame = frame_at(target);
        const ViewPose pose = adjust_view(state, frame, fc, *center, current_, config_.view_distance);
        ++state.count;
        state.distance_factor = std::ldexp(1.0, state.count);
        ++stats_.adjustments;
        last_ = PlanStep{StepKind::adjustment, pose, target};
        return last_;
    } catch (const DegenerateGeometry&) {
        ++stats_.degenerate_frames;
    } catch (const InputError&) {
        ++stats_.degenerate_frames;
    }
    return stall_adjustment();
}

// Ends the current phase: normal-axis moves to the observation axis,
// observation-axis retires the target.
PlanStep Planner::stall_adjustment() {
    AdjustmentState& state = *adjustment_;
    const PointId target = state.target;
    if (state.phase == AdjustmentPhase::normal_axis) {
        const Vec3& fc = cloud_.store().position(target);
        const Vec3& seen_from = state.observing.position;
        if ((fc - seen_from).norm() > 0.0) {
            state.enter_observation_axis();
            ++stats_.observation_axis_switches;
            last_ = PlanStep{StepKind::observation_axis,
                             reinitialise_on_observation_axis(fc, seen_from, config_.view_distance), target};
            return last_;
        }
    }
    adjustment_.reset();
    retire(target);
    return plan_next();
}

PlanStep Planner::select_new() {
    while (true) {
        const auto& frontier = cloud_.frontier_set();
        if (frontier.empty()) return plan_next();

        if (candidates_.empty()) {
            for (PointId id : frontier) {
                if (blocked_.count(id) != 0) continue;
                try {
                    const FrontierFrame frame = frame_at(id);
                    candidates_.push_back({id, propose_view(frame, cloud_.store().position(id), config_.view_distance)});
                } catch (const DegenerateGeometry&) {
                    ++stats_.degenerate_frames;
                } catch (const InputError&) {
                    ++stats_.degenerate_frames;
                }
            }
        }
        if (candidates_.empty()) {
            // Nothing plannable this round; retiring one frontier guarantees progress.
            retire_nearest_frontier();
            continue;
        }

        const Proposal chosen = select_nbv(candidates_, current_, origin_, config_.resolution);
        AdjustmentState state;
        state.target = chosen.frontier;
        state.observing = observing_pose(chosen.frontier);
        adjustment_ = state;
        ++stats_.proposals_selected;
        last_ = PlanStep{StepKind::proposal, chosen.pose, chosen.frontier};
        return last_;
    }
}

PlanStep Planner::reject_last() {
    ++stats_.rejected_views;
    switch (last_.kind) {
    case StepKind::complete:
        throw ContractViolation("reject_last: no pending view");
    case StepKind::proposal: {
        blocked_.insert(last_.target);
        std::erase_if(candidates_, [&](const Proposal& p) { return p.frontier == last_.target; });
        adjustment_.reset();
        if (candidates_.empty()) {
            retire_nearest_frontier();
            blocked_.clear();
        }
        return plan_next();
    }
    case StepKind::adjustment:
    case StepKind::observation_axis:
        if (!adjustment_) return plan_next();
        return stall_adjustment();
    }
    return plan_next();
}

} // namespace see
