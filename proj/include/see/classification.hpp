#pragma once

#include <cstddef>
#include <cstdint>
#include <set>
#include <span>
#include <string_view>
#include <vector>

#include "see/spatial_index.hpp"
#include "see/types.hpp"

namespace see {

enum class Label : std::uint8_t { core, frontier, outlier };

std::string_view label_name(Label label);

/// Neighbour count needed for a point to meet target density `density`
/// (points per m^3) within radius `resolution`: ceil(4/3 * pi * rho * r^3),
/// floored at 2. Below 2 every point is trivially core and no frontier can exist.
std::size_t compute_k_min(double density, double resolution);

/// Points whose label changed during one ingest (new points always appear),
/// grouped by their new label. Each group is ascending.
struct ClassificationDelta {
    std::vector<PointId> core;
    std::vector<PointId> frontier;
    std::vector<PointId> outlier;

    bool empty() const { return core.empty() && frontier.empty() && outlier.empty(); }
    std::size_t size() const { return core.size() + frontier.size() + outlier.size(); }
};

/// Growing measurement cloud labelled by local density.
///
/// A point is core when its closed r-ball holds at least k_min points
/// (itself included). Every other point is provisionally an outlier, and
/// becomes frontier when its r-ball contains a core point and also some
/// other non-core point. Suppressed points (frontiers the planner gave up
/// on) are held as outliers until a new measurement lands within r of them.
///
/// ingest() updates labels incrementally: only new points, points within r
/// of a new point, and neighbours of newly promoted core points are
/// re-examined. The result always equals classifying the whole cloud from
/// scratch. Core is absorbing since counts only grow.
class ClassifiedCloud {
public:
    ClassifiedCloud(double resolution, std::size_t k_min);

    static ClassifiedCloud from_density(double density, double resolution);

    ClassificationDelta ingest(std::span<const Vec3> measurements);

    /// Frontier-labelled, unsuppressed ids in ascending order.
    const std::set<PointId>& frontier_set() const { return frontier_; }

    /// Retires a frontier as an outlier. Throws ContractViolation for core points.
    void suppress(PointId id);

    /// Clears the suppressed flag of every point within r of `p` and relabels them.
    void unsuppress_near(const Vec3& p);

    Label label(PointId id) const { return labels_[id]; }
    bool suppressed(PointId id) const { return suppressed_[id] != 0; }
    /// |r-ball| including the point itself, saturating at k_min (exact below it).
    std::size_t neighbour_count(PointId id) const { return counts_[id]; }
    std::span<const Label> labels() const { return labels_; }

    std::size_t count(Label label) const;
    std::size_t size() const { return store_.size(); }

    const PointStore& store() const { return store_; }
    double resolution() const { return resolution_; }
    std::size_t k_min() const { return k_min_; }

private:
    Label evaluate(PointId id, std::vector<PointId>& scratch) const;
    void set_label(PointId id, Label label);
    void add_sparse(PointId id);
    // Non-core ids within r of p, ascending.
    void sparse_query(const Vec3& p, std::vector<PointId>& out) const;

    double resolution_;
    std::size_t k_min_;
    PointStore store_;
    std::vector<Label> labels_;
    std::vector<std::uint32_t> counts_;
    std::vector<std::uint8_t> suppressed_;
    std::set<PointId> frontier_;
    // Side index over non-core points only. Entries that later turn core go
    // stale and are filtered on query; the index is rebuilt once they dominate.
    PointStore sparse_;
    std::vector<PointId> sparse_ids_;
    std::size_t sparse_stale_ = 0;
    std::size_t label_counts_[3] = {0, 0, 0};
    // Per-point marker used to deduplicate work inside one ingest.
    std::vector<std::uint32_t> mark_;
    std::uint32_t epoch_ = 0;
};

/// Labels a whole cloud in one pass.
std::vector<Label> classify(std::span<const Vec3> points, double resolution, std::size_t k_min);

} // namespace see
