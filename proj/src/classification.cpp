#include "see/classification.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace see {

std::string_view label_name(Label label) {
    switch (label) {
    case Label::core: return "core";
    case Label::frontier: return "frontier";
    case Label::outlier: return "outlier";
    }
    return "unknown";
}

std::size_t compute_k_min(double density, double resolution) {
    if (!(density > 0.0) || !std::isfinite(density)) throw InputError("target density must be positive");
    if (!(resolution > 0.0) || !std::isfinite(resolution)) throw InputError("resolution must be positive");
    const double raw = 4.0 / 3.0 * std::numbers::pi * density * resolution * resolution * resolution;
    const double rounded = std::ceil(raw);
    if (rounded < 2.0) return 2;
    return static_cast<std::size_t>(rounded);
}

ClassifiedCloud::ClassifiedCloud(double resolution, std::size_t k_min)
    : resolution_(resolution),
      k_min_(k_min),
      store_(resolution > 0.0 ? resolution : 1.0),
      sparse_(resolution > 0.0 ? resolution : 1.0) {
    if (!(resolution > 0.0) || !std::isfinite(resolution)) throw InputError("resolution must be positive");
    if (k_min < 1) throw InputError("k_min must be at least 1");
}

ClassifiedCloud ClassifiedCloud::from_density(double density, double resolution) {
    return ClassifiedCloud(resolution, compute_k_min(density, resolution));
}

std::size_t ClassifiedCloud::count(Label label) const { return label_counts_[static_cast<int>(label)]; }

void ClassifiedCloud::set_label(PointId id, Label label) {
    const Label old = labels_[id];
    if (old == label) return;
    --label_counts_[static_cast<int>(old)];
    ++label_counts_[static_cast<int>(label)];
    labels_[id] = label;
    if (old == Label::frontier) frontier_.erase(id);
    if (label == Label::frontier) frontier_.insert(id);
}

void ClassifiedCloud::add_sparse(PointId id) {
    sparse_.insert_batch(std::span<const Vec3>(&store_.position(id), 1));
    sparse_ids_.push_back(id);
}

void ClassifiedCloud::sparse_query(const Vec3& p, std::vector<PointId>& out) const {
    sparse_.radius_query(p, resolution_, out);
    std::size_t kept = 0;
    for (PointId local : out) {
        const PointId id = sparse_ids_[local];
        if (labels_[id] != Label::core) out[kept++] = id;
    }
    out.resize(kept);
}

// For a non-core point the count is exact, and every neighbour that is not in
// the sparse index is core, so no scan of the dense store is needed.
Label ClassifiedCloud::evaluate(PointId id, std::vector<PointId>& scratch) const {
    if (counts_[id] >= k_min_) return Label::core;
    if (suppressed_[id] != 0) return Label::outlier;
    sparse_query(store_.position(id), scratch);
    const std::size_t sparse_neighbours = scratch.size();  // includes id itself
    const bool has_core = counts_[id] > sparse_neighbours;
    const bool has_sparse = sparse_neighbours > 1;
    return has_core && has_sparse ? Label::frontier : Label::outlier;
}

ClassificationDelta ClassifiedCloud::ingest(std::span<const Vec3> measurements) {
    ClassificationDelta delta;
    if (measurements.empty()) return delta;

    const auto first_new = static_cast<PointId>(store_.size());
    const std::vector<PointId> fresh = store_.insert_batch(measurements);
    const std::size_t total = store_.size();

    // New points start as outliers so the label tallies stay consistent.
    labels_.resize(total, Label::outlier);
    label_counts_[static_cast<int>(Label::outlier)] += fresh.size();
    counts_.resize(total, 0);
    suppressed_.resize(total, 0);
    mark_.resize(total, 0);
    if (++epoch_ == 0) {
        std::fill(mark_.begin(), mark_.end(), 0);
        epoch_ = 1;
    }

    const auto k_cap = static_cast<std::uint32_t>(std::min<std::size_t>(k_min_, UINT32_MAX));
    std::vector<PointId> touched;  // old non-core points within r of some new point
    std::vector<PointId> neighbours;

    // The sparse index holds only old points here, so each hit is an old
    // non-core neighbour whose exact count grows by one.
    for (PointId p : fresh) {
        const Vec3& pos = store_.position(p);
        counts_[p] = static_cast<std::uint32_t>(store_.radius_count(pos, resolution_, k_cap));
        sparse_query(pos, neighbours);
        for (PointId q : neighbours) {
            if (counts_[q] < k_cap) ++counts_[q];
            if (mark_[q] != epoch_) {
                mark_[q] = epoch_;
                touched.push_back(q);
            }
        }
    }
    for (PointId p : fresh) mark_[p] = epoch_;

    std::sort(touched.begin(), touched.end());
    std::vector<PointId> examine(touched);
    examine.insert(examine.end(), fresh.begin(), fresh.end());
    std::vector<Label> old_labels(examine.size());
    for (std::size_t i = 0; i < examine.size(); ++i) old_labels[i] = labels_[examine[i]];

    for (PointId q : touched) suppressed_[q] = 0;

    // Promotion first; it depends on counts alone.
    std::vector<PointId> promoted;
    for (PointId q : examine) {
        if (labels_[q] != Label::core && counts_[q] >= k_min_) promoted.push_back(q);
    }
    for (PointId q : promoted) {
        set_label(q, Label::core);
        if (q < first_new) ++sparse_stale_;
    }
    for (PointId p : fresh) {
        if (labels_[p] != Label::core) add_sparse(p);
    }

    // Non-core neighbours of new cores gain a core neighbour.
    std::vector<PointId> second_ring;
    for (PointId k : promoted) {
        sparse_query(store_.position(k), neighbours);
        for (PointId q : neighbours) {
            if (mark_[q] != epoch_) {
                mark_[q] = epoch_;
                second_ring.push_back(q);
            }
        }
    }
    std::sort(second_ring.begin(), second_ring.end());
    const std::size_t ring_start = examine.size();
    examine.insert(examine.end(), second_ring.begin(), second_ring.end());
    old_labels.reserve(examine.size());
    for (std::size_t i = ring_start; i < examine.size(); ++i) old_labels.push_back(labels_[examine[i]]);

    // Every non-core label depends only on the (now final) core set and
    // counts, so one pass settles them.
    for (PointId q : examine) {
        if (labels_[q] == Label::core) continue;
        set_label(q, evaluate(q, neighbours));
    }

    for (std::size_t i = 0; i < examine.size(); ++i) {
        const PointId q = examine[i];
        if (q < first_new && labels_[q] == old_labels[i]) continue;
        switch (labels_[q]) {
        case Label::core: delta.core.push_back(q); break;
        case Label::frontier: delta.frontier.push_back(q); break;
        case Label::outlier: delta.outlier.push_back(q); break;
        }
    }
    std::sort(delta.core.begin(), delta.core.end());
    std::sort(delta.frontier.begin(), delta.frontier.end());
    std::sort(delta.outlier.begin(), delta.outlier.end());

    if (sparse_stale_ > 1024 && sparse_stale_ * 2 > sparse_ids_.size()) {
        sparse_ = PointStore(resolution_);
        sparse_ids_.clear();
        sparse_stale_ = 0;
        for (PointId id = 0; id < total; ++id) {
            if (labels_[id] != Label::core) add_sparse(id);
        }
    }
    return delta;
}

void ClassifiedCloud::suppress(PointId id) {
    if (id >= store_.size()) throw InputError("suppress: unknown point id " + std::to_string(id));
    if (labels_[id] == Label::core) {
        throw ContractViolation("suppress: point " + std::to_string(id) + " is core");
    }
    suppressed_[id] = 1;
    set_label(id, Label::outlier);
}

void ClassifiedCloud::unsuppress_near(const Vec3& p) {
    if (store_.empty()) return;
    std::vector<PointId> near;
    sparse_query(p, near);
    std::vector<PointId> scratch;
    for (PointId q : near) {
        if (suppressed_[q] == 0) continue;
        suppressed_[q] = 0;
        set_label(q, evaluate(q, scratch));
    }
}

std::vector<Label> classify(std::span<const Vec3> points, double resolution, std::size_t k_min) {
    ClassifiedCloud cloud(resolution, k_min);
    cloud.ingest(points);
    return {cloud.labels().begin(), cloud.labels().end()};
}

} // namespace see
