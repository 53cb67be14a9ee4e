#include "see/spatial_index.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "see/simd/kernels.hpp"

namespace see {
namespace {

// 21 bits per axis, offset so negative cells map into the unsigned range.
constexpr std::int64_t kAxisBias = std::int64_t{1} << 20;
constexpr std::int64_t kAxisMask = (std::int64_t{1} << 21) - 1;

simd::PointsView view_of(const std::vector<double>& x, const std::vector<double>& y, const std::vector<double>& z) {
    return {x.data(), y.data(), z.data(), x.size()};
}

} // namespace

PointStore::PointStore(double cell_size) : cell_size_(cell_size), inv_cell_size_(1.0 / cell_size) {
    if (!(cell_size > 0.0) || !std::isfinite(cell_size)) {
        throw InputError("PointStore cell size must be positive and finite");
    }
}

PointStore::CellIndex PointStore::cell_of(const Vec3& p) const {
    return {static_cast<std::int64_t>(std::floor(p.x() * inv_cell_size_)),
            static_cast<std::int64_t>(std::floor(p.y() * inv_cell_size_)),
            static_cast<std::int64_t>(std::floor(p.z() * inv_cell_size_))};
}

std::uint64_t PointStore::key_of(const CellIndex& c) {
    // Cells beyond +-2^20 alias; aliasing only costs extra distance tests, never correctness.
    const auto pack = [](std::int64_t v) { return static_cast<std::uint64_t>((v + kAxisBias) & kAxisMask); };
    return (pack(c.i) << 42) | (pack(c.j) << 21) | pack(c.k);
}

void PointStore::validate_radius(double radius) const {
    if (!(radius > 0.0) || !std::isfinite(radius)) {
        throw InputError("radius must be positive and finite, got " + std::to_string(radius));
    }
}

std::vector<PointId> PointStore::insert_batch(std::span<const Vec3> positions) {
    for (const Vec3& p : positions) {
        if (!is_finite(p)) throw InputError("insert_batch: non-finite coordinate");
    }
    if (positions_.size() + positions.size() > std::numeric_limits<PointId>::max()) {
        throw InputError("insert_batch: point id space exhausted");
    }
    std::vector<PointId> ids;
    ids.reserve(positions.size());
    for (const Vec3& p : positions) {
        const auto id = static_cast<PointId>(positions_.size());
        positions_.push_back(p);
        Cell& cell = cells_[key_of(cell_of(p))];
        cell.x.push_back(p.x());
        cell.y.push_back(p.y());
        cell.z.push_back(p.z());
        cell.ids.push_back(id);
        ids.push_back(id);
    }
    return ids;
}

template <class Visitor>
void PointStore::visit_cells(const Vec3& center, double radius, Visitor&& visit) const {
    // Padded so rounding in the distance test can never accept a point from an unvisited cell.
    const double reach = radius * (1.0 + 1e-9);
    const Vec3 lo = center - Vec3::Constant(reach);
    const Vec3 hi = center + Vec3::Constant(reach);
    const CellIndex a = cell_of(lo);
    const CellIndex b = cell_of(hi);
    const double span_cells = static_cast<double>(b.i - a.i + 1) * static_cast<double>(b.j - a.j + 1) *
                              static_cast<double>(b.k - a.k + 1);
    if (span_cells > static_cast<double>(cells_.size())) {
        // Huge radius relative to the grid: scanning the occupied cells is cheaper.
        for (const auto& [key, cell] : cells_) {
            if (!visit(cell)) return;
        }
        return;
    }
    std::uint64_t last_key = std::numeric_limits<std::uint64_t>::max();
    for (std::int64_t i = a.i; i <= b.i; ++i) {
        for (std::int64_t j = a.j; j <= b.j; ++j) {
            for (std::int64_t k = a.k; k <= b.k; ++k) {
                const std::uint64_t key = key_of({i, j, k});
                if (key == last_key) continue;
                last_key = key;
                const auto it = cells_.find(key);
                if (it != cells_.end() && !visit(it->second)) return;
            }
        }
    }
}

void PointStore::radius_query(const Vec3& center, double radius, std::vector<PointId>& out) const {
    validate_radius(radius);
    out.clear();
    const double r2 = radius * radius;
    const simd::KernelTable& kernels = simd::active();
    std::vector<std::uint32_t> local;
    visit_cells(center, radius, [&](const Cell& cell) {
        local.clear();
        kernels.radius_select(view_of(cell.x, cell.y, cell.z), center.x(), center.y(), center.z(), r2, 0, local);
        for (std::uint32_t idx : local) out.push_back(cell.ids[idx]);
        return true;
    });
    std::sort(out.begin(), out.end());
    // Aliased keys (far-apart cells sharing a hash slot) can be visited twice.
    out.erase(std::unique(out.begin(), out.end()), out.end());
}

std::vector<PointId> PointStore::radius_query(const Vec3& center, double radius) const {
    std::vector<PointId> out;
    radius_query(center, radius, out);
    return out;
}

std::size_t PointStore::radius_count(const Vec3& center, double radius) const {
    return radius_count(center, radius, std::numeric_limits<std::size_t>::max());
}

std::size_t PointStore::radius_count(const Vec3& center, double radius, std::size_t cap) const {
    validate_radius(radius);
    if (radius * inv_cell_size_ > static_cast<double>(kAxisBias)) {
        // Wide enough for aliased cells to repeat; let radius_query deduplicate.
        std::vector<PointId> out;
        radius_query(center, radius, out);
        return std::min(out.size(), cap);
    }
    const double r2 = radius * radius;
    const simd::KernelTable& kernels = simd::active();
    std::size_t n = 0;
    visit_cells(center, radius, [&](const Cell& cell) {
        n += kernels.radius_count(view_of(cell.x, cell.y, cell.z), center.x(), center.y(), center.z(), r2);
        return n < cap;
    });
    return std::min(n, cap);
}

bool PointStore::any_within(const Vec3& center, double radius) const {
    validate_radius(radius);
    const double r2 = radius * radius;
    const simd::KernelTable& kernels = simd::active();
    bool found = false;
    visit_cells(center, radius, [&](const Cell& cell) {
        found = kernels.any_within(view_of(cell.x, cell.y, cell.z), center.x(), center.y(), center.z(), r2);
        return !found;
    });
    return found;
}

std::optional<PointId> PointStore::nearest(const Vec3& query) const {
    if (positions_.empty()) return std::nullopt;
    // Grow the search ball until it holds a point, then search once more at
    // that point's distance so nothing closer in a neighbouring cell is missed.
    double radius = cell_size_;
    std::vector<PointId> hits;
    for (;;) {
        radius_query(query, radius, hits);
        if (!hits.empty()) break;
        radius *= 2.0;
    }
    double best_d2 = std::numeric_limits<double>::infinity();
    for (PointId id : hits) best_d2 = std::min(best_d2, (positions_[id] - query).squaredNorm());
    radius_query(query, std::sqrt(best_d2) * (1.0 + 1e-12) + 1e-300, hits);
    std::optional<PointId> best;
    best_d2 = std::numeric_limits<double>::infinity();
    for (PointId id : hits) {
        const double d2 = (positions_[id] - query).squaredNorm();
        if (d2 < best_d2) {
            best_d2 = d2;
            best = id;
        }
    }
    return best;
}

} // namespace see
