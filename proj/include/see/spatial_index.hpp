#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "see/types.hpp"

namespace see {

/// Incremental 3D point store with exact fixed-radius and nearest-neighbour
/// queries.
///
/// Points are bucketed in a uniform hash grid whose cell edge is fixed at
/// construction; each cell keeps its coordinates in structure-of-arrays form
/// so the distance filter runs through the SIMD kernels. Insertion appends to
/// one cell and never rebuilds. Membership is decided by squared distance
/// `d2 <= r*r`, i.e. the closed ball.
///
/// Single writer, many readers: concurrent const queries are safe, queries
/// concurrent with insert_batch are not.
class PointStore {
public:
    /// `cell_size` should be on the order of the typical query radius.
    explicit PointStore(double cell_size);

    std::vector<PointId> insert_batch(std::span<const Vec3> positions);

    /// Ids within `radius` of `center`, ascending.
    std::vector<PointId> radius_query(const Vec3& center, double radius) const;

    /// As above, appending to `out` (cleared first) to reuse storage.
    void radius_query(const Vec3& center, double radius, std::vector<PointId>& out) const;

    std::size_t radius_count(const Vec3& center, double radius) const;

    /// min(radius_count, cap); stops scanning once `cap` points are found.
    std::size_t radius_count(const Vec3& center, double radius, std::size_t cap) const;

    bool any_within(const Vec3& center, double radius) const;

    /// Closest stored point; ties resolve to the lowest id. Empty store gives nullopt.
    std::optional<PointId> nearest(const Vec3& query) const;

    const Vec3& position(PointId id) const { return positions_[id]; }
    std::span<const Vec3> positions() const { return positions_; }
    std::size_t size() const { return positions_.size(); }
    bool empty() const { return positions_.empty(); }
    double cell_size() const { return cell_size_; }

private:
    struct Cell {
        std::vector<double> x, y, z;
        std::vector<PointId> ids;
    };
    struct CellIndex {
        std::int64_t i, j, k;
    };

    CellIndex cell_of(const Vec3& p) const;
    static std::uint64_t key_of(const CellIndex& c);
    void validate_radius(double radius) const;

    template <class Visitor>
    void visit_cells(const Vec3& center, double radius, Visitor&& visit) const;

    double cell_size_;
    double inv_cell_size_;
    std::vector<Vec3> positions_;
    std::unordered_map<std::uint64_t, Cell> cells_;
};

} // namespace see
