#include "see/simd/kernels.hpp"

#include <limits>

#include "kernels_common.hpp"

namespace see::simd {
namespace {

std::size_t radius_select_scalar(PointsView pts, double cx, double cy, double cz, double radius_sq,
                                 std::uint32_t base, std::vector<std::uint32_t>& out) {
    std::size_t found = 0;
    for (std::size_t i = 0; i < pts.size; ++i) {
        if (detail::squared_distance(pts, i, cx, cy, cz) <= radius_sq) {
            out.push_back(base + static_cast<std::uint32_t>(i));
            ++found;
        }
    }
    return found;
}

std::size_t radius_count_scalar(PointsView pts, double cx, double cy, double cz, double radius_sq) {
    std::size_t found = 0;
    for (std::size_t i = 0; i < pts.size; ++i) {
        if (detail::squared_distance(pts, i, cx, cy, cz) <= radius_sq) ++found;
    }
    return found;
}

bool any_within_scalar(PointsView pts, double cx, double cy, double cz, double radius_sq) {
    for (std::size_t i = 0; i < pts.size; ++i) {
        if (detail::squared_distance(pts, i, cx, cy, cz) <= radius_sq) return true;
    }
    return false;
}

BlockHit ray_block_scalar(TrianglesView tris, const Ray& ray, double t_min, double t_max) {
    BlockHit best{std::numeric_limits<double>::infinity(), -1};
    for (std::size_t i = 0; i < tris.size; ++i) {
        double t;
        if (detail::intersect_one(tris, i, ray, t) && t > t_min && t < t_max && t < best.t) {
            best.t = t;
            best.index = static_cast<std::int64_t>(i);
        }
    }
    return best;
}

} // namespace

const KernelTable& scalar_kernels() {
    static const KernelTable table{Isa::scalar, &radius_select_scalar, &radius_count_scalar, &any_within_scalar, &ray_block_scalar};
    return table;
}

} // namespace see::simd
