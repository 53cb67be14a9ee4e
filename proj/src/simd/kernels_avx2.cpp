#include "see/simd/kernels.hpp"

#include <immintrin.h>

#include <limits>

#include "kernels_common.hpp"

namespace see::simd {
namespace {

inline __m256d squared_distance4(PointsView pts, std::size_t i, __m256d cx, __m256d cy, __m256d cz) {
    const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(pts.x + i), cx);
    const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(pts.y + i), cy);
    const __m256d dz = _mm256_sub_pd(_mm256_loadu_pd(pts.z + i), cz);
    // (dx*dx + dy*dy) + dz*dz, matching the scalar evaluation order.
    return _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy)), _mm256_mul_pd(dz, dz));
}

std::size_t radius_select_avx2(PointsView pts, double cx, double cy, double cz, double radius_sq,
                               std::uint32_t base, std::vector<std::uint32_t>& out) {
    const __m256d vcx = _mm256_set1_pd(cx);
    const __m256d vcy = _mm256_set1_pd(cy);
    const __m256d vcz = _mm256_set1_pd(cz);
    const __m256d vr2 = _mm256_set1_pd(radius_sq);
    std::size_t found = 0;
    std::size_t i = 0;
    for (; i + 4 <= pts.size; i += 4) {
        const __m256d d2 = squared_distance4(pts, i, vcx, vcy, vcz);
        int mask = _mm256_movemask_pd(_mm256_cmp_pd(d2, vr2, _CMP_LE_OQ));
        while (mask != 0) {
            const int lane = __builtin_ctz(static_cast<unsigned>(mask));
            out.push_back(base + static_cast<std::uint32_t>(i + lane));
            ++found;
            mask &= mask - 1;
        }
    }
    for (; i < pts.size; ++i) {
        if (detail::squared_distance(pts, i, cx, cy, cz) <= radius_sq) {
            out.push_back(base + static_cast<std::uint32_t>(i));
            ++found;
        }
    }
    return found;
}

std::size_t radius_count_avx2(PointsView pts, double cx, double cy, double cz, double radius_sq) {
    const __m256d vcx = _mm256_set1_pd(cx);
    const __m256d vcy = _mm256_set1_pd(cy);
    const __m256d vcz = _mm256_set1_pd(cz);
    const __m256d vr2 = _mm256_set1_pd(radius_sq);
    std::size_t found = 0;
    std::size_t i = 0;
    for (; i + 4 <= pts.size; i += 4) {
        const __m256d d2 = squared_distance4(pts, i, vcx, vcy, vcz);
        found += static_cast<std::size_t>(
            __builtin_popcount(static_cast<unsigned>(_mm256_movemask_pd(_mm256_cmp_pd(d2, vr2, _CMP_LE_OQ)))));
    }
    for (; i < pts.size; ++i) {
        if (detail::squared_distance(pts, i, cx, cy, cz) <= radius_sq) ++found;
    }
    return found;
}

bool any_within_avx2(PointsView pts, double cx, double cy, double cz, double radius_sq) {
    const __m256d vcx = _mm256_set1_pd(cx);
    const __m256d vcy = _mm256_set1_pd(cy);
    const __m256d vcz = _mm256_set1_pd(cz);
    const __m256d vr2 = _mm256_set1_pd(radius_sq);
    std::size_t i = 0;
    for (; i + 4 <= pts.size; i += 4) {
        const __m256d d2 = squared_distance4(pts, i, vcx, vcy, vcz);
        if (_mm256_movemask_pd(_mm256_cmp_pd(d2, vr2, _CMP_LE_OQ)) != 0) return true;
    }
    for (; i < pts.size; ++i) {
        if (detail::squared_distance(pts, i, cx, cy, cz) <= radius_sq) return true;
    }
    return false;
}

inline __m256d cross_component(__m256d a1, __m256d b2, __m256d a2, __m256d b1) {
    return _mm256_sub_pd(_mm256_mul_pd(a1, b2), _mm256_mul_pd(a2, b1));
}

inline __m256d dot3(__m256d ax, __m256d ay, __m256d az, __m256d bx, __m256d by, __m256d bz) {
    return _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(ax, bx), _mm256_mul_pd(ay, by)), _mm256_mul_pd(az, bz));
}

BlockHit ray_block_avx2(TrianglesView tris, const Ray& ray, double t_min, double t_max) {
    BlockHit best{std::numeric_limits<double>::infinity(), -1};
    const __m256d dx = _mm256_set1_pd(ray.dx);
    const __m256d dy = _mm256_set1_pd(ray.dy);
    const __m256d dz = _mm256_set1_pd(ray.dz);
    const __m256d ox = _mm256_set1_pd(ray.ox);
    const __m256d oy = _mm256_set1_pd(ray.oy);
    const __m256d oz = _mm256_set1_pd(ray.oz);
    const __m256d zero = _mm256_setzero_pd();
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d lo = _mm256_set1_pd(t_min);
    const __m256d hi = _mm256_set1_pd(t_max);

    std::size_t i = 0;
    for (; i + 4 <= tris.size; i += 4) {
        const __m256d e1x = _mm256_loadu_pd(tris.e1x + i);
        const __m256d e1y = _mm256_loadu_pd(tris.e1y + i);
        const __m256d e1z = _mm256_loadu_pd(tris.e1z + i);
        const __m256d e2x = _mm256_loadu_pd(tris.e2x + i);
        const __m256d e2y = _mm256_loadu_pd(tris.e2y + i);
        const __m256d e2z = _mm256_loadu_pd(tris.e2z + i);

        const __m256d px = cross_component(dy, e2z, dz, e2y);
        const __m256d py = cross_component(dz, e2x, dx, e2z);
        const __m256d pz = cross_component(dx, e2y, dy, e2x);
        const __m256d det = dot3(e1x, e1y, e1z, px, py, pz);
        const __m256d inv = _mm256_div_pd(one, det);

        const __m256d tx = _mm256_sub_pd(ox, _mm256_loadu_pd(tris.v0x + i));
        const __m256d ty = _mm256_sub_pd(oy, _mm256_loadu_pd(tris.v0y + i));
        const __m256d tz = _mm256_sub_pd(oz, _mm256_loadu_pd(tris.v0z + i));
        const __m256d u = _mm256_mul_pd(dot3(tx, ty, tz, px, py, pz), inv);

        const __m256d qx = cross_component(ty, e1z, tz, e1y);
        const __m256d qy = cross_component(tz, e1x, tx, e1z);
        const __m256d qz = cross_component(tx, e1y, ty, e1x);
        const __m256d v = _mm256_mul_pd(dot3(dx, dy, dz, qx, qy, qz), inv);
        const __m256d t = _mm256_mul_pd(dot3(e2x, e2y, e2z, qx, qy, qz), inv);

        __m256d ok = _mm256_cmp_pd(det, zero, _CMP_NEQ_OQ);
        ok = _mm256_and_pd(ok, _mm256_cmp_pd(u, zero, _CMP_GE_OQ));
        ok = _mm256_and_pd(ok, _mm256_cmp_pd(u, one, _CMP_LE_OQ));
        ok = _mm256_and_pd(ok, _mm256_cmp_pd(v, zero, _CMP_GE_OQ));
        ok = _mm256_and_pd(ok, _mm256_cmp_pd(_mm256_add_pd(u, v), one, _CMP_LE_OQ));
        ok = _mm256_and_pd(ok, _mm256_cmp_pd(t, lo, _CMP_GT_OQ));
        ok = _mm256_and_pd(ok, _mm256_cmp_pd(t, hi, _CMP_LT_OQ));
        int mask = _mm256_movemask_pd(ok);
        if (mask == 0) continue;

        alignas(32) double ts[4];
        _mm256_store_pd(ts, t);
        while (mask != 0) {
            const int lane = __builtin_ctz(static_cast<unsigned>(mask));
            if (ts[lane] < best.t) {
                best.t = ts[lane];
                best.index = static_cast<std::int64_t>(i + lane);
            }
            mask &= mask - 1;
        }
    }
    for (; i < tris.size; ++i) {
        double t;
        if (detail::intersect_one(tris, i, ray, t) && t > t_min && t < t_max && t < best.t) {
            best.t = t;
            best.index = static_cast<std::int64_t>(i);
        }
    }
    return best;
}

} // namespace

namespace detail {
const KernelTable& avx2_table() {
    static const KernelTable table{Isa::avx2, &radius_select_avx2, &radius_count_avx2, &any_within_avx2, &ray_block_avx2};
    return table;
}
} // namespace detail

} // namespace see::simd
