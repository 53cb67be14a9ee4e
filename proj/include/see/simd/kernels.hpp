#pragma once

// Data-parallel inner loops shared by the spatial index, the coverage metric
// and the raycaster. Every kernel has a scalar reference implementation and,
// where the CPU supports it, an AVX2 variant. Variants perform the same IEEE
// operations in the same order, so results are bitwise identical; the
// equivalence tests rely on this.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace see::simd {

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa);

/// Structure-of-arrays block of points.
struct PointsView {
    const double* x;
    const double* y;
    const double* z;
    std::size_t size;
};

/// Triangles in Moller-Trumbore form: first vertex plus two edge vectors.
struct TrianglesView {
    const double* v0x; const double* v0y; const double* v0z;
    const double* e1x; const double* e1y; const double* e1z;
    const double* e2x; const double* e2y; const double* e2z;
    std::size_t size;
};

struct Ray {
    double ox, oy, oz;
    double dx, dy, dz;
};

/// Nearest accepted hit in a triangle block. index is local to the block, -1 when none.
struct BlockHit {
    double t;
    std::int64_t index;
};

struct KernelTable {
    Isa isa;

    /// Appends (base + i) to out for every point i with squared distance to
    /// (cx, cy, cz) <= radius_sq. Returns the number appended.
    std::size_t (*radius_select)(PointsView pts, double cx, double cy, double cz, double radius_sq,
                                 std::uint32_t base, std::vector<std::uint32_t>& out);

    /// Number of points with squared distance <= radius_sq.
    std::size_t (*radius_count)(PointsView pts, double cx, double cy, double cz, double radius_sq);

    /// True if any point has squared distance <= radius_sq.
    bool (*any_within)(PointsView pts, double cx, double cy, double cz, double radius_sq);

    /// Closest intersection with t_min < t < t_max. Edges are inclusive
    /// (u >= 0, v >= 0, u + v <= 1); rays with det == 0 (parallel to the
    /// triangle plane) never hit. Ties in t resolve to the lowest index.
    BlockHit (*ray_block)(TrianglesView tris, const Ray& ray, double t_min, double t_max);
};

const KernelTable& scalar_kernels();

/// Null when the build has no AVX2 variant or the CPU lacks it.
const KernelTable* avx2_kernels();

/// Variants usable on this machine, scalar first.
std::vector<Isa> available_isas();

/// Process-wide active table. Chosen once at first use: the best available
/// variant, unless the SEE_SIMD environment variable names another one.
const KernelTable& active();

/// Overrides the process-wide selection (tests, benchmarks). Throws if unavailable.
void select(Isa isa);

const KernelTable& table(Isa isa);

} // namespace see::simd
