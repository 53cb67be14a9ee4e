#include "see/frontier_geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace see {
namespace {

// Sign convention for tie-breaking: first non-zero component positive.
Vec3 canonical_sign(const Vec3& v) {
    for (int i = 0; i < 3; ++i) {
        if (v[i] != 0.0) return v[i] > 0.0 ? v : Vec3(-v);
    }
    return v;
}

bool lexicographically_greater(const Vec3& a, const Vec3& b) {
    for (int i = 0; i < 3; ++i) {
        if (a[i] != b[i]) return a[i] > b[i];
    }
    return false;
}

} // namespace

SymmetricEigen eigen_symmetric(const Mat3& a) {
    Eigen::SelfAdjointEigenSolver<Mat3> solver(a, Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success) throw DegenerateGeometry("symmetric eigensolver did not converge");
    return {solver.eigenvalues(), solver.eigenvectors()};
}

Mat3 scatter_about(const Vec3& frontier_pt, std::span<const Vec3> neighbours) {
    Mat3 a = Mat3::Zero();
    for (const Vec3& p : neighbours) {
        const Vec3 d = p - frontier_pt;
        a.noalias() += d * d.transpose();
    }
    return a;
}

FrontierFrame estimate_frame(const Vec3& frontier_pt, std::span<const Vec3> neighbours, const Vec3& view_dir) {
    if (neighbours.size() < 3) throw InputError("estimate_frame: need at least 3 neighbours");

    const Mat3 a = scatter_about(frontier_pt, neighbours);
    const SymmetricEigen eig = eigen_symmetric(a);
    const double largest = eig.values[2];
    if (!(largest > 0.0)) throw InputError("estimate_frame: neighbours coincide with the frontier point");
    if (eig.values[1] <= kRankTolerance * largest) {
        throw DegenerateGeometry("estimate_frame: neighbourhood is collinear");
    }

    // Least-variance direction; exact ties broken by canonical-sign lexicographic order.
    int normal_idx = 0;
    for (int i = 1; i < 3; ++i) {
        if (eig.values[i] != eig.values[0]) break;
        if (lexicographically_greater(canonical_sign(eig.vectors.col(i)), canonical_sign(eig.vectors.col(normal_idx)))) {
            normal_idx = i;
        }
    }

    Vec3 mean = Vec3::Zero();
    for (const Vec3& p : neighbours) mean += p - frontier_pt;
    mean /= static_cast<double>(neighbours.size());
    if (mean.norm() <= kMeanOffsetTolerance) {
        throw DegenerateGeometry("estimate_frame: neighbourhood is symmetric about the frontier point");
    }

    Vec3 normal = eig.vectors.col(normal_idx).normalized();
    const double facing = normal.dot(view_dir);
    if (facing == 0.0) throw DegenerateGeometry("estimate_frame: view direction lies in the surface plane");
    if (facing > 0.0) normal = -normal;

    std::array<int, 2> rest{};
    for (int i = 0, k = 0; i < 3; ++i) {
        if (i != normal_idx) rest[k++] = i;
    }
    const Vec3 c0 = eig.vectors.col(rest[0]);
    const Vec3 c1 = eig.vectors.col(rest[1]);
    Vec3 frontier = std::abs(mean.dot(c1)) > std::abs(mean.dot(c0)) ? c1 : c0;
    frontier.normalize();
    const double along = frontier.dot(mean);
    if (along == 0.0) throw DegenerateGeometry("estimate_frame: mean offset is normal to the surface");
    if (along > 0.0) frontier = -frontier;

    return {normal, frontier, normal.cross(frontier), mean};
}

} // namespace see
