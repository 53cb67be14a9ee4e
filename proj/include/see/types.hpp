#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace see {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Stable identifier of a stored measurement. Dense, assigned in insertion order.
using PointId = std::uint32_t;

/// Caller passed a value outside an operation's domain (non-finite, non-positive radius, ...).
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Geometry too degenerate to define the requested quantity. Recoverable: callers skip the item.
class DegenerateGeometry : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An operation was called in a state its contract forbids.
class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

inline bool is_finite(const Vec3& v) {
    return std::isfinite(v.x()) && std::isfinite(v.y()) && std::isfinite(v.z());
}

} // namespace see
