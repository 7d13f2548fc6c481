#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <string_view>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace sharedctl {

// Cartesian quantity: position (m), velocity (m/s) or force (N) depending on use.
using Vec3 = Eigen::Vector3d;

// Universal "zero length" threshold for geometry (m).
inline constexpr double kEpsLen = 1e-9;
// Commands below this norm have no defined direction (m/s).
inline constexpr double kEpsVel = 1e-6;

inline constexpr double kPi = 3.14159265358979323846;

enum class Mode { Standalone, Shared, Impedance };

std::string_view to_string(Mode mode);
// Accepts "standalone", "shared", "impedance" (case-insensitive) and the
// single-letter codes A, S, I.
std::optional<Mode> parse_mode(std::string_view text);

inline bool all_finite(const Vec3& v) {
  return std::isfinite(v.x()) && std::isfinite(v.y()) && std::isfinite(v.z());
}

// Unsigned angle in [0, pi]; atan2 form stays accurate near 0 and pi.
inline double angle_between(const Vec3& a, const Vec3& b) {
  return std::atan2(a.cross(b).norm(), a.dot(b));
}

}  // namespace sharedctl
