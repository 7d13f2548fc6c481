#pragma once

#include <optional>

#include "sharedctl/core/params.hpp"
#include "sharedctl/core/path.hpp"

namespace sharedctl {

struct FollowerState {
  double s_prev = 0.0;   // last selected s_c
  int loops_completed = 0;
  // Loop bookkeeping on s_near: a loop counts when s_near moves from the last
  // decile into the first, provided the middle of the path was visited since
  // the previous count.
  double last_s_near = 0.0;
  bool armed = false;
};

struct NearestResult {
  double s_near = 0.0;
  double d = 0.0;
};

struct GoalResult {
  Vec3 x_d = Vec3::Zero();
  double s_c = 0.0;
  double s_near = 0.0;
  double d = 0.0;
  double rho = 0.0;
  bool degraded = false;  // no sphere/path crossing in the forward window
  bool loop_completed = false;
};

// Closest point on the polyline (exact per-segment projection). Ties within
// kEpsLen are broken toward the candidate closest forward of `tie_hint`.
NearestResult nearest_param(const PathSpec& path, const Vec3& x,
                            std::optional<double> tie_hint = std::nullopt);

// rho = lambda * d if d >= rho_min, else rho_min.
double sphere_radius(double d, const ControllerParams& params);

// Largest forward parameter window scanned for the goal on closed paths.
inline constexpr double kForwardWindow = 0.5;

// Goal point where the sphere of radius rho around x meets the path ahead of
// s_near: the first forward crossing of dist = rho, bisected to 1e-7 m.
// Falls back to argmin |dist - rho| (degraded) when the window has no crossing.
GoalResult select_goal(const PathSpec& path, const Vec3& x, FollowerState& state,
                       const ControllerParams& params);

// Updates loop counting from a new s_near; returns true when a loop completes.
bool update_loop_count(FollowerState& state, double s_near);

}  // namespace sharedctl
