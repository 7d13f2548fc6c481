#include "sharedctl/follower/path_follower.hpp"

#include <cmath>
#include <limits>
#include <utility>
#include <vector>

namespace sharedctl {

namespace {

// Projection of x onto segment i: returns (fraction in [0,1], squared distance).
std::pair<double, double> project_segment(const PathSpec& path, std::size_t i, const Vec3& x) {
  const Vec3& a = path.segment_start(i);
  const Vec3 ab = path.segment_end(i) - a;
  const double len2 = ab.squaredNorm();
  double f = ab.dot(x - a) / len2;
  f = f < 0.0 ? 0.0 : (f > 1.0 ? 1.0 : f);
  return {f, (a + f * ab - x).squaredNorm()};
}

}  // namespace

NearestResult nearest_param(const PathSpec& path, const Vec3& x, std::optional<double> tie_hint) {
  const std::size_t nseg = path.n_segments();
  const double span = path.segment_span();
  thread_local std::vector<std::pair<double, double>> proj;
  proj.resize(nseg);
  double best_d2 = std::numeric_limits<double>::infinity();
  std::size_t best_seg = 0;
  for (std::size_t i = 0; i < nseg; ++i) {
    proj[i] = project_segment(path, i, x);
    if (proj[i].second < best_d2) {
      best_d2 = proj[i].second;
      best_seg = i;
    }
  }
  double s = (static_cast<double>(best_seg) + proj[best_seg].first) * span;
  const double best_d = std::sqrt(best_d2);

  if (tie_hint) {
    // Among (near-)equidistant candidates prefer the one reached first going
    // forward from the hint.
    const double hint = path.closed() ? path.normalize(*tie_hint) : *tie_hint;
    const double limit = (best_d + kEpsLen) * (best_d + kEpsLen);
    double best_fwd = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < nseg; ++i) {
      if (proj[i].second > limit) continue;
      const double cand = (static_cast<double>(i) + proj[i].first) * span;
      const double fwd = path.closed() ? PathSpec::forward_distance(hint, cand)
                                       : (cand >= hint ? cand - hint : 2.0 + hint - cand);
      if (fwd < best_fwd) {
        best_fwd = fwd;
        s = cand;
      }
    }
  }
  if (path.closed() && s >= 1.0) s -= 1.0;
  if (!path.closed() && s > 1.0) s = 1.0;
  return {s, (path_point(path, s) - x).norm()};
}

double sphere_radius(double d, const ControllerParams& params) {
  return d >= params.rho_min ? params.lambda * d : params.rho_min;
}

bool update_loop_count(FollowerState& state, double s_near) {
  bool completed = false;
  if (s_near >= 0.25 && s_near <= 0.75) state.armed = true;
  if (state.armed && state.last_s_near >= 0.9 && s_near < 0.1) {
    ++state.loops_completed;
    state.armed = false;
    completed = true;
  }
  state.last_s_near = s_near;
  return completed;
}

GoalResult select_goal(const PathSpec& path, const Vec3& x, FollowerState& state,
                       const ControllerParams& params) {
  GoalResult out;
  const NearestResult near = nearest_param(path, x, state.s_prev);
  out.s_near = near.s_near;
  out.d = near.d;
  out.rho = sphere_radius(near.d, params);

  const double nseg = static_cast<double>(path.n_segments());
  // Work in segment units u = s * nseg, unwrapped past 1 on closed paths.
  const double u0 = near.s_near * nseg;
  const double u_end = path.closed() ? u0 + kForwardWindow * nseg : nseg;
  auto point_at = [&](double u) {
    return path_point(path, path.closed() ? u / nseg : std::min(u / nseg, 1.0));
  };
  auto gap = [&](double u) { return (point_at(u) - x).norm() - out.rho; };

  double u_prev = u0;
  double g_prev = gap(u0);
  // Fallback candidates exclude s_near itself so the goal always lies ahead.
  double best_u = u_end;
  double best_abs = std::numeric_limits<double>::infinity();
  bool found = false;
  double u_hit = u0;

  double u = std::floor(u0) + 1.0;
  while (true) {
    const bool last = u >= u_end;
    const double uc = last ? u_end : u;
    const double g = gap(uc);
    if (g_prev < 0.0 && g >= 0.0) {
      // Bracketed on a single segment; bisect in parameter.
      double lo = u_prev;
      double hi = uc;
      const double seg_len = path.max_segment_length();
      while ((hi - lo) * seg_len > 1e-7) {
        const double mid = 0.5 * (lo + hi);
        if (gap(mid) < 0.0) lo = mid; else hi = mid;
      }
      u_hit = std::abs(gap(lo)) < std::abs(gap(hi)) ? lo : hi;
      found = true;
      break;
    }
    if (std::abs(g) < best_abs) {
      best_abs = std::abs(g);
      best_u = uc;
    }
    if (last) break;
    u_prev = uc;
    g_prev = g;
    u += 1.0;
  }

  const double u_goal = found ? u_hit : best_u;
  out.degraded = !found;
  out.s_c = path.closed() ? path.normalize(u_goal / nseg) : std::min(u_goal / nseg, 1.0);
  out.x_d = path_point(path, out.s_c);

  state.s_prev = out.s_c;
  out.loop_completed = update_loop_count(state, out.s_near);
  return out;
}

}  // namespace sharedctl
