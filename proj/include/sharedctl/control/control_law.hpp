#pragma once

#include <limits>

#include "sharedctl/core/params.hpp"
#include "sharedctl/core/types.hpp"

namespace sharedctl {

// ============================================================================
// Human channel: virtual mass-damper M v' + B v = f
// ============================================================================

struct AdmittanceState {
  Vec3 v = Vec3::Zero();
};

struct AdmittanceOutput {
  AdmittanceState state;
  Vec3 v_h;
};

// Backward Euler per axis: v' = (M v + f dt) / (M + B dt).
AdmittanceOutput admittance_step(const AdmittanceState& state, const Vec3& f,
                                 const ControllerParams& params);

// ============================================================================
// Robot channel
// ============================================================================

// v_r = K_a (x_d - x)
inline Vec3 robot_command(const Vec3& x, const Vec3& x_d, const ControllerParams& params) {
  return params.K_a.cwiseProduct(x_d - x);
}

// ============================================================================
// Performance
// ============================================================================

struct PerformanceBreakdown {
  double alpha1 = 0.0;  // angle to the previously executed command
  double alpha2 = 0.0;  // angle to the path tangent
  double eta1 = 1.0;    // smoothness, exp(-C1 |alpha1|)
  double eta2 = 1.0;    // directness, exp(-C2 |alpha2|)
  double eta = 1.0;     // weighted mean
};

// Commands (or previous commands) shorter than kEpsVel have no direction; the
// corresponding angles are taken as 0.
PerformanceBreakdown performance(const Vec3& cmd, const Vec3& prev_executed, const Vec3& tangent,
                                 const ControllerParams& params);

// ============================================================================
// Blending and output stage
// ============================================================================

// Raw shared command. The weights are independent, not convex: both low
// slows the motion down.
inline Vec3 blend(const Vec3& v_r, const Vec3& v_h, double eta_r, double eta_h) {
  return eta_r * v_r + eta_h * v_h;
}

struct FilterState {
  Vec3 y = Vec3::Zero();  // pre-saturation filter output
};

struct FinalizeOutput {
  FilterState state;
  Vec3 v_s;
};

// First-order low-pass coefficient a = dt / (dt + 1 / (2 pi f_c)).
double filter_coefficient(const ControllerParams& params);

// u = eta_s * v_hat_s, y' = y + a (u - y), then clip |y'| to v_max.
FinalizeOutput finalize(const Vec3& v_hat_s, double eta_s, const FilterState& filt,
                        const ControllerParams& params);

// ============================================================================
// Activity gate
// ============================================================================

// Open while |f| >= activity_threshold was seen within the last gate_window.
struct GateState {
  double last_active = -std::numeric_limits<double>::infinity();
};

// Returns whether the gate is open at time t. `force_closed` models stale
// input (no fresh operator data) and also clears the activity history.
bool update_gate(GateState& gate, const Vec3& f, double t, const ControllerParams& params,
                 bool force_closed = false);

}  // namespace sharedctl
