#include "sharedctl/control/control_law.hpp"

#include <cmath>

namespace sharedctl {

AdmittanceOutput admittance_step(const AdmittanceState& state, const Vec3& f,
                                 const ControllerParams& params) {
  const double dt = params.dt;
  const Vec3 v = (params.M.cwiseProduct(state.v) + f * dt)
                     .cwiseQuotient(params.M + params.B * dt);
  return {AdmittanceState{v}, v};
}

PerformanceBreakdown performance(const Vec3& cmd, const Vec3& prev_executed, const Vec3& tangent,
                                 const ControllerParams& params) {
  PerformanceBreakdown p;
  if (cmd.norm() >= kEpsVel) {
    if (prev_executed.norm() >= kEpsVel) p.alpha1 = angle_between(prev_executed, cmd);
    p.alpha2 = angle_between(tangent, cmd);
  }
  p.eta1 = std::exp(-params.C[0] * std::abs(p.alpha1));
  p.eta2 = std::exp(-params.C[1] * std::abs(p.alpha2));
  p.eta = (params.w[0] * p.eta1 + params.w[1] * p.eta2) / (params.w[0] + params.w[1]);
  return p;
}

double filter_coefficient(const ControllerParams& params) {
  const double tau = 1.0 / (2.0 * kPi * params.filter_cutoff_hz);
  return params.dt / (params.dt + tau);
}

FinalizeOutput finalize(const Vec3& v_hat_s, double eta_s, const FilterState& filt,
                        const ControllerParams& params) {
  const Vec3 u = eta_s * v_hat_s;
  const Vec3 y = filt.y + filter_coefficient(params) * (u - filt.y);
  const double n = y.norm();
  if (n <= params.v_max) return {FilterState{y}, y};
  // Rounding can leave |y * v_max / n| one ulp above v_max.
  double scale = params.v_max / n;
  Vec3 v_s = y * scale;
  while (v_s.norm() > params.v_max) {
    scale = std::nextafter(scale, 0.0);
    v_s = y * scale;
  }
  return {FilterState{y}, v_s};
}

bool update_gate(GateState& gate, const Vec3& f, double t, const ControllerParams& params,
                 bool force_closed) {
  if (!params.activity_gate) return true;
  if (force_closed) {
    gate.last_active = -std::numeric_limits<double>::infinity();
    return false;
  }
  if (f.norm() >= params.activity_threshold) gate.last_active = t;
  return t - gate.last_active <= params.gate_window;
}

}  // namespace sharedctl
