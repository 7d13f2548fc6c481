#include "sharedctl/control/controller.hpp"

namespace sharedctl {

namespace {

void initialize(const TickInput& in, const PathSpec& path, ControllerState& state) {
  if (state.initialized) return;
  const NearestResult near = nearest_param(path, in.x);
  // Neutral start: the first smoothness comparison is against the path direction.
  state.prev_executed = path_tangent(path, near.s_near);
  state.follower.s_prev = near.s_near;
  state.follower.last_s_near = near.s_near;
  state.initialized = true;
}

void store(ControlFrame& frame, Agent agent, const PerformanceBreakdown& p) {
  frame.eta_factors[agent] = FactorPair{p.eta1, p.eta2, p.alpha1, p.alpha2};
}

ControlFrame begin_frame(const TickInput& in, Mode mode, const GoalResult& goal,
                         const FollowerState& follower) {
  ControlFrame frame;
  frame.t = in.t;
  frame.x = in.x;
  frame.f = in.f;
  frame.mode = mode;
  frame.goal = goal.x_d;
  frame.s_near = goal.s_near;
  frame.s_c = goal.s_c;
  frame.d = goal.d;
  frame.degraded = goal.degraded;
  frame.loop = follower.loops_completed;
  return frame;
}

}  // namespace

ControlFrame shared_tick(const TickInput& in, const PathSpec& path, ControllerState& state,
                         const ControllerParams& params, Mode mode) {
  initialize(in, path, state);

  const AdmittanceOutput adm = admittance_step(state.admittance, in.f, params);
  state.admittance = adm.state;
  const Vec3& v_h = adm.v_h;

  const GoalResult goal = select_goal(path, in.x, state.follower, params);
  ControlFrame frame = begin_frame(in, mode, goal, state.follower);

  const Vec3 v_r = robot_command(in.x, goal.x_d, params);
  const Vec3 tangent = path_tangent(path, goal.s_near);
  const PerformanceBreakdown ph = performance(v_h, state.prev_executed, tangent, params);
  const PerformanceBreakdown pr = performance(v_r, state.prev_executed, tangent, params);

  Vec3 v_hat_s;
  double eta_out = 1.0;
  if (mode == Mode::Standalone) {
    // The robot computes its command but does not contribute.
    v_hat_s = v_h;
  } else {
    v_hat_s = blend(v_r, v_h, pr.eta, ph.eta);
  }
  const PerformanceBreakdown ps = performance(v_hat_s, state.prev_executed, tangent, params);
  if (mode != Mode::Standalone) eta_out = ps.eta;

  const FinalizeOutput fin = finalize(v_hat_s, eta_out, state.filter, params);
  state.filter = fin.state;
  frame.gate_open = update_gate(state.gate, in.f, in.t, params, in.stale);

  frame.v_h = v_h;
  frame.v_r = v_r;
  frame.v_hat_s = v_hat_s;
  frame.v_s = frame.gate_open ? fin.v_s : Vec3::Zero();
  frame.eta_h = ph.eta;
  frame.eta_r = pr.eta;
  frame.eta_s = ps.eta;
  store(frame, kHuman, ph);
  store(frame, kRobot, pr);
  store(frame, kShared, ps);

  state.prev_executed = frame.v_s;
  return frame;
}

ControlFrame impedance_tick(const TickInput& in, const PathSpec& path, ControllerState& state,
                            const ControllerParams& params, const ImpedanceParams& imp) {
  initialize(in, path, state);

  const AdmittanceOutput adm = admittance_step(state.admittance, in.f, params);
  state.admittance = adm.state;
  const Vec3& v_h = adm.v_h;

  const GoalResult goal = select_goal(path, in.x, state.follower, params);
  ControlFrame frame = begin_frame(in, Mode::Impedance, goal, state.follower);

  const Vec3 tangent = path_tangent(path, goal.s_near);
  Vec3 v_corr = Vec3::Zero();
  if (goal.d > imp.deadband && goal.d > kEpsLen) {
    const Vec3 toward = (path_point(path, goal.s_near) - in.x) / goal.d;
    v_corr = imp.k_n * (goal.d - imp.deadband) * toward;
  }
  const Vec3 v_robot = v_corr + imp.v_tangent * tangent;
  const Vec3 v_hat_s = v_h + v_robot;

  const PerformanceBreakdown ph = performance(v_h, state.prev_executed, tangent, params);
  const PerformanceBreakdown pr = performance(v_robot, state.prev_executed, tangent, params);
  const PerformanceBreakdown ps = performance(v_hat_s, state.prev_executed, tangent, params);

  const FinalizeOutput fin = finalize(v_hat_s, 1.0, state.filter, params);
  state.filter = fin.state;
  frame.gate_open = update_gate(state.gate, in.f, in.t, params, in.stale);

  frame.v_h = v_h;
  frame.v_r = v_robot;
  frame.v_hat_s = v_hat_s;
  frame.v_s = frame.gate_open ? fin.v_s : Vec3::Zero();
  frame.eta_h = ph.eta;
  frame.eta_r = pr.eta;
  frame.eta_s = ps.eta;
  store(frame, kHuman, ph);
  store(frame, kRobot, pr);
  store(frame, kShared, ps);

  state.prev_executed = frame.v_s;
  return frame;
}

Controller::Controller(PathSpec path, Mode mode, ControllerParams params, ImpedanceParams imp,
                       std::optional<int> plane_lock)
    : path_(std::move(path)), mode_(mode), params_(std::move(params)), imp_(imp),
      plane_lock_(plane_lock) {
  params_.validate();
  imp_.validate();
}

ControlFrame Controller::tick(const TickInput& in) {
  ControlFrame frame = mode_ == Mode::Impedance
                           ? impedance_tick(in, path_, state_, params_, imp_)
                           : shared_tick(in, path_, state_, params_, mode_);
  if (plane_lock_) {
    frame.v_s[*plane_lock_] = 0.0;
    state_.prev_executed = frame.v_s;
  }
  return frame;
}

}  // namespace sharedctl
