#pragma once

#include <optional>

#include "sharedctl/control/control_law.hpp"
#include "sharedctl/core/frame.hpp"
#include "sharedctl/core/params.hpp"
#include "sharedctl/core/path.hpp"
#include "sharedctl/follower/path_follower.hpp"

namespace sharedctl {

// Everything a tick mutates. One instance per session.
struct ControllerState {
  AdmittanceState admittance;
  FilterState filter;
  FollowerState follower;
  GateState gate;
  Vec3 prev_executed = Vec3::Zero();
  bool initialized = false;
};

struct TickInput {
  Vec3 x = Vec3::Zero();
  Vec3 f = Vec3::Zero();
  double t = 0.0;
  bool stale = false;  // operator data too old; closes the activity gate
};

// Shared control (mode Shared) and the unassisted baseline (mode Standalone,
// where v_s is the filtered, saturated, gated v_h). Order: admittance, goal,
// robot command, eta_h / eta_r, blend, eta_s on the raw command, output stage,
// gate.
ControlFrame shared_tick(const TickInput& in, const PathSpec& path, ControllerState& state,
                         const ControllerParams& params, Mode mode = Mode::Shared);

// Impedance-style assist-as-needed baseline. Performance fields are filled in
// for logging only; v_r holds the robot's correction plus tangential feed.
ControlFrame impedance_tick(const TickInput& in, const PathSpec& path, ControllerState& state,
                            const ControllerParams& params, const ImpedanceParams& imp);

// Mode dispatch plus the optional plane lock (zeroes one axis of v_s before it
// is executed).
class Controller {
 public:
  Controller(PathSpec path, Mode mode, ControllerParams params, ImpedanceParams imp = {},
             std::optional<int> plane_lock = std::nullopt);

  ControlFrame tick(const TickInput& in);

  const ControllerState& state() const { return state_; }
  Mode mode() const { return mode_; }
  const ControllerParams& params() const { return params_; }

 private:
  PathSpec path_;
  Mode mode_;
  ControllerParams params_;
  ImpedanceParams imp_;
  std::optional<int> plane_lock_;
  ControllerState state_;
};

}  // namespace sharedctl
