#pragma once

#include <array>

#include "sharedctl/core/types.hpp"

namespace sharedctl {

// Smoothness/directness factors and their angles for one command.
struct FactorPair {
  double eta1 = 1.0;
  double eta2 = 1.0;
  double alpha1 = 0.0;
  double alpha2 = 0.0;
};

enum Agent : std::size_t { kHuman = 0, kRobot = 1, kShared = 2 };

// Full controller state for one tick. x is the position the command was
// computed at; v_s is what the plant executes next.
struct ControlFrame {
  double t = 0.0;
  Vec3 x = Vec3::Zero();
  Vec3 f = Vec3::Zero();
  Vec3 v_h = Vec3::Zero();
  Vec3 v_r = Vec3::Zero();
  Vec3 v_hat_s = Vec3::Zero();
  Vec3 v_s = Vec3::Zero();
  double eta_h = 1.0;
  double eta_r = 1.0;
  double eta_s = 1.0;
  std::array<FactorPair, 3> eta_factors{};  // indexed by Agent
  Vec3 goal = Vec3::Zero();
  double s_near = 0.0;
  double s_c = 0.0;
  double d = 0.0;
  Mode mode = Mode::Shared;
  bool gate_open = false;
  bool degraded = false;
  int loop = 0;  // loops completed, counting one that completes on this tick
};

}  // namespace sharedctl
