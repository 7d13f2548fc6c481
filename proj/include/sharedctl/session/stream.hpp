#pragma once

#include <functional>

#include "sharedctl/session/channel.hpp"
#include "sharedctl/session/trial.hpp"

namespace sharedctl {

// Operator force sample; t in seconds on the trial clock.
struct ForceMessage {
  double t = 0.0;
  Vec3 f = Vec3::Zero();
};

// Decimated per-tick summary pushed to live clients.
struct FrameSummary {
  double t = 0.0;
  Vec3 x = Vec3::Zero();
  Vec3 goal = Vec3::Zero();
  double path_progress = 0.0;  // s_near
  double eta_h = 0.0;
  double eta_r = 0.0;
  double eta_s = 0.0;
  Vec3 v_s = Vec3::Zero();
  double disagreement_instant = 0.0;  // %, angle(v_h, v_s) / pi * 100
  int loop = 0;
  Mode mode = Mode::Shared;
  bool gate_open = false;
};

// Percent angle between human and executed command for one frame; 0 in
// Standalone mode or when either command has no direction.
double instant_disagreement(const ControlFrame& frame);
FrameSummary summarize(const ControlFrame& frame);

enum class Pacing {
  Virtual,   // tick k runs once all input up to t = k*dt is known (replay, tests)
  RealTime,  // tick k runs at wall time start + k*dt; input times are arrival times
};

struct StreamOptions {
  Pacing pacing = Pacing::Virtual;
  int decimation = 10;
  int slow_decimation = 50;          // used while the consumer lags
  std::size_t backlog_threshold = 32;
  double stale_after = 0.2;          // s without input before the gate is forced closed
  std::function<void()> on_start;    // first input message received
  std::function<void()> on_output;   // a summary was queued
};

// Same control math as run_trial, fed by a message channel. Forces are
// zero-order held between messages. Blocks until the first message. When the
// input channel closes before the loops are done, the trial ends incomplete.
TrialRecord stream_trial(const Scenario& scenario, Channel<ForceMessage>& input,
                         Channel<FrameSummary>& output, const StreamOptions& options = {});

}  // namespace sharedctl
