#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "sharedctl/control/controller.hpp"
#include "sharedctl/core/frame.hpp"
#include "sharedctl/human/operator.hpp"
#include "sharedctl/session/scenario.hpp"

namespace sharedctl {

struct TrialRecord {
  std::vector<ControlFrame> frames;
  // Index of the frame on which each loop completed; frames with
  // frame.loop == k belong to loop k.
  std::vector<std::size_t> loop_boundaries;
  bool completed = false;
  Scenario scenario;
  // Free-form provenance (operator id, hand, seed); carried into the log.
  std::string operator_id;
  std::string hand;
  std::uint64_t seed = 0;

  // Frames of loops [discard_loops, loops_required).
  bool scored(const ControlFrame& frame) const {
    return frame.loop >= scenario.discard_loops && frame.loop < scenario.loops_required;
  }
};

// The closed loop shared by offline and streamed trials: controller, plant
// and telemetry. The EE starts at path_point(path, 0).
class TrialEngine {
 public:
  explicit TrialEngine(Scenario scenario);

  // Runs one tick with the given operator force and advances the plant.
  const ControlFrame& step(const Vec3& f, bool stale = false);

  // Loops complete or timeout reached.
  bool finished() const { return loops_done() || timed_out(); }
  bool loops_done() const;
  bool timed_out() const;

  double time() const { return static_cast<double>(tick_) * scenario_.params.dt; }
  std::size_t tick() const { return tick_; }
  const Vec3& position() const { return x_; }
  // Velocity executed on the last tick (what the EE is doing now).
  const Vec3& velocity() const { return v_ee_; }
  const Scenario& scenario() const { return scenario_; }

  // Moves the telemetry out; completed = loops_done().
  TrialRecord take_record();

 private:
  Scenario scenario_;
  Controller controller_;
  Vec3 x_;
  Vec3 v_ee_ = Vec3::Zero();
  std::size_t tick_ = 0;
  int last_loop_ = 0;
  TrialRecord record_;
};

// Force provider for run_trial: (sensed position, EE velocity, t) -> force.
using ForceSource = std::function<Vec3(const Vec3& x, const Vec3& v_ee, double t)>;

TrialRecord run_trial(const Scenario& scenario, const ForceSource& source);

// Synthetic operator driving the loop; the operator's noise stream is seeded
// with `seed`.
TrialRecord run_trial(const Scenario& scenario, const OperatorProfile& profile, Hand hand,
                      std::uint64_t seed);

}  // namespace sharedctl
