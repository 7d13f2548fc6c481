#include "sharedctl/session/trial.hpp"

#include "sharedctl/core/plant.hpp"

namespace sharedctl {

TrialEngine::TrialEngine(Scenario scenario)
    : scenario_(std::move(scenario)),
      controller_(scenario_.path, scenario_.mode, scenario_.params, scenario_.imp,
                  scenario_.plane_lock),
      x_(path_point(scenario_.path, 0.0)) {
  scenario_.validate();
  // Rough upper bound keeps reallocation out of the loop.
  record_.frames.reserve(static_cast<std::size_t>(std::min(scenario_.timeout, 60.0) /
                                                  scenario_.params.dt) + 1);
}

bool TrialEngine::loops_done() const {
  return controller_.state().follower.loops_completed >= scenario_.loops_required;
}

bool TrialEngine::timed_out() const { return time() >= scenario_.timeout; }

const ControlFrame& TrialEngine::step(const Vec3& f, bool stale) {
  const ControlFrame& frame =
      record_.frames.emplace_back(controller_.tick(TickInput{x_, f, time(), stale}));
  if (frame.loop != last_loop_) {
    record_.loop_boundaries.push_back(tick_);
    last_loop_ = frame.loop;
  }
  x_ = plant_step(x_, frame.v_s, scenario_.params.dt);
  v_ee_ = frame.v_s;
  ++tick_;
  return frame;
}

TrialRecord TrialEngine::take_record() {
  record_.completed = loops_done();
  record_.scenario = scenario_;
  return std::move(record_);
}

TrialRecord run_trial(const Scenario& scenario, const ForceSource& source) {
  TrialEngine engine(scenario);
  while (!engine.finished()) {
    engine.step(source(engine.position(), engine.velocity(), engine.time()));
  }
  return engine.take_record();
}

TrialRecord run_trial(const Scenario& scenario, const OperatorProfile& profile, Hand hand,
                      std::uint64_t seed) {
  SyntheticOperator op(profile, hand, scenario.path, scenario.params.dt, seed);
  TrialRecord rec = run_trial(scenario, [&op](const Vec3& x, const Vec3& v, double t) {
    return op.force(x, v, t);
  });
  rec.operator_id = profile.id;
  rec.hand = std::string(to_string(hand));
  rec.seed = seed;
  return rec;
}

}  // namespace sharedctl
