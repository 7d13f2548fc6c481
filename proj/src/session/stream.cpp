#include "sharedctl/session/stream.hpp"

#include <chrono>
#include <optional>
#include <thread>

namespace sharedctl {

double instant_disagreement(const ControlFrame& frame) {
  if (frame.mode == Mode::Standalone) return 0.0;
  if (frame.v_h.norm() < kEpsVel || frame.v_s.norm() < kEpsVel) return 0.0;
  return angle_between(frame.v_h, frame.v_s) / kPi * 100.0;
}

FrameSummary summarize(const ControlFrame& frame) {
  FrameSummary s;
  s.t = frame.t;
  s.x = frame.x;
  s.goal = frame.goal;
  s.path_progress = frame.s_near;
  s.eta_h = frame.eta_h;
  s.eta_r = frame.eta_r;
  s.eta_s = frame.eta_s;
  s.v_s = frame.v_s;
  s.disagreement_instant = instant_disagreement(frame);
  s.loop = frame.loop;
  s.mode = frame.mode;
  s.gate_open = frame.gate_open;
  return s;
}

namespace {

class Emitter {
 public:
  Emitter(Channel<FrameSummary>& out, const StreamOptions& opt) : out_(out), opt_(opt) {}

  void maybe_emit(const ControlFrame& frame, std::size_t tick) {
    if (tick < next_) return;
    out_.push(summarize(frame));
    if (opt_.on_output) opt_.on_output();
    const bool lagging = out_.size() > opt_.backlog_threshold;
    next_ = tick + static_cast<std::size_t>(lagging ? opt_.slow_decimation : opt_.decimation);
  }

 private:
  Channel<FrameSummary>& out_;
  const StreamOptions& opt_;
  std::size_t next_ = 0;
};

// Tolerance when comparing message times with tick times.
constexpr double kTimeEps = 1e-9;

TrialRecord stream_virtual(TrialEngine& engine, Channel<ForceMessage>& input, Emitter& emit,
                           const StreamOptions& opt, ForceMessage first) {
  std::optional<ForceMessage> held;
  std::optional<ForceMessage> pending = first;
  bool closed = false;
  while (!engine.finished()) {
    const double t = engine.time();
    while (!closed) {
      if (!pending) {
        pending = input.pop();
        if (!pending) {
          closed = true;
          break;
        }
      }
      if (pending->t > t + kTimeEps) break;
      held = pending;
      pending.reset();
    }
    const bool stale = !held || t - held->t > opt.stale_after + kTimeEps;
    const std::size_t tick = engine.tick();
    const ControlFrame& frame = engine.step(stale ? Vec3::Zero() : held->f, stale);
    emit.maybe_emit(frame, tick);
    if (closed && !pending) break;
  }
  return engine.take_record();
}

TrialRecord stream_realtime(TrialEngine& engine, Channel<ForceMessage>& input, Emitter& emit,
                            const StreamOptions& opt, ForceMessage first) {
  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  const auto dt = std::chrono::duration<double>(engine.scenario().params.dt);
  ForceMessage held = first;
  double held_at = 0.0;
  while (!engine.finished()) {
    const auto target = start + std::chrono::duration_cast<clock::duration>(
                                    dt * static_cast<double>(engine.tick()));
    if (clock::now() < target) std::this_thread::sleep_until(target);
    const double now = std::chrono::duration<double>(clock::now() - start).count();
    while (auto m = input.try_pop()) {
      held = *m;
      held_at = now;
    }
    if (input.exhausted()) break;
    const bool stale = now - held_at > opt.stale_after;
    const std::size_t tick = engine.tick();
    const ControlFrame& frame = engine.step(stale ? Vec3::Zero() : held.f, stale);
    emit.maybe_emit(frame, tick);
  }
  return engine.take_record();
}

}  // namespace

TrialRecord stream_trial(const Scenario& scenario, Channel<ForceMessage>& input,
                         Channel<FrameSummary>& output, const StreamOptions& options) {
  TrialEngine engine(scenario);
  auto first = input.pop();
  if (!first) return engine.take_record();
  if (options.on_start) options.on_start();
  Emitter emit(output, options);
  return options.pacing == Pacing::Virtual
             ? stream_virtual(engine, input, emit, options, *first)
             : stream_realtime(engine, input, emit, options, *first);
}

}  // namespace sharedctl
