#include "sharedctl/harness/metrics.hpp"

#include <cmath>
#include <stdexcept>

#include "sharedctl/follower/path_follower.hpp"
#include "sharedctl/session/stream.hpp"

namespace sharedctl {

const std::vector<std::string>& metric_names() {
  static const std::vector<std::string> names = {
      "completion_time_s", "mean_force_n",   "rmspe_pct",  "intervention_level_pct",
      "command_variation_pct", "disagreement_pct", "mean_eta_h", "mean_eta_r",
      "mean_eta_s"};
  return names;
}

std::vector<double> metric_values(const TrialMetrics& m) {
  return {m.completion_time,    m.mean_force,   m.rmspe,      m.intervention_level,
          m.command_variation,  m.disagreement, m.mean_eta_h, m.mean_eta_r,
          m.mean_eta_s};
}

std::size_t scored_frame_count(const TrialRecord& record) {
  std::size_t n = 0;
  for (const auto& fr : record.frames) n += record.scored(fr) ? 1 : 0;
  return n;
}

namespace {

std::size_t require_scored(const TrialRecord& record) {
  const std::size_t n = scored_frame_count(record);
  if (n == 0) throw std::domain_error("record has no scored frames");
  return n;
}

double pct(std::size_t count, std::size_t total) {
  return total == 0 ? 0.0 : 100.0 * static_cast<double>(count) / static_cast<double>(total);
}

}  // namespace

double rmspe(const TrialRecord& record) {
  const std::size_t n = require_scored(record);
  const double r = record.scenario.reference_radius();
  double acc = 0.0;
  for (const auto& fr : record.frames) {
    if (!record.scored(fr)) continue;
    const double e = fr.d / r;
    acc += e * e;
  }
  return 100.0 * std::sqrt(acc / static_cast<double>(n));
}

double rmspe(const TrialRecord& record, const PathSpec& path, double reference_radius) {
  const std::size_t n = require_scored(record);
  double acc = 0.0;
  for (const auto& fr : record.frames) {
    if (!record.scored(fr)) continue;
    const double e = nearest_param(path, fr.x).d / reference_radius;
    acc += e * e;
  }
  return 100.0 * std::sqrt(acc / static_cast<double>(n));
}

double intervention_level(const TrialRecord& record, double threshold) {
  std::size_t total = 0;
  std::size_t active = 0;
  for (const auto& fr : record.frames) {
    if (!record.scored(fr)) continue;
    ++total;
    active += fr.f.norm() >= threshold ? 1 : 0;
  }
  return pct(active, total);
}

double command_variation(const TrialRecord& record, double rel, double window, double floor) {
  const auto lag = static_cast<std::size_t>(std::llround(window / record.scenario.params.dt));
  std::size_t total = 0;
  std::size_t varied = 0;
  for (std::size_t i = 0; i < record.frames.size(); ++i) {
    const auto& fr = record.frames[i];
    if (!record.scored(fr)) continue;
    ++total;
    if (i < lag) continue;
    const double before = record.frames[i - lag].f.norm();
    const double now = fr.f.norm();
    if (std::abs(now - before) > rel * std::max(before, floor)) ++varied;
  }
  return pct(varied, total);
}

double disagreement(const TrialRecord& record) {
  double acc = 0.0;
  std::size_t n = 0;
  for (const auto& fr : record.frames) {
    if (!record.scored(fr) || fr.mode == Mode::Standalone) continue;
    if (fr.v_h.norm() < kEpsVel || fr.v_s.norm() < kEpsVel) continue;
    acc += instant_disagreement(fr);
    ++n;
  }
  return n == 0 ? 0.0 : acc / static_cast<double>(n);
}

double completion_time(const TrialRecord& record) {
  if (record.frames.empty()) return 0.0;
  const auto& lb = record.loop_boundaries;
  const int need = record.scenario.loops_required;
  const int skip = record.scenario.discard_loops;
  if (!record.completed || static_cast<int>(lb.size()) < need) {
    return record.frames.back().t - record.frames.front().t;
  }
  const double end = record.frames[lb[need - 1]].t;
  const double start = skip == 0 ? record.frames.front().t : record.frames[lb[skip - 1]].t;
  return end - start;
}

TrialMetrics compute_metrics(const TrialRecord& record) {
  const std::size_t n = require_scored(record);
  const double threshold = record.scenario.params.activity_threshold;
  TrialMetrics m;
  m.completion_time = completion_time(record);
  m.rmspe = rmspe(record);
  m.intervention_level = intervention_level(record, threshold);
  m.command_variation = command_variation(record, 0.10, 0.1, threshold);
  m.disagreement = disagreement(record);
  for (const auto& fr : record.frames) {
    if (!record.scored(fr)) continue;
    m.mean_force += fr.f.norm();
    m.mean_eta_h += fr.eta_h;
    m.mean_eta_r += fr.eta_r;
    m.mean_eta_s += fr.eta_s;
  }
  const double dn = static_cast<double>(n);
  m.mean_force /= dn;
  m.mean_eta_h /= dn;
  m.mean_eta_r /= dn;
  m.mean_eta_s /= dn;
  return m;
}

}  // namespace sharedctl
