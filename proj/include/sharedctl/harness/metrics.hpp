#pragma once

#include <string>
#include <vector>

#include "sharedctl/session/trial.hpp"

namespace sharedctl {

// Per-trial summary over the scored loops. Percentages are in [0,100].
struct TrialMetrics {
  double completion_time = 0.0;     // s
  double mean_force = 0.0;          // N
  double rmspe = 0.0;               // %
  double intervention_level = 0.0;  // %
  double command_variation = 0.0;   // %
  double disagreement = 0.0;        // %
  double mean_eta_h = 0.0;
  double mean_eta_r = 0.0;
  double mean_eta_s = 0.0;
};

// Metric names in TrialMetrics field order; used for CSV columns and replay diffs.
const std::vector<std::string>& metric_names();
std::vector<double> metric_values(const TrialMetrics& m);

std::size_t scored_frame_count(const TrialRecord& record);

// 100 * sqrt(mean (d / R_ref)^2) over scored frames, d taken from the frames
// and R_ref from the scenario. Throws std::domain_error with no scored frames.
double rmspe(const TrialRecord& record);
// Same, with d recomputed against `path` and normalized by its reference radius.
double rmspe(const TrialRecord& record, const PathSpec& path, double reference_radius);

// Share of scored frames with |f| >= threshold.
double intervention_level(const TrialRecord& record, double threshold);

// Share of scored frames whose force norm changed by more than
// rel * max(|f(t - window)|, floor) relative to window seconds earlier.
// Frames without a full window of history never count as variations.
double command_variation(const TrialRecord& record, double rel = 0.10, double window = 0.1,
                         double floor = 0.5);

// Mean angle(v_h, v_s) / pi * 100 over scored frames where both norms reach
// kEpsVel; 0 for Standalone records and when no frame qualifies.
double disagreement(const TrialRecord& record);

// Scored-loop duration for completed trials; elapsed time otherwise.
double completion_time(const TrialRecord& record);

// All of the above with the scenario's activity threshold as IL threshold and
// CV floor. Throws std::domain_error with no scored frames.
TrialMetrics compute_metrics(const TrialRecord& record);

}  // namespace sharedctl
