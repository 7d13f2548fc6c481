#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sharedctl/harness/anova.hpp"
#include "sharedctl/harness/metrics.hpp"
#include "sharedctl/human/operator.hpp"

namespace sharedctl {

// One row of the metrics table.
struct TrialRow {
  std::string profile;
  Mode mode = Mode::Shared;
  Hand hand = Hand::Dominant;
  std::uint64_t seed = 0;
  bool completed = false;
  std::string error;     // why the trial failed, empty when completed
  TrialMetrics metrics;  // meaningful only when completed
};

struct GroupSummary {
  std::string label;
  std::size_t n = 0;
  double mean = 0.0;
  double variance = 0.0;  // sample variance
};

struct HypothesisResult {
  std::string id;       // H1, H2, H3, H3', H4, H5 or a comparison id
  std::string data;     // what was compared
  std::string test;     // "anova" or "levene"
  bool computable = false;
  std::string note;     // reason when not computable
  std::vector<GroupSummary> groups;
  AnovaResult anova;
};

// Standalone vs Shared tests over completed trials:
//   H1  per-trial mean eta_s            H2  per-trial RMSPE
//   H3  per-user dEta = eta(D) - eta(N) H3' H3 on the upper tercile of Standalone dEta
//   H4  RMSPE variance (Levene)         H5  command variation
std::vector<HypothesisResult> evaluate_hypotheses(const std::vector<TrialRow>& rows);

// Impedance vs Shared comparisons: mean force, disagreement, RMSPE.
std::vector<HypothesisResult> evaluate_comparisons(const std::vector<TrialRow>& rows);

// Per-user eta(D) - eta(N) for one mode, over users with both hands completed,
// sorted by profile id.
std::vector<std::pair<std::string, double>> hand_gaps(const std::vector<TrialRow>& rows, Mode mode);

// Profiles in the upper tercile (top ceil(n/3)) of Standalone hand gap.
std::vector<std::string> upper_tercile(const std::vector<TrialRow>& rows);

}  // namespace sharedctl
