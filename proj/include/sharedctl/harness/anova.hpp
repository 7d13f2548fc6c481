#pragma once

#include <vector>

namespace sharedctl {

struct AnovaResult {
  double F = 0.0;
  double p = 1.0;
  int df_between = 0;
  int df_within = 0;
  // p came from a degenerate case (zero within-group variance), not the F tail.
  bool exact = false;
};

// Classical one-way ANOVA. Needs at least two groups with at least two
// samples each (std::invalid_argument otherwise). Zero within-group variance
// gives F = inf, p = 0 (exact) when the group means differ; all-identical
// data gives F = 0, p = 1.
AnovaResult anova_oneway(const std::vector<std::vector<double>>& groups);

// Levene's test for equal variances: one-way ANOVA on |x - group mean|.
AnovaResult levene_test(const std::vector<std::vector<double>>& groups);

}  // namespace sharedctl
