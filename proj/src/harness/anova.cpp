#include "sharedctl/harness/anova.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <boost/math/distributions/fisher_f.hpp>

namespace sharedctl {

namespace {

double mean_of(const std::vector<double>& xs) {
  double acc = 0.0;
  for (double x : xs) acc += x;
  return acc / static_cast<double>(xs.size());
}

}  // namespace

AnovaResult anova_oneway(const std::vector<std::vector<double>>& groups) {
  if (groups.size() < 2) throw std::invalid_argument("anova: need at least two groups");
  std::size_t total = 0;
  double grand = 0.0;
  for (const auto& g : groups) {
    if (g.size() < 2) throw std::invalid_argument("anova: each group needs two samples");
    for (double x : g) {
      if (!std::isfinite(x)) throw std::invalid_argument("anova: non-finite sample");
      grand += x;
    }
    total += g.size();
  }
  grand /= static_cast<double>(total);

  double ssb = 0.0;
  double ssw = 0.0;
  bool equal_means = true;
  const double first_mean = mean_of(groups.front());
  for (const auto& g : groups) {
    const double m = mean_of(g);
    equal_means = equal_means && m == first_mean;
    ssb += static_cast<double>(g.size()) * (m - grand) * (m - grand);
    for (double x : g) ssw += (x - m) * (x - m);
  }
  // The grand mean can round differently from equal group means.
  if (equal_means) ssb = 0.0;

  AnovaResult r;
  r.df_between = static_cast<int>(groups.size()) - 1;
  r.df_within = static_cast<int>(total - groups.size());
  if (ssw == 0.0) {
    r.exact = true;
    if (ssb == 0.0) {
      r.F = 0.0;
      r.p = 1.0;
    } else {
      r.F = std::numeric_limits<double>::infinity();
      r.p = 0.0;
    }
    return r;
  }
  r.F = (ssb / r.df_between) / (ssw / r.df_within);
  const boost::math::fisher_f dist(r.df_between, r.df_within);
  r.p = boost::math::cdf(boost::math::complement(dist, r.F));
  return r;
}

AnovaResult levene_test(const std::vector<std::vector<double>>& groups) {
  std::vector<std::vector<double>> dev;
  dev.reserve(groups.size());
  for (const auto& g : groups) {
    if (g.empty()) throw std::invalid_argument("levene: empty group");
    const double m = mean_of(g);
    auto& d = dev.emplace_back();
    for (double x : g) d.push_back(std::abs(x - m));
  }
  return anova_oneway(dev);
}

}  // namespace sharedctl
