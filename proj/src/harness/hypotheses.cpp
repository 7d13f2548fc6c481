#include "sharedctl/harness/hypotheses.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace sharedctl {

namespace {

using Extractor = std::function<double(const TrialMetrics&)>;

GroupSummary summarize_group(std::string label, const std::vector<double>& xs) {
  GroupSummary g;
  g.label = std::move(label);
  g.n = xs.size();
  if (xs.empty()) return g;
  for (double x : xs) g.mean += x;
  g.mean /= static_cast<double>(xs.size());
  if (xs.size() > 1) {
    for (double x : xs) g.variance += (x - g.mean) * (x - g.mean);
    g.variance /= static_cast<double>(xs.size() - 1);
  }
  return g;
}

HypothesisResult compare(std::string id, std::string data, bool levene,
                         const std::vector<std::pair<std::string, std::vector<double>>>& groups) {
  HypothesisResult r;
  r.id = std::move(id);
  r.data = std::move(data);
  r.test = levene ? "levene" : "anova";
  std::vector<std::vector<double>> samples;
  for (const auto& [label, xs] : groups) {
    r.groups.push_back(summarize_group(label, xs));
    samples.push_back(xs);
  }
  for (const auto& xs : samples) {
    if (xs.size() < 2) {
      r.note = "fewer than two samples in a group";
      return r;
    }
  }
  r.anova = levene ? levene_test(samples) : anova_oneway(samples);
  r.computable = true;
  return r;
}

std::vector<double> column(const std::vector<TrialRow>& rows, Mode mode, const Extractor& get) {
  std::vector<double> out;
  for (const auto& row : rows) {
    if (row.completed && row.mode == mode) out.push_back(get(row.metrics));
  }
  return out;
}

HypothesisResult by_mode(std::string id, std::string data, const std::vector<TrialRow>& rows,
                         Mode a, Mode b, const Extractor& get, bool levene = false) {
  return compare(std::move(id), std::move(data), levene,
                 {{std::string(to_string(a)), column(rows, a, get)},
                  {std::string(to_string(b)), column(rows, b, get)}});
}

}  // namespace

std::vector<std::pair<std::string, double>> hand_gaps(const std::vector<TrialRow>& rows,
                                                      Mode mode) {
  std::map<std::string, std::map<Hand, double>> eta;
  for (const auto& row : rows) {
    if (row.completed && row.mode == mode) eta[row.profile][row.hand] = row.metrics.mean_eta_s;
  }
  std::vector<std::pair<std::string, double>> out;
  for (const auto& [profile, hands] : eta) {
    if (hands.size() == 2) {
      out.emplace_back(profile, hands.at(Hand::Dominant) - hands.at(Hand::NonDominant));
    }
  }
  return out;
}

std::vector<std::string> upper_tercile(const std::vector<TrialRow>& rows) {
  auto gaps = hand_gaps(rows, Mode::Standalone);
  std::stable_sort(gaps.begin(), gaps.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  const std::size_t keep = (gaps.size() + 2) / 3;
  std::vector<std::string> out;
  for (std::size_t i = 0; i < keep; ++i) out.push_back(gaps[i].first);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<HypothesisResult> evaluate_hypotheses(const std::vector<TrialRow>& rows) {
  const Mode sa = Mode::Standalone;
  const Mode sc = Mode::Shared;
  std::vector<HypothesisResult> out;
  out.push_back(by_mode("H1", "mean_eta_s", rows, sa, sc,
                        [](const TrialMetrics& m) { return m.mean_eta_s; }));
  out.push_back(by_mode("H2", "rmspe_pct", rows, sa, sc,
                        [](const TrialMetrics& m) { return m.rmspe; }));

  // Users need both hands in both modes for the paired gap.
  const auto gaps_sa = hand_gaps(rows, sa);
  const auto gaps_sc = hand_gaps(rows, sc);
  const std::map<std::string, double> sa_gap(gaps_sa.begin(), gaps_sa.end());
  const std::map<std::string, double> sc_gap(gaps_sc.begin(), gaps_sc.end());
  std::vector<double> h3_sa;
  std::vector<double> h3_sc;
  for (const auto& [p, g] : gaps_sa) {
    if (!sc_gap.count(p)) continue;
    h3_sa.push_back(g);
    h3_sc.push_back(sc_gap.at(p));
  }
  out.push_back(compare("H3", "hand_gap_eta_s", false,
                        {{std::string(to_string(sa)), h3_sa}, {std::string(to_string(sc)), h3_sc}}));

  const auto top = upper_tercile(rows);
  std::vector<double> t_sa;
  std::vector<double> t_sc;
  for (const auto& p : top) {
    if (!sc_gap.count(p)) continue;
    t_sa.push_back(sa_gap.at(p));
    t_sc.push_back(sc_gap.at(p));
  }
  out.push_back(compare("H3'", "hand_gap_eta_s_upper_tercile", false,
                        {{std::string(to_string(sa)), t_sa}, {std::string(to_string(sc)), t_sc}}));

  out.push_back(by_mode("H4", "rmspe_pct_variance", rows, sa, sc,
                        [](const TrialMetrics& m) { return m.rmspe; }, true));
  out.push_back(by_mode("H5", "command_variation_pct", rows, sa, sc,
                        [](const TrialMetrics& m) { return m.command_variation; }));
  return out;
}

std::vector<HypothesisResult> evaluate_comparisons(const std::vector<TrialRow>& rows) {
  const Mode ic = Mode::Impedance;
  const Mode sc = Mode::Shared;
  std::vector<HypothesisResult> out;
  out.push_back(by_mode("IC-force", "mean_force_n", rows, sc, ic,
                        [](const TrialMetrics& m) { return m.mean_force; }));
  out.push_back(by_mode("IC-disagreement", "disagreement_pct", rows, sc, ic,
                        [](const TrialMetrics& m) { return m.disagreement; }));
  out.push_back(by_mode("IC-rmspe", "rmspe_pct", rows, sc, ic,
                        [](const TrialMetrics& m) { return m.rmspe; }));
  return out;
}

}  // namespace sharedctl
