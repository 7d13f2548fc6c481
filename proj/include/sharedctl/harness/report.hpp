#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "sharedctl/harness/matrix.hpp"

namespace sharedctl {

// metrics.csv columns:
//   profile,mode,hand,seed,completed,error,completion_time_s,mean_force_n,rmspe_pct,
//   intervention_level_pct,command_variation_pct,disagreement_pct,mean_eta_h,
//   mean_eta_r,mean_eta_s
// mode is standalone|shared|impedance, hand is D|N, completed is 0|1. Metric
// cells are empty for failed trials. Numbers use shortest round-trip form.
std::string metrics_csv_header();
void write_metrics_csv(std::ostream& out, const std::vector<TrialOutcome>& trials);
// Throws std::runtime_error on malformed input.
std::vector<TrialRow> read_metrics_csv(std::istream& in);
std::vector<TrialRow> read_metrics_csv_file(const std::filesystem::path& file);

// Structured text: one "key: value" header block, then one line per test:
//   <id> data=<name> test=<anova|levene> F=<F> p=<p> df=<k-1>,<N-k> [exact]
//        groups=<label>:n=<n>,mean=<m>,var=<v>;...
// Tests that cannot run print "not-computable" and the reason.
void write_hypotheses(std::ostream& out, const std::vector<TrialRow>& rows,
                      const std::vector<HypothesisResult>& hypotheses,
                      const std::vector<HypothesisResult>& comparisons,
                      const std::vector<std::string>& failures);
std::string hypotheses_text(const std::vector<TrialRow>& rows);

// Long-format histogram table: x_lo,x_hi,y_lo,y_hi,count.
void write_histogram_csv(std::ostream& out, const Histogram2D& h);

// Writes metrics.csv, hypotheses.txt and hist_<mode>_<name>.csv into dir.
// Telemetry is written by the caller (see MatrixOptions::on_record).
void write_report(const std::filesystem::path& dir, const ExperimentReport& report);

}  // namespace sharedctl
