#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "sharedctl/harness/hypotheses.hpp"
#include "sharedctl/session/trial.hpp"

namespace sharedctl {

// Fixed-range 2D histogram over scored frames.
struct Histogram2D {
  std::string name;    // e.g. "force_eta"
  std::string x_label;
  std::string y_label;
  double x_min = 0.0, x_max = 1.0;
  double y_min = 0.0, y_max = 1.0;
  std::size_t nx = 1, ny = 1;
  std::vector<std::uint64_t> counts;  // row-major, counts[iy * nx + ix]

  Histogram2D() = default;
  Histogram2D(std::string name, std::string x_label, std::string y_label, double x_min,
              double x_max, std::size_t nx, double y_min, double y_max, std::size_t ny);
  // Values outside the range land in the edge bins.
  void add(double x, double y);
  void merge(const Histogram2D& other);
  std::uint64_t total() const;
};

// force-eta_s, force-disagreement and disagreement-eta_s for one record.
std::array<Histogram2D, 3> frame_histograms(const TrialRecord& record);

struct TrialSpec {
  std::size_t profile_index = 0;
  Mode mode = Mode::Shared;
  Hand hand = Hand::Dominant;
  std::uint64_t seed = 0;
};

struct TrialOutcome {
  TrialSpec spec;
  TrialRow row;
};

struct MatrixOptions {
  std::vector<Mode> modes{Mode::Standalone, Mode::Shared, Mode::Impedance};
  std::vector<Hand> hands{Hand::Dominant, Hand::NonDominant};
  std::uint64_t master_seed = kDefaultMasterSeed;
  unsigned threads = 0;  // 0: hardware concurrency
  // Called from worker threads once per finished trial, before the record is
  // dropped (e.g. to write telemetry). Must be thread safe.
  std::function<void(const TrialSpec&, const std::string& profile_id, const TrialRecord&)>
      on_record;
};

struct ExperimentReport {
  std::vector<TrialOutcome> trials;  // profile order, then mode, then hand
  std::vector<HypothesisResult> hypotheses;
  std::vector<HypothesisResult> comparisons;
  // Per mode (in MatrixOptions order): the three frame histograms.
  std::vector<std::pair<Mode, std::array<Histogram2D, 3>>> histograms;

  std::size_t failed() const;
  std::vector<TrialRow> rows() const;
};

// Seed of the operator noise stream for one trial.
std::uint64_t trial_seed(std::uint64_t master_seed, std::size_t profile_index, Mode mode,
                         Hand hand);

// Runs every {profile x mode x hand} trial in parallel and reduces the
// results in a fixed order, so the report does not depend on scheduling.
ExperimentReport run_matrix(const std::vector<OperatorProfile>& population,
                            const Scenario& scenario, const MatrixOptions& options = {});

// Trial file stem, e.g. "V03_shared_D".
std::string trial_name(const std::string& profile_id, Mode mode, Hand hand);

}  // namespace sharedctl
