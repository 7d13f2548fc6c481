#include "sharedctl/harness/matrix.hpp"

#include <algorithm>
#include <atomic>
#include <stdexcept>
#include <thread>

#include "sharedctl/human/rng.hpp"
#include "sharedctl/session/stream.hpp"

namespace sharedctl {

Histogram2D::Histogram2D(std::string name_, std::string x_label_, std::string y_label_,
                         double x_min_, double x_max_, std::size_t nx_, double y_min_,
                         double y_max_, std::size_t ny_)
    : name(std::move(name_)),
      x_label(std::move(x_label_)),
      y_label(std::move(y_label_)),
      x_min(x_min_),
      x_max(x_max_),
      y_min(y_min_),
      y_max(y_max_),
      nx(nx_),
      ny(ny_),
      counts(nx_ * ny_, 0) {}

namespace {

std::size_t bin(double v, double lo, double hi, std::size_t n) {
  if (!(v > lo)) return 0;
  const auto i = static_cast<std::size_t>((v - lo) / (hi - lo) * static_cast<double>(n));
  return std::min(i, n - 1);
}

}  // namespace

void Histogram2D::add(double x, double y) {
  counts[bin(y, y_min, y_max, ny) * nx + bin(x, x_min, x_max, nx)] += 1;
}

void Histogram2D::merge(const Histogram2D& other) {
  if (other.nx != nx || other.ny != ny) throw std::invalid_argument("histogram shapes differ");
  for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += other.counts[i];
}

std::uint64_t Histogram2D::total() const {
  std::uint64_t n = 0;
  for (auto c : counts) n += c;
  return n;
}

std::array<Histogram2D, 3> frame_histograms(const TrialRecord& record) {
  std::array<Histogram2D, 3> h = {
      Histogram2D("force_eta", "force_n", "eta_s", 0.0, 20.0, 40, 0.0, 1.0, 20),
      Histogram2D("force_disagreement", "force_n", "disagreement_pct", 0.0, 20.0, 40, 0.0,
                  100.0, 20),
      Histogram2D("disagreement_eta", "disagreement_pct", "eta_s", 0.0, 100.0, 20, 0.0, 1.0,
                  20)};
  for (const auto& fr : record.frames) {
    if (!record.scored(fr)) continue;
    const double f = fr.f.norm();
    const double dis = instant_disagreement(fr);
    h[0].add(f, fr.eta_s);
    h[1].add(f, dis);
    h[2].add(dis, fr.eta_s);
  }
  return h;
}

std::size_t ExperimentReport::failed() const {
  return static_cast<std::size_t>(std::count_if(
      trials.begin(), trials.end(), [](const TrialOutcome& t) { return !t.row.completed; }));
}

std::vector<TrialRow> ExperimentReport::rows() const {
  std::vector<TrialRow> out;
  out.reserve(trials.size());
  for (const auto& t : trials) out.push_back(t.row);
  return out;
}

std::uint64_t trial_seed(std::uint64_t master_seed, std::size_t profile_index, Mode mode,
                         Hand hand) {
  return split_seed(master_seed, {0x7472ULL, static_cast<std::uint64_t>(profile_index),
                                  static_cast<std::uint64_t>(mode),
                                  static_cast<std::uint64_t>(hand)});
}

std::string trial_name(const std::string& profile_id, Mode mode, Hand hand) {
  return profile_id + "_" + std::string(to_string(mode)) + "_" + std::string(to_string(hand));
}

ExperimentReport run_matrix(const std::vector<OperatorProfile>& population,
                            const Scenario& scenario, const MatrixOptions& options) {
  scenario.validate();
  for (const auto& p : population) p.validate();

  ExperimentReport report;
  for (std::size_t i = 0; i < population.size(); ++i) {
    for (Mode mode : options.modes) {
      for (Hand hand : options.hands) {
        TrialOutcome t;
        t.spec = {i, mode, hand, trial_seed(options.master_seed, i, mode, hand)};
        t.row.profile = population[i].id;
        t.row.mode = mode;
        t.row.hand = hand;
        t.row.seed = t.spec.seed;
        report.trials.push_back(std::move(t));
      }
    }
  }

  // Histograms per trial, merged after the pool finishes.
  std::vector<std::array<Histogram2D, 3>> hists(report.trials.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < report.trials.size(); k = next++) {
      auto& t = report.trials[k];
      Scenario sc = scenario;
      sc.mode = t.spec.mode;
      try {
        TrialRecord rec = run_trial(sc, population[t.spec.profile_index], t.spec.hand, t.spec.seed);
        if (options.on_record) options.on_record(t.spec, t.row.profile, rec);
        t.row.completed = rec.completed;
        if (rec.completed) {
          t.row.metrics = compute_metrics(rec);
          hists[k] = frame_histograms(rec);
        } else {
          t.row.error = "timeout";
        }
      } catch (const std::exception& e) {
        t.row.completed = false;
        std::string msg = e.what();
        std::replace_if(msg.begin(), msg.end(), [](char c) { return c == ',' || c == '\n'; }, ' ');
        t.row.error = msg;
      }
    }
  };
  unsigned n_threads = options.threads ? options.threads : std::thread::hardware_concurrency();
  n_threads = std::max(1u, std::min<unsigned>(n_threads, report.trials.size()));
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < n_threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  for (Mode mode : options.modes) {
    auto merged = frame_histograms(TrialRecord{});
    for (std::size_t k = 0; k < report.trials.size(); ++k) {
      if (report.trials[k].spec.mode != mode || hists[k][0].counts.empty()) continue;
      for (std::size_t j = 0; j < 3; ++j) merged[j].merge(hists[k][j]);
    }
    report.histograms.emplace_back(mode, std::move(merged));
  }

  const auto rows = report.rows();
  report.hypotheses = evaluate_hypotheses(rows);
  report.comparisons = evaluate_comparisons(rows);
  return report;
}

}  // namespace sharedctl
