#include <pthread.h>
#include <csignal>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "sharedctl/harness/matrix.hpp"
#include "sharedctl/harness/metrics.hpp"
#include "sharedctl/harness/plot.hpp"
#include "sharedctl/harness/report.hpp"
#include "sharedctl/human/population.hpp"
#include "sharedctl/service/service.hpp"
#include "sharedctl/session/telemetry.hpp"

namespace fs = std::filesystem;
using namespace sharedctl;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitTrialFailures = 3;

std::vector<Mode> parse_modes(const std::vector<std::string>& names) {
  std::vector<Mode> out;
  for (const auto& n : names) {
    auto m = parse_mode(n);
    if (!m) throw ConfigError("--modes", "unknown mode '" + n + "'");
    out.push_back(*m);
  }
  return out;
}

std::vector<Hand> parse_hands(const std::vector<std::string>& names) {
  std::vector<Hand> out;
  for (const auto& n : names) {
    if (n == "D" || n == "d") {
      out.push_back(Hand::Dominant);
    } else if (n == "N" || n == "n") {
      out.push_back(Hand::NonDominant);
    } else {
      throw ConfigError("--hands", "expected D or N, got '" + n + "'");
    }
  }
  return out;
}

Scenario scenario_or_default(const std::string& file) {
  return file.empty() ? Scenario{} : load_scenario_file(file);
}

// An explicit --seed replaces the file's per-operator seeds by splitting.
std::vector<OperatorProfile> population_or_default(const std::string& file, std::uint64_t seed,
                                                   bool seed_given) {
  if (file.empty()) return default_population(seed);
  auto population = load_population_file(file);
  if (seed_given) {
    for (std::size_t i = 0; i < population.size(); ++i) {
      population[i].seed = split_seed(seed, {static_cast<std::uint64_t>(i)});
    }
  }
  return population;
}

nlohmann::json metrics_json(const TrialMetrics& m) {
  nlohmann::json out;
  const auto& names = metric_names();
  const auto values = metric_values(m);
  for (std::size_t i = 0; i < names.size(); ++i) out[names[i]] = values[i];
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Shared-control teleoperation simulator and experiment harness"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "Run the {operator x mode x hand} experiment matrix");
  std::string scenario_file, population_file;
  fs::path out_dir = "report";
  std::uint64_t seed = kDefaultMasterSeed;
  std::vector<std::string> modes{"standalone", "shared", "impedance"};
  std::vector<std::string> hands{"D", "N"};
  unsigned threads = 0;
  bool no_telemetry = false;
  run->add_option("--scenario", scenario_file, "Scenario config (JSON); built-in circle task if omitted");
  run->add_option("--population", population_file, "Operator cohort (JSON); generated from --seed if omitted");
  run->add_option("--out", out_dir, "Report directory")->capture_default_str();
  auto* run_seed = run->add_option("--seed", seed, "Master seed")->capture_default_str();
  run->add_option("--modes", modes, "Modes to run")->delimiter(',')->capture_default_str();
  run->add_option("--hands", hands, "Hands to run (D, N)")->delimiter(',')->capture_default_str();
  run->add_option("--threads", threads, "Worker threads (0: all cores)")->capture_default_str();
  run->add_flag("--no-telemetry", no_telemetry, "Skip the per-trial telemetry logs");

  // trial
  auto* trial = app.add_subcommand("trial", "Run a single trial and write its telemetry");
  std::string profile_id;
  std::string mode_name = "shared";
  std::string hand_name = "D";
  std::optional<std::uint64_t> trial_seed_opt;
  fs::path telemetry_out;
  trial->add_option("--scenario", scenario_file, "Scenario config (JSON)");
  trial->add_option("--population", population_file, "Operator cohort (JSON)");
  auto* trial_seed_flag = trial->add_option("--seed", seed, "Master seed")->capture_default_str();
  trial->add_option("--profile", profile_id, "Operator id (first operator if omitted)");
  trial->add_option("--mode", mode_name, "standalone | shared | impedance")->capture_default_str();
  trial->add_option("--hand", hand_name, "D | N")->capture_default_str();
  trial->add_option("--trial-seed", trial_seed_opt, "Noise seed (derived from --seed if omitted)");
  trial->add_option("--telemetry", telemetry_out, "Telemetry log to write");

  // replay
  auto* replay = app.add_subcommand("replay", "Recompute trial metrics from telemetry logs");
  std::vector<fs::path> logs;
  replay->add_option("logs", logs, "Telemetry logs (JSONL)")->required()->check(CLI::ExistingFile);

  // stats
  auto* stats = app.add_subcommand("stats", "Recompute the hypothesis report from metrics.csv");
  fs::path metrics_csv;
  stats->add_option("metrics", metrics_csv, "metrics.csv")->required()->check(CLI::ExistingFile);

  // plot
  auto* plot = app.add_subcommand("plot", "Render SVG plots from a report directory");
  fs::path report_dir;
  fs::path plot_dir;
  plot->add_option("report", report_dir, "Report directory")->required()->check(CLI::ExistingDirectory);
  plot->add_option("--out", plot_dir, "Output directory (default: <report>/plots)");

  // population
  auto* pop = app.add_subcommand("population", "Write the generated operator cohort as JSON");
  fs::path pop_out;
  pop->add_option("--seed", seed, "Master seed")->capture_default_str();
  pop->add_option("--out", pop_out, "Output file (stdout if omitted)");

  // serve
  auto* serve = app.add_subcommand("serve", "Run the session service (HTTP + WebSocket)");
  std::string bind;
  std::string data_dir;
  std::size_t max_sessions = 0;
  serve->add_option("--bind", bind, "host:port (overrides SHAREDCTL_BIND)");
  serve->add_option("--data-dir", data_dir, "Record directory (overrides SHAREDCTL_DATA_DIR)");
  serve->add_option("--max-sessions", max_sessions, "Live session limit (overrides SHAREDCTL_MAX_SESSIONS)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      const Scenario scenario = scenario_or_default(scenario_file);
      const auto population = population_or_default(population_file, seed, run_seed->count() > 0);
      MatrixOptions opts;
      opts.modes = parse_modes(modes);
      opts.hands = parse_hands(hands);
      opts.master_seed = seed;
      opts.threads = threads;
      fs::create_directories(out_dir);
      std::mutex log_mu;
      if (!no_telemetry) {
        fs::create_directories(out_dir / "telemetry");
        opts.on_record = [&](const TrialSpec& spec, const std::string& id, const TrialRecord& rec) {
          write_telemetry_file(out_dir / "telemetry" / (trial_name(id, spec.mode, spec.hand) + ".jsonl"),
                               rec);
          std::lock_guard lock(log_mu);
          std::cerr << trial_name(id, spec.mode, spec.hand)
                    << (rec.completed ? " done" : " incomplete") << "\n";
        };
      }
      const auto report = run_matrix(population, scenario, opts);
      write_report(out_dir, report);
      std::cout << hypotheses_text(report.rows());
      if (report.failed() > 0) {
        std::cerr << report.failed() << " trial(s) failed\n";
        return kExitTrialFailures;
      }
      return kExitOk;
    }

    if (*trial) {
      const Scenario base = scenario_or_default(scenario_file);
      const auto population =
          population_or_default(population_file, seed, trial_seed_flag->count() > 0);
      std::size_t index = 0;
      if (!profile_id.empty()) {
        while (index < population.size() && population[index].id != profile_id) ++index;
        if (index == population.size()) throw ConfigError("--profile", "unknown operator " + profile_id);
      }
      const auto mode = parse_modes({mode_name}).front();
      const auto hand = parse_hands({hand_name}).front();
      Scenario sc = base;
      sc.mode = mode;
      const std::uint64_t s = trial_seed_opt ? *trial_seed_opt : trial_seed(seed, index, mode, hand);
      const TrialRecord rec = run_trial(sc, population[index], hand, s);
      if (!telemetry_out.empty()) write_telemetry_file(telemetry_out, rec);
      nlohmann::json out{{"operator", population[index].id},
                         {"mode", std::string(to_string(mode))},
                         {"hand", std::string(to_string(hand))},
                         {"seed", s},
                         {"completed", rec.completed}};
      out["metrics"] = rec.completed ? metrics_json(compute_metrics(rec)) : nlohmann::json(nullptr);
      std::cout << out.dump(2) << "\n";
      return rec.completed ? kExitOk : kExitTrialFailures;
    }

    if (*replay) {
      int rc = kExitOk;
      for (const auto& file : logs) {
        const TrialRecord rec = read_telemetry_file(file);
        nlohmann::json out{{"log", file.string()}, {"completed", rec.completed}};
        if (rec.completed) {
          out["metrics"] = metrics_json(compute_metrics(rec));
        } else {
          out["metrics"] = nullptr;
          rc = kExitTrialFailures;
        }
        std::cout << out.dump() << "\n";
      }
      return rc;
    }

    if (*stats) {
      std::cout << hypotheses_text(read_metrics_csv_file(metrics_csv));
      return kExitOk;
    }

    if (*plot) {
      const auto files = write_plots(report_dir, plot_dir.empty() ? report_dir / "plots" : plot_dir);
      for (const auto& f : files) std::cout << f.string() << "\n";
      return kExitOk;
    }

    if (*pop) {
      const auto population = default_population(seed);
      if (pop_out.empty()) {
        std::cout << population_to_json(population).dump(2) << "\n";
      } else {
        save_population_file(pop_out, population);
      }
      return kExitOk;
    }

    if (*serve) {
      service::ServiceConfig cfg = service::config_from_env();
      if (!bind.empty()) service::apply_bind(cfg, bind, "--bind");
      if (!data_dir.empty()) cfg.data_dir = data_dir;
      if (max_sessions > 0) cfg.max_sessions = max_sessions;
      // Block the stop signals before any thread starts so only sigwait sees them.
      sigset_t stop_signals;
      sigemptyset(&stop_signals);
      sigaddset(&stop_signals, SIGINT);
      sigaddset(&stop_signals, SIGTERM);
      pthread_sigmask(SIG_BLOCK, &stop_signals, nullptr);
      service::SessionService svc(cfg);
      svc.start();
      std::cerr << "listening on " << cfg.host << ":" << svc.port() << ", records in "
                << cfg.data_dir.string() << "\n";
      int sig = 0;
      sigwait(&stop_signals, &sig);
      svc.stop();
      return kExitOk;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitOk;
}
