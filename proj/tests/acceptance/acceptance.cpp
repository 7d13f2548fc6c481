// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "oracles.hpp"
#include "sharedctl/control/controller.hpp"
#include "sharedctl/harness/anova.hpp"
#include "sharedctl/harness/matrix.hpp"
#include "sharedctl/harness/metrics.hpp"
#include "sharedctl/session/telemetry.hpp"

using namespace sharedctl;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
  std::vector<std::string> notes;  // extra lines printed under the verdict
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

bool finite(const Vec3& v) { return std::isfinite(v.x()) && std::isfinite(v.y()) && std::isfinite(v.z()); }

// ---------------------------------------------------------------------------

Outcome admittance_steady_state() {
  ControllerParams p;
  p.M = Vec3(1, 1, 1);
  p.B = Vec3(83.3, 83.3, 83.3);
  p.dt = 0.001;
  AdmittanceState s;
  Vec3 v_h = Vec3::Zero();
  for (int k = 0; k < 100; ++k) {
    const auto out = admittance_step(s, Vec3(8.33, 0, 0), p);
    s = out.state;
    v_h = out.v_h;
  }
  const double err = (v_h - Vec3(0.1, 0, 0)).cwiseAbs().maxCoeff();
  return {err <= 1e-4, fmt("v_h(0.1 s) = (%.7f, %g, %g), max error %.2e (tol 1e-4)", v_h.x(),
                           v_h.y(), v_h.z(), err)};
}

Outcome performance_points() {
  ControllerParams p;
  p.C = {1.0, 1.0};
  p.w = {0.5, 0.5};
  const Vec3 t(1, 0, 0);
  const auto aligned = performance(Vec3(0.2, 0, 0), Vec3(0.05, 0, 0), t, p);
  const auto square = performance(Vec3(0, 0.2, 0), Vec3(0.05, 0, 0), t, p);
  const double want = std::exp(-kPi / 2);
  const double e0 = std::abs(aligned.eta - 1.0);
  const double e1 = std::abs(square.eta - want);
  const double e1a = std::abs(square.eta1 - want);
  const double e1b = std::abs(square.eta2 - want);
  const double worst = std::max({e0, e1, e1a, e1b});
  return {worst <= 1e-6,
          fmt("eta(0) = %.12f, eta(pi/2) = %.12f vs %.12f, max error %.2e (tol 1e-6)",
              aligned.eta, square.eta, want, worst)};
}

Outcome follower_vs_brute_force() {
  std::mt19937_64 gen(0xF0110);
  ControllerParams p;
  std::size_t mismatches = 0, regressions = 0, degraded = 0, degraded_disagree = 0;
  double worst_excess = -1.0;
  std::string first_bad;
  for (int i = 0; i < 1000; ++i) {
    const auto inst = oracle::random_instance(gen);
    FollowerState st;
    const auto near = nearest_param(inst.path, inst.x);
    st.s_prev = near.s_near;
    st.last_s_near = near.s_near;
    const auto g = select_goal(inst.path, inst.x, st, p);
    const auto ref = oracle::brute_force_goal(inst.path, inst.x, g.s_near, g.rho, 100000);
    const double tol = inst.path.segment_span() + kForwardWindow / 100000;
    const double gap = oracle::wrapped_gap(ref.s, g.s_c);
    worst_excess = std::max(worst_excess, gap - tol);
    if (gap > tol) {
      ++mismatches;
      if (first_bad.empty()) first_bad = fmt("instance %d: s_c %.6f vs %.6f", i, g.s_c, ref.s);
    }
    if (!(oracle::forward(g.s_near, g.s_c) > 0.0)) ++regressions;
    degraded += g.degraded;
    degraded_disagree += g.degraded == ref.crossing;
  }
  Outcome o;
  o.pass = mismatches == 0 && regressions == 0 && degraded_disagree == 0;
  o.detail = fmt("1000 instances: %zu goal mismatches, %zu forward-progress violations, %zu degraded "
                 "(%zu disagree with the scan), worst excess over spacing %.2e",
                 mismatches, regressions, degraded, degraded_disagree, worst_excess);
  if (!first_bad.empty()) o.notes.push_back(first_bad);
  return o;
}

Outcome fuzz() {
  std::mt19937_64 gen(0xF122);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::normal_distribution<double> n01;
  std::cauchy_distribution<double> heavy(0.0, 5.0);
  const std::size_t total = 1000000;
  std::size_t ticks = 0, segments = 0, violations = 0;
  std::string first_bad;
  double max_speed = 0.0;
  while (ticks < total) {
    ++segments;
    ControllerParams p;
    p.M = Vec3(0.2 + 3 * u01(gen), 0.2 + 3 * u01(gen), 0.2 + 3 * u01(gen));
    p.B = Vec3(1 + 200 * u01(gen), 1 + 200 * u01(gen), 1 + 200 * u01(gen));
    p.K_a = Vec3(5 * u01(gen), 5 * u01(gen), 5 * u01(gen));
    const double w1 = u01(gen);
    p.w = {w1, 1.0 - w1};
    p.C = {5 * u01(gen), 5 * u01(gen)};
    p.lambda = 1.0 + 2.0 * u01(gen);
    p.rho_min = 0.002 + 0.05 * u01(gen);
    p.v_max = 0.01 + 0.5 * u01(gen);
    p.filter_cutoff_hz = 0.2 + 30 * u01(gen);
    p.activity_gate = u01(gen) < 0.8;
    ImpedanceParams imp;
    imp.deadband = 0.02 * u01(gen);
    imp.k_n = 10 * u01(gen);
    imp.v_tangent = 0.1 * u01(gen);
    const Mode mode = static_cast<Mode>(gen() % 3);
    std::optional<int> lock;
    if (u01(gen) < 0.5) lock = static_cast<int>(gen() % 3);

    auto inst = oracle::random_instance(gen);
    const std::size_t n = 64 + gen() % 961;
    PathSpec path = resample_polyline(inst.path.samples(), true, n);
    Controller ctl(path, mode, p, imp, lock);
    Vec3 x = inst.x;
    const std::size_t len = std::min<std::size_t>(total - ticks, 500 + gen() % 4500);
    for (std::size_t k = 0; k < len; ++k, ++ticks) {
      TickInput in;
      in.t = static_cast<double>(k) * p.dt;
      const double r = u01(gen);
      if (r < 0.05) {
        in.f = Vec3::Zero();
      } else if (r < 0.15) {
        in.f = Vec3(heavy(gen), heavy(gen), heavy(gen));
      } else {
        in.f = 10.0 * Vec3(n01(gen), n01(gen), n01(gen));
      }
      in.stale = u01(gen) < 0.01;
      if (u01(gen) < 0.001) x = inst.x + Vec3(n01(gen), n01(gen), n01(gen)) * 0.2;
      in.x = x;
      const ControlFrame fr = ctl.tick(in);
      bool ok = fr.v_s.norm() <= p.v_max && finite(fr.v_s) && finite(fr.v_h) && finite(fr.v_r) &&
                finite(fr.v_hat_s) && finite(fr.goal) && std::isfinite(fr.d) &&
                std::isfinite(fr.s_c) && std::isfinite(fr.s_near);
      for (double e : {fr.eta_h, fr.eta_r, fr.eta_s}) ok = ok && e >= 0.0 && e <= 1.0;
      for (const auto& fp : fr.eta_factors) {
        for (double e : {fp.eta1, fp.eta2}) ok = ok && e >= 0.0 && e <= 1.0;
        ok = ok && std::isfinite(fp.alpha1) && std::isfinite(fp.alpha2);
      }
      if (!ok) {
        ++violations;
        if (first_bad.empty()) {
          first_bad = fmt("segment %zu tick %zu mode %s: |v_s| %.17g v_max %.17g", segments, k,
                          std::string(to_string(mode)).c_str(), fr.v_s.norm(), p.v_max);
        }
      }
      max_speed = std::max(max_speed, fr.v_s.norm() / p.v_max);
      x += fr.v_s * p.dt;
    }
  }
  Outcome o;
  o.pass = violations == 0;
  o.detail = fmt("%zu ticks over %zu random segments: %zu violations, max |v_s|/v_max %.17g", ticks,
                 segments, violations, max_speed);
  if (!first_bad.empty()) o.notes.push_back(first_bad);
  return o;
}

Outcome standalone_equivalence() {
  std::size_t frames = 0, diffs = 0;
  // Closed loop with the synthetic operator, then an open-loop random force trace.
  for (bool locked : {false, true}) {
    Scenario sc;
    sc.mode = Mode::Standalone;
    if (!locked) sc.plane_lock.reset();
    const auto rec = run_trial(sc, default_population(kDefaultMasterSeed)[3], Hand::NonDominant, 77);
    oracle::StandaloneReference ref(sc.params);
    for (const auto& fr : rec.frames) {
      Vec3 expected = ref.step(fr.v_h, fr.f, fr.t);
      if (locked) expected[*sc.plane_lock] = 0.0;
      ++frames;
      if (!(fr.v_s == expected) || !(fr.v_hat_s == fr.v_h)) ++diffs;
    }
  }
  {
    std::mt19937_64 gen(5);
    std::normal_distribution<double> n01;
    ControllerParams p;
    Controller ctl(make_circle_path({}), Mode::Standalone, p);
    oracle::StandaloneReference ref(p);
    Vec3 x(0.05, 0, 0);
    for (int k = 0; k < 200000; ++k) {
      TickInput in;
      in.t = k * p.dt;
      in.f = (k / 700) % 3 == 0 ? Vec3::Zero() : Vec3(12 * n01(gen), 12 * n01(gen), 12 * n01(gen));
      in.x = x;
      const auto fr = ctl.tick(in);
      const Vec3 expected = ref.step(fr.v_h, in.f, in.t);
      ++frames;
      if (!(fr.v_s == expected)) ++diffs;
      x += fr.v_s * p.dt;
    }
  }
  return {diffs == 0, fmt("%zu frames compared bit for bit, %zu differ", frames, diffs)};
}

struct Claim {
  std::string label;
  const HypothesisResult* h = nullptr;
  int better = 0;  // index of the group that must have the larger statistic
  bool variance = false;
};

Outcome directional_reproduction() {
  const auto population = default_population(kDefaultMasterSeed);
  const auto report = run_matrix(population, Scenario{});
  auto find = [](const std::vector<HypothesisResult>& v, const std::string& id) {
    for (const auto& h : v) {
      if (h.id == id) return &h;
    }
    return static_cast<const HypothesisResult*>(nullptr);
  };
  // Group 0 is Standalone for H*, Shared for IC-*.
  const std::vector<Claim> claims = {
      {"Shared raises mean eta (H1)", find(report.hypotheses, "H1"), 1},
      {"Shared lowers RMSPE mean (H2)", find(report.hypotheses, "H2"), 0},
      {"Shared lowers RMSPE variance (H4)", find(report.hypotheses, "H4"), 0, true},
      {"Upper-tercile hand gap shrinks under Shared (H3')", find(report.hypotheses, "H3'"), 0},
      {"Impedance raises mean force (IC-force)", find(report.comparisons, "IC-force"), 1},
      {"Impedance raises disagreement (IC-disagreement)", find(report.comparisons, "IC-disagreement"), 1},
  };
  Outcome o;
  o.pass = report.failed() == 0 && report.trials.size() == 60;
  std::size_t held = 0;
  for (const auto& c : claims) {
    if (!c.h || !c.h->computable) {
      o.pass = false;
      o.notes.push_back("  " + c.label + ": not computable");
      continue;
    }
    const auto& g = c.h->groups;
    const double a = c.variance ? g[0].variance : g[0].mean;
    const double b = c.variance ? g[1].variance : g[1].mean;
    const bool direction = c.better == 0 ? a > b : b > a;
    const bool ok = direction && c.h->anova.p < 0.05;
    held += ok;
    o.pass = o.pass && ok;
    o.notes.push_back(fmt("  %s %s: %s %.6g vs %s %.6g, p = %.3g", ok ? "holds " : "FAILS ",
                          c.label.c_str(), g[0].label.c_str(), a, g[1].label.c_str(), b,
                          c.h->anova.p));
  }
  o.detail = fmt("%zu trials, %zu failed; %zu of %zu claims hold at p < 0.05", report.trials.size(),
                 report.failed(), held, claims.size());
  return o;
}

Outcome anova_fixtures() {
  std::ifstream in(SHAREDCTL_FIXTURE_DIR "/anova_fixtures.json");
  const auto doc = nlohmann::json::parse(in);
  double worst = 0.0;
  std::size_t cases = 0;
  for (const char* kind : {"anova", "levene"}) {
    for (const auto& e : doc.at(kind)) {
      const auto groups = e.at("groups").get<std::vector<std::vector<double>>>();
      const auto r = std::string(kind) == "anova" ? anova_oneway(groups) : levene_test(groups);
      const double F = e.at("F").get<double>();
      worst = std::max(worst, std::abs(r.F - F) / std::max(1.0, std::abs(F)));
      worst = std::max(worst, std::abs(r.p - e.at("p").get<double>()));
      ++cases;
    }
  }
  const auto same = anova_oneway({{0.3, 1.7, 2.2, 9.1}, {0.3, 1.7, 2.2, 9.1}, {0.3, 1.7, 2.2, 9.1}});
  const bool identical = same.F == 0.0 && same.p == 1.0;
  return {worst <= 1e-8 && identical,
          fmt("%zu reference cases, max deviation %.2e (tol 1e-8); identical groups F = %g, p = %g",
              cases, worst, same.F, same.p)};
}

Outcome replay() {
  const auto dir = fs::temp_directory_path() / "sharedctl_acceptance_replay";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const auto population = default_population(kDefaultMasterSeed);
  double worst = 0.0;
  std::size_t trials = 0;
  for (Mode m : {Mode::Standalone, Mode::Shared, Mode::Impedance}) {
    for (Hand h : {Hand::Dominant, Hand::NonDominant}) {
      const std::size_t idx = trials % population.size();
      Scenario sc;
      sc.mode = m;
      const auto rec = run_trial(sc, population[idx], h, trial_seed(kDefaultMasterSeed, idx, m, h));
      const auto file = dir / (trial_name(population[idx].id, m, h) + ".jsonl");
      write_telemetry_file(file, rec);
      const auto live = metric_values(compute_metrics(rec));
      const auto back = metric_values(compute_metrics(read_telemetry_file(file)));
      for (std::size_t i = 0; i < live.size(); ++i) worst = std::max(worst, std::abs(live[i] - back[i]));
      ++trials;
    }
  }
  fs::remove_all(dir);
  return {worst <= 1e-9, fmt("%zu trials, max metric deviation %.2e (tol 1e-9)", trials, worst)};
}

struct Criterion {
  std::string id;
  std::string name;
  double time_limit_s;  // 0: none
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  std::vector<std::string> only;
  app.add_option("--only", only, "Criterion ids to run (default: all)")->delimiter(',');
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria = {
      {"C1", "admittance steady state", 1.0, admittance_steady_state},
      {"C2", "performance point checks", 0.0, performance_points},
      {"C3", "path follower vs brute force", 30.0, follower_vs_brute_force},
      {"C4", "fuzz", 60.0, fuzz},
      {"C5", "standalone equivalence", 0.0, standalone_equivalence},
      {"C6", "directional reproduction", 300.0, directional_reproduction},
      {"C7", "ANOVA reference", 0.0, anova_fixtures},
      {"C8", "telemetry replay", 0.0, replay},
  };
  const std::set<std::string> wanted(only.begin(), only.end());
  int failed = 0;
  for (const auto& c : criteria) {
    if (!wanted.empty() && !wanted.count(c.id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::string timing = fmt("%.2f s", secs);
    if (c.time_limit_s > 0) {
      timing += fmt(" (limit %g s)", c.time_limit_s);
      if (secs >= c.time_limit_s) o.pass = false;
    }
    failed += !o.pass;
    std::printf("[%s] %s %s: %s; %s\n", o.pass ? "PASS" : "FAIL", c.id.c_str(), c.name.c_str(),
                o.detail.c_str(), timing.c_str());
    for (const auto& n : o.notes) std::printf("       %s\n", n.c_str());
    std::fflush(stdout);
  }
  std::printf("%d criterion(s) failed\n", failed);
  return failed == 0 ? 0 : 1;
}
