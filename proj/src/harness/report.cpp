#include "sharedctl/harness/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sharedctl {

namespace {

std::string num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& s) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw std::runtime_error("bad number '" + s + "'");
  }
  return v;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, sep)) out.push_back(cell);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

std::string sanitize(std::string s) {
  for (char& c : s) {
    if (c == ',' || c == '\n' || c == '\r') c = ' ';
  }
  return s;
}

void write_test(std::ostream& out, const HypothesisResult& h) {
  out << h.id << " data=" << h.data << " test=" << h.test;
  if (!h.computable) {
    out << " not-computable reason=\"" << h.note << "\"";
  } else {
    out << " F=" << num(h.anova.F) << " p=" << num(h.anova.p) << " df=" << h.anova.df_between
        << "," << h.anova.df_within;
    if (h.anova.exact) out << " exact";
  }
  out << " groups=";
  for (std::size_t i = 0; i < h.groups.size(); ++i) {
    const auto& g = h.groups[i];
    if (i) out << ";";
    out << g.label << ":n=" << g.n << ",mean=" << num(g.mean) << ",var=" << num(g.variance);
  }
  out << "\n";
}

}  // namespace

std::string metrics_csv_header() {
  std::string h = "profile,mode,hand,seed,completed,error";
  for (const auto& name : metric_names()) h += "," + name;
  return h;
}

void write_metrics_csv(std::ostream& out, const std::vector<TrialOutcome>& trials) {
  out << metrics_csv_header() << "\n";
  for (const auto& t : trials) {
    const auto& r = t.row;
    out << r.profile << "," << to_string(r.mode) << "," << to_string(r.hand) << "," << r.seed
        << "," << (r.completed ? 1 : 0) << "," << sanitize(r.error);
    for (double v : metric_values(r.metrics)) {
      out << ",";
      if (r.completed) out << num(v);
    }
    out << "\n";
  }
}

std::vector<TrialRow> read_metrics_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("metrics: empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != metrics_csv_header()) throw std::runtime_error("metrics: unexpected header");
  const std::size_t cols = split(line, ',').size();
  std::vector<TrialRow> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    try {
      if (cells.size() != cols) throw std::runtime_error("wrong number of columns");
      TrialRow r;
      r.profile = cells[0];
      const auto mode = parse_mode(cells[1]);
      if (!mode) throw std::runtime_error("unknown mode '" + cells[1] + "'");
      r.mode = *mode;
      if (cells[2] == "D") {
        r.hand = Hand::Dominant;
      } else if (cells[2] == "N") {
        r.hand = Hand::NonDominant;
      } else {
        throw std::runtime_error("unknown hand '" + cells[2] + "'");
      }
      r.seed = std::stoull(cells[3]);
      r.completed = cells[4] == "1";
      r.error = cells[5];
      if (r.completed) {
        double* fields[] = {&r.metrics.completion_time,    &r.metrics.mean_force,
                            &r.metrics.rmspe,              &r.metrics.intervention_level,
                            &r.metrics.command_variation,  &r.metrics.disagreement,
                            &r.metrics.mean_eta_h,         &r.metrics.mean_eta_r,
                            &r.metrics.mean_eta_s};
        for (std::size_t i = 0; i < std::size(fields); ++i) *fields[i] = parse_double(cells[6 + i]);
      }
      rows.push_back(std::move(r));
    } catch (const std::exception& e) {
      throw std::runtime_error("metrics line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return rows;
}

std::vector<TrialRow> read_metrics_csv_file(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot read " + file.string());
  return read_metrics_csv(in);
}

void write_hypotheses(std::ostream& out, const std::vector<TrialRow>& rows,
                      const std::vector<HypothesisResult>& hypotheses,
                      const std::vector<HypothesisResult>& comparisons,
                      const std::vector<std::string>& failures) {
  std::size_t completed = 0;
  for (const auto& r : rows) completed += r.completed ? 1 : 0;
  out << "sharedctl hypothesis report v1\n";
  out << "trials: " << rows.size() << "\n";
  out << "completed: " << completed << "\n";
  out << "failed: " << rows.size() - completed << "\n";
  out << "upper_tercile:";
  for (const auto& p : upper_tercile(rows)) out << " " << p;
  out << "\n\n[hypotheses]\n";
  for (const auto& h : hypotheses) write_test(out, h);
  out << "\n[comparisons]\n";
  for (const auto& h : comparisons) write_test(out, h);
  if (!failures.empty()) {
    out << "\n[failures]\n";
    for (const auto& f : failures) out << f << "\n";
  }
}

std::string hypotheses_text(const std::vector<TrialRow>& rows) {
  std::vector<std::string> failures;
  for (const auto& r : rows) {
    if (!r.completed) failures.push_back(trial_name(r.profile, r.mode, r.hand) + ": " + sanitize(r.error));
  }
  std::ostringstream out;
  write_hypotheses(out, rows, evaluate_hypotheses(rows), evaluate_comparisons(rows), failures);
  return out.str();
}

void write_histogram_csv(std::ostream& out, const Histogram2D& h) {
  out << "# " << h.name << " x=" << h.x_label << " y=" << h.y_label << "\n";
  out << "x_lo,x_hi,y_lo,y_hi,count\n";
  const double dx = (h.x_max - h.x_min) / static_cast<double>(h.nx);
  const double dy = (h.y_max - h.y_min) / static_cast<double>(h.ny);
  for (std::size_t iy = 0; iy < h.ny; ++iy) {
    for (std::size_t ix = 0; ix < h.nx; ++ix) {
      out << num(h.x_min + dx * ix) << "," << num(h.x_min + dx * (ix + 1)) << ","
          << num(h.y_min + dy * iy) << "," << num(h.y_min + dy * (iy + 1)) << ","
          << h.counts[iy * h.nx + ix] << "\n";
    }
  }
}

void write_report(const std::filesystem::path& dir, const ExperimentReport& report) {
  std::filesystem::create_directories(dir);
  auto open = [&](const std::string& name) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
    return out;
  };
  {
    auto out = open("metrics.csv");
    write_metrics_csv(out, report.trials);
  }
  {
    auto out = open("hypotheses.txt");
    out << hypotheses_text(report.rows());
  }
  for (const auto& [mode, hists] : report.histograms) {
    for (const auto& h : hists) {
      auto out = open("hist_" + std::string(to_string(mode)) + "_" + h.name + ".csv");
      write_histogram_csv(out, h);
    }
  }
}

}  // namespace sharedctl
