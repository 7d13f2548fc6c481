#include "sharedctl/harness/plot.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "sharedctl/harness/report.hpp"

namespace sharedctl {

namespace {

constexpr double kW = 640;
constexpr double kH = 400;
constexpr double kLeft = 70;
constexpr double kRight = 20;
constexpr double kTop = 40;
constexpr double kBottom = 60;

std::string fmt(double v) {
  std::ostringstream o;
  o.precision(4);
  o << v;
  return o.str();
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

void header(std::ostringstream& o, const std::string& title) {
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
    << "\" font-family=\"sans-serif\" font-size=\"11\">\n"
    << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    << "<text x=\"" << kW / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
    << escape(title) << "</text>\n";
}

double metric_of(const TrialMetrics& m, const std::string& name) {
  const auto& names = metric_names();
  const auto values = metric_values(m);
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return values[i];
  }
  throw std::invalid_argument("unknown metric " + name);
}

// Viridis-like ramp, t in [0,1].
std::string color(double t) {
  static const double stops[5][3] = {
      {68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}};
  t = std::clamp(t, 0.0, 1.0) * 4.0;
  const int i = std::min(3, static_cast<int>(t));
  const double u = t - i;
  char buf[16];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x",
                static_cast<int>(stops[i][0] + u * (stops[i + 1][0] - stops[i][0])),
                static_cast<int>(stops[i][1] + u * (stops[i + 1][1] - stops[i][1])),
                static_cast<int>(stops[i][2] + u * (stops[i + 1][2] - stops[i][2])));
  return buf;
}

}  // namespace

std::string metric_strip_svg(const std::vector<TrialRow>& rows, const std::string& metric) {
  const Mode modes[] = {Mode::Standalone, Mode::Shared, Mode::Impedance};
  const Hand hands[] = {Hand::Dominant, Hand::NonDominant};
  std::vector<std::vector<double>> cols;
  std::vector<std::string> labels;
  double lo = INFINITY;
  double hi = -INFINITY;
  for (Mode m : modes) {
    for (Hand h : hands) {
      auto& c = cols.emplace_back();
      labels.push_back(std::string(to_string(h)) + "/" + std::string(to_string(m)));
      for (const auto& r : rows) {
        if (r.completed && r.mode == m && r.hand == h) {
          const double v = metric_of(r.metrics, metric);
          c.push_back(v);
          lo = std::min(lo, v);
          hi = std::max(hi, v);
        }
      }
    }
  }
  if (!(lo <= hi)) {
    lo = 0.0;
    hi = 1.0;
  }
  if (hi - lo < 1e-12) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double pad = 0.05 * (hi - lo);
  lo -= pad;
  hi += pad;
  const double pw = kW - kLeft - kRight;
  const double ph = kH - kTop - kBottom;
  auto y_of = [&](double v) { return kTop + ph * (1.0 - (v - lo) / (hi - lo)); };

  std::ostringstream o;
  header(o, metric);
  o << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\""
    << kTop + ph << "\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double v = lo + (hi - lo) * k / 4.0;
    o << "<text x=\"" << kLeft - 6 << "\" y=\"" << y_of(v) + 4 << "\" text-anchor=\"end\">"
      << fmt(v) << "</text>\n";
  }
  const double cw = pw / static_cast<double>(cols.size());
  for (std::size_t i = 0; i < cols.size(); ++i) {
    const double cx = kLeft + cw * (i + 0.5);
    o << "<text x=\"" << cx << "\" y=\"" << kTop + ph + 18 << "\" text-anchor=\"middle\">"
      << labels[i] << "</text>\n";
    double mean = 0.0;
    for (std::size_t j = 0; j < cols[i].size(); ++j) {
      const double jitter = (static_cast<double>(j % 7) - 3.0) * cw * 0.04;
      o << "<circle cx=\"" << cx + jitter << "\" cy=\"" << y_of(cols[i][j])
        << "\" r=\"3\" fill=\"#3b528b\" fill-opacity=\"0.7\"/>\n";
      mean += cols[i][j];
    }
    if (!cols[i].empty()) {
      mean /= static_cast<double>(cols[i].size());
      o << "<line x1=\"" << cx - cw * 0.3 << "\" x2=\"" << cx + cw * 0.3 << "\" y1=\""
        << y_of(mean) << "\" y2=\"" << y_of(mean) << "\" stroke=\"#d62728\" stroke-width=\"2\"/>\n";
    }
  }
  o << "</svg>\n";
  return o.str();
}

std::string histogram_svg(const Histogram2D& h, const std::string& title) {
  const double pw = kW - kLeft - kRight;
  const double ph = kH - kTop - kBottom;
  const double cw = pw / static_cast<double>(h.nx);
  const double chh = ph / static_cast<double>(h.ny);
  std::uint64_t peak = 0;
  for (auto c : h.counts) peak = std::max(peak, c);
  const double norm = std::log1p(static_cast<double>(peak));

  std::ostringstream o;
  header(o, title);
  for (std::size_t iy = 0; iy < h.ny; ++iy) {
    for (std::size_t ix = 0; ix < h.nx; ++ix) {
      const auto c = h.counts[iy * h.nx + ix];
      const double t = norm > 0 ? std::log1p(static_cast<double>(c)) / norm : 0.0;
      o << "<rect x=\"" << kLeft + cw * ix << "\" y=\"" << kTop + ph - chh * (iy + 1)
        << "\" width=\"" << cw + 0.5 << "\" height=\"" << chh + 0.5 << "\" fill=\""
        << (c ? color(t) : std::string("#f4f4f4")) << "\"/>\n";
    }
  }
  o << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kH - 20 << "\" text-anchor=\"middle\">"
    << escape(h.x_label) << " [" << fmt(h.x_min) << ", " << fmt(h.x_max) << "]</text>\n";
  o << "<text x=\"18\" y=\"" << kTop + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
    << kTop + ph / 2 << ")\">" << escape(h.y_label) << " [" << fmt(h.y_min) << ", "
    << fmt(h.y_max) << "]</text>\n";
  o << "</svg>\n";
  return o.str();
}

Histogram2D read_histogram_csv(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot read " + file.string());
  std::string line;
  std::getline(in, line);
  Histogram2D h;
  {
    std::istringstream meta(line);
    std::string hash, xs, ys;
    meta >> hash >> h.name >> xs >> ys;
    if (hash != "#" || xs.rfind("x=", 0) != 0 || ys.rfind("y=", 0) != 0) {
      throw std::runtime_error(file.string() + ": bad histogram header");
    }
    h.x_label = xs.substr(2);
    h.y_label = ys.substr(2);
  }
  std::getline(in, line);
  std::vector<std::array<double, 5>> cells;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::array<double, 5> c{};
    std::istringstream row(line);
    std::string cell;
    for (auto& v : c) {
      if (!std::getline(row, cell, ',')) throw std::runtime_error(file.string() + ": short row");
      v = std::stod(cell);
    }
    cells.push_back(c);
  }
  if (cells.empty()) throw std::runtime_error(file.string() + ": no cells");
  h.x_min = h.y_min = INFINITY;
  h.x_max = h.y_max = -INFINITY;
  for (const auto& c : cells) {
    h.x_min = std::min(h.x_min, c[0]);
    h.x_max = std::max(h.x_max, c[1]);
    h.y_min = std::min(h.y_min, c[2]);
    h.y_max = std::max(h.y_max, c[3]);
  }
  const double dx = cells[0][1] - cells[0][0];
  const double dy = cells[0][3] - cells[0][2];
  h.nx = static_cast<std::size_t>(std::llround((h.x_max - h.x_min) / dx));
  h.ny = static_cast<std::size_t>(std::llround((h.y_max - h.y_min) / dy));
  h.counts.assign(h.nx * h.ny, 0);
  for (const auto& c : cells) {
    const auto ix = static_cast<std::size_t>(std::llround((c[0] - h.x_min) / dx));
    const auto iy = static_cast<std::size_t>(std::llround((c[2] - h.y_min) / dy));
    if (ix >= h.nx || iy >= h.ny) throw std::runtime_error(file.string() + ": cell off grid");
    h.counts[iy * h.nx + ix] = static_cast<std::uint64_t>(c[4]);
  }
  return h;
}

std::vector<std::filesystem::path> write_plots(const std::filesystem::path& report_dir,
                                               const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  std::vector<std::filesystem::path> written;
  auto save = [&](const std::string& name, const std::string& svg) {
    const auto file = out_dir / name;
    std::ofstream out(file, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + file.string());
    out << svg;
    written.push_back(file);
  };
  const auto rows = read_metrics_csv_file(report_dir / "metrics.csv");
  for (const auto& name : metric_names()) save("metric_" + name + ".svg", metric_strip_svg(rows, name));

  std::vector<std::filesystem::path> hists;
  for (const auto& entry : std::filesystem::directory_iterator(report_dir)) {
    const auto fname = entry.path().filename().string();
    if (fname.rfind("hist_", 0) == 0 && entry.path().extension() == ".csv") {
      hists.push_back(entry.path());
    }
  }
  std::sort(hists.begin(), hists.end());
  for (const auto& file : hists) {
    const auto h = read_histogram_csv(file);
    save(file.stem().string() + ".svg", histogram_svg(h, file.stem().string()));
  }
  return written;
}

}  // namespace sharedctl
