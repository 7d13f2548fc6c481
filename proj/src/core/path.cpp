#include "sharedctl/core/path.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

namespace sharedctl {

std::string_view to_string(Mode mode) {
  switch (mode) {
    case Mode::Standalone: return "standalone";
    case Mode::Shared: return "shared";
    case Mode::Impedance: return "impedance";
  }
  return "unknown";
}

std::optional<Mode> parse_mode(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "standalone" || lower == "a") return Mode::Standalone;
  if (lower == "shared" || lower == "s") return Mode::Shared;
  if (lower == "impedance" || lower == "i") return Mode::Impedance;
  return std::nullopt;
}

PathSpec::PathSpec(std::vector<Vec3> samples, bool closed)
    : samples_(std::move(samples)), closed_(closed) {
  if (samples_.size() < kMinSamples) {
    throw std::invalid_argument("path needs at least 8 samples, got " +
                                std::to_string(samples_.size()));
  }
  for (const auto& p : samples_) {
    if (!all_finite(p)) throw std::invalid_argument("path sample is not finite");
  }
  min_seg_ = std::numeric_limits<double>::infinity();
  max_seg_ = 0.0;
  for (std::size_t i = 0; i < n_segments(); ++i) {
    const double len = (segment_end(i) - segment_start(i)).norm();
    if (len <= kEpsLen) {
      throw std::invalid_argument("path segment " + std::to_string(i) + " has zero length");
    }
    min_seg_ = std::min(min_seg_, len);
    max_seg_ = std::max(max_seg_, len);
    length_ += len;
  }
  if (max_seg_ > 2.0 * min_seg_) {
    throw std::invalid_argument("path samples are not arc-length uniform (max segment > 2x min)");
  }
  for (const auto& p : samples_) centroid_ += p;
  centroid_ /= static_cast<double>(samples_.size());
  for (const auto& p : samples_) radius_ += (p - centroid_).norm();
  radius_ /= static_cast<double>(samples_.size());
}

double PathSpec::normalize(double s) const {
  if (!std::isfinite(s)) throw std::domain_error("path parameter is not finite");
  if (closed_) {
    double w = s - std::floor(s);
    return w >= 1.0 ? 0.0 : w;
  }
  if (s < 0.0 || s > 1.0) {
    throw std::domain_error("open path parameter outside [0,1]: " + std::to_string(s));
  }
  return s;
}

double PathSpec::forward_distance(double a, double b) {
  double d = b - a;
  d -= std::floor(d);
  return d >= 1.0 ? 0.0 : d;
}

namespace {

struct Bracket {
  std::size_t seg;
  double frac;
};

Bracket bracket(const PathSpec& path, double s) {
  const double u = path.normalize(s) * static_cast<double>(path.n_segments());
  auto seg = static_cast<std::size_t>(std::floor(u));
  if (seg >= path.n_segments()) seg = path.n_segments() - 1;
  return {seg, u - static_cast<double>(seg)};
}

Vec3 vertex_tangent(const PathSpec& path, std::size_t i) {
  const auto pts = path.samples();
  const std::size_t n = pts.size();
  Vec3 t;
  if (path.closed()) {
    t = pts[(i + 1) % n] - pts[(i + n - 1) % n];
  } else if (i == 0) {
    t = pts[1] - pts[0];
  } else if (i == n - 1) {
    t = pts[n - 1] - pts[n - 2];
  } else {
    t = pts[i + 1] - pts[i - 1];
  }
  const double len = t.norm();
  // Hairpin: central difference cancels, use the outgoing segment.
  if (len <= kEpsLen) t = path.segment_end(std::min(i, path.n_segments() - 1)) - pts[i];
  return t.normalized();
}

}  // namespace

Vec3 path_point(const PathSpec& path, double s) {
  const auto [seg, frac] = bracket(path, s);
  const Vec3& a = path.segment_start(seg);
  const Vec3& b = path.segment_end(seg);
  return a + frac * (b - a);
}

Vec3 path_tangent(const PathSpec& path, double s) {
  const auto [seg, frac] = bracket(path, s);
  const std::size_t next = (seg + 1) % path.n_samples();
  Vec3 t = (1.0 - frac) * vertex_tangent(path, seg) + frac * vertex_tangent(path, next);
  if (t.norm() <= kEpsLen) t = path.segment_end(seg) - path.segment_start(seg);
  return t.normalized();
}

PathSpec make_circle_path(const CircleSpec& spec) {
  if (!(spec.radius > kEpsLen)) throw std::invalid_argument("circle radius must be > 0");
  if (spec.samples < PathSpec::kMinSamples) throw std::invalid_argument("circle needs >= 8 samples");
  Vec3 e1;
  Vec3 e2;
  switch (spec.plane) {
    case Plane::XY: e1 = Vec3::UnitX(); e2 = Vec3::UnitY(); break;
    case Plane::XZ: e1 = Vec3::UnitX(); e2 = -Vec3::UnitZ(); break;  // e1 x e2 = +y
    case Plane::YZ: e1 = Vec3::UnitY(); e2 = Vec3::UnitZ(); break;
  }
  const double sign = spec.direction == Direction::Clockwise ? -1.0 : 1.0;
  std::vector<Vec3> pts;
  pts.reserve(spec.samples);
  for (std::size_t i = 0; i < spec.samples; ++i) {
    const double th = sign * 2.0 * kPi * static_cast<double>(i) / static_cast<double>(spec.samples);
    pts.push_back(spec.center + spec.radius * (std::cos(th) * e1 + std::sin(th) * e2));
  }
  PathSpec path(std::move(pts), true);
  path.set_characteristic_radius(spec.radius);
  return path;
}

PathSpec resample_polyline(std::span<const Vec3> points, bool closed, std::size_t n) {
  if (points.size() < 2) throw std::invalid_argument("polyline needs at least 2 points");
  std::vector<Vec3> pts(points.begin(), points.end());
  if (closed && (pts.front() - pts.back()).norm() <= kEpsLen) pts.pop_back();
  if (closed) pts.push_back(pts.front());
  std::vector<double> cum(pts.size(), 0.0);
  for (std::size_t i = 1; i < pts.size(); ++i) cum[i] = cum[i - 1] + (pts[i] - pts[i - 1]).norm();
  const double total = cum.back();
  if (!(total > kEpsLen)) throw std::invalid_argument("polyline has zero length");
  const std::size_t count = std::max(n, PathSpec::kMinSamples);
  const double denom = closed ? static_cast<double>(count) : static_cast<double>(count - 1);
  std::vector<Vec3> out;
  out.reserve(count);
  std::size_t j = 0;
  for (std::size_t i = 0; i < count; ++i) {
    const double target = total * static_cast<double>(i) / denom;
    while (j + 2 < cum.size() && cum[j + 1] < target) ++j;
    const double span = cum[j + 1] - cum[j];
    const double f = span > 0.0 ? std::clamp((target - cum[j]) / span, 0.0, 1.0) : 0.0;
    out.push_back(pts[j] + f * (pts[j + 1] - pts[j]));
  }
  return PathSpec(std::move(out), closed);
}

namespace {

Plane parse_plane(const std::string& s) {
  if (s == "xy") return Plane::XY;
  if (s == "xz") return Plane::XZ;
  if (s == "yz") return Plane::YZ;
  throw std::runtime_error("unknown circle plane '" + s + "' (expected xy, xz or yz)");
}

Direction parse_direction(const std::string& s) {
  if (s == "cw" || s == "clockwise") return Direction::Clockwise;
  if (s == "ccw" || s == "counterclockwise") return Direction::CounterClockwise;
  throw std::runtime_error("unknown circle direction '" + s + "'");
}

Vec3 json_vec3(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 3) throw std::runtime_error("expected [x, y, z]");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

PathSpec path_from_json_impl(const nlohmann::json& doc) {
  if (doc.contains("circle")) {
    const auto& c = doc["circle"];
    CircleSpec spec;
    if (c.contains("center")) spec.center = json_vec3(c["center"]);
    spec.radius = c.value("radius", spec.radius);
    if (c.contains("plane")) spec.plane = parse_plane(c["plane"].get<std::string>());
    if (c.contains("direction")) spec.direction = parse_direction(c["direction"].get<std::string>());
    spec.samples = c.value("samples", spec.samples);
    return make_circle_path(spec);
  }
  if (doc.contains("points")) {
    std::vector<Vec3> pts;
    for (const auto& p : doc["points"]) pts.push_back(json_vec3(p));
    const bool closed = doc.value("closed", true);
    if (doc.value("exact", false)) {
      PathSpec path(std::move(pts), closed);
      if (doc.contains("characteristic_radius")) {
        path.set_characteristic_radius(doc["characteristic_radius"].get<double>());
      }
      return path;
    }
    const std::size_t n = doc.value("samples", std::size_t{2048});
    return resample_polyline(pts, closed, n);
  }
  throw std::runtime_error("path document needs a 'circle' or 'points' entry");
}

}  // namespace

PathSpec path_from_json(const nlohmann::json& doc) { return path_from_json_impl(doc); }

PathSpec load_path_file(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open path file " + file.string());
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    try {
      return path_from_json_impl(nlohmann::json::parse(text));
    } catch (const nlohmann::json::exception& e) {
      throw std::runtime_error(file.string() + ": " + e.what());
    }
  }
  std::vector<Vec3> pts;
  bool closed = true;
  std::istringstream lines(text);
  std::string line;
  int lineno = 0;
  while (std::getline(lines, line)) {
    ++lineno;
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos || line[b] == '#') continue;
    const std::string trimmed = line.substr(b, line.find_last_not_of(" \t\r") - b + 1);
    if (trimmed == "open") { closed = false; continue; }
    if (trimmed == "closed") { closed = true; continue; }
    std::istringstream ls(trimmed);
    double x, y, z;
    if (!(ls >> x >> y >> z)) {
      throw std::runtime_error(file.string() + ":" + std::to_string(lineno) + ": expected 'x y z'");
    }
    pts.emplace_back(x, y, z);
  }
  // Point lists are taken as given when already uniform, otherwise resampled.
  try {
    return PathSpec(pts, closed);
  } catch (const std::invalid_argument&) {
    return resample_polyline(pts, closed, std::max<std::size_t>(pts.size(), 2048));
  }
}

}  // namespace sharedctl
