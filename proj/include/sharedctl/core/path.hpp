#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "sharedctl/core/types.hpp"

namespace sharedctl {

// Reference path P(s), s in [0,1], stored as an approximately arc-length
// uniform polyline. Closed paths wrap s modulo 1 and include the segment from
// the last sample back to the first.
class PathSpec {
 public:
  static constexpr std::size_t kMinSamples = 8;

  // Throws std::invalid_argument if the samples violate the path invariants
  // (fewer than 8 samples, repeated consecutive samples, non-uniform spacing).
  PathSpec(std::vector<Vec3> samples, bool closed);

  std::span<const Vec3> samples() const { return samples_; }
  std::size_t n_samples() const { return samples_.size(); }
  bool closed() const { return closed_; }

  std::size_t n_segments() const { return closed_ ? samples_.size() : samples_.size() - 1; }
  // Endpoints of segment i; the closing segment of a closed path ends at sample 0.
  const Vec3& segment_start(std::size_t i) const { return samples_[i]; }
  const Vec3& segment_end(std::size_t i) const { return samples_[(i + 1) % samples_.size()]; }

  double min_segment_length() const { return min_seg_; }
  double max_segment_length() const { return max_seg_; }
  double length() const { return length_; }
  // Parameter width of one segment.
  double segment_span() const { return 1.0 / static_cast<double>(n_segments()); }

  const Vec3& centroid() const { return centroid_; }
  // Circle radius when built by make_circle_path, otherwise the mean distance
  // of the samples to their centroid.
  double characteristic_radius() const { return radius_; }
  void set_characteristic_radius(double r) { radius_ = r; }

  // Wraps s into [0,1) for closed paths; for open paths throws
  // std::domain_error when s is outside [0,1] or not finite.
  double normalize(double s) const;
  // Forward parameter distance from a to b on a closed path, in [0,1).
  static double forward_distance(double a, double b);

 private:
  std::vector<Vec3> samples_;
  bool closed_;
  double min_seg_ = 0.0;
  double max_seg_ = 0.0;
  double length_ = 0.0;
  Vec3 centroid_ = Vec3::Zero();
  double radius_ = 0.0;
};

enum class Plane { XY, XZ, YZ };
enum class Direction { Clockwise, CounterClockwise };

struct CircleSpec {
  Vec3 center = Vec3::Zero();
  double radius = 0.05;
  Plane plane = Plane::XY;
  Direction direction = Direction::Clockwise;
  std::size_t samples = 2048;
};

// Circle starting at center + radius * (first plane axis). Clockwise is
// judged looking down the plane normal (z for XY, y for XZ, x for YZ).
PathSpec make_circle_path(const CircleSpec& spec);

// Resamples an arbitrary polyline to n arc-length uniform samples.
PathSpec resample_polyline(std::span<const Vec3> points, bool closed, std::size_t n);

// Position on the path by linear interpolation between bracketing samples.
Vec3 path_point(const PathSpec& path, double s);

// Unit tangent in the direction of increasing s. Central differences at the
// bracketing samples, interpolated and renormalized.
Vec3 path_tangent(const PathSpec& path, double s);

// Loads either a JSON document ({"circle": {...}} or {"points": [...],
// "closed": bool}) or a plain point list with one "x y z" triple per line.
// Point lists are closed unless a line reads "open". Lines starting with '#'
// are comments. Throws std::runtime_error on malformed input.
PathSpec load_path_file(const std::filesystem::path& file);
PathSpec path_from_json(const nlohmann::json& doc);

}  // namespace sharedctl
