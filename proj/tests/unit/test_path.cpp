#include <gtest/gtest.h>

#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "sharedctl/core/path.hpp"

using namespace sharedctl;

TEST(PathSpec, RejectsTooFewSamples) {
  std::vector<Vec3> pts;
  for (int i = 0; i < 7; ++i) pts.emplace_back(i * 0.01, 0, 0);
  EXPECT_THROW(PathSpec(pts, false), std::invalid_argument);
}

TEST(PathSpec, RejectsRepeatedSample) {
  std::vector<Vec3> pts;
  for (int i = 0; i < 10; ++i) pts.emplace_back(i * 0.01, 0, 0);
  pts[4] = pts[3];
  EXPECT_THROW(PathSpec(pts, false), std::invalid_argument);
}

TEST(PathSpec, RejectsNonUniformSpacing) {
  std::vector<Vec3> pts;
  double x = 0;
  for (int i = 0; i < 10; ++i) {
    pts.emplace_back(x, 0, 0);
    x += (i == 5) ? 0.05 : 0.01;
  }
  EXPECT_THROW(PathSpec(pts, false), std::invalid_argument);
}

TEST(PathSpec, RejectsNonFinite) {
  std::vector<Vec3> pts;
  for (int i = 0; i < 10; ++i) pts.emplace_back(i * 0.01, 0, 0);
  pts[2].y() = std::nan("");
  EXPECT_THROW(PathSpec(pts, false), std::invalid_argument);
}

TEST(Circle, SamplesLieOnCircle) {
  const auto p = make_circle_path({});
  EXPECT_EQ(p.n_samples(), 2048u);
  EXPECT_TRUE(p.closed());
  for (const auto& s : p.samples()) EXPECT_NEAR(s.norm(), 0.05, 1e-15);
  EXPECT_DOUBLE_EQ(p.characteristic_radius(), 0.05);
  EXPECT_NEAR(p.length(), 2 * 2048 * 0.05 * std::sin(M_PI / 2048), 1e-12);
}

TEST(Circle, StartsOnFirstAxisAndRunsClockwise) {
  const auto p = make_circle_path({});
  EXPECT_NEAR((path_point(p, 0.0) - Vec3(0.05, 0, 0)).norm(), 0, 1e-15);
  // Clockwise seen from +z: a quarter turn from +x lands on -y.
  EXPECT_NEAR((path_point(p, 0.25) - Vec3(0, -0.05, 0)).norm(), 0, 1e-12);
  const Vec3 t = path_tangent(p, 0.0);
  EXPECT_NEAR(t.y(), -1.0, 1e-9);
}

TEST(Circle, CounterClockwiseAndPlanes) {
  CircleSpec ccw;
  ccw.direction = Direction::CounterClockwise;
  EXPECT_NEAR(path_point(make_circle_path(ccw), 0.25).y(), 0.05, 1e-12);

  CircleSpec xz;
  xz.plane = Plane::XZ;
  const auto p = make_circle_path(xz);
  for (const auto& s : p.samples()) EXPECT_EQ(s.y(), 0.0);
  // Clockwise seen from +y.
  const Vec3 q = path_point(p, 0.25);
  const Vec3 n = Vec3(0.05, 0, 0).cross(q);
  EXPECT_LT(n.y(), 0.0);
}

TEST(PathPoint, WrapsOnClosedPaths) {
  const auto p = make_circle_path({});
  EXPECT_NEAR((path_point(p, 1.25) - path_point(p, 0.25)).norm(), 0, 1e-15);
  EXPECT_NEAR((path_point(p, -0.75) - path_point(p, 0.25)).norm(), 0, 1e-15);
}

TEST(PathPoint, OpenPathRejectsOutOfRange) {
  std::vector<Vec3> pts;
  for (int i = 0; i < 10; ++i) pts.emplace_back(i * 0.01, 0, 0);
  const PathSpec p(pts, false);
  EXPECT_THROW(path_point(p, 1.5), std::domain_error);
  EXPECT_THROW(path_point(p, -0.1), std::domain_error);
  EXPECT_NEAR(path_point(p, 1.0).x(), 0.09, 1e-15);
  EXPECT_NEAR(path_point(p, 0.5).x(), 0.045, 1e-15);
}

TEST(PathTangent, UnitLengthEverywhere) {
  const auto p = make_circle_path({});
  for (int i = 0; i < 1000; ++i) {
    const double s = i / 1000.0;
    const Vec3 t = path_tangent(p, s);
    EXPECT_NEAR(t.norm(), 1.0, 1e-12);
    // Perpendicular to the radius on a circle.
    EXPECT_NEAR(t.dot(path_point(p, s).normalized()), 0.0, 2e-3);
  }
}

TEST(ForwardDistance, WrapsIntoUnitInterval) {
  EXPECT_DOUBLE_EQ(PathSpec::forward_distance(0.9, 0.1), 0.2);
  EXPECT_DOUBLE_EQ(PathSpec::forward_distance(0.1, 0.3), 0.2);
  EXPECT_DOUBLE_EQ(PathSpec::forward_distance(0.3, 0.3), 0.0);
}

TEST(Resample, ProducesUniformSpacing) {
  std::vector<Vec3> square = {{0, 0, 0}, {0.1, 0, 0}, {0.1, 0.1, 0}, {0, 0.1, 0}};
  const auto p = resample_polyline(square, true, 400);
  EXPECT_EQ(p.n_samples(), 400u);
  EXPECT_NEAR(p.length(), 0.4, 1e-9);
  EXPECT_LE(p.max_segment_length(), 1.5 * p.min_segment_length());
}

TEST(PathJson, CircleAndExactPoints) {
  auto doc = nlohmann::json::parse(R"({"circle":{"radius":0.1,"samples":64,"direction":"ccw"}})");
  const auto c = path_from_json(doc);
  EXPECT_EQ(c.n_samples(), 64u);
  EXPECT_DOUBLE_EQ(c.characteristic_radius(), 0.1);

  nlohmann::json pts = nlohmann::json::array();
  for (const auto& s : c.samples()) pts.push_back({s.x(), s.y(), s.z()});
  nlohmann::json exact = {{"points", pts}, {"closed", true}, {"exact", true},
                          {"characteristic_radius", 0.1}};
  const auto back = path_from_json(exact);
  ASSERT_EQ(back.n_samples(), c.n_samples());
  for (std::size_t i = 0; i < c.n_samples(); ++i) EXPECT_EQ(back.samples()[i], c.samples()[i]);
}

TEST(PathFile, PlainPointList) {
  const auto file = std::filesystem::temp_directory_path() / "sharedctl_square.txt";
  {
    std::ofstream out(file);
    out << "# unit square\n0 0 0\n0.1 0 0\n0.1 0.1 0\n0 0.1 0\n";
  }
  const auto p = load_path_file(file);
  EXPECT_TRUE(p.closed());
  EXPECT_NEAR(p.length(), 0.4, 1e-9);
  std::filesystem::remove(file);
}
