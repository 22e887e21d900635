#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "cfsim/camera.hpp"
#include "support/oracles.hpp"

namespace cfsim {
namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

const CameraPose kEye{{0, 0, 1}, 0.0};

// Point 2 m ahead of kEye at the given view angles (degrees).
Vec3 at_angles(double horizontal, double vertical) {
  return {2.0, -2.0 * std::tan(horizontal * kDeg), 1.0 - 2.0 * std::tan(vertical * kDeg)};
}

TEST(Camera, DeadAheadIsCentre) {
  const auto p = project_light(kEye, {2, 0, 1}, {});
  ASSERT_TRUE(p);
  EXPECT_EQ(*p, (PixelCoord{160, 160}));
}

TEST(Camera, LeftEdgeAtHalfAperture) {
  const auto p = project_light(kEye, at_angles(-25.0, 0.0), {});
  ASSERT_TRUE(p);
  EXPECT_EQ(p->u, 0);
  EXPECT_EQ(p->v, 160);
}

TEST(Camera, BoundsAreInclusive) {
  for (double h : {-24.999, 24.999}) {
    EXPECT_TRUE(project_light(kEye, at_angles(h, 0.0), {})) << h;
    EXPECT_TRUE(project_light(kEye, at_angles(0.0, h), {})) << h;
  }
  for (double h : {-25.1, 25.1}) {
    EXPECT_FALSE(project_light(kEye, at_angles(h, 0.0), {})) << h;
    EXPECT_FALSE(project_light(kEye, at_angles(0.0, h), {})) << h;
  }
}

TEST(Camera, OneMetreLateralAtTwoMetresIsOutside) {
  EXPECT_FALSE(project_light(kEye, {2, 1.0, 1}, {}));
  EXPECT_FALSE(project_light(kEye, {2, -1.0, 1}, {}));
  EXPECT_FALSE(project_light(kEye, {2, 0, 2.0}, {}));
}

TEST(Camera, BehindIsInvisible) {
  EXPECT_FALSE(project_light(kEye, {-2, 0, 1}, {}));
  EXPECT_FALSE(project_light(kEye, {0, 0, 1}, {}));
  EXPECT_FALSE(view_angles(kEye, {0, 1, 1}));
}

TEST(Camera, ViewAngleSigns) {
  const auto right = view_angles(kEye, {2, -1, 1});
  ASSERT_TRUE(right);
  EXPECT_GT(right->horizontal, 0.0);
  const auto below = view_angles(kEye, {2, 0, 0});
  ASSERT_TRUE(below);
  EXPECT_GT(below->vertical, 0.0);
}

TEST(Camera, MonotoneAlongBothAxes) {
  int lastU = -1;
  for (double h = -24.9; h <= 24.9; h += 0.05) {
    const auto p = project_light(kEye, at_angles(h, 0.0), {});
    ASSERT_TRUE(p);
    EXPECT_GE(p->u, lastU);
    lastU = p->u;
  }
  int lastV = -1;
  for (double v = -24.9; v <= 24.9; v += 0.05) {
    const auto p = project_light(kEye, at_angles(0.0, v), {});
    ASSERT_TRUE(p);
    EXPECT_GE(p->v, lastV);
    lastV = p->v;
  }
}

TEST(Camera, MirrorSymmetry) {
  for (double h = 0.3; h < 25.0; h += 1.1) {
    const auto a = project_light(kEye, at_angles(h, 0.0), {});
    const auto b = project_light(kEye, at_angles(-h, 0.0), {});
    ASSERT_TRUE(a && b);
    // floor splits the centre column, so mirrored pixels sum to 319 or 320.
    EXPECT_GE(a->u + b->u, 319);
    EXPECT_LE(a->u + b->u, 320);
  }
}

TEST(Camera, RotatedPoseMatchesOracle) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int compared = 0;
  for (int i = 0; i < 5000; ++i) {
    const CameraPose pose{{u(rng), u(rng), 1.0 + u(rng)}, 180.0 * u(rng)};
    const Vec3 src = pose.position + Vec3(3 * u(rng), 3 * u(rng), 3 * u(rng));
    const double aperture = 50.0 + 40.0 * u(rng);
    const auto got = project_light(pose, src, {aperture, 0.0});
    const auto want = testing::pixel_oracle(pose.position, pose.yaw, src, aperture);
    ASSERT_EQ(got.has_value(), want.has_value()) << i;
    if (got) {
      // Exact floor boundaries may land one pixel apart across formulations.
      EXPECT_LE(std::abs(got->u - want->u), 1) << i;
      EXPECT_LE(std::abs(got->v - want->v), 1) << i;
      compared += got->u == want->u && got->v == want->v;
    }
  }
  EXPECT_GT(compared, 100);
}

}  // namespace
}  // namespace cfsim
