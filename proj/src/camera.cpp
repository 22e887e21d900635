#include "cfsim/camera.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace cfsim {

namespace {

constexpr double kRadToDeg = 180.0 / std::numbers::pi;
constexpr double kDegToRad = std::numbers::pi / 180.0;

struct CameraFrame {
  double forward;
  double right;
  double down;
};

CameraFrame to_camera_frame(const CameraPose& pose, const Vec3& source) {
  const Vec3 d = source - pose.position;
  const double c = std::cos(pose.yaw * kDegToRad);
  const double s = std::sin(pose.yaw * kDegToRad);
  const double left = -s * d.x() + c * d.y();
  return {c * d.x() + s * d.y(), -left, -d.z()};
}

int to_pixel(double ratio) {
  constexpr int half = CameraConfig::kResolution / 2;
  const double p = std::floor((ratio + 1.0) * half);
  return static_cast<int>(std::clamp(p, 0.0, double(CameraConfig::kResolution - 1)));
}

}  // namespace

std::optional<ViewAngles> view_angles(const CameraPose& pose, const Vec3& source) {
  const CameraFrame f = to_camera_frame(pose, source);
  if (!(f.forward > 0.0)) {
    return std::nullopt;
  }
  return ViewAngles{std::atan2(f.right, f.forward) * kRadToDeg,
                    std::atan2(f.down, f.forward) * kRadToDeg};
}

std::optional<PixelCoord> project_light(const CameraPose& pose, const Vec3& source,
                                        const CameraConfig& config) {
  const auto angles = view_angles(pose, source);
  const double half = 0.5 * config.aperture;
  if (!angles || std::abs(angles->horizontal) > half || std::abs(angles->vertical) > half) {
    return std::nullopt;
  }
  const double halfTan = std::tan(half * kDegToRad);
  return PixelCoord{to_pixel(std::tan(angles->horizontal * kDegToRad) / halfTan),
                    to_pixel(std::tan(angles->vertical * kDegToRad) / halfTan)};
}

}  // namespace cfsim
