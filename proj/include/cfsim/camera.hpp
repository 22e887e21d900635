#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>

#include "cfsim/flight_control.hpp"

namespace cfsim {

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  bool operator==(const Rgb&) const = default;
  auto operator<=>(const Rgb&) const = default;
};

struct LedState {
  Rgb color{255, 255, 255};
  bool on = false;

  bool operator==(const LedState&) const = default;
};

// Forward-facing light detector. The image plane is kResolution x kResolution,
// u to the right and v downward, (0, 0) top-left.
struct CameraConfig {
  static constexpr int kResolution = 320;

  double aperture = 50.0;       // full field of view, degrees
  double mountYawOffset = 0.0;  // degrees from body x

  bool operator==(const CameraConfig&) const = default;
};

struct CameraPose {
  Vec3 position = Vec3::Zero();
  double yaw = 0.0;  // degrees, optical axis heading
};

struct PixelCoord {
  int u = 0;
  int v = 0;

  bool operator==(const PixelCoord&) const = default;
};

struct Detection {
  int u = 0;
  int v = 0;
  Rgb color;
  std::string sourceId;

  bool operator==(const Detection&) const = default;
};

// View angles of a point in the camera frame, degrees. Positive horizontal is
// to the right of the optical axis, positive vertical is below it. Empty when
// the point is not in front of the camera.
struct ViewAngles {
  double horizontal;
  double vertical;
};
std::optional<ViewAngles> view_angles(const CameraPose& pose, const Vec3& source);

// Pinhole mapping with inclusive aperture bounds; nothing if outside the view.
std::optional<PixelCoord> project_light(const CameraPose& pose, const Vec3& source,
                                        const CameraConfig& config);

}  // namespace cfsim
