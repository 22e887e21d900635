#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cfsim/battery.hpp"
#include "cfsim/camera.hpp"
#include "cfsim/flight_control.hpp"
#include "cfsim/rab.hpp"

namespace cfsim {

// Axis-aligned flight volume. Defaults to a 3 x 3 x 3 m lab centred on the
// origin in x/y with the floor at z = 0.
struct Arena {
  Vec3 min{-1.5, -1.5, 0.0};
  Vec3 max{1.5, 1.5, 3.0};

  bool contains(const Vec3& p) const;
  Vec3 clamp(const Vec3& p) const;

  bool operator==(const Arena&) const = default;
};

// Optional per-axis Gaussian jitter on positions after integration.
struct NoiseConfig {
  double positionSigma = 0.0;  // m, 0 disables
  std::uint64_t seed = 0;

  bool operator==(const NoiseConfig&) const = default;
};

struct DroneSpec {
  std::string id;
  Vec3 position = Vec3::Zero();
  double yaw = 0.0;
  double charge = 1.0;
  ControllerGains gains;
  ControllerLimits limits;
  std::optional<CameraConfig> camera;
  std::optional<RabConfig> rab;
  BatteryModel battery;
  LedState led;

  bool operator==(const DroneSpec&) const = default;
};

struct LightSpec {
  std::string id;
  Vec3 position = Vec3::Zero();
  Rgb color{255, 255, 255};

  bool operator==(const LightSpec&) const = default;
};

// Command applied at the start of `tick`, before controllers run.
struct ScriptEntry {
  std::int64_t tick = 0;
  Command command;

  bool operator==(const ScriptEntry&) const = default;
};

struct Scenario {
  static constexpr int kFormatVersion = 1;

  int formatVersion = kFormatVersion;
  double dt = 0.1;
  std::int64_t duration = 0;  // ticks
  Arena arena;
  NoiseConfig noise;
  std::vector<DroneSpec> drones;
  std::vector<LightSpec> lights;
  std::map<std::string, std::vector<ScriptEntry>> scripts;  // by drone id

  bool operator==(const Scenario&) const = default;
};

// Throws ValidationError whose message starts with the offending field path,
// e.g. "drone.cf1.charge: ...".
void validate_scenario(const Scenario& scenario);

// Parses and validates a scenario document. Syntax problems throw ParseError
// carrying the line number.
Scenario load_scenario(std::string_view text);

// Inverse of load_scenario; every field is written explicitly.
std::string render_scenario(const Scenario& scenario);

// Shortest decimal text that parses back to exactly `x`.
std::string format_double(double x);

}  // namespace cfsim
