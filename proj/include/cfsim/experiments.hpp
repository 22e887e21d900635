#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cfsim/metrics.hpp"
#include "cfsim/scenario.hpp"
#include "cfsim/trajectory.hpp"

namespace cfsim::experiments {

// Waypoint switch distance for velocity-mode legs.
inline constexpr double kWaypointTolerance = 0.05;  // m
inline constexpr double kSettleTime = 5.0;          // s
inline constexpr double kTruncatedSettleTime = 1.0;  // s
inline constexpr double kHoldTime = 2.0;            // s, pauses between steps

inline constexpr double kCalibrationDepth = 2.0;       // m
inline constexpr double kCalibrationOffset = 0.9326;  // m, half of 1.8652

struct Options {
  // m/s for the velocity experiments, deg/s for yaw-steps.
  std::optional<double> speed;
  std::optional<double> initialCharge;
  bool truncateSettle = false;
  int jobs = 1;  // worker threads for multi-scenario experiments
};

// One built-in scenario together with the trajectories it produces.
struct Run {
  std::string label;
  Scenario scenario;
  std::vector<Trajectory> trajectories;
  std::vector<PlotProjection> plots;
  std::vector<std::string> report;  // key=value lines
};

std::span<const std::string_view> names();
bool is_known(std::string_view name);

// Builds and runs every scenario of an experiment. Unknown names throw
// LookupError; out-of-range options throw ValidationError.
std::vector<Run> build(std::string_view name, const Options& options = {});

// ---------------------------------------------------------------------------
// Typed entry points used by build() and by the acceptance suite.

struct SpeedResult {
  Run run;
  double commandedPeak;  // m/s or deg/s
  double measuredPeak;
};

SpeedResult line2d(double speed);
SpeedResult line3d(double speed);
SpeedResult altitude_steps(double speed);
SpeedResult yaw_steps(double yawRate);

struct LegResult {
  double desired;   // m or deg
  double measured;  // distance flown or final yaw
  double error;     // distance to target (m) or |yaw error| (deg)
  double peakRate;  // m/s or deg/s during the leg
};

struct LegsResult {
  Run run;
  std::vector<LegResult> legs;
};

inline constexpr double kPositionLegs[] = {1.0, 2.0, 5.0, 10.0, 25.0, 50.0};
inline constexpr double kYawTargets[] = {180.0, -135.0, 45.0};

LegsResult position_legs(bool truncateSettle = false);
LegsResult yaw_legs(bool truncateSettle = false);

struct BatteryResult {
  Run run;
  double initialCharge;
  std::optional<double> timeToZero;  // simulated, s
  double expectedTimeToEmpty;        // from the model, s
};

BatteryResult battery(double initialCharge);

struct CalibrationResult {
  Run run;
  std::vector<Detection> detections;
};

// Four lights on a cross 2 m ahead. lateralOffset moves the left/right pair.
CalibrationResult camera_calibration(double lateralOffset = kCalibrationOffset);

}  // namespace cfsim::experiments
