#pragma once

#include <optional>

#include <Eigen/Core>

namespace cfsim {

using Vec3 = Eigen::Vector3d;

// Kinematic state of one drone. Angles in degrees, yaw kept in (-180, 180].
struct DroneState {
  Vec3 position = Vec3::Zero();
  double yaw = 0.0;
  Vec3 velocity = Vec3::Zero();
  double yawRate = 0.0;
  double charge = 1.0;

  bool operator==(const DroneState&) const = default;
};

enum class CommandKind { Velocity, Position };
enum class CommandFrame { BodyRelative, WorldAbsolute };

// Velocity: linear in m/s, angular in deg/s.
// Position: linear in metres, angular is the target yaw in degrees.
struct Command {
  CommandKind kind = CommandKind::Velocity;
  CommandFrame frame = CommandFrame::WorldAbsolute;
  Vec3 linear = Vec3::Zero();
  double angular = 0.0;

  static Command hover() { return {}; }
  static Command velocity(const Vec3& v, double yawRate = 0.0,
                          CommandFrame frame = CommandFrame::WorldAbsolute) {
    return {CommandKind::Velocity, frame, v, yawRate};
  }
  static Command position(const Vec3& p, double yaw = 0.0,
                          CommandFrame frame = CommandFrame::WorldAbsolute) {
    return {CommandKind::Position, frame, p, yaw};
  }

  bool operator==(const Command&) const = default;
};

bool is_finite(const Command& cmd);

// kd multiplies the per-tick error difference divided by dt.
struct PDGains {
  double kp = 1.0;
  double kd = 0.0;

  bool operator==(const PDGains&) const = default;
};

struct ControllerGains {
  PDGains velocity{10.0, 0.0};
  PDGains yawRate{5.0, 0.1};
  PDGains position{2.5, 0.3};
  PDGains yaw{2.5, 0.3};

  bool operator==(const ControllerGains&) const = default;
};

struct ControllerLimits {
  double maxLinearSpeed = 10.0;  // m/s
  double maxYawRate = 90.0;      // deg/s, position mode only
  double maxLinearAccel = 5.0;   // m/s^2
  double maxYawAccel = 720.0;    // deg/s^2

  bool operator==(const ControllerLimits&) const = default;
};

// Previous-tick errors for the derivative terms. Empty means "no history":
// the first update after a reset sees a zero error difference.
struct PdMemory {
  std::optional<Vec3> velocityError;
  std::optional<double> yawRateError;
  std::optional<Vec3> positionError;
  std::optional<double> yawError;

  bool operator==(const PdMemory&) const = default;
};

struct VelocityStep {
  Vec3 velocity;
  double yawRate;
  PdMemory memory;
};

struct PositionStep {
  Vec3 velocitySetpoint;
  double yawRateSetpoint;
  PdMemory memory;
};

// Wraps an angle in degrees to (-180, 180].
double wrap_degrees(double deg);

Vec3 body_to_world(const Vec3& v, double yawDeg);

Vec3 saturate(const Vec3& v, double vmax);

// Tracks cmd (kind must be Velocity). In this mode the commanded yaw rate is
// also the yaw-rate ceiling.
VelocityStep velocity_control_step(const DroneState& state, const Command& cmd,
                                   const PDGains& linearGains, const PDGains& yawGains,
                                   const ControllerLimits& limits, double dt,
                                   const PdMemory& memory = {});

// Outer loop: turns a position/yaw target into a velocity setpoint. The target
// must already be world-absolute (see resolve_command).
PositionStep position_control_step(const DroneState& state, const Command& cmd,
                                   const PDGains& positionGains, const PDGains& yawGains,
                                   const ControllerLimits& limits, double dt,
                                   const PdMemory& memory = {});

// Both loops chained; what the world runs per drone per tick.
VelocityStep control_step(const DroneState& state, const Command& cmd,
                          const ControllerGains& gains, const ControllerLimits& limits,
                          double dt, const PdMemory& memory);

// Latches a BodyRelative position command against the pose it was issued at.
// Velocity commands are returned unchanged; they are rotated every tick.
Command resolve_command(const Command& cmd, const DroneState& state);

// Semi-implicit Euler: position advances with the new velocity.
DroneState integrate(const DroneState& state, const Vec3& newVelocity, double newYawRate,
                     double dt);

}  // namespace cfsim
