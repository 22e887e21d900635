#include "cfsim/flight_control.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace cfsim {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

double clamp_abs(double x, double limit) { return std::clamp(x, -limit, limit); }

// Inner loop shared by both command kinds. desiredVelocity is world frame.
VelocityStep track_velocity(const DroneState& state, const Vec3& desiredVelocity,
                            double desiredYawRate, double yawRateCap, const PDGains& linearGains,
                            const PDGains& yawGains, const ControllerLimits& limits, double dt,
                            PdMemory memory) {
  const Vec3 target = saturate(desiredVelocity, limits.maxLinearSpeed);
  const Vec3 error = target - state.velocity;
  const Vec3 prevError = memory.velocityError.value_or(error);
  const Vec3 accel = saturate(linearGains.kp * error + linearGains.kd * (error - prevError) / dt,
                              limits.maxLinearAccel);
  memory.velocityError = error;

  const double rateError = desiredYawRate - state.yawRate;
  const double prevRateError = memory.yawRateError.value_or(rateError);
  const double yawAccel = clamp_abs(
      yawGains.kp * rateError + yawGains.kd * (rateError - prevRateError) / dt, limits.maxYawAccel);
  memory.yawRateError = rateError;

  VelocityStep out;
  out.velocity = saturate(state.velocity + accel * dt, limits.maxLinearSpeed);
  out.yawRate = clamp_abs(state.yawRate + yawAccel * dt, yawRateCap);
  out.memory = std::move(memory);
  return out;
}

}  // namespace

bool is_finite(const Command& cmd) { return cmd.linear.allFinite() && std::isfinite(cmd.angular); }

double wrap_degrees(double deg) {
  double w = std::fmod(deg, 360.0);
  if (w <= -180.0) {
    w += 360.0;
  } else if (w > 180.0) {
    w -= 360.0;
  }
  return w;
}

Vec3 body_to_world(const Vec3& v, double yawDeg) {
  const double c = std::cos(yawDeg * kDegToRad);
  const double s = std::sin(yawDeg * kDegToRad);
  return {c * v.x() - s * v.y(), s * v.x() + c * v.y(), v.z()};
}

Vec3 saturate(const Vec3& v, double vmax) {
  const double n = v.norm();
  if (n <= vmax) {
    return v;
  }
  return v * (vmax / n);
}

VelocityStep velocity_control_step(const DroneState& state, const Command& cmd,
                                   const PDGains& linearGains, const PDGains& yawGains,
                                   const ControllerLimits& limits, double dt,
                                   const PdMemory& memory) {
  const Vec3 desired = cmd.frame == CommandFrame::BodyRelative
                           ? body_to_world(cmd.linear, state.yaw)
                           : cmd.linear;
  // The rate may decay from a faster previous command but never grows past
  // the commanded one.
  const double cap = std::max(std::abs(cmd.angular), std::abs(state.yawRate));
  return track_velocity(state, desired, cmd.angular, cap, linearGains, yawGains, limits, dt,
                        memory);
}

PositionStep position_control_step(const DroneState& state, const Command& cmd,
                                   const PDGains& positionGains, const PDGains& yawGains,
                                   const ControllerLimits& limits, double dt,
                                   const PdMemory& memory) {
  PositionStep out;
  out.memory = memory;

  const Vec3 error = cmd.linear - state.position;
  const Vec3 prevError = memory.positionError.value_or(error);
  out.velocitySetpoint = saturate(
      positionGains.kp * error + positionGains.kd * (error - prevError) / dt,
      limits.maxLinearSpeed);
  out.memory.positionError = error;

  // wrap_degrees maps an exact half turn to +180, so ties turn counter-clockwise.
  const double yawError = wrap_degrees(cmd.angular - state.yaw);
  const double prevYawError = memory.yawError.value_or(yawError);
  out.yawRateSetpoint =
      clamp_abs(yawGains.kp * yawError + yawGains.kd * wrap_degrees(yawError - prevYawError) / dt,
                limits.maxYawRate);
  out.memory.yawError = yawError;
  return out;
}

VelocityStep control_step(const DroneState& state, const Command& cmd,
                          const ControllerGains& gains, const ControllerLimits& limits,
                          double dt, const PdMemory& memory) {
  if (cmd.kind == CommandKind::Velocity) {
    return velocity_control_step(state, cmd, gains.velocity, gains.yawRate, limits, dt, memory);
  }
  const PositionStep outer =
      position_control_step(state, cmd, gains.position, gains.yaw, limits, dt, memory);
  return track_velocity(state, outer.velocitySetpoint, outer.yawRateSetpoint, limits.maxYawRate,
                        gains.velocity, gains.yawRate, limits, dt, outer.memory);
}

Command resolve_command(const Command& cmd, const DroneState& state) {
  if (cmd.kind != CommandKind::Position || cmd.frame == CommandFrame::WorldAbsolute) {
    return cmd;
  }
  Command out = cmd;
  out.frame = CommandFrame::WorldAbsolute;
  out.linear = state.position + body_to_world(cmd.linear, state.yaw);
  out.angular = wrap_degrees(state.yaw + cmd.angular);
  return out;
}

DroneState integrate(const DroneState& state, const Vec3& newVelocity, double newYawRate,
                     double dt) {
  DroneState next = state;
  next.velocity = newVelocity;
  next.yawRate = newYawRate;
  next.position = state.position + newVelocity * dt;
  next.yaw = wrap_degrees(state.yaw + newYawRate * dt);
  if (next.position.z() < 0.0) {
    next.position.z() = 0.0;
    next.velocity.z() = std::max(next.velocity.z(), 0.0);
  }
  return next;
}

}  // namespace cfsim
