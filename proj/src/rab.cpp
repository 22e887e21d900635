#include "cfsim/rab.hpp"

#include <cmath>
#include <numbers>

namespace cfsim {

std::optional<RabReading> rab_reading(const DroneState& receiver, const Vec3& senderPosition,
                                      double senderRange, const std::string& senderId,
                                      const Payload& payload) {
  const Vec3 offset = senderPosition - receiver.position;
  const double distance = offset.norm();
  if (!(distance > 0.0)) {
    return std::nullopt;
  }
  if (senderRange > 0.0 && distance > senderRange) {
    return std::nullopt;
  }
  constexpr double kRadToDeg = 180.0 / std::numbers::pi;
  const Vec3 local = body_to_world(offset, -receiver.yaw);
  RabReading reading;
  reading.range = distance;
  reading.horizontalBearing = wrap_degrees(std::atan2(local.y(), local.x()) * kRadToDeg);
  reading.verticalBearing = std::atan2(local.z(), std::hypot(local.x(), local.y())) * kRadToDeg;
  reading.payload = payload;
  reading.senderId = senderId;
  return reading;
}

}  // namespace cfsim
