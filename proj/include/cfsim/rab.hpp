#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cfsim/flight_control.hpp"

namespace cfsim {

using Payload = std::vector<std::uint8_t>;

// Range-and-bearing transceiver. range == 0 means unlimited.
struct RabConfig {
  double range = 0.0;          // m
  std::size_t payloadMax = 10;  // bytes

  bool operator==(const RabConfig&) const = default;
};

struct RabReading {
  double range = 0.0;              // m
  double horizontalBearing = 0.0;  // deg, receiver body frame, (-180, 180]
  double verticalBearing = 0.0;    // deg, [-90, 90]
  Payload payload;
  std::string senderId;

  bool operator==(const RabReading&) const = default;
};

// Geometry of a message as seen by `receiver`. Empty when sender and
// receiver coincide (bearing undefined) or the sender is out of range.
std::optional<RabReading> rab_reading(const DroneState& receiver, const Vec3& senderPosition,
                                      double senderRange, const std::string& senderId,
                                      const Payload& payload);

}  // namespace cfsim
