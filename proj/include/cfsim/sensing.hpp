#pragma once

#include <string>
#include <vector>

#include "cfsim/world.hpp"

namespace cfsim {

// Stages a new LED state; cameras see it from the next tick on.
// Unknown drone -> LookupError.
void set_led(World& world, const std::string& droneId, const Rgb& color, bool on);

// Projects every scenario light and every other drone's lit LED through the
// drone's camera, sorted by (u, v, sourceId). No occlusion.
// Drone without a camera -> CapabilityError.
std::vector<Detection> camera_capture(const World& world, const std::string& droneId);

// Queues a broadcast for delivery at the next tick.
// Oversized payload -> PayloadError; drone without RAB -> CapabilityError.
void rab_send(World& world, const std::string& droneId, Payload payload);

// Messages delivered during the last step, sorted by sender id.
const std::vector<RabReading>& rab_read(const World& world, const std::string& droneId);

}  // namespace cfsim
