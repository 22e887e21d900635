#include "cfsim/sensing.hpp"

#include <algorithm>
#include <tuple>

#include <fmt/format.h>

#include "cfsim/errors.hpp"

namespace cfsim {

void set_led(World& world, const std::string& droneId, const Rgb& color, bool on) {
  world.drone(droneId).stagedLed = {color, on};
}

std::vector<Detection> camera_capture(const World& world, const std::string& droneId) {
  const auto& self = world.drone(droneId);
  if (!self.camera) {
    throw CapabilityError(fmt::format("drone '{}' has no camera", droneId));
  }
  const CameraPose pose{self.state.position, self.state.yaw + self.camera->mountYawOffset};

  std::vector<Detection> out;
  auto consider = [&](const Vec3& position, const Rgb& color, const std::string& id) {
    if (const auto px = project_light(pose, position, *self.camera)) {
      out.push_back({px->u, px->v, color, id});
    }
  };
  for (const auto& light : world.lights) {
    consider(light.position, light.color, light.id);
  }
  for (const auto& other : world.drones) {
    if (&other != &self && other.led.on) {
      consider(other.state.position, other.led.color, other.id);
    }
  }
  std::sort(out.begin(), out.end(), [](const Detection& a, const Detection& b) {
    return std::tie(a.u, a.v, a.sourceId) < std::tie(b.u, b.v, b.sourceId);
  });
  return out;
}

void rab_send(World& world, const std::string& droneId, Payload payload) {
  auto& d = world.drone(droneId);
  if (!d.rab) {
    throw CapabilityError(fmt::format("drone '{}' has no range-and-bearing device", droneId));
  }
  if (payload.size() > d.rab->payloadMax) {
    throw PayloadError(fmt::format("payload of {} bytes exceeds the {}-byte limit of '{}'",
                                   payload.size(), d.rab->payloadMax, droneId));
  }
  d.outbox.push_back({std::move(payload)});
}

const std::vector<RabReading>& rab_read(const World& world, const std::string& droneId) {
  return world.drone(droneId).inbox;
}

}  // namespace cfsim
