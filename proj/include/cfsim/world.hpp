#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "cfsim/battery.hpp"
#include "cfsim/camera.hpp"
#include "cfsim/flight_control.hpp"
#include "cfsim/rab.hpp"
#include "cfsim/scenario.hpp"

namespace cfsim {

struct Trajectory;

// time() is always tick * dt, never an accumulated sum.
struct SimClock {
  std::int64_t tick = 0;
  double dt = 0.1;

  double time() const { return static_cast<double>(tick) * dt; }

  bool operator==(const SimClock&) const = default;
};

struct Light {
  std::string id;
  Vec3 position = Vec3::Zero();
  Rgb color;

  bool operator==(const Light&) const = default;
};

struct RabMessage {
  Payload payload;

  bool operator==(const RabMessage&) const = default;
};

struct Drone {
  std::string id;
  DroneState state;
  ControllerGains gains;
  ControllerLimits limits;
  BatteryModel battery;
  std::optional<CameraConfig> camera;
  std::optional<RabConfig> rab;

  Command command;  // active, position targets already world-absolute
  PdMemory memory;
  bool grounded = false;

  LedState led;        // what cameras see
  LedState stagedLed;  // committed to `led` during the next media phase
  std::vector<RabMessage> outbox;
  std::vector<RabReading> inbox;
  std::vector<Detection> detections;  // last camera sample

  std::vector<ScriptEntry> script;
  std::size_t scriptCursor = 0;

  bool operator==(const Drone&) const = default;
};

// A complete simulation snapshot. Copying a World copies everything,
// including the noise generator, so copies evolve identically.
struct World {
  SimClock clock;
  Arena arena;
  NoiseConfig noise;
  std::mt19937_64 rng;
  std::vector<Drone> drones;
  std::vector<Light> lights;

  const Drone& drone(const std::string& id) const;
  Drone& drone(const std::string& id);

  bool operator==(const World&) const = default;
};

// Throws ConfigError (ValidationError) for invalid scenarios.
World create_world(const Scenario& scenario);

// Replaces the active command of a drone and clears its derivative history.
// BodyRelative position targets are latched against the current pose.
void set_command(World& world, const std::string& droneId, const Command& command);

// Advances one tick. Phase order inside a tick:
//   0. script entries due at the current tick are applied
//   1. controllers compute new velocity and yaw rate
//   2. kinematics integrate, positions clamp to the arena, optional noise
//   3. batteries discharge; a drone reaching zero charge is grounded
//   4. media: staged LED states become visible, RAB outboxes are delivered
//      into receivers' inboxes (replacing last tick's readings)
//   5. cameras sample
// Logging (phase 6) is done by run().
void step_in_place(World& world);
World step(World world);

struct RunResult {
  World world;
  std::vector<Trajectory> trajectories;  // one per drone, in world order
};

// Steps nTicks times, recording a row per drone for the initial tick and
// after every step (nTicks + 1 rows).
RunResult run(World world, std::int64_t nTicks);

}  // namespace cfsim
