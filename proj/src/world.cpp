#include "cfsim/world.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "cfsim/errors.hpp"
#include "cfsim/sensing.hpp"
#include "cfsim/trajectory.hpp"

namespace cfsim {

namespace {

template <typename Drones>
auto& find_drone(Drones& drones, const std::string& id) {
  const auto it = std::find_if(drones.begin(), drones.end(),
                               [&](const Drone& d) { return d.id == id; });
  if (it == drones.end()) {
    throw LookupError(fmt::format("unknown drone '{}'", id));
  }
  return *it;
}

void apply_due_script(World& world) {
  for (auto& d : world.drones) {
    while (d.scriptCursor < d.script.size() && d.script[d.scriptCursor].tick <= world.clock.tick) {
      set_command(world, d.id, d.script[d.scriptCursor].command);
      ++d.scriptCursor;
    }
  }
}

void ground(Drone& d, const Arena& arena) {
  d.grounded = true;
  d.state.velocity.setZero();
  d.state.yawRate = 0.0;
  d.state.position.z() = arena.min.z();
}

void move(World& world, Drone& d, const VelocityStep& control) {
  const double dt = world.clock.dt;
  d.state = integrate(d.state, control.velocity, control.yawRate, dt);
  d.memory = control.memory;

  if (world.noise.positionSigma > 0.0) {
    std::normal_distribution<double> jitter(0.0, world.noise.positionSigma);
    for (int k = 0; k < 3; ++k) {
      d.state.position[k] += jitter(world.rng);
    }
  }
  // Walls stop motion along the blocked axis only.
  for (int k = 0; k < 3; ++k) {
    double& p = d.state.position[k];
    if (p < world.arena.min[k] || p > world.arena.max[k]) {
      p = std::clamp(p, world.arena.min[k], world.arena.max[k]);
      d.state.velocity[k] = 0.0;
    }
  }
}

void resolve_media(World& world) {
  for (auto& d : world.drones) {
    d.led = d.stagedLed;
    d.inbox.clear();
  }
  for (const auto& sender : world.drones) {
    if (sender.outbox.empty()) {
      continue;
    }
    for (auto& receiver : world.drones) {
      if (&receiver == &sender || !receiver.rab) {
        continue;
      }
      for (const auto& msg : sender.outbox) {
        auto reading = rab_reading(receiver.state, sender.state.position, sender.rab->range,
                                   sender.id, msg.payload);
        if (reading) {
          receiver.inbox.push_back(std::move(*reading));
        }
      }
    }
  }
  for (auto& d : world.drones) {
    d.outbox.clear();
    std::stable_sort(d.inbox.begin(), d.inbox.end(),
                     [](const RabReading& a, const RabReading& b) { return a.senderId < b.senderId; });
  }
}

void sample_sensors(World& world) {
  for (auto& d : world.drones) {
    if (d.camera) {
      d.detections = camera_capture(world, d.id);
    }
  }
}

void record(const World& world, std::vector<Trajectory>& out) {
  for (std::size_t i = 0; i < world.drones.size(); ++i) {
    const auto& s = world.drones[i].state;
    out[i].rows.push_back({world.clock.tick, world.clock.time(), s.position, s.yaw, s.velocity,
                           s.yawRate, s.charge});
  }
}

}  // namespace

const Drone& World::drone(const std::string& id) const { return find_drone(drones, id); }

Drone& World::drone(const std::string& id) { return find_drone(drones, id); }

World create_world(const Scenario& scenario) {
  validate_scenario(scenario);

  World world;
  world.clock = {0, scenario.dt};
  world.arena = scenario.arena;
  world.noise = scenario.noise;
  world.rng.seed(scenario.noise.seed);

  for (const auto& spec : scenario.drones) {
    Drone d;
    d.id = spec.id;
    d.state.position = spec.position;
    d.state.yaw = wrap_degrees(spec.yaw);
    d.state.charge = spec.charge;
    d.gains = spec.gains;
    d.limits = spec.limits;
    d.battery = spec.battery;
    d.camera = spec.camera;
    d.rab = spec.rab;
    d.led = spec.led;
    d.stagedLed = spec.led;
    if (const auto it = scenario.scripts.find(spec.id); it != scenario.scripts.end()) {
      d.script = it->second;
    }
    world.drones.push_back(std::move(d));
  }
  for (const auto& l : scenario.lights) {
    world.lights.push_back({l.id, l.position, l.color});
  }
  sample_sensors(world);
  return world;
}

void set_command(World& world, const std::string& droneId, const Command& command) {
  if (!is_finite(command)) {
    throw DomainError(fmt::format("command for '{}' is not finite", droneId));
  }
  auto& d = world.drone(droneId);
  d.command = resolve_command(command, d.state);
  d.memory = {};
}

void step_in_place(World& world) {
  apply_due_script(world);

  std::vector<VelocityStep> control(world.drones.size());
  for (std::size_t i = 0; i < world.drones.size(); ++i) {
    const auto& d = world.drones[i];
    if (d.grounded || d.state.charge == 0.0) {
      continue;
    }
    control[i] = control_step(d.state, d.command, d.gains, d.limits, world.clock.dt, d.memory);
  }

  for (std::size_t i = 0; i < world.drones.size(); ++i) {
    auto& d = world.drones[i];
    if (!(d.grounded || d.state.charge == 0.0)) {
      move(world, d, control[i]);
    }
  }

  for (auto& d : world.drones) {
    d.state.charge = battery_next_charge(d.battery, d.state.charge, world.clock.dt);
    if (d.state.charge == 0.0 && !d.grounded) {
      ground(d, world.arena);
    }
  }

  resolve_media(world);
  ++world.clock.tick;
  sample_sensors(world);
}

World step(World world) {
  step_in_place(world);
  return world;
}

RunResult run(World world, std::int64_t nTicks) {
  RunResult result;
  result.trajectories.resize(world.drones.size());
  for (std::size_t i = 0; i < world.drones.size(); ++i) {
    result.trajectories[i].droneId = world.drones[i].id;
    result.trajectories[i].rows.reserve(static_cast<std::size_t>(std::max<std::int64_t>(nTicks, 0)) + 1);
  }
  record(world, result.trajectories);
  for (std::int64_t k = 0; k < nTicks; ++k) {
    step_in_place(world);
    record(world, result.trajectories);
  }
  result.world = std::move(world);
  return result;
}

}  // namespace cfsim
