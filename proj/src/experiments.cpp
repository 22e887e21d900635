#include "cfsim/experiments.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <future>

#include <fmt/format.h>

#include "cfsim/errors.hpp"
#include "cfsim/world.hpp"

namespace cfsim::experiments {

namespace {

constexpr std::array<std::string_view, 8> kNames = {
    "line2d",   "line3d", "altitude-steps", "yaw-steps", "position-legs",
    "yaw-legs", "battery", "camera-calibration"};

constexpr std::array<double, 3> kDefaultSpeeds = {0.25, 0.50, 1.00};
constexpr std::array<double, 3> kDefaultYawRates = {45.0, 90.0, 180.0};
constexpr std::array<double, 4> kDefaultCharges = {0.25, 0.50, 0.75, 1.00};

// Upper bound on planned ticks; a leg that never closes in is a bug.
constexpr std::int64_t kMaxPlannedTicks = 200000;

const std::string kDroneId = "cf1";

std::int64_t ticks_for(double seconds, double dt) {
  return static_cast<std::int64_t>(std::llround(seconds / dt));
}

Scenario single_drone(const Vec3& start, double yaw = 0.0) {
  Scenario s;
  DroneSpec d;
  d.id = kDroneId;
  d.position = start;
  d.yaw = yaw;
  s.drones.push_back(d);
  return s;
}

// Steps a world while recording the commands issued, so that the final
// scenario replays the same run from its script alone.
class Planner {
public:
  explicit Planner(Scenario base) : scenario_(std::move(base)), world_(create_world(scenario_)) {}

  const DroneState& state() const { return world_.drones.front().state; }
  std::int64_t tick() const { return world_.clock.tick; }
  double dt() const { return world_.clock.dt; }
  const Drone& drone() const { return world_.drones.front(); }

  void issue(const Command& cmd) {
    if (last_ && *last_ == cmd) {
      return;
    }
    world_.drones.front().script.push_back({world_.clock.tick, cmd});
    last_ = cmd;
  }

  void step(std::int64_t n = 1) {
    for (std::int64_t k = 0; k < n; ++k) {
      if (world_.clock.tick >= kMaxPlannedTicks) {
        throw Error(fmt::format("experiment planner exceeded {} ticks", kMaxPlannedTicks));
      }
      step_in_place(world_);
    }
  }

  Scenario finish() {
    scenario_.scripts[kDroneId] = world_.drones.front().script;
    scenario_.duration = world_.clock.tick;
    return std::move(scenario_);
  }

private:
  Scenario scenario_;
  World world_;
  std::optional<Command> last_;
};

Run replay(std::string label, Scenario scenario, std::vector<PlotProjection> plots) {
  Run r;
  r.label = std::move(label);
  r.trajectories = run(create_world(scenario), scenario.duration).trajectories;
  r.scenario = std::move(scenario);
  r.plots = std::move(plots);
  return r;
}

struct Waypoint {
  Vec3 position;
  double holdTime = 0.0;
};

// Velocity legs re-aimed at the waypoint every tick. `axisSpeed` is the
// per-axis speed, so a diagonal leg flies faster by |leg| / max|leg_i|.
// Returns the largest commanded speed.
double fly_velocity_legs(Planner& p, const std::vector<Waypoint>& waypoints, double axisSpeed) {
  double commanded = 0.0;
  Vec3 from = p.state().position;
  for (const auto& wp : waypoints) {
    const Vec3 leg = wp.position - from;
    const double speed = axisSpeed * leg.norm() / leg.cwiseAbs().maxCoeff();
    commanded = std::max(commanded, speed);
    while (true) {
      const Vec3 toGo = wp.position - p.state().position;
      if (toGo.norm() <= kWaypointTolerance || toGo.dot(leg) <= 0.0) {
        break;
      }
      p.issue(Command::velocity(toGo.normalized() * speed));
      p.step();
    }
    if (wp.holdTime > 0.0) {
      p.issue(Command::position(wp.position, p.state().yaw));
      p.step(ticks_for(wp.holdTime, p.dt()));
    }
    from = wp.position;
  }
  p.issue(Command::position(waypoints.back().position, p.state().yaw));
  p.step(ticks_for(kSettleTime, p.dt()));
  return commanded;
}

void require_speed(double speed, std::string_view what) {
  if (!(std::isfinite(speed) && speed > 0.0)) {
    throw ValidationError(fmt::format("{}: must be positive, got {}", what, speed));
  }
}

SpeedResult speed_experiment(std::string label, const Vec3& start,
                             const std::vector<Waypoint>& waypoints, double speed,
                             std::vector<PlotProjection> plots) {
  require_speed(speed, "--speed");
  Planner p(single_drone(start));
  const double commanded = fly_velocity_legs(p, waypoints, speed);
  SpeedResult r{replay(std::move(label), p.finish(), std::move(plots)), commanded, 0.0};
  r.measuredPeak = summarize(r.run.trajectories.front()).peakSpeed;
  r.run.report.push_back(fmt::format("label={} commanded_peak={} measured_peak={} error={}",
                                     r.run.label, format_fixed6(r.commandedPeak),
                                     format_fixed6(r.measuredPeak),
                                     format_fixed6(std::abs(r.commandedPeak - r.measuredPeak))));
  return r;
}

std::string speed_label(std::string_view name, double speed) {
  return fmt::format("{}_{:.2f}", name, speed);
}

void leg_report(Run& run, std::string_view unit, const std::vector<LegResult>& legs) {
  for (std::size_t i = 0; i < legs.size(); ++i) {
    const auto& l = legs[i];
    run.report.push_back(fmt::format("leg={} desired_{}={} measured_{}={} error_{}={} peak_rate={}",
                                     i + 1, unit, format_fixed6(l.desired), unit,
                                     format_fixed6(l.measured), unit, format_fixed6(l.error),
                                     format_fixed6(l.peakRate)));
  }
}

struct LegSpan {
  std::int64_t begin;
  std::int64_t end;
};

}  // namespace

std::span<const std::string_view> names() { return kNames; }

bool is_known(std::string_view name) {
  return std::find(kNames.begin(), kNames.end(), name) != kNames.end();
}

SpeedResult line2d(double speed) {
  const Vec3 origin(0.0, 0.0, 1.0);
  return speed_experiment(speed_label("line2d", speed), origin,
                          {{Vec3(0.0, 1.0, 1.0)}, {origin}, {Vec3(1.0, 0.0, 1.0)}, {origin}},
                          speed, {PlotProjection::XY});
}

SpeedResult line3d(double speed) {
  return speed_experiment(speed_label("line3d", speed), Vec3(-0.5, -0.5, 0.5),
                          {{Vec3(0.5, 0.5, 1.5)}}, speed,
                          {PlotProjection::XY, PlotProjection::XZ});
}

SpeedResult altitude_steps(double speed) {
  const std::vector<Waypoint> steps = {{Vec3(0.0, 0.0, 1.0), kHoldTime},
                                       {Vec3(0.0, 0.0, 1.5), kHoldTime},
                                       {Vec3(0.0, 0.0, 1.0), kHoldTime},
                                       {Vec3(0.0, 0.0, 0.5), kHoldTime}};
  return speed_experiment(speed_label("altitude-steps", speed), Vec3(0.0, 0.0, 0.5), steps,
                          speed, {PlotProjection::TimeZ});
}

SpeedResult yaw_steps(double yawRate) {
  require_speed(yawRate, "--speed (deg/s)");
  Planner p(single_drone(Vec3(0.0, 0.0, 1.0)));
  for (const double direction : {1.0, -1.0}) {
    double turned = 0.0;
    while (turned < 180.0) {
      const double before = p.state().yaw;
      p.issue(Command::velocity(Vec3::Zero(), direction * yawRate));
      p.step();
      turned += direction * wrap_degrees(p.state().yaw - before);
    }
    p.issue(Command::hover());
    p.step(ticks_for(kHoldTime, p.dt()));
  }
  SpeedResult r{replay(speed_label("yaw-steps", yawRate), p.finish(), {PlotProjection::TimeYaw}),
                yawRate, 0.0};
  r.measuredPeak = summarize(r.run.trajectories.front()).peakYawRate;
  r.run.report.push_back(fmt::format("label={} commanded_peak={} measured_peak={} error={}",
                                     r.run.label, format_fixed6(r.commandedPeak),
                                     format_fixed6(r.measuredPeak),
                                     format_fixed6(std::abs(r.commandedPeak - r.measuredPeak))));
  return r;
}

LegsResult position_legs(bool truncateSettle) {
  Scenario base = single_drone(Vec3(0.0, 0.0, 1.0));
  base.arena.min = Vec3(-1.0, -1.5, 0.0);
  base.arena.max = Vec3(100.0, 1.5, 3.0);
  const double settle = truncateSettle ? kTruncatedSettleTime : kSettleTime;

  Planner p(base);
  const double vmax = p.drone().limits.maxLinearSpeed;
  std::vector<LegSpan> spans;
  std::vector<Vec3> targets;
  double x = 0.0;
  for (const double distance : kPositionLegs) {
    x += distance;
    const Vec3 target(x, 0.0, 1.0);
    const auto begin = p.tick();
    p.issue(Command::position(target, 0.0));
    p.step(ticks_for(distance / vmax + settle, p.dt()));
    spans.push_back({begin, p.tick()});
    targets.push_back(target);
  }

  LegsResult out{replay(truncateSettle ? "position-legs_truncated" : "position-legs", p.finish(),
                        {PlotProjection::XY}),
                 {}};
  const auto& rows = out.run.trajectories.front().rows;
  for (std::size_t i = 0; i < spans.size(); ++i) {
    const auto& start = rows[static_cast<std::size_t>(spans[i].begin)];
    const auto& end = rows[static_cast<std::size_t>(spans[i].end)];
    double peak = 0.0;
    for (auto k = spans[i].begin + 1; k <= spans[i].end; ++k) {
      peak = std::max(peak, rows[static_cast<std::size_t>(k)].velocity.norm());
    }
    out.legs.push_back({kPositionLegs[i], (end.position - start.position).norm(),
                        (targets[i] - end.position).norm(), peak});
  }
  leg_report(out.run, "m", out.legs);
  return out;
}

LegsResult yaw_legs(bool truncateSettle) {
  const Vec3 hover(0.0, 0.0, 1.0);
  const double settle = truncateSettle ? kTruncatedSettleTime : kSettleTime;
  Planner p(single_drone(hover));
  const double maxRate = p.drone().limits.maxYawRate;
  std::vector<LegSpan> spans;
  double previous = 0.0;
  for (const double target : kYawTargets) {
    const auto begin = p.tick();
    p.issue(Command::position(hover, target));
    p.step(ticks_for(std::abs(wrap_degrees(target - previous)) / maxRate + settle, p.dt()));
    spans.push_back({begin, p.tick()});
    previous = target;
  }

  LegsResult out{replay(truncateSettle ? "yaw-legs_truncated" : "yaw-legs", p.finish(),
                        {PlotProjection::TimeYaw}),
                 {}};
  const auto& rows = out.run.trajectories.front().rows;
  for (std::size_t i = 0; i < spans.size(); ++i) {
    const auto& end = rows[static_cast<std::size_t>(spans[i].end)];
    double peak = 0.0;
    for (auto k = spans[i].begin + 1; k <= spans[i].end; ++k) {
      peak = std::max(peak, std::abs(rows[static_cast<std::size_t>(k)].yawRate));
    }
    out.legs.push_back(
        {kYawTargets[i], end.yaw, std::abs(wrap_degrees(kYawTargets[i] - end.yaw)), peak});
  }
  leg_report(out.run, "deg", out.legs);
  return out;
}

BatteryResult battery(double initialCharge) {
  if (!(initialCharge >= 0.0 && initialCharge <= 1.0)) {
    throw ValidationError(
        fmt::format("--initial-charge: must be in [0, 1], got {}", initialCharge));
  }
  Scenario s = single_drone(Vec3(0.0, 0.0, 1.0));
  s.drones.front().charge = initialCharge;
  const double expected = battery_time_to_empty(s.drones.front().battery, initialCharge);
  s.duration = static_cast<std::int64_t>(std::ceil(expected / s.dt)) + 10;

  BatteryResult r{replay(fmt::format("battery_{:.2f}", initialCharge), std::move(s),
                         {PlotProjection::TimeCharge}),
                  initialCharge, std::nullopt, expected};
  r.timeToZero = summarize(r.run.trajectories.front()).timeToZeroCharge;
  r.run.report.push_back(fmt::format(
      "label={} initial_charge={} time_to_zero_s={} expected_s={}", r.run.label,
      format_fixed6(initialCharge), r.timeToZero ? format_fixed6(*r.timeToZero) : "none",
      format_fixed6(expected)));
  return r;
}

CalibrationResult camera_calibration(double lateralOffset) {
  const Vec3 eye(0.0, 0.0, 1.0);
  Scenario s = single_drone(eye);
  s.drones.front().camera = CameraConfig{};
  s.duration = 1;
  const double d = kCalibrationDepth;
  const double h = kCalibrationOffset;
  s.lights = {{"red", eye + Vec3(d, lateralOffset, 0.0), {255, 0, 0}},
              {"green", eye + Vec3(d, 0.0, h), {0, 255, 0}},
              {"blue", eye + Vec3(d, -lateralOffset, 0.0), {0, 0, 255}},
              {"white", eye + Vec3(d, 0.0, -h), {255, 255, 255}}};

  Run r;
  r.label = "camera-calibration";
  auto result = run(create_world(s), s.duration);
  r.trajectories = std::move(result.trajectories);
  r.scenario = std::move(s);
  CalibrationResult out{std::move(r), result.world.drones.front().detections};
  for (const auto& det : out.detections) {
    out.run.report.push_back(fmt::format("source={} u={} v={} color={},{},{}", det.sourceId,
                                         det.u, det.v, det.color.r, det.color.g, det.color.b));
  }
  out.run.report.push_back(fmt::format("detections={}", out.detections.size()));
  return out;
}

std::vector<Run> build(std::string_view name, const Options& options) {
  if (!is_known(name)) {
    throw LookupError(fmt::format("unknown experiment '{}'", name));
  }
  auto pick = [](std::optional<double> chosen, std::span<const double> defaults) {
    return chosen ? std::vector<double>{*chosen}
                  : std::vector<double>(defaults.begin(), defaults.end());
  };

  std::vector<std::function<Run()>> jobs;
  if (name == "line2d" || name == "line3d" || name == "altitude-steps") {
    for (double v : pick(options.speed, kDefaultSpeeds)) {
      jobs.emplace_back([name, v] {
        if (name == "line2d") {
          return line2d(v).run;
        }
        return name == "line3d" ? line3d(v).run : altitude_steps(v).run;
      });
    }
  } else if (name == "yaw-steps") {
    for (double w : pick(options.speed, kDefaultYawRates)) {
      jobs.emplace_back([w] { return yaw_steps(w).run; });
    }
  } else if (name == "position-legs") {
    jobs.emplace_back([t = options.truncateSettle] { return position_legs(t).run; });
  } else if (name == "yaw-legs") {
    jobs.emplace_back([t = options.truncateSettle] { return yaw_legs(t).run; });
  } else if (name == "battery") {
    for (double c : pick(options.initialCharge, kDefaultCharges)) {
      jobs.emplace_back([c] { return battery(c).run; });
    }
  } else {
    jobs.emplace_back([] { return camera_calibration().run; });
  }

  std::vector<Run> runs;
  if (options.jobs <= 1 || jobs.size() == 1) {
    for (auto& job : jobs) {
      runs.push_back(job());
    }
    return runs;
  }
  // Independent worlds; results are collected in submission order.
  std::vector<std::future<Run>> pending;
  std::size_t next = 0;
  while (next < jobs.size() || !pending.empty()) {
    while (next < jobs.size() && pending.size() < static_cast<std::size_t>(options.jobs)) {
      pending.push_back(std::async(std::launch::async, jobs[next]));
      ++next;
    }
    runs.push_back(pending.front().get());
    pending.erase(pending.begin());
  }
  return runs;
}

}  // namespace cfsim::experiments
