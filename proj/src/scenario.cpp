#include "cfsim/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>

#include <fmt/format.h>

#include "cfsim/errors.hpp"

namespace cfsim {

bool Arena::contains(const Vec3& p) const {
  return (p.array() >= min.array()).all() && (p.array() <= max.array()).all();
}

Vec3 Arena::clamp(const Vec3& p) const { return p.cwiseMax(min).cwiseMin(max); }

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

namespace {

// ---------------------------------------------------------------------------
// Lexing helpers

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) {
      ++i;
    }
    const std::size_t start = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t') {
      ++i;
    }
    if (i > start) {
      out.push_back(s.substr(start, i - start));
    }
  }
  return out;
}

class ValueReader {
public:
  ValueReader(int line, std::string_view key, std::string_view value)
      : line_(line), key_(key), tokens_(split_ws(value)) {}

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(line_, fmt::format("'{}': {}", key_, what));
  }

  void expect_count(std::size_t n) const {
    if (tokens_.size() != n) {
      fail(fmt::format("expected {} value{}, got {}", n, n == 1 ? "" : "s", tokens_.size()));
    }
  }

  double number(std::size_t i) const {
    std::string_view tok = tokens_.at(i);
    if (!tok.empty() && tok.front() == '+') {
      tok.remove_prefix(1);
    }
    double value = 0.0;
    const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size() || !std::isfinite(value)) {
      fail(fmt::format("expected a finite number, got '{}'", tokens_.at(i)));
    }
    return value;
  }

  template <typename Int>
  Int integer(std::size_t i) const {
    std::string_view tok = tokens_.at(i);
    Int value{};
    const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size()) {
      fail(fmt::format("expected an integer, got '{}'", tok));
    }
    return value;
  }

  bool flag(std::size_t i) const {
    const auto tok = tokens_.at(i);
    if (tok == "on" || tok == "true") {
      return true;
    }
    if (tok == "off" || tok == "false") {
      return false;
    }
    fail(fmt::format("expected on/off, got '{}'", tok));
  }

  std::string_view word(std::size_t i) const { return tokens_.at(i); }

  double scalar() const {
    expect_count(1);
    return number(0);
  }

  Vec3 vec3(std::size_t first = 0) const {
    return {number(first), number(first + 1), number(first + 2)};
  }

  Rgb rgb(std::size_t first = 0) const {
    std::array<std::uint8_t, 3> ch{};
    for (std::size_t k = 0; k < 3; ++k) {
      const int c = integer<int>(first + k);
      if (c < 0 || c > 255) {
        fail(fmt::format("colour channel {} outside [0, 255]", c));
      }
      ch[k] = static_cast<std::uint8_t>(c);
    }
    return {ch[0], ch[1], ch[2]};
  }

  PDGains gains() const {
    expect_count(2);
    return {number(0), number(1)};
  }

  std::size_t size() const { return tokens_.size(); }

private:
  int line_;
  std::string_view key_;
  std::vector<std::string_view> tokens_;
};

Command parse_command(const ValueReader& r) {
  r.expect_count(6);
  Command cmd;
  const auto kind = r.word(0);
  if (kind == "velocity") {
    cmd.kind = CommandKind::Velocity;
  } else if (kind == "position") {
    cmd.kind = CommandKind::Position;
  } else {
    r.fail(fmt::format("command kind must be velocity or position, got '{}'", kind));
  }
  const auto frame = r.word(1);
  if (frame == "world") {
    cmd.frame = CommandFrame::WorldAbsolute;
  } else if (frame == "body") {
    cmd.frame = CommandFrame::BodyRelative;
  } else {
    r.fail(fmt::format("command frame must be world or body, got '{}'", frame));
  }
  cmd.linear = r.vec3(2);
  cmd.angular = r.number(5);
  return cmd;
}

// ---------------------------------------------------------------------------
// Parser

enum class SectionKind { Top, Arena, Noise, Drone, Light, Script };

struct PendingBattery {
  std::array<double, 4> coefficients = BatteryModel::kDefaultCoefficients;
  double tMax = BatteryModel::kDefaultTMax;
  double loadFactor = 1.0;
};

class Parser {
public:
  Scenario parse(std::string_view text) {
    int lineNo = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const auto eol = text.find('\n', pos);
      std::string_view line =
          text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
      pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
      ++lineNo;

      if (const auto hash = line.find('#'); hash != std::string_view::npos) {
        line = line.substr(0, hash);
      }
      line = trim(line);
      if (line.empty()) {
        continue;
      }
      if (line.front() == '[') {
        open_section(lineNo, line);
        continue;
      }
      const auto eq = line.find('=');
      if (eq == std::string_view::npos) {
        throw ParseError(lineNo, fmt::format("expected 'key = value', got '{}'", line));
      }
      const auto key = trim(line.substr(0, eq));
      const auto value = trim(line.substr(eq + 1));
      if (key.empty()) {
        throw ParseError(lineNo, "missing key before '='");
      }
      assign(lineNo, key, value);
    }
    close_section();
    if (!sawVersion_) {
      throw ParseError(0, "missing required key 'format_version'");
    }
    validate_scenario(scenario_);
    return std::move(scenario_);
  }

private:
  void open_section(int line, std::string_view header) {
    if (header.back() != ']') {
      throw ParseError(line, fmt::format("unterminated section header '{}'", header));
    }
    const auto parts = split_ws(header.substr(1, header.size() - 2));
    if (parts.empty()) {
      throw ParseError(line, "empty section header");
    }
    close_section();
    const auto name = parts[0];
    const bool named = name == "drone" || name == "light" || name == "script";
    if (named && parts.size() != 2) {
      throw ParseError(line, fmt::format("section [{}] needs exactly one id", name));
    }
    if (!named && parts.size() != 1) {
      throw ParseError(line, fmt::format("section [{}] takes no id", name));
    }
    if (!named) {
      if (!uniqueSections_.insert(std::string(name)).second) {
        throw ParseError(line, fmt::format("duplicate section [{}]", name));
      }
    }
    seenKeys_.clear();
    if (name == "arena") {
      kind_ = SectionKind::Arena;
    } else if (name == "noise") {
      kind_ = SectionKind::Noise;
    } else if (name == "drone") {
      kind_ = SectionKind::Drone;
      scenario_.drones.emplace_back().id = std::string(parts[1]);
      battery_ = PendingBattery{};
      cameraFlag_.reset();
    } else if (name == "light") {
      kind_ = SectionKind::Light;
      scenario_.lights.emplace_back().id = std::string(parts[1]);
    } else if (name == "script") {
      kind_ = SectionKind::Script;
      scriptId_ = std::string(parts[1]);
      if (scenario_.scripts.contains(scriptId_)) {
        throw ParseError(line, fmt::format("duplicate section [script {}]", scriptId_));
      }
      scenario_.scripts[scriptId_];
    } else {
      throw ParseError(line, fmt::format("unknown section [{}]", name));
    }
  }

  void close_section() {
    if (kind_ != SectionKind::Drone) {
      return;
    }
    auto& drone = scenario_.drones.back();
    try {
      drone.battery = BatteryModel(battery_.coefficients, battery_.tMax, battery_.loadFactor);
    } catch (const ValidationError& e) {
      throw ValidationError(fmt::format("drone.{}.{}", drone.id, e.what()));
    }
    kind_ = SectionKind::Top;
  }

  void assign(int line, std::string_view key, std::string_view value) {
    const ValueReader r(line, key, value);
    if (kind_ != SectionKind::Script && !seenKeys_.insert(std::string(key)).second) {
      throw ParseError(line, fmt::format("duplicate key '{}'", key));
    }
    switch (kind_) {
      case SectionKind::Top:
        return assign_top(r, key);
      case SectionKind::Arena:
        return assign_arena(r, key);
      case SectionKind::Noise:
        return assign_noise(r, key);
      case SectionKind::Drone:
        return assign_drone(r, key);
      case SectionKind::Light:
        return assign_light(r, key);
      case SectionKind::Script:
        return assign_script(r, key);
    }
  }

  [[noreturn]] static void unknown(const ValueReader& r, std::string_view section) {
    r.fail(fmt::format("unknown key in {}", section));
  }

  void assign_top(const ValueReader& r, std::string_view key) {
    if (key == "format_version") {
      r.expect_count(1);
      scenario_.formatVersion = r.integer<int>(0);
      if (scenario_.formatVersion != Scenario::kFormatVersion) {
        r.fail(fmt::format("unsupported version {}, this build reads {}",
                           scenario_.formatVersion, Scenario::kFormatVersion));
      }
      sawVersion_ = true;
    } else if (key == "dt") {
      scenario_.dt = r.scalar();
    } else if (key == "duration") {
      r.expect_count(1);
      scenario_.duration = r.integer<std::int64_t>(0);
    } else {
      unknown(r, "top level");
    }
  }

  void assign_arena(const ValueReader& r, std::string_view key) {
    r.expect_count(3);
    if (key == "min") {
      scenario_.arena.min = r.vec3();
    } else if (key == "max") {
      scenario_.arena.max = r.vec3();
    } else {
      unknown(r, "[arena]");
    }
  }

  void assign_noise(const ValueReader& r, std::string_view key) {
    if (key == "position_sigma") {
      scenario_.noise.positionSigma = r.scalar();
    } else if (key == "seed") {
      r.expect_count(1);
      scenario_.noise.seed = r.integer<std::uint64_t>(0);
    } else {
      unknown(r, "[noise]");
    }
  }

  void assign_drone(const ValueReader& r, std::string_view key) {
    auto& d = scenario_.drones.back();
    auto camera = [&]() -> CameraConfig& {
      if (cameraFlag_ == false) {
        r.fail("camera fields given but camera = off");
      }
      if (!d.camera) {
        d.camera.emplace();
      }
      return *d.camera;
    };
    auto rab = [&]() -> RabConfig& {
      if (!d.rab) {
        d.rab.emplace();
      }
      return *d.rab;
    };

    if (key == "position") {
      r.expect_count(3);
      d.position = r.vec3();
    } else if (key == "yaw") {
      d.yaw = r.scalar();
    } else if (key == "charge") {
      d.charge = r.scalar();
    } else if (key == "gains.velocity") {
      d.gains.velocity = r.gains();
    } else if (key == "gains.yaw_rate") {
      d.gains.yawRate = r.gains();
    } else if (key == "gains.position") {
      d.gains.position = r.gains();
    } else if (key == "gains.yaw") {
      d.gains.yaw = r.gains();
    } else if (key == "limits.max_linear_speed") {
      d.limits.maxLinearSpeed = r.scalar();
    } else if (key == "limits.max_yaw_rate") {
      d.limits.maxYawRate = r.scalar();
    } else if (key == "limits.max_linear_accel") {
      d.limits.maxLinearAccel = r.scalar();
    } else if (key == "limits.max_yaw_accel") {
      d.limits.maxYawAccel = r.scalar();
    } else if (key == "led") {
      r.expect_count(4);
      d.led = {r.rgb(0), r.flag(3)};
    } else if (key == "camera") {
      r.expect_count(1);
      cameraFlag_ = r.flag(0);
      if (*cameraFlag_) {
        if (!d.camera) {
          d.camera.emplace();
        }
      } else if (d.camera) {
        r.fail("camera fields given but camera = off");
      }
    } else if (key == "camera.aperture") {
      camera().aperture = r.scalar();
    } else if (key == "camera.mount_yaw") {
      camera().mountYawOffset = r.scalar();
    } else if (key == "rab.range") {
      rab().range = r.scalar();
    } else if (key == "rab.payload_max") {
      r.expect_count(1);
      rab().payloadMax = r.integer<std::size_t>(0);
    } else if (key == "battery.coefficients") {
      r.expect_count(4);
      for (std::size_t k = 0; k < 4; ++k) {
        battery_.coefficients[k] = r.number(k);
      }
    } else if (key == "battery.t_max") {
      battery_.tMax = r.scalar();
    } else if (key == "battery.load_factor") {
      battery_.loadFactor = r.scalar();
    } else {
      unknown(r, fmt::format("[drone {}]", d.id));
    }
  }

  void assign_light(const ValueReader& r, std::string_view key) {
    auto& l = scenario_.lights.back();
    if (key == "position") {
      r.expect_count(3);
      l.position = r.vec3();
    } else if (key == "color") {
      r.expect_count(3);
      l.color = r.rgb();
    } else {
      unknown(r, fmt::format("[light {}]", l.id));
    }
  }

  void assign_script(const ValueReader& r, std::string_view key) {
    std::int64_t tick = 0;
    const auto res = std::from_chars(key.data(), key.data() + key.size(), tick);
    if (res.ec != std::errc{} || res.ptr != key.data() + key.size()) {
      r.fail("script keys must be integer ticks");
    }
    scenario_.scripts[scriptId_].push_back({tick, parse_command(r)});
  }

  Scenario scenario_;
  SectionKind kind_ = SectionKind::Top;
  std::set<std::string> seenKeys_;
  std::set<std::string> uniqueSections_;
  std::string scriptId_;
  PendingBattery battery_;
  std::optional<bool> cameraFlag_;
  bool sawVersion_ = false;
};

// ---------------------------------------------------------------------------
// Validation

[[noreturn]] void invalid(const std::string& path, const std::string& what) {
  throw ValidationError(fmt::format("{}: {}", path, what));
}

void require_positive(const std::string& path, double v) {
  if (!(std::isfinite(v) && v > 0.0)) {
    invalid(path, fmt::format("must be positive, got {}", v));
  }
}

void validate_gains(const std::string& path, const PDGains& g) {
  if (!(std::isfinite(g.kp) && g.kp > 0.0)) {
    invalid(path, fmt::format("kp must be positive, got {}", g.kp));
  }
  if (!(std::isfinite(g.kd) && g.kd >= 0.0)) {
    invalid(path, fmt::format("kd must be non-negative, got {}", g.kd));
  }
}

bool valid_id(const std::string& id) {
  return !id.empty() && std::all_of(id.begin(), id.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
  });
}

std::string vec_text(const Vec3& v) {
  return fmt::format("({}, {}, {})", v.x(), v.y(), v.z());
}

}  // namespace

void validate_scenario(const Scenario& s) {
  if (s.formatVersion != Scenario::kFormatVersion) {
    invalid("format_version", fmt::format("unsupported version {}", s.formatVersion));
  }
  require_positive("dt", s.dt);
  if (s.duration < 0) {
    invalid("duration", fmt::format("must be >= 0 ticks, got {}", s.duration));
  }
  if (!s.arena.min.allFinite() || !s.arena.max.allFinite() ||
      !(s.arena.min.array() < s.arena.max.array()).all()) {
    invalid("arena", fmt::format("min {} must be below max {} on every axis",
                                 vec_text(s.arena.min), vec_text(s.arena.max)));
  }
  if (!(std::isfinite(s.noise.positionSigma) && s.noise.positionSigma >= 0.0)) {
    invalid("noise.position_sigma", "must be non-negative");
  }

  std::set<std::string> ids;
  for (const auto& d : s.drones) {
    const std::string p = "drone." + d.id;
    if (!valid_id(d.id)) {
      invalid("drone", fmt::format("invalid id '{}'", d.id));
    }
    if (!ids.insert(d.id).second) {
      invalid(p + ".id", fmt::format("duplicate entity id '{}'", d.id));
    }
    if (!d.position.allFinite()) {
      invalid(p + ".position", "must be finite");
    }
    if (!s.arena.contains(d.position)) {
      invalid(p + ".position",
              fmt::format("initial position {} outside the arena", vec_text(d.position)));
    }
    if (!std::isfinite(d.yaw)) {
      invalid(p + ".yaw", "must be finite");
    }
    if (!(d.charge >= 0.0 && d.charge <= 1.0)) {
      invalid(p + ".charge", fmt::format("must be in [0, 1], got {}", d.charge));
    }
    validate_gains(p + ".gains.velocity", d.gains.velocity);
    validate_gains(p + ".gains.yaw_rate", d.gains.yawRate);
    validate_gains(p + ".gains.position", d.gains.position);
    validate_gains(p + ".gains.yaw", d.gains.yaw);
    require_positive(p + ".limits.max_linear_speed", d.limits.maxLinearSpeed);
    require_positive(p + ".limits.max_yaw_rate", d.limits.maxYawRate);
    require_positive(p + ".limits.max_linear_accel", d.limits.maxLinearAccel);
    require_positive(p + ".limits.max_yaw_accel", d.limits.maxYawAccel);
    if (d.camera) {
      if (!(d.camera->aperture > 0.0 && d.camera->aperture < 180.0)) {
        invalid(p + ".camera.aperture",
                fmt::format("must be in (0, 180), got {}", d.camera->aperture));
      }
      if (!std::isfinite(d.camera->mountYawOffset)) {
        invalid(p + ".camera.mount_yaw", "must be finite");
      }
    }
    if (d.rab) {
      if (!(std::isfinite(d.rab->range) && d.rab->range >= 0.0)) {
        invalid(p + ".rab.range", fmt::format("must be >= 0, got {}", d.rab->range));
      }
      if (d.rab->payloadMax < 1) {
        invalid(p + ".rab.payload_max", "must be at least 1 byte");
      }
    }
  }
  for (const auto& l : s.lights) {
    if (!valid_id(l.id)) {
      invalid("light", fmt::format("invalid id '{}'", l.id));
    }
    if (!ids.insert(l.id).second) {
      invalid("light." + l.id + ".id", fmt::format("duplicate entity id '{}'", l.id));
    }
    if (!l.position.allFinite()) {
      invalid("light." + l.id + ".position", "must be finite");
    }
  }
  for (const auto& [id, entries] : s.scripts) {
    const std::string p = "script." + id;
    if (std::none_of(s.drones.begin(), s.drones.end(),
                     [&](const DroneSpec& d) { return d.id == id; })) {
      invalid(p, fmt::format("references unknown drone '{}'", id));
    }
    std::int64_t last = 0;
    for (const auto& e : entries) {
      if (e.tick < last) {
        invalid(p, fmt::format("tick {} follows tick {}; ticks must be non-decreasing", e.tick,
                               last));
      }
      if (!is_finite(e.command)) {
        invalid(p, fmt::format("command at tick {} is not finite", e.tick));
      }
      last = e.tick;
    }
  }
}

Scenario load_scenario(std::string_view text) { return Parser{}.parse(text); }

std::string render_scenario(const Scenario& s) {
  const auto num = format_double;
  auto vec = [](const Vec3& v) {
    return fmt::format("{} {} {}", format_double(v.x()), format_double(v.y()),
                       format_double(v.z()));
  };
  auto gains = [](const PDGains& g) {
    return fmt::format("{} {}", format_double(g.kp), format_double(g.kd));
  };
  auto rgb = [](const Rgb& c) { return fmt::format("{} {} {}", c.r, c.g, c.b); };

  std::string out;
  auto line = [&out](std::string_view key, const std::string& value) {
    out += fmt::format("{} = {}\n", key, value);
  };

  line("format_version", std::to_string(s.formatVersion));
  line("dt", num(s.dt));
  line("duration", std::to_string(s.duration));

  out += "\n[arena]\n";
  line("min", vec(s.arena.min));
  line("max", vec(s.arena.max));

  out += "\n[noise]\n";
  line("position_sigma", num(s.noise.positionSigma));
  line("seed", std::to_string(s.noise.seed));

  for (const auto& d : s.drones) {
    out += fmt::format("\n[drone {}]\n", d.id);
    line("position", vec(d.position));
    line("yaw", num(d.yaw));
    line("charge", num(d.charge));
    line("gains.velocity", gains(d.gains.velocity));
    line("gains.yaw_rate", gains(d.gains.yawRate));
    line("gains.position", gains(d.gains.position));
    line("gains.yaw", gains(d.gains.yaw));
    line("limits.max_linear_speed", num(d.limits.maxLinearSpeed));
    line("limits.max_yaw_rate", num(d.limits.maxYawRate));
    line("limits.max_linear_accel", num(d.limits.maxLinearAccel));
    line("limits.max_yaw_accel", num(d.limits.maxYawAccel));
    line("led", fmt::format("{} {}", rgb(d.led.color), d.led.on ? "on" : "off"));
    if (d.camera) {
      line("camera", "on");
      line("camera.aperture", num(d.camera->aperture));
      line("camera.mount_yaw", num(d.camera->mountYawOffset));
    }
    if (d.rab) {
      line("rab.range", num(d.rab->range));
      line("rab.payload_max", std::to_string(d.rab->payloadMax));
    }
    const auto& c = d.battery.coefficients();
    line("battery.coefficients",
         fmt::format("{} {} {} {}", num(c[0]), num(c[1]), num(c[2]), num(c[3])));
    line("battery.t_max", num(d.battery.tMax()));
    line("battery.load_factor", num(d.battery.loadFactor()));
  }

  for (const auto& l : s.lights) {
    out += fmt::format("\n[light {}]\n", l.id);
    line("position", vec(l.position));
    line("color", rgb(l.color));
  }

  for (const auto& [id, entries] : s.scripts) {
    out += fmt::format("\n[script {}]\n", id);
    for (const auto& e : entries) {
      const auto& cmd = e.command;
      out += fmt::format("{} = {} {} {} {}\n", e.tick,
                         cmd.kind == CommandKind::Velocity ? "velocity" : "position",
                         cmd.frame == CommandFrame::WorldAbsolute ? "world" : "body",
                         vec(cmd.linear), num(cmd.angular));
    }
  }
  return out;
}

}  // namespace cfsim
