#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "cfsim/flight_control.hpp"

namespace cfsim {

struct TrajectoryRow {
  std::int64_t tick = 0;
  double time = 0.0;
  Vec3 position = Vec3::Zero();
  double yaw = 0.0;
  Vec3 velocity = Vec3::Zero();
  double yawRate = 0.0;
  double charge = 0.0;

  bool operator==(const TrajectoryRow&) const = default;
};

struct Trajectory {
  std::string droneId;
  std::vector<TrajectoryRow> rows;

  bool operator==(const Trajectory&) const = default;
};

inline constexpr std::string_view kTrajectoryHeader =
    "tick,time_s,id,x,y,z,yaw_deg,vx,vy,vz,yaw_rate_deg_s,charge";

// Header plus one row per tick; floats fixed to 6 decimals, LF line endings.
// Throws std::ios_base::failure if the sink goes bad.
void write_trajectory(const Trajectory& trajectory, std::ostream& sink);
std::string trajectory_csv(const Trajectory& trajectory);

// Fixed 6-decimal text; negative zero prints as 0.000000.
std::string format_fixed6(double x);

// Minimal comma-separated table: first line is the header, no quoting.
class CsvTable {
public:
  static CsvTable parse(std::string_view text);

  const std::vector<std::string>& header() const { return header_; }
  std::size_t row_count() const { return rows_.size(); }
  bool has_column(std::string_view name) const;
  // Throws ParseError naming the line of a non-numeric cell.
  std::vector<double> numeric_column(std::string_view name) const;

private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
  std::vector<int> lineNumbers_;
};

}  // namespace cfsim
