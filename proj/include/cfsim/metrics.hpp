#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>

#include "cfsim/trajectory.hpp"

namespace cfsim {

// Mean square error (1/n) * sum (observed_i - estimated_i)^2.
// Throws MetricsError on empty input or a length mismatch.
double mse(std::span<const double> observed, std::span<const double> estimated);

struct TrajectorySummary {
  double peakSpeed = 0.0;                    // max |velocity|, m/s
  double peakYawRate = 0.0;                  // max |yaw rate|, deg/s
  std::optional<double> finalPositionError;  // |last position - target|, m
  std::optional<double> timeToZeroCharge;    // time of first row with charge 0
};

TrajectorySummary summarize(const Trajectory& trajectory,
                            std::optional<Vec3> target = std::nullopt);

enum class PlotProjection { XY, XZ, TimeZ, TimeYaw, TimeCharge };

std::optional<PlotProjection> parse_projection(std::string_view name);
std::string_view projection_name(PlotProjection projection);

// Two whitespace-separated columns per row; one block per trajectory,
// blocks separated by a single blank line.
void export_plot_columns(std::span<const Trajectory> trajectories, PlotProjection projection,
                         std::ostream& sink);

}  // namespace cfsim
