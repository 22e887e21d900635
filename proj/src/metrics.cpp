#include "cfsim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <fmt/format.h>

#include "cfsim/errors.hpp"

namespace cfsim {

double mse(std::span<const double> observed, std::span<const double> estimated) {
  if (observed.size() != estimated.size()) {
    throw MetricsError(fmt::format("mse: series lengths differ ({} vs {})", observed.size(),
                                   estimated.size()));
  }
  if (observed.empty()) {
    throw MetricsError("mse: empty series");
  }
  // Neumaier-compensated sum of squared residuals.
  double sum = 0.0;
  double comp = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double r = observed[i] - estimated[i];
    const double term = r * r;
    const double t = sum + term;
    comp += std::abs(sum) >= term ? (sum - t) + term : (term - t) + sum;
    sum = t;
  }
  return (sum + comp) / static_cast<double>(observed.size());
}

TrajectorySummary summarize(const Trajectory& trajectory, std::optional<Vec3> target) {
  if (trajectory.rows.empty()) {
    throw MetricsError(fmt::format("summarize: trajectory '{}' has no rows", trajectory.droneId));
  }
  TrajectorySummary s;
  for (const auto& r : trajectory.rows) {
    s.peakSpeed = std::max(s.peakSpeed, r.velocity.norm());
    s.peakYawRate = std::max(s.peakYawRate, std::abs(r.yawRate));
    if (!s.timeToZeroCharge && r.charge == 0.0) {
      s.timeToZeroCharge = r.time;
    }
  }
  if (target) {
    s.finalPositionError = (trajectory.rows.back().position - *target).norm();
  }
  return s;
}

std::optional<PlotProjection> parse_projection(std::string_view name) {
  for (auto p : {PlotProjection::XY, PlotProjection::XZ, PlotProjection::TimeZ,
                 PlotProjection::TimeYaw, PlotProjection::TimeCharge}) {
    if (projection_name(p) == name) {
      return p;
    }
  }
  return std::nullopt;
}

std::string_view projection_name(PlotProjection projection) {
  switch (projection) {
    case PlotProjection::XY:
      return "xy";
    case PlotProjection::XZ:
      return "xz";
    case PlotProjection::TimeZ:
      return "time-z";
    case PlotProjection::TimeYaw:
      return "time-yaw";
    case PlotProjection::TimeCharge:
      return "time-charge";
  }
  return "?";
}

void export_plot_columns(std::span<const Trajectory> trajectories, PlotProjection projection,
                         std::ostream& sink) {
  if (trajectories.empty()) {
    throw MetricsError("plot export: no trajectories");
  }
  const auto old = sink.exceptions();
  sink.exceptions(std::ios::badbit | std::ios::failbit);
  bool first = true;
  for (const auto& traj : trajectories) {
    if (!first) {
      sink << '\n';
    }
    first = false;
    for (const auto& r : traj.rows) {
      double a = 0.0;
      double b = 0.0;
      switch (projection) {
        case PlotProjection::XY:
          a = r.position.x();
          b = r.position.y();
          break;
        case PlotProjection::XZ:
          a = r.position.x();
          b = r.position.z();
          break;
        case PlotProjection::TimeZ:
          a = r.time;
          b = r.position.z();
          break;
        case PlotProjection::TimeYaw:
          a = r.time;
          b = r.yaw;
          break;
        case PlotProjection::TimeCharge:
          a = r.time;
          b = r.charge;
          break;
      }
      sink << format_fixed6(a) << ' ' << format_fixed6(b) << '\n';
    }
  }
  sink.flush();
  sink.exceptions(old);
}

}  // namespace cfsim
