#include "cfsim/battery.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "cfsim/errors.hpp"

namespace cfsim {

namespace {

constexpr int kMaxBisectionIterations = 200;

double max_derivative(const BatteryModel& m) {
  const auto& c = m.coefficients();
  double best = std::max(m.derivative(0.0), m.derivative(m.tMax()));
  // P' is a downward parabola when c3 < 0; its vertex may be the maximum.
  if (c[3] < 0.0) {
    const double vertex = -c[2] / (3.0 * c[3]);
    if (vertex > 0.0 && vertex < m.tMax()) {
      best = std::max(best, m.derivative(vertex));
    }
  }
  return best;
}

void validate(const BatteryModel& m) {
  for (double c : m.coefficients()) {
    if (!std::isfinite(c)) {
      throw ValidationError("battery: coefficients must be finite");
    }
  }
  if (!(std::isfinite(m.tMax()) && m.tMax() > 0.0)) {
    throw ValidationError(fmt::format("battery: t_max must be positive, got {}", m.tMax()));
  }
  if (!(std::isfinite(m.loadFactor()) && m.loadFactor() > 0.0)) {
    throw ValidationError(
        fmt::format("battery: load_factor must be positive, got {}", m.loadFactor()));
  }
  const double p0 = m.evaluate(0.0);
  if (std::abs(p0 - 1.0) > BatteryModel::kFullChargeTolerance) {
    throw ValidationError(fmt::format("battery: P(0) = {:.6f}, expected 1.0", p0));
  }
  if (max_derivative(m) < BatteryModel::kMinDischargeRate) {
    return;
  }
  // Locate the offending stretch on a fine grid for the message.
  constexpr int kGrid = 4000;
  double first = -1.0;
  double last = -1.0;
  for (int i = 0; i <= kGrid; ++i) {
    const double t = m.tMax() * i / kGrid;
    if (m.derivative(t) >= BatteryModel::kMinDischargeRate) {
      if (first < 0.0) {
        first = t;
      }
      last = t;
    }
  }
  if (first < 0.0) {
    first = last = -m.coefficients()[2] / (3.0 * m.coefficients()[3]);
  }
  throw ValidationError(fmt::format(
      "battery: discharge curve is not strictly decreasing on [0, {:.6f}]; "
      "P'(t) >= 0 on [{:.6f}, {:.6f}] s",
      m.tMax(), first, last));
}

}  // namespace

BatteryModel::BatteryModel() : BatteryModel(kDefaultCoefficients, kDefaultTMax, 1.0) {}

BatteryModel::BatteryModel(const std::array<double, 4>& coefficients, double tMax,
                           double loadFactor)
    : coeffs_(coefficients), tMax_(tMax), loadFactor_(loadFactor) {
  validate(*this);
}

double BatteryModel::evaluate(double t) const {
  return coeffs_[0] + t * (coeffs_[1] + t * (coeffs_[2] + t * coeffs_[3]));
}

double BatteryModel::derivative(double t) const {
  return coeffs_[1] + t * (2.0 * coeffs_[2] + t * 3.0 * coeffs_[3]);
}

double BatteryModel::charge_at(double t) const { return t < tMax_ ? evaluate(t) : 0.0; }

double BatteryModel::time_for_charge(double charge) const {
  if (charge >= evaluate(0.0)) {
    return 0.0;
  }
  if (charge <= evaluate(tMax_)) {
    return tMax_;
  }
  double lo = 0.0;
  double hi = tMax_;
  // Runs down to adjacent doubles (about 53 halvings over [0, 427]).
  for (int i = 0; i < kMaxBisectionIterations; ++i) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) {
      break;
    }
    if (evaluate(mid) > charge) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo + 0.5 * (hi - lo);
}

double battery_next_charge(const BatteryModel& model, double currentCharge, double dt) {
  if (!(currentCharge >= 0.0 && currentCharge <= 1.0)) {
    throw DomainError(fmt::format("battery charge {} outside [0, 1]", currentCharge));
  }
  if (!(dt > 0.0)) {
    throw DomainError(fmt::format("battery step dt must be positive, got {}", dt));
  }
  if (currentCharge == 0.0) {
    return 0.0;
  }
  double t = model.time_for_charge(currentCharge);
  if (t >= model.tMax()) {
    return 0.0;
  }
  t += dt * model.loadFactor();
  if (t >= model.tMax()) {
    return 0.0;
  }
  return std::max(0.0, model.evaluate(t));
}

double battery_time_to_empty(const BatteryModel& model, double charge) {
  if (!(charge >= 0.0 && charge <= 1.0)) {
    throw DomainError(fmt::format("battery charge {} outside [0, 1]", charge));
  }
  if (charge == 0.0) {
    return 0.0;
  }
  return std::max(0.0, model.tMax() - model.time_for_charge(charge));
}

BatteryModel fit_discharge_polynomial(std::span<const ChargeSample> samples,
                                      std::optional<double> tMax) {
  std::set<double> distinct;
  double latest = 0.0;
  for (const auto& s : samples) {
    if (!std::isfinite(s.time) || !std::isfinite(s.charge)) {
      throw FitError("fit: samples must be finite");
    }
    distinct.insert(s.time);
    latest = std::max(latest, s.time);
  }
  if (distinct.size() < 4) {
    throw FitError(fmt::format(
        "fit: underdetermined, need at least 4 distinct sample times, got {}", distinct.size()));
  }

  // Fit in t / scale so the Vandermonde columns are O(1).
  double scale = 0.0;
  for (const auto& s : samples) {
    scale = std::max(scale, std::abs(s.time));
  }
  const auto n = static_cast<Eigen::Index>(samples.size());
  Eigen::MatrixXd design(n, 4);
  Eigen::VectorXd rhs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double s = samples[static_cast<std::size_t>(i)].time / scale;
    design(i, 0) = 1.0;
    design(i, 1) = s;
    design(i, 2) = s * s;
    design(i, 3) = s * s * s;
    rhs(i) = samples[static_cast<std::size_t>(i)].charge;
  }
  const Eigen::Vector4d scaled = design.colPivHouseholderQr().solve(rhs);

  std::array<double, 4> coeffs{};
  double factor = 1.0;
  for (int k = 0; k < 4; ++k) {
    coeffs[static_cast<std::size_t>(k)] = scaled(k) / factor;
    factor *= scale;
  }
  return BatteryModel(coeffs, tMax.value_or(latest));
}

}  // namespace cfsim
