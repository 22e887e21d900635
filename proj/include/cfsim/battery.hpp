#pragma once

#include <array>
#include <optional>
#include <span>

namespace cfsim {

struct ChargeSample {
  double time;    // s
  double charge;  // fraction
};

// Discharge curve P(t) = c0 + c1 t + c2 t^2 + c3 t^3 over [0, tMax].
// Construction validates that P is strictly decreasing on [0, tMax] and that
// P(0) is a full charge; cutoffCharge() is P(tMax).
class BatteryModel {
public:
  // Defaults: P(0) = 1, P(tMax) = 0.30, P'(0) = -0.003/s, P'(tMax) = -0.005/s,
  // tMax = 427.21 s.
  static constexpr std::array<double, 4> kDefaultCoefficients = {
      1.0, -0.003, 1.4242140232723697651e-05, -2.5877842137707728732e-08};
  static constexpr double kDefaultTMax = 427.21;
  // Accepted |P(0) - 1|. Fitted curves never hit 1.0 exactly.
  static constexpr double kFullChargeTolerance = 0.05;
  // P' must stay below this everywhere on [0, tMax].
  static constexpr double kMinDischargeRate = -1e-9;

  BatteryModel();
  BatteryModel(const std::array<double, 4>& coefficients, double tMax, double loadFactor = 1.0);

  const std::array<double, 4>& coefficients() const { return coeffs_; }
  double tMax() const { return tMax_; }
  double loadFactor() const { return loadFactor_; }
  double cutoffCharge() const { return evaluate(tMax_); }

  double evaluate(double t) const;
  double derivative(double t) const;

  // Reported charge after t seconds of flight from full: P(t) before tMax, 0 after.
  double charge_at(double t) const;

  // Flight time at which P reaches `charge`, by bisection on [0, tMax].
  // Returns 0 for charges at or above P(0) and tMax at or below the cutoff.
  double time_for_charge(double charge) const;

  bool operator==(const BatteryModel&) const = default;

private:
  std::array<double, 4> coeffs_;
  double tMax_;
  double loadFactor_;
};

// One discharge update: invert P, advance by dt * loadFactor, re-evaluate.
// Throws DomainError for charges outside [0, 1] or dt <= 0.
double battery_next_charge(const BatteryModel& model, double currentCharge, double dt);

// tMax - t(charge); 0 at or below the cutoff.
double battery_time_to_empty(const BatteryModel& model, double charge);

// Least-squares cubic through the samples, coefficients in seconds. P(0) is
// not forced to 1; the model is validated as usual and rejected
// (ValidationError) when it is not strictly decreasing. Fewer than 4 distinct
// times throws FitError. tMax defaults to the last sample time.
BatteryModel fit_discharge_polynomial(std::span<const ChargeSample> samples,
                                      std::optional<double> tMax = std::nullopt);

}  // namespace cfsim
