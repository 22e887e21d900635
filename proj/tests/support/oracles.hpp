#pragma once

// Reference computations written independently of the library code.

#include <array>
#include <optional>
#include <random>
#include <span>

#include "cfsim/flight_control.hpp"
#include "cfsim/scenario.hpp"

namespace cfsim::testing {

// Rotation about +z by yawDeg, via Eigen's AngleAxis.
Vec3 rotate_about_z(const Vec3& v, double yawDeg);

struct RabOracle {
  double range;
  double horizontal;  // deg
  double vertical;    // deg
};
// Empty when the sender coincides with the receiver or is out of a nonzero range.
std::optional<RabOracle> rab_oracle(const Vec3& receiver, double receiverYaw, const Vec3& sender,
                                    double range);

long double eval_cubic(const std::array<double, 4>& c, long double t);

// Plain bisection on [0, tMax] down to 1e-12 s, in long double.
long double bisect_charge_time(const std::array<double, 4>& c, double tMax, double charge);

long double naive_mse(std::span<const double> a, std::span<const double> b);

// Pixel from the raw pinhole relation: focal length in pixels is
// (resolution / 2) / tan(aperture / 2). Empty when outside the aperture.
struct PixelOracle {
  int u;
  int v;
};
std::optional<PixelOracle> pixel_oracle(const Vec3& eye, double yawDeg, const Vec3& source,
                                        double apertureDeg);

// A valid scenario with random sizes and awkward numbers.
Scenario random_scenario(std::mt19937_64& rng);

}  // namespace cfsim::testing
