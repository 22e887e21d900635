#include <gtest/gtest.h>

#include "support/properties.hpp"

namespace cfsim::testing {
namespace {

constexpr int kCases = 1000;

void expect_ok(const PropertyReport& r) {
  EXPECT_EQ(r.cases, kCases);
  EXPECT_EQ(r.failures, 0) << r.name << ": " << r.firstFailure;
}

TEST(Property, SaturationDirection) { expect_ok(saturation_preserves_direction(kCases, 11)); }
TEST(Property, FrameEquivalence) { expect_ok(body_world_frame_equivalence(kCases, 12)); }
TEST(Property, RabGeometry) { expect_ok(rab_geometry_closed_form(kCases, 13)); }
TEST(Property, BatteryComposition) { expect_ok(battery_composition(kCases, 14)); }
TEST(Property, MseNaive) { expect_ok(mse_matches_naive(kCases, 15)); }
TEST(Property, ScenarioRoundTrip) { expect_ok(scenario_round_trip(kCases, 16)); }

}  // namespace
}  // namespace cfsim::testing
