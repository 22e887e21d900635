#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace cfsim::testing {

// Outcome of one randomized property sweep.
struct PropertyReport {
  std::string name;
  int cases = 0;
  int failures = 0;
  std::string firstFailure;

  bool ok() const { return cases > 0 && failures == 0; }
};

PropertyReport saturation_preserves_direction(int cases, std::uint64_t seed);
PropertyReport body_world_frame_equivalence(int cases, std::uint64_t seed);
PropertyReport rab_geometry_closed_form(int cases, std::uint64_t seed);
PropertyReport battery_composition(int cases, std::uint64_t seed);
PropertyReport mse_matches_naive(int cases, std::uint64_t seed);
PropertyReport scenario_round_trip(int cases, std::uint64_t seed);

std::vector<PropertyReport> all_properties(int cases, std::uint64_t seed);

}  // namespace cfsim::testing
