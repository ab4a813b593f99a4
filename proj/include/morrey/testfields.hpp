#pragma once

#include <cstdint>
#include <vector>

#include "morrey/field.hpp"
#include "morrey/geometry.hpp"
#include "morrey/operators.hpp"

namespace morrey {

// Deterministic, seeded family of compactly supported probe fields cycling
// through four kinds: polynomial bumps, box indicators, windowed oscillations,
// and smoothed noise. Every field is supported inside the ball of the given
// half-width around the center, so scale sweeps can steer supports. Labels
// encode kind, index, and seed for reproducible reports.
std::vector<TestField> test_family(const Grid& g, int count, std::uint64_t seed, Point center,
                                   double half_width);

}  // namespace morrey
