#pragma once

// Test-side oracles, independent of the library's solution paths.

#include <cstdint>
#include <vector>

#include "feasops/kirszbraun.hpp"
#include "feasops/space.hpp"

namespace feasops::testing {

/// Brute-force minimizer of h(y) = max_i (||y - c_i|| - r_i) by
/// multi-resolution grid search (valid because h is convex). Supports
/// dimension 1 and 2. Returns the argmin; final grid step ~1e-5.
Point grid_minimax_oracle(const std::vector<Point>& centers, const std::vector<double>& radii,
                          double half_width = 3.0);

/// h(y) itself, for cross-checks.
double minimax_value(const std::vector<Point>& centers, const std::vector<double>& radii,
                     const Point& y);

/// Distance from y to conv{v_i} via Wolfe's minimum-norm-point algorithm
/// (exact at desk scale).
double hull_distance(const std::vector<Point>& values, const Point& y);

/// Random sample data that is strictly inside its Lipschitz budget:
/// anchors in B[0,2], values from a rotation-and-scale map with constant
/// 0.85 L. Anchor count after dedup may be slightly below `count`.
LipschitzSample random_consistent_sample(int dim, std::size_t count, double L,
                                         std::uint64_t seed);

} // namespace feasops::testing
