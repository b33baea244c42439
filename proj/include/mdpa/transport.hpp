#pragma once

#include <span>
#include <vector>

namespace mdpa {

/// Exact cost of optimally transporting `supply` onto `demand` with dense
/// ground costs `cost[i * n_demand + j]` (costs must be finite, >= 0).
/// Masses must be nonnegative with equal totals up to 1e-9 (the demand side
/// is rescaled to balance exactly).
///
/// Transportation simplex with Bland's pivoting rule, so it terminates even
/// on degenerate instances; entering arcs need a reduced cost below a small
/// relative threshold, which keeps floating-point noise from cycling.
double transport_cost(std::span<const double> supply, std::span<const double> demand,
                      std::span<const double> cost);

}  // namespace mdpa
