#pragma once

#include <vector>

#include "mdpa/mdp.hpp"
#include "mdpa/weighting.hpp"

namespace mdpa {

/// Single-item inventory model: stock level s in -s_max..s_max, order
/// quantity a in 0..s_max, i.i.d. Binomial(demand_n, demand_q) demand w,
/// next stock clip(s + a - w), per-step cost
///
///   c(s, a) = proc_cost * a + hold_cost * max(s, 0) + short_cost * max(-s, 0).
struct InventoryParams {
    int s_max = 500;
    double discount = 0.75;
    int demand_n = 10;
    double demand_q = 0.4;
    double hold_cost = 4.0;
    double short_cost = 2.0;
    double proc_cost = 5.0;
};

void require_valid(const InventoryParams& p);

/// Binomial(n, q) probabilities computed in log space and renormalized so
/// they sum to exactly 1 (the rounding residual lands on the mode).
std::vector<double> binomial_pmf(int n, double q);

/// Builds the finite MDP with state labels -s_max..s_max (2 s_max + 1
/// states) and actions 0..s_max. Demand pushed past either stock boundary
/// accumulates its mass at that boundary state, so rows stay exact
/// distributions.
FiniteMdp build_inventory(const InventoryParams& params);

/// Cost-shaped weight over the labelled states:
///   w(s) = 1 + ell * (hold_cost * max(s, 0) + short_cost * max(-s, 0))
/// using the cost coefficients of `params_hat` (the approximate model).
/// ell = 0 recovers the sup-norm weight w == 1.
WeightFn build_weight(const InventoryParams& params_hat, double ell, int n_states);

/// A family of cost-shaped weights sharing one coefficient shape: one weight
/// per entry of ell_values.
struct WeightFamilySpec {
    std::vector<double> ell_values;
    InventoryParams shape;
};

std::vector<WeightFn> build_weight_family(const WeightFamilySpec& spec, int n_states);

}  // namespace mdpa
