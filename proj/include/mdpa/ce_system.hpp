#pragma once

#include <vector>

#include "mdpa/model_pair.hpp"

namespace mdpa {

/// Discretized scalar system with additive noise on an integer grid:
///
///   s' = clip( round(drift * s) + u + N,  -grid_radius, grid_radius )
///
/// with states s in {-grid_radius..grid_radius} (labelled by their integer
/// value), actions u in {-action_radius..action_radius}, zero-mean noise N
/// on an integer support, and quadratic cost state_cost * s^2 +
/// action_cost * u^2 shared by both models. The companion deterministic
/// model replaces N by its mean (zero), which is the certainty-equivalent
/// design model.
struct CeParams {
    int grid_radius = 20;
    int action_radius = 2;
    double drift = 0.8;
    double discount = 0.9;
    double state_cost = 1.0;
    double action_cost = 0.1;
    std::vector<int> noise_support = {-1, 0, 1};
    std::vector<double> noise_probs = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
};

struct CeSystem {
    ModelPair pair;         // true_model = stochastic, approx_model = noise-free
    double noise_mean_abs;  // E|N|, exact from the pmf
};

/// Validates the parameters (probabilities sum to 1, mean exactly zero up
/// to 1e-12, grid_radius >= 1) and builds both models. Clipped outcomes
/// accumulate their mass at the boundary states.
CeSystem build_ce_system(const CeParams& params);

}  // namespace mdpa
