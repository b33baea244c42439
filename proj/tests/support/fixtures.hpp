// Shared deterministic fixtures for the test binaries.
#pragma once

#include <vector>

#include "mdpa/mdp.hpp"
#include "mdpa/random.hpp"

namespace fixtures {

using mdpa::FiniteMdp;
using mdpa::Policy;
using mdpa::Rng;

/// Dense random model with strictly positive rows; costs in [-1, 2).
inline FiniteMdp random_mdp(Rng& rng, int n, int na, double discount, bool with_labels = false) {
    std::vector<double> probs;
    probs.reserve(static_cast<size_t>(n) * na * n);
    std::vector<double> cost;
    cost.reserve(static_cast<size_t>(n) * na);
    for (int s = 0; s < n; ++s)
        for (int a = 0; a < na; ++a) {
            std::vector<double> row = rng.simplex(n);
            probs.insert(probs.end(), row.begin(), row.end());
            cost.push_back(rng.uniform(-1.0, 2.0));
        }
    std::vector<int> labels;
    if (with_labels) {
        int pos = rng.uniform_int(7) - 3;
        for (int s = 0; s < n; ++s) {
            labels.push_back(pos);
            pos += 1 + rng.uniform_int(3);  // strictly increasing
        }
    }
    return FiniteMdp::from_dense(n, na, discount, probs, std::move(cost), std::move(labels));
}

inline Policy random_policy(Rng& rng, int n, int na, bool stochastic) {
    if (!stochastic) {
        std::vector<int> actions(static_cast<size_t>(n));
        for (int s = 0; s < n; ++s) actions[static_cast<size_t>(s)] = rng.uniform_int(na);
        return Policy::deterministic(std::move(actions));
    }
    std::vector<double> probs;
    for (int s = 0; s < n; ++s) {
        std::vector<double> row = rng.simplex(na);
        probs.insert(probs.end(), row.begin(), row.end());
    }
    return Policy::stochastic(n, na, std::move(probs));
}

/// Two-state, one-action chain with exactly representable probabilities and
/// a closed-form value:
///   state 0: cost c0, stays with prob 1/2, moves with prob 1/2
///   state 1: cost c1, absorbing.
/// V(1) = c1 / (1 - g); V(0) = (c0 + g/2 (V(0) + V(1))) => closed form below.
struct ChainModel {
    FiniteMdp mdp;
    double v0;
    double v1;
};

inline ChainModel two_state_chain(double c0, double c1, double g) {
    std::vector<double> probs = {0.5, 0.5, 0.0, 1.0};
    FiniteMdp m = FiniteMdp::from_dense(2, 1, g, probs, {c0, c1});
    double v1 = c1 / (1 - g);
    double v0 = (c0 + g / 2 * v1) / (1 - g / 2);
    return {std::move(m), v0, v1};
}

}  // namespace fixtures
