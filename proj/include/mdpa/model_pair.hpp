#pragma once

#include <optional>

#include "mdpa/mdp.hpp"
#include "mdpa/solve.hpp"
#include "mdpa/types.hpp"

namespace mdpa {

/// A true model and an approximate model over the same state/action space
/// and discount. All mismatch functionals and bounds are defined on pairs.
struct ModelPair {
    FiniteMdp true_model;
    FiniteMdp approx_model;

    ModelPair(FiniteMdp m, FiniteMdp m_hat);

    int num_states() const { return true_model.num_states(); }
    int num_actions() const { return true_model.num_actions(); }
    double discount() const { return true_model.discount(); }
};

/// A pair plus the solved quantities every bound consumes:
///  - the approximate model's optimal value and greedy policy,
///  - the value of deploying that greedy policy in the true model,
///  - optionally (the "oracle" side) the true model's own optimum, which is
///    what the bounds are sound against and is only needed for realized-gap
///    reporting and the bound variants evaluated at the true optimum.
struct SolvedPair {
    ModelPair pair;
    ValueVec approx_value;          // V* of approx_model
    Policy approx_policy;           // greedy for approx_value
    ValueVec deployed_value;        // value of approx_policy in true_model
    std::optional<ValueVec> true_value;   // V* of true_model
    std::optional<Policy> true_policy;    // greedy for true_value

    bool has_oracle() const { return true_value.has_value(); }
};

SolvedPair solve_pair(ModelPair pair, const SolveOptions& options = {}, bool with_oracle = true);

}  // namespace mdpa
