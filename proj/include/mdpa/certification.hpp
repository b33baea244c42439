#pragma once

#include <limits>
#include <optional>

#include "mdpa/model_pair.hpp"
#include "mdpa/weighting.hpp"

namespace mdpa {

enum class CheckStatus {
    certified,      // witness found and every required kappa is <= the given kappa
    not_certified,  // witness examined but some kappa exceeds the given kappa
    skipped,        // required inputs unavailable (true-model optimum not solved)
};

/// One constructive stability check: a concrete witness policy together with
/// its expansion factors. "Not certified" means this witness fails the given
/// kappa, not that no stable witness exists.
struct WitnessCheck {
    CheckStatus status = CheckStatus::skipped;
    double kappa_true = std::numeric_limits<double>::quiet_NaN();    // witness kappa in the true model
    double kappa_approx = std::numeric_limits<double>::quiet_NaN();  // witness kappa in the approximate model
    std::optional<Policy> witness;
};

/// Certification report for a (kappa, w) pair and a cost transform. Each
/// check certifies one of the structural conditions the loss bounds need,
/// via the deterministic greedy policy (smallest-index tie-break) as witness.
struct AssumptionReport {
    double kappa = 0.0;
    bool gate_ok = false;  // discount * kappa < 1 - margin

    /// Greedy policy of the true model at its own optimum, stable in the true model.
    WitnessCheck true_greedy;
    /// Greedy policy of the approximate model at its optimum, stable in both models.
    WitnessCheck approx_greedy;
    /// Greedy policy of the (cost-transformed) true model at the approximate
    /// optimum, stable in the true model.
    WitnessCheck cross_greedy_true;
    /// Greedy policy of the approximate model at scale * (true optimum),
    /// stable in the approximate model.
    WitnessCheck cross_greedy_approx;
    /// Every constant-action policy, stable in both models.
    WitnessCheck open_loop;

    /// Max kappa over the witnesses behind the headline deployment bound
    /// (true_greedy, approx_greedy in both models, cross_greedy_true).
    double max_witness_kappa = 0.0;

    bool all_certified() const {
        auto ok = [](const WitnessCheck& c) { return c.status == CheckStatus::certified; };
        return gate_ok && ok(true_greedy) && ok(approx_greedy) && ok(cross_greedy_true) &&
               ok(cross_greedy_approx) && ok(open_loop);
    }
};

/// Runs every witness check against the supplied kappa. Checks that need the
/// true model's optimum come back `skipped` when the pair was solved without
/// the oracle side. Kappa comparisons are exact; only the gate
/// discount * kappa < 1 carries a margin.
AssumptionReport check_assumptions(const SolvedPair& solved, const WeightFn& w, double kappa,
                                   AffineTransform t = {});

}  // namespace mdpa
