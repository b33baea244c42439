#pragma once

#include "mdpa/bellman.hpp"
#include "mdpa/mdp.hpp"
#include "mdpa/types.hpp"

namespace mdpa {

struct SolveResult {
    ValueVec value;
    Policy greedy;
    long iterations = 0;
    /// Certified sup-norm distance from `value` to the exact fixed point
    /// (at most the requested tolerance on success).
    double error_bound = 0.0;
};

/// Computes the optimal value function to within options.tol in sup norm,
/// together with a greedy policy for it (smallest action index on ties).
///
/// Synchronous backups with a span-seminorm stopping rule: once the span of
/// the successive difference d = V_{k+1} - V_k is small enough, the exact
/// fixed point is pinned inside [V_{k+1} + g/(1-g) min d, V_{k+1} + g/(1-g) max d]
/// pointwise (monotone g-contraction with the constant-shift property), so
/// returning the midpoint-corrected iterate certifies the sup-norm error.
/// The threshold is chosen so that the returned V also satisfies
/// ||B V - V||_inf <= tol * (1-g)/g.
SolveResult value_iteration(const FiniteMdp& m, const SolveOptions& options = {});

struct EvalResult {
    ValueVec value;
    long iterations = 0;
    double error_bound = 0.0;
};

/// Value of a fixed policy, same iteration and certificate as value_iteration
/// but with the policy backup.
EvalResult policy_evaluation(const FiniteMdp& m, const Policy& pi,
                             const SolveOptions& options = {});

}  // namespace mdpa
