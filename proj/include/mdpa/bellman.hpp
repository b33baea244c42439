#pragma once

#include "mdpa/mdp.hpp"
#include "mdpa/types.hpp"

namespace mdpa {

/// One-step lookahead value of playing `a` in `s`:
/// scale*c(s,a) + shift + discount * sum_s' P(s'|s,a) v(s').
double q_value(const FiniteMdp& m, int s, int a, const ValueVec& v, AffineTransform t = {});

/// Policy backup: (B^pi v)(s) under the transformed cost. Parallelized over
/// states with a fixed per-state summation order, so the result is bitwise
/// independent of the OpenMP thread count.
ValueVec bellman_policy(const FiniteMdp& m, const Policy& pi, const ValueVec& v,
                        AffineTransform t = {});

struct GreedyBackup {
    ValueVec values;           // (B* v)(s)
    std::vector<int> greedy;   // smallest minimizing action index per state
};

/// Optimizing backup: (B* v)(s) = min_a q(s, a, v) plus the greedy selector.
/// Ties break to the smallest action index.
GreedyBackup bellman_optimal(const FiniteMdp& m, const ValueVec& v, AffineTransform t = {});

/// Serial reference kernels. Same contracts as above, written with a
/// different loop and accumulation order: values agree with the parallel
/// kernels up to floating-point rounding, greedy choices except on numerical
/// ties. Kept for cross-checking in tests and as the baseline in benchmarks.
namespace serial {
ValueVec bellman_policy(const FiniteMdp& m, const Policy& pi, const ValueVec& v,
                        AffineTransform t = {});
GreedyBackup bellman_optimal(const FiniteMdp& m, const ValueVec& v, AffineTransform t = {});
}  // namespace serial

}  // namespace mdpa
