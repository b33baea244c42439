#pragma once

#include "mdpa/model_pair.hpp"
#include "mdpa/weighting.hpp"

namespace mdpa {

/// Weighted norm of the gap between a true-model backup and an
/// approximate-model backup of the same value function, plus where the gap
/// is attained. The transform applies to the true model's cost only:
/// the compared operators are B_t^. (with cost scale*c + shift) and B-hat^..
struct MismatchValue {
    double value = 0.0;
    int arg_state = -1;
    int arg_action = -1;  // set only by the per-action variant
};

/// || B_t^pi v - Bhat^pihat v ||_w for a pair of policies.
MismatchValue mismatch_policy_pair(const ModelPair& pair, const Policy& pi, const Policy& pi_hat,
                                   const ValueVec& v, const WeightFn& w, AffineTransform t = {});

/// Same policy on both sides.
MismatchValue mismatch_policy(const ModelPair& pair, const Policy& pi, const ValueVec& v,
                              const WeightFn& w, AffineTransform t = {});

/// || B_t* v - Bhat* v ||_w for the optimizing backups.
MismatchValue mismatch_optimal(const ModelPair& pair, const ValueVec& v, const WeightFn& w,
                               AffineTransform t = {});

/// sup over (s, a) of |scale*c + shift - chat + discount * (P - Phat) v| / w(s);
/// equals the supremum of the same-policy mismatch over all Markov policies,
/// computed in one sweep instead of enumerating them.
MismatchValue mismatch_max(const ModelPair& pair, const ValueVec& v, const WeightFn& w,
                           AffineTransform t = {});

}  // namespace mdpa
