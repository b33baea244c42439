#include "mdpa/mismatch.hpp"

#include <cmath>

#include "mdpa/bellman.hpp"

namespace mdpa {

namespace {

MismatchValue weighted_gap(const ValueVec& a, const ValueVec& b, const WeightFn& w) {
    MismatchValue out;
    for (size_t s = 0; s < a.size(); ++s) {
        double gap = std::abs(a[s] - b[s]) / w[s];
        if (gap > out.value) {
            out.value = gap;
            out.arg_state = static_cast<int>(s);
        }
    }
    if (out.arg_state == -1) out.arg_state = 0;  // exact zero gap everywhere
    return out;
}

}  // namespace

MismatchValue mismatch_policy_pair(const ModelPair& pair, const Policy& pi, const Policy& pi_hat,
                                   const ValueVec& v, const WeightFn& w, AffineTransform t) {
    ValueVec lhs = bellman_policy(pair.true_model, pi, v, t);
    ValueVec rhs = bellman_policy(pair.approx_model, pi_hat, v);
    return weighted_gap(lhs, rhs, w);
}

MismatchValue mismatch_policy(const ModelPair& pair, const Policy& pi, const ValueVec& v,
                              const WeightFn& w, AffineTransform t) {
    return mismatch_policy_pair(pair, pi, pi, v, w, t);
}

MismatchValue mismatch_optimal(const ModelPair& pair, const ValueVec& v, const WeightFn& w,
                               AffineTransform t) {
    ValueVec lhs = bellman_optimal(pair.true_model, v, t).values;
    ValueVec rhs = bellman_optimal(pair.approx_model, v).values;
    return weighted_gap(lhs, rhs, w);
}

MismatchValue mismatch_max(const ModelPair& pair, const ValueVec& v, const WeightFn& w,
                           AffineTransform t) {
    const FiniteMdp& m = pair.true_model;
    const FiniteMdp& m_hat = pair.approx_model;
    if (v.size() != static_cast<size_t>(m.num_states()))
        throw std::invalid_argument("value function length does not match the state count");
    if (w.size() != m.num_states())
        throw std::invalid_argument("weight function length does not match the state count");
    require_valid(t);

    const int n = m.num_states();
    const double g = m.discount();
    ValueVec best(n);
    std::vector<int> best_action(n);
#pragma omp parallel for schedule(static) if (n > 64)
    for (int s = 0; s < n; ++s) {
        double worst = -1.0;
        int worst_a = 0;
        for (int a = 0; a < m.num_actions(); ++a) {
            double acc = 0.0;
            for (const Transition& tr : m.row(s, a)) acc += tr.prob * v[tr.next];
            double acc_hat = 0.0;
            for (const Transition& tr : m_hat.row(s, a)) acc_hat += tr.prob * v[tr.next];
            double xi = t.scale * m.cost(s, a) + t.shift - m_hat.cost(s, a) + g * (acc - acc_hat);
            if (std::abs(xi) > worst) {
                worst = std::abs(xi);
                worst_a = a;
            }
        }
        best[s] = worst / w[s];
        best_action[s] = worst_a;
    }
    MismatchValue out;
    out.arg_state = 0;
    out.arg_action = best_action[0];
    out.value = best[0];
    for (int s = 1; s < n; ++s) {
        if (best[s] > out.value) {
            out.value = best[s];
            out.arg_state = s;
            out.arg_action = best_action[s];
        }
    }
    return out;
}

}  // namespace mdpa
