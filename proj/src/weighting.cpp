#include "mdpa/weighting.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mdpa {

namespace {

void check_weight_dim(const WeightFn& w, size_t n) {
    if (static_cast<size_t>(w.size()) != n)
        throw std::invalid_argument("weight function length does not match the state count");
}

// Expansion factor of one transition row: sum_s' w(s') p(s') / w(s).
inline double row_expansion(std::span<const Transition> row, const WeightFn& w, double w_s) {
    double acc = 0.0;
    for (const Transition& t : row) acc += t.prob * w[t.next];
    return acc / w_s;
}

}  // namespace

WeightFn::WeightFn(std::vector<double> w) : w_(std::move(w)) {
    if (w_.empty()) throw std::invalid_argument("weight function needs at least one state");
    uniform_ = true;
    for (double x : w_) {
        if (!(x >= 1.0) || !std::isfinite(x))
            throw std::invalid_argument("weights must be finite and >= 1");
        if (x != 1.0) uniform_ = false;
    }
}

double weighted_norm(const ValueVec& v, const WeightFn& w) {
    check_weight_dim(w, v.size());
    double best = 0.0;
    for (size_t s = 0; s < v.size(); ++s) best = std::max(best, std::abs(v[s]) / w[s]);
    return best;
}

double weighted_norm_diff(const ValueVec& a, const ValueVec& b, const WeightFn& w) {
    if (a.size() != b.size())
        throw std::invalid_argument("weighted_norm_diff needs equally sized vectors");
    check_weight_dim(w, a.size());
    double best = 0.0;
    for (size_t s = 0; s < a.size(); ++s) best = std::max(best, std::abs(a[s] - b[s]) / w[s]);
    return best;
}

StabilityCert kappa_policy(const FiniteMdp& m, const Policy& pi, const WeightFn& w) {
    check_compatible(m, pi);
    check_weight_dim(w, m.num_states());
    const int n = m.num_states();
    // Probability rows expand uniform weights by exactly 1; skip the
    // summation so the identity survives floating-point row storage.
    const bool unit_expansion = w.is_uniform();
    ValueVec expansion(n), cost(n);
#pragma omp parallel for schedule(static) if (n > 64)
    for (int s = 0; s < n; ++s) {
        if (pi.is_deterministic()) {
            int a = pi.action(s);
            expansion[s] = unit_expansion ? 1.0 : row_expansion(m.row(s, a), w, w[s]);
            cost[s] = std::abs(m.cost(s, a)) / w[s];
        } else {
            auto probs = pi.action_probs(s);
            double exp_acc = 0.0, cost_acc = 0.0;
            for (int a = 0; a < m.num_actions(); ++a) {
                if (probs[a] == 0.0) continue;
                exp_acc += probs[a] * row_expansion(m.row(s, a), w, w[s]);
                cost_acc += probs[a] * m.cost(s, a);
            }
            expansion[s] = unit_expansion ? 1.0 : exp_acc;
            cost[s] = std::abs(cost_acc) / w[s];
        }
    }
    StabilityCert cert;
    for (int s = 0; s < n; ++s) {
        if (expansion[s] > cert.kappa) {
            cert.kappa = expansion[s];
            cert.arg_state = s;
        }
        cert.cost_norm = std::max(cert.cost_norm, cost[s]);
    }
    return cert;
}

StabilityCert kappa_model(const FiniteMdp& m, const WeightFn& w) {
    check_weight_dim(w, m.num_states());
    const int n = m.num_states();
    const bool unit_expansion = w.is_uniform();
    ValueVec expansion(n), cost(n);
    std::vector<int> arg_action(n);
#pragma omp parallel for schedule(static) if (n > 64)
    for (int s = 0; s < n; ++s) {
        double worst = 0.0, worst_cost = 0.0;
        int worst_a = 0;
        for (int a = 0; a < m.num_actions(); ++a) {
            double e = unit_expansion ? 1.0 : row_expansion(m.row(s, a), w, w[s]);
            if (e > worst) {
                worst = e;
                worst_a = a;
            }
            worst_cost = std::max(worst_cost, std::abs(m.cost(s, a)) / w[s]);
        }
        expansion[s] = worst;
        arg_action[s] = worst_a;
        cost[s] = worst_cost;
    }
    StabilityCert cert;
    for (int s = 0; s < n; ++s) {
        if (expansion[s] > cert.kappa) {
            cert.kappa = expansion[s];
            cert.arg_state = s;
            cert.arg_action = arg_action[s];
        }
        cert.cost_norm = std::max(cert.cost_norm, cost[s]);
    }
    return cert;
}

}  // namespace mdpa
