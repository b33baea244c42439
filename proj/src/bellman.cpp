#include "mdpa/bellman.hpp"

#include <limits>
#include <stdexcept>

namespace mdpa {

namespace {

void check_value_dim(const FiniteMdp& m, const ValueVec& v) {
    if (v.size() != static_cast<size_t>(m.num_states()))
        throw std::invalid_argument("value function length does not match the state count");
}

inline double expected_next(const FiniteMdp& m, int s, int a, const ValueVec& v) {
    double acc = 0.0;
    for (const Transition& t : m.row(s, a)) acc += t.prob * v[t.next];
    return acc;
}

inline double policy_backup_at(const FiniteMdp& m, const Policy& pi, const ValueVec& v,
                               AffineTransform t, int s) {
    if (pi.is_deterministic()) {
        int a = pi.action(s);
        return t.scale * m.cost(s, a) + t.shift + m.discount() * expected_next(m, s, a, v);
    }
    double acc = 0.0;
    auto probs = pi.action_probs(s);
    for (int a = 0; a < m.num_actions(); ++a) {
        if (probs[a] == 0.0) continue;
        acc += probs[a] *
               (t.scale * m.cost(s, a) + t.shift + m.discount() * expected_next(m, s, a, v));
    }
    return acc;
}

inline void optimal_backup_at(const FiniteMdp& m, const ValueVec& v, AffineTransform t, int s,
                              double& best, int& best_action) {
    best = std::numeric_limits<double>::infinity();
    best_action = 0;
    for (int a = 0; a < m.num_actions(); ++a) {
        double q = t.scale * m.cost(s, a) + t.shift + m.discount() * expected_next(m, s, a, v);
        if (q < best) {
            best = q;
            best_action = a;
        }
    }
}

}  // namespace

double q_value(const FiniteMdp& m, int s, int a, const ValueVec& v, AffineTransform t) {
    check_value_dim(m, v);
    require_valid(t);
    return t.scale * m.cost(s, a) + t.shift + m.discount() * expected_next(m, s, a, v);
}

ValueVec bellman_policy(const FiniteMdp& m, const Policy& pi, const ValueVec& v,
                        AffineTransform t) {
    check_compatible(m, pi);
    check_value_dim(m, v);
    require_valid(t);
    int n = m.num_states();
    ValueVec out(n);
#pragma omp parallel for schedule(static) if (n > 64)
    for (int s = 0; s < n; ++s) out[s] = policy_backup_at(m, pi, v, t, s);
    return out;
}

GreedyBackup bellman_optimal(const FiniteMdp& m, const ValueVec& v, AffineTransform t) {
    check_value_dim(m, v);
    require_valid(t);
    int n = m.num_states();
    GreedyBackup out{ValueVec(n), std::vector<int>(n)};
#pragma omp parallel for schedule(static) if (n > 64)
    for (int s = 0; s < n; ++s) optimal_backup_at(m, v, t, s, out.values[s], out.greedy[s]);
    return out;
}

namespace serial {

// The reference kernels walk transition rows back to front and fold the
// discount into the summands, so they accumulate in a genuinely different
// order than the parallel kernels above.

namespace {

double expected_next_reversed(const FiniteMdp& m, int s, int a, const ValueVec& v) {
    auto row = m.row(s, a);
    double acc = 0.0;
    for (size_t i = row.size(); i-- > 0;) acc += m.discount() * row[i].prob * v[row[i].next];
    return acc;
}

}  // namespace

ValueVec bellman_policy(const FiniteMdp& m, const Policy& pi, const ValueVec& v,
                        AffineTransform t) {
    check_compatible(m, pi);
    check_value_dim(m, v);
    require_valid(t);
    int n = m.num_states();
    ValueVec out(n, 0.0);
    for (int s = 0; s < n; ++s) {
        if (pi.is_deterministic()) {
            int a = pi.action(s);
            out[s] = expected_next_reversed(m, s, a, v) + t.scale * m.cost(s, a) + t.shift;
        } else {
            auto probs = pi.action_probs(s);
            double acc = 0.0;
            for (int a = m.num_actions() - 1; a >= 0; --a) {
                if (probs[a] == 0.0) continue;
                acc += probs[a] * (expected_next_reversed(m, s, a, v) + t.scale * m.cost(s, a) +
                                   t.shift);
            }
            out[s] = acc;
        }
    }
    return out;
}

GreedyBackup bellman_optimal(const FiniteMdp& m, const ValueVec& v, AffineTransform t) {
    check_value_dim(m, v);
    require_valid(t);
    int n = m.num_states();
    GreedyBackup out{ValueVec(n), std::vector<int>(n)};
    for (int s = 0; s < n; ++s) {
        // Scan actions from the top so the tie-break (<=) still lands on the
        // smallest minimizing index.
        double best = std::numeric_limits<double>::infinity();
        int best_action = m.num_actions() - 1;
        for (int a = m.num_actions() - 1; a >= 0; --a) {
            double q = expected_next_reversed(m, s, a, v) + t.scale * m.cost(s, a) + t.shift;
            if (q <= best) {
                best = q;
                best_action = a;
            }
        }
        out.values[s] = best;
        out.greedy[s] = best_action;
    }
    return out;
}

}  // namespace serial

}  // namespace mdpa
