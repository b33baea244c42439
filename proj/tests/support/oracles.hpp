// Independent reference implementations used to validate the library. Every
// oracle here is written from the defining formula with naive loops (or a
// closed form the library does not use), so agreement with the library is
// meaningful evidence rather than a tautology.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "mdpa/mdp.hpp"
#include "mdpa/weighting.hpp"

namespace oracle {

using mdpa::AffineTransform;
using mdpa::FiniteMdp;
using mdpa::Policy;
using mdpa::ValueVec;
using mdpa::WeightFn;

// ---------------------------------------------------------------------------
// Bellman operators from the defining sums, densified.

inline double q_value(const FiniteMdp& m, int s, int a, const ValueVec& v,
                      AffineTransform t = {}) {
    // Accumulates through a dense next-state vector, in state order - a
    // different summation order from the library's sparse row loop.
    std::vector<double> dense(static_cast<size_t>(m.num_states()), 0.0);
    for (const auto& tr : m.row(s, a)) dense[static_cast<size_t>(tr.next)] += tr.prob;
    double exp_v = 0.0;
    for (int next = 0; next < m.num_states(); ++next)
        exp_v += dense[static_cast<size_t>(next)] * v[static_cast<size_t>(next)];
    return t.scale * m.cost(s, a) + t.shift + m.discount() * exp_v;
}

inline ValueVec policy_backup(const FiniteMdp& m, const Policy& pi, const ValueVec& v,
                              AffineTransform t = {}) {
    ValueVec out(static_cast<size_t>(m.num_states()), 0.0);
    for (int s = 0; s < m.num_states(); ++s) {
        double acc = 0.0;
        for (int a = 0; a < m.num_actions(); ++a) {
            double p = pi.prob(s, a);
            if (p > 0.0) acc += p * oracle::q_value(m, s, a, v, t);
        }
        out[static_cast<size_t>(s)] = acc;
    }
    return out;
}

inline ValueVec optimal_backup(const FiniteMdp& m, const ValueVec& v, AffineTransform t = {}) {
    ValueVec out(static_cast<size_t>(m.num_states()), 0.0);
    for (int s = 0; s < m.num_states(); ++s) {
        double best = std::numeric_limits<double>::infinity();
        for (int a = 0; a < m.num_actions(); ++a) best = std::min(best, oracle::q_value(m, s, a, v, t));
        out[static_cast<size_t>(s)] = best;
    }
    return out;
}

inline std::vector<int> greedy_actions(const FiniteMdp& m, const ValueVec& v,
                                       AffineTransform t = {}) {
    std::vector<int> out(static_cast<size_t>(m.num_states()), 0);
    for (int s = 0; s < m.num_states(); ++s) {
        int best = 0;
        double best_q = oracle::q_value(m, s, 0, v, t);
        for (int a = 1; a < m.num_actions(); ++a) {
            double q = oracle::q_value(m, s, a, v, t);
            if (q < best_q) {  // strict: ties keep the smallest index
                best_q = q;
                best = a;
            }
        }
        out[static_cast<size_t>(s)] = best;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Exact policy value by Gaussian elimination on (I - discount * P_pi) v = c_pi.

inline ValueVec policy_value_exact(const FiniteMdp& m, const Policy& pi, AffineTransform t = {}) {
    const int n = m.num_states();
    std::vector<std::vector<double>> aug(static_cast<size_t>(n),
                                         std::vector<double>(static_cast<size_t>(n) + 1, 0.0));
    for (int s = 0; s < n; ++s) {
        aug[static_cast<size_t>(s)][static_cast<size_t>(s)] = 1.0;
        double rhs = 0.0;
        for (int a = 0; a < m.num_actions(); ++a) {
            double p = pi.prob(s, a);
            if (p == 0.0) continue;
            rhs += p * (t.scale * m.cost(s, a) + t.shift);
            for (const auto& tr : m.row(s, a))
                aug[static_cast<size_t>(s)][static_cast<size_t>(tr.next)] -=
                    m.discount() * p * tr.prob;
        }
        aug[static_cast<size_t>(s)].back() = rhs;
    }
    // Partial-pivot elimination.
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(aug[static_cast<size_t>(r)][static_cast<size_t>(col)]) >
                std::abs(aug[static_cast<size_t>(piv)][static_cast<size_t>(col)]))
                piv = r;
        std::swap(aug[static_cast<size_t>(col)], aug[static_cast<size_t>(piv)]);
        double d = aug[static_cast<size_t>(col)][static_cast<size_t>(col)];
        if (std::abs(d) < 1e-14) throw std::runtime_error("oracle: singular policy system");
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            double f = aug[static_cast<size_t>(r)][static_cast<size_t>(col)] / d;
            if (f == 0.0) continue;
            for (int c = col; c <= n; ++c)
                aug[static_cast<size_t>(r)][static_cast<size_t>(c)] -=
                    f * aug[static_cast<size_t>(col)][static_cast<size_t>(c)];
        }
    }
    ValueVec v(static_cast<size_t>(n), 0.0);
    for (int s = 0; s < n; ++s)
        v[static_cast<size_t>(s)] = aug[static_cast<size_t>(s)].back() /
                                    aug[static_cast<size_t>(s)][static_cast<size_t>(s)];
    return v;
}

// Plain value iteration from zero, no span acceleration; run far past the
// contraction horizon for the requested accuracy.
inline ValueVec optimal_value_longrun(const FiniteMdp& m, double tol = 1e-11,
                                      AffineTransform t = {}) {
    ValueVec v(static_cast<size_t>(m.num_states()), 0.0);
    double gamma = m.discount();
    double cost_span =
        std::max(std::abs(t.scale * m.max_cost() + t.shift), std::abs(t.scale * m.min_cost() + t.shift));
    long horizon = 16 + static_cast<long>(std::ceil(
                            std::log(tol * (1 - gamma) / (cost_span + 1.0)) / std::log(gamma)));
    for (long k = 0; k < horizon; ++k) v = optimal_backup(m, v, t);
    return v;
}

// ---------------------------------------------------------------------------
// Weighted norms and stability factors from their definitions.

inline double weighted_norm(const ValueVec& v, const WeightFn& w) {
    double best = 0.0;
    for (size_t i = 0; i < v.size(); ++i) best = std::max(best, std::abs(v[i]) / w[static_cast<int>(i)]);
    return best;
}

inline double kappa_state_action(const FiniteMdp& m, int s, int a, const WeightFn& w) {
    double acc = 0.0;
    for (const auto& tr : m.row(s, a)) acc += tr.prob * w[tr.next];
    return acc / w[s];
}

inline double kappa_policy(const FiniteMdp& m, const Policy& pi, const WeightFn& w) {
    double best = 0.0;
    for (int s = 0; s < m.num_states(); ++s) {
        double acc = 0.0;
        for (int a = 0; a < m.num_actions(); ++a) {
            double p = pi.prob(s, a);
            if (p > 0.0) acc += p * kappa_state_action(m, s, a, w);
        }
        best = std::max(best, acc);
    }
    return best;
}

inline double kappa_model(const FiniteMdp& m, const WeightFn& w) {
    double best = 0.0;
    for (int s = 0; s < m.num_states(); ++s)
        for (int a = 0; a < m.num_actions(); ++a)
            best = std::max(best, kappa_state_action(m, s, a, w));
    return best;
}

// ---------------------------------------------------------------------------
// Minimum-cost transport by exhaustive enumeration of basic solutions.
// Every vertex of the transportation polytope is supported on a spanning
// tree of the complete bipartite graph, so enumerating all edge subsets of
// size n + m - 1, keeping the spanning trees, and solving each tree's flow
// gives the exact optimum for small instances.

namespace detail {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(static_cast<size_t>(n)) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    int find(int x) {
        while (parent[static_cast<size_t>(x)] != x) x = parent[static_cast<size_t>(x)] =
                                                        parent[static_cast<size_t>(parent[static_cast<size_t>(x)])];
        return x;
    }
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent[static_cast<size_t>(a)] = b;
        return true;
    }
};

}  // namespace detail

inline double transport_cost_enum(const std::vector<double>& supply,
                                  const std::vector<double>& demand,
                                  const std::vector<std::vector<double>>& cost) {
    const int n = static_cast<int>(supply.size());
    const int m = static_cast<int>(demand.size());
    const int edges = n * m;
    const int tree_edges = n + m - 1;
    if (edges > 20) throw std::runtime_error("oracle: transport instance too large");

    double best = std::numeric_limits<double>::infinity();
    std::vector<int> pick(static_cast<size_t>(tree_edges));
    // Iterate over all C(edges, tree_edges) subsets via a manual odometer.
    std::iota(pick.begin(), pick.end(), 0);
    while (true) {
        detail::UnionFind uf(n + m);
        bool acyclic = true;
        for (int e : pick)
            if (!uf.unite(e / m, n + e % m)) {
                acyclic = false;
                break;
            }
        if (acyclic) {
            // A spanning tree; peel leaves to solve the flow equations.
            std::vector<double> need(static_cast<size_t>(n + m));
            for (int i = 0; i < n; ++i) need[static_cast<size_t>(i)] = supply[static_cast<size_t>(i)];
            for (int j = 0; j < m; ++j) need[static_cast<size_t>(n + j)] = -demand[static_cast<size_t>(j)];
            std::vector<int> live(pick.begin(), pick.end());
            std::vector<double> flow(static_cast<size_t>(tree_edges), 0.0);
            std::vector<bool> done(static_cast<size_t>(tree_edges), false);
            bool feasible = true;
            for (int round = 0; round < tree_edges; ++round) {
                // Find a leaf node: incident to exactly one unresolved edge.
                int leaf_edge = -1;
                for (size_t k = 0; k < live.size() && leaf_edge < 0; ++k) {
                    if (done[k]) continue;
                    for (int side = 0; side < 2; ++side) {
                        int node = side == 0 ? live[k] / m : n + live[k] % m;
                        int deg = 0;
                        for (size_t k2 = 0; k2 < live.size(); ++k2) {
                            if (done[k2]) continue;
                            if (live[k2] / m == node || n + live[k2] % m == node) ++deg;
                        }
                        if (deg == 1) {
                            leaf_edge = static_cast<int>(k);
                            // Flow on the leaf edge equals the leaf node's residual:
                            // supply side pushes +need, demand side pulls -need.
                            double f = side == 0 ? need[static_cast<size_t>(node)]
                                                 : -need[static_cast<size_t>(node)];
                            flow[k] = f;
                            need[static_cast<size_t>(live[k] / m)] -= f;
                            need[static_cast<size_t>(n + live[k] % m)] += f;
                            done[k] = true;
                            break;
                        }
                    }
                }
                if (leaf_edge < 0) break;
            }
            for (int k = 0; k < tree_edges; ++k)
                if (!done[static_cast<size_t>(k)] || flow[static_cast<size_t>(k)] < -1e-10)
                    feasible = false;
            if (feasible) {
                double total = 0.0;
                for (int k = 0; k < tree_edges; ++k) {
                    int e = live[static_cast<size_t>(k)];
                    total += std::max(flow[static_cast<size_t>(k)], 0.0) *
                             cost[static_cast<size_t>(e / m)][static_cast<size_t>(e % m)];
                }
                best = std::min(best, total);
            }
        }
        // Next subset.
        int i = tree_edges - 1;
        while (i >= 0 && pick[static_cast<size_t>(i)] == edges - tree_edges + i) --i;
        if (i < 0) break;
        ++pick[static_cast<size_t>(i)];
        for (int j = i + 1; j < tree_edges; ++j)
            pick[static_cast<size_t>(j)] = pick[static_cast<size_t>(j - 1)] + 1;
    }
    if (!std::isfinite(best)) throw std::runtime_error("oracle: no feasible transport tree");
    return best;
}

// ---------------------------------------------------------------------------
// Symmetric eigenvalues for n <= 3 from the characteristic polynomial
// (quadratic formula / trigonometric cubic), independent of any linear
// algebra library.

inline std::vector<double> symmetric_eigenvalues_smalln(const std::vector<std::vector<double>>& a) {
    const size_t n = a.size();
    if (n == 1) return {a[0][0]};
    if (n == 2) {
        double tr = a[0][0] + a[1][1];
        double det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
        double disc = std::sqrt(std::max(tr * tr / 4 - det, 0.0));
        return {tr / 2 - disc, tr / 2 + disc};
    }
    if (n == 3) {
        // lambda^3 - c2 lambda^2 + c1 lambda - c0 = 0 with c2 = trace,
        // c1 = sum of principal 2x2 minors, c0 = det.
        double c2 = a[0][0] + a[1][1] + a[2][2];
        double c1 = (a[0][0] * a[1][1] - a[0][1] * a[1][0]) +
                    (a[0][0] * a[2][2] - a[0][2] * a[2][0]) +
                    (a[1][1] * a[2][2] - a[1][2] * a[2][1]);
        double c0 = a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
                    a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
                    a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
        // Depressed cubic t^3 + p t + q with lambda = t + c2/3.
        double shift = c2 / 3.0;
        double p = c1 - c2 * c2 / 3.0;
        double q = -c0 + c2 * c1 / 3.0 - 2.0 * c2 * c2 * c2 / 27.0;
        std::vector<double> roots;
        if (std::abs(p) < 1e-14) {
            double r = std::cbrt(-q);
            roots = {r, r, r};
        } else {
            double mfac = 2.0 * std::sqrt(std::max(-p / 3.0, 0.0));
            double arg = std::clamp(3.0 * q / (p * mfac == 0.0 ? 1e-300 : p * mfac), -1.0, 1.0);
            double theta = std::acos(arg) / 3.0;
            const double tau = 2.0943951023931953;  // 2 pi / 3
            roots = {mfac * std::cos(theta), mfac * std::cos(theta - tau),
                     mfac * std::cos(theta - 2 * tau)};
        }
        for (double& r : roots) r += shift;
        std::sort(roots.begin(), roots.end());
        return roots;
    }
    throw std::runtime_error("oracle: eigenvalues only for n <= 3");
}

// ---------------------------------------------------------------------------
// Scalar discounted Riccati fixed point in closed form: p solves
//   discount * b^2 p^2 + (r - discount q b^2 - discount a^2 r) p - q r = 0,
// taking the nonnegative root.

inline double scalar_riccati_closed_form(double a, double b, double q, double r, double discount) {
    double A = discount * b * b;
    double B = r - discount * q * b * b - discount * a * a * r;
    double C = -q * r;
    if (A == 0.0) {
        // No control authority: p = q / (1 - discount a^2), valid when stable.
        return q / (1.0 - discount * a * a);
    }
    double disc = std::sqrt(std::max(B * B - 4 * A * C, 0.0));
    return (-B + disc) / (2 * A);
}

// Truncated-series policy value for linear dynamics: with closed loop
// L = a - b k and stage cost S = q + k^2 r,
//   P = sum_{j>=0} discount^j L^(2j) S   (scalar case).
inline double scalar_policy_value_series(double a, double b, double q, double r, double k,
                                         double discount, long terms = 4000) {
    double loop = a - b * k;
    double stage = q + k * k * r;
    double acc = 0.0, pow_term = 1.0;
    for (long j = 0; j < terms; ++j) {
        acc += pow_term * stage;
        pow_term *= discount * loop * loop;
        if (std::abs(pow_term) < 1e-18 * (std::abs(acc) + 1.0)) break;
    }
    return acc;
}

// ---------------------------------------------------------------------------
// Direct binomial pmf via the multiplicative recurrence.

inline std::vector<double> binomial_pmf_direct(int n, double q) {
    std::vector<double> pmf(static_cast<size_t>(n) + 1, 0.0);
    if (q <= 0.0) {
        pmf[0] = 1.0;
        return pmf;
    }
    if (q >= 1.0) {
        pmf[static_cast<size_t>(n)] = 1.0;
        return pmf;
    }
    pmf[0] = std::pow(1.0 - q, n);
    for (int k = 1; k <= n; ++k)
        pmf[static_cast<size_t>(k)] = pmf[static_cast<size_t>(k - 1)] *
                                      (static_cast<double>(n - k + 1) / k) * (q / (1.0 - q));
    return pmf;
}

}  // namespace oracle
