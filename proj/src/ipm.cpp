#include "mdpa/ipm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

#include "mdpa/transport.hpp"

namespace mdpa {

namespace {

void require_finite(std::span<const double> xs, const char* what) {
    for (double x : xs)
        if (!std::isfinite(x)) throw std::invalid_argument(std::string(what) + " must be finite");
}

double span_of(std::span<const double> v) {
    auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return *hi - *lo;
}

/// Wasserstein on a reduced support: transports the positive part of p - q
/// onto the negative part (exact for metric ground costs, where common mass
/// stays put).
double wasserstein_dense(std::span<const double> p, std::span<const double> q,
                         const std::vector<double>& metric, int n) {
    std::vector<double> supply, demand;
    std::vector<int> si, dj;
    for (int i = 0; i < n; ++i) {
        double d = p[i] - q[i];
        if (d > 0.0) {
            supply.push_back(d);
            si.push_back(i);
        } else if (d < 0.0) {
            demand.push_back(-d);
            dj.push_back(i);
        }
    }
    if (supply.empty() || demand.empty()) return 0.0;
    std::vector<double> cost(supply.size() * demand.size());
    for (size_t i = 0; i < supply.size(); ++i)
        for (size_t j = 0; j < demand.size(); ++j)
            cost[i * demand.size() + j] = metric[static_cast<size_t>(si[i]) * n + dj[j]];
    return transport_cost(supply, demand, cost);
}

/// Walks two destination-sorted sparse rows in lockstep, invoking
/// visit(dest, p_mass, q_mass) at every destination present in either row.
template <typename Visit>
void merge_rows(std::span<const Transition> p, std::span<const Transition> q, Visit&& visit) {
    size_t i = 0, j = 0;
    while (i < p.size() || j < q.size()) {
        int di = i < p.size() ? p[i].next : INT32_MAX;
        int dj = j < q.size() ? q[j].next : INT32_MAX;
        if (di < dj) {
            visit(di, p[i].prob, 0.0);
            ++i;
        } else if (dj < di) {
            visit(dj, 0.0, q[j].prob);
            ++j;
        } else {
            visit(di, p[i].prob, q[j].prob);
            ++i;
            ++j;
        }
    }
}

}  // namespace

IpmKind IpmKind::total_variation() {
    IpmKind k;
    k.family_ = IpmFamily::total_variation;
    k.name_ = "tv";
    return k;
}

IpmKind IpmKind::wasserstein(std::vector<double> positions) {
    if (positions.empty()) throw std::invalid_argument("wasserstein needs at least one position");
    require_finite(positions, "wasserstein positions");
    IpmKind k;
    k.family_ = IpmFamily::wasserstein;
    k.name_ = "w1";
    k.dim_ = static_cast<int>(positions.size());
    bool increasing = true;
    for (size_t i = 0; i + 1 < positions.size(); ++i)
        if (!(positions[i] < positions[i + 1])) {
            increasing = false;
            break;
        }
    if (increasing) {
        k.positions_ = std::move(positions);
        return k;
    }
    // Unordered positions: expand |x_i - x_j| into an explicit ground matrix
    // (coincident points make it a pseudometric, which the transport path
    // and the gauge handle).
    const int n = k.dim_;
    k.metric_.resize(static_cast<size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            k.metric_[static_cast<size_t>(i) * n + j] = std::abs(positions[i] - positions[j]);
    return k;
}

IpmKind IpmKind::wasserstein(std::vector<double> metric, int n) {
    if (n < 1 || metric.size() != static_cast<size_t>(n) * n)
        throw std::invalid_argument("ground metric must be n x n with n >= 1");
    require_finite(metric, "ground metric");
    double scale = 0.0;
    for (double d : metric) scale = std::max(scale, std::abs(d));
    for (int i = 0; i < n; ++i) {
        if (metric[static_cast<size_t>(i) * n + i] != 0.0)
            throw std::invalid_argument("ground metric must vanish on the diagonal");
        for (int j = 0; j < n; ++j) {
            if (metric[static_cast<size_t>(i) * n + j] !=
                metric[static_cast<size_t>(j) * n + i])
                throw std::invalid_argument("ground metric must be symmetric");
            if (i != j && !(metric[static_cast<size_t>(i) * n + j] > 0.0))
                throw std::invalid_argument("ground metric must be positive off the diagonal");
        }
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                if (metric[static_cast<size_t>(i) * n + j] >
                    metric[static_cast<size_t>(i) * n + k] +
                        metric[static_cast<size_t>(k) * n + j] + 1e-12 * scale)
                    throw std::invalid_argument("ground metric violates the triangle inequality");
    IpmKind out;
    out.family_ = IpmFamily::wasserstein;
    out.name_ = "w1";
    out.dim_ = n;
    out.metric_ = std::move(metric);
    return out;
}

IpmKind IpmKind::weighted_total_variation(WeightFn w) {
    IpmKind k;
    k.family_ = IpmFamily::weighted_total_variation;
    k.name_ = "wtv";
    k.dim_ = w.size();
    k.weight_ = std::move(w);
    return k;
}

double IpmKind::distance(std::span<const double> p, std::span<const double> q) const {
    if (p.size() != q.size()) throw std::invalid_argument("distributions must have equal length");
    if (dim_ > 0 && p.size() != static_cast<size_t>(dim_))
        throw std::invalid_argument("distribution length does not match this metric");
    switch (family_) {
        case IpmFamily::total_variation: {
            double total = 0.0;
            for (size_t i = 0; i < p.size(); ++i) total += std::abs(p[i] - q[i]);
            return total;
        }
        case IpmFamily::wasserstein: {
            if (!positions_.empty()) {
                double total = 0.0, cum = 0.0;
                for (size_t i = 0; i + 1 < p.size(); ++i) {
                    cum += p[i] - q[i];
                    total += std::abs(cum) * (positions_[i + 1] - positions_[i]);
                }
                return total;
            }
            return wasserstein_dense(p, q, metric_, dim_);
        }
        case IpmFamily::weighted_total_variation: {
            double total = 0.0;
            for (size_t i = 0; i < p.size(); ++i)
                total += (*weight_)[static_cast<int>(i)] * std::abs(p[i] - q[i]);
            return total;
        }
    }
    return 0.0;
}

double IpmKind::distance(std::span<const Transition> p, std::span<const Transition> q) const {
    switch (family_) {
        case IpmFamily::total_variation: {
            double total = 0.0;
            merge_rows(p, q, [&](int, double a, double b) { total += std::abs(a - b); });
            return total;
        }
        case IpmFamily::wasserstein: {
            if (!positions_.empty()) {
                // Cumulative-difference formula on the union of supports: the
                // cumulative is constant between support points, so each gap
                // contributes |cum| * (position step).
                double total = 0.0, cum = 0.0;
                int prev = -1;
                merge_rows(p, q, [&](int dest, double a, double b) {
                    if (dest >= dim_)
                        throw std::invalid_argument("row destination outside the metric's points");
                    if (prev >= 0) total += std::abs(cum) * (positions_[dest] - positions_[prev]);
                    cum += a - b;
                    prev = dest;
                });
                return total;
            }
            std::vector<double> pd(dim_, 0.0), qd(dim_, 0.0);
            for (const Transition& tr : p) pd.at(tr.next) = tr.prob;
            for (const Transition& tr : q) qd.at(tr.next) = tr.prob;
            return wasserstein_dense(pd, qd, metric_, dim_);
        }
        case IpmFamily::weighted_total_variation: {
            double total = 0.0;
            merge_rows(p, q, [&](int dest, double a, double b) {
                if (dest >= dim_)
                    throw std::invalid_argument("row destination outside the weight's states");
                total += (*weight_)[dest] * std::abs(a - b);
            });
            return total;
        }
    }
    return 0.0;
}

double IpmKind::gauge(std::span<const double> v) const {
    if (v.empty()) throw std::invalid_argument("gauge of an empty vector");
    if (dim_ > 0 && v.size() != static_cast<size_t>(dim_))
        throw std::invalid_argument("vector length does not match this metric");
    require_finite(v, "gauge argument");
    switch (family_) {
        case IpmFamily::total_variation:
            return 0.5 * span_of(v);
        case IpmFamily::wasserstein: {
            double lip = 0.0;
            if (!positions_.empty()) {
                // On a 1-D grid the largest difference quotient is attained
                // on adjacent points.
                for (size_t i = 0; i + 1 < v.size(); ++i)
                    lip = std::max(lip,
                                   std::abs(v[i + 1] - v[i]) / (positions_[i + 1] - positions_[i]));
            } else {
                for (int i = 0; i < dim_; ++i)
                    for (int j = i + 1; j < dim_; ++j) {
                        double gap = std::abs(v[i] - v[j]);
                        double d = metric_[static_cast<size_t>(i) * dim_ + j];
                        if (d == 0.0) {
                            if (gap > 0.0) return std::numeric_limits<double>::infinity();
                            continue;
                        }
                        lip = std::max(lip, gap / d);
                    }
            }
            return lip;
        }
        case IpmFamily::weighted_total_variation: {
            double osc = 0.0;
            for (size_t i = 0; i < v.size(); ++i)
                for (size_t j = i + 1; j < v.size(); ++j)
                    osc = std::max(osc, std::abs(v[i] - v[j]) /
                                            ((*weight_)[static_cast<int>(i)] +
                                             (*weight_)[static_cast<int>(j)]));
            return osc;
        }
    }
    return 0.0;
}

ModelDistance model_distance(const ModelPair& pair, const Policy& pi, const Policy& pi_hat,
                             const WeightFn& w, const IpmKind& kind, AffineTransform t) {
    require_valid(t);
    check_compatible(pair.true_model, pi);
    check_compatible(pair.approx_model, pi_hat);
    if (!pi.is_deterministic() || !pi_hat.is_deterministic())
        throw std::invalid_argument("model distances are defined for deterministic policies");
    if (w.size() != pair.num_states())
        throw std::invalid_argument("weight size does not match the pair");
    if (kind.dimension() > 0 && kind.dimension() != pair.num_states())
        throw std::invalid_argument("metric dimension does not match the pair");

    const int n = pair.num_states();
    std::vector<double> cost_gap(n), kernel_gap(n);
#pragma omp parallel for schedule(static) if (n > 64)
    for (int s = 0; s < n; ++s) {
        int a = pi.action(s);
        int a_hat = pi_hat.action(s);
        cost_gap[s] = std::abs(t.scale * pair.true_model.cost(s, a) + t.shift -
                               pair.approx_model.cost(s, a_hat)) /
                      w[s];
        kernel_gap[s] =
            kind.distance(pair.true_model.row(s, a), pair.approx_model.row(s, a_hat)) / w[s];
    }

    ModelDistance out;
    for (int s = 0; s < n; ++s) {
        if (out.arg_cost < 0 || cost_gap[s] > out.cost_gap) {
            out.cost_gap = cost_gap[s];
            out.arg_cost = s;
        }
        if (out.arg_kernel < 0 || kernel_gap[s] > out.kernel_gap) {
            out.kernel_gap = kernel_gap[s];
            out.arg_kernel = s;
        }
    }
    return out;
}

ModelDistance model_distance_max(const ModelPair& pair, const WeightFn& w, const IpmKind& kind,
                                 AffineTransform t) {
    require_valid(t);
    if (w.size() != pair.num_states())
        throw std::invalid_argument("weight size does not match the pair");
    if (kind.dimension() > 0 && kind.dimension() != pair.num_states())
        throw std::invalid_argument("metric dimension does not match the pair");

    const int n = pair.num_states();
    const int na = pair.num_actions();
    std::vector<double> cost_gap(n), kernel_gap(n);
#pragma omp parallel for schedule(static) if (n > 64)
    for (int s = 0; s < n; ++s) {
        double cg = 0.0, kg = 0.0;
        for (int a = 0; a < na; ++a) {
            cg = std::max(cg, std::abs(t.scale * pair.true_model.cost(s, a) + t.shift -
                                       pair.approx_model.cost(s, a)));
            kg = std::max(kg,
                          kind.distance(pair.true_model.row(s, a), pair.approx_model.row(s, a)));
        }
        cost_gap[s] = cg / w[s];
        kernel_gap[s] = kg / w[s];
    }

    ModelDistance out;
    for (int s = 0; s < n; ++s) {
        if (out.arg_cost < 0 || cost_gap[s] > out.cost_gap) {
            out.cost_gap = cost_gap[s];
            out.arg_cost = s;
        }
        if (out.arg_kernel < 0 || kernel_gap[s] > out.kernel_gap) {
            out.kernel_gap = kernel_gap[s];
            out.arg_kernel = s;
        }
    }
    return out;
}

double mismatch_from_distance(const ModelDistance& dist, double gauge_v, double discount) {
    return dist.cost_gap + discount * gauge_v * dist.kernel_gap;
}

}  // namespace mdpa
