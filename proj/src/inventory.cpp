#include "mdpa/inventory.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mdpa {

void require_valid(const InventoryParams& p) {
    if (p.s_max < 1) throw std::invalid_argument("InventoryParams: s_max must be >= 1");
    if (!(p.discount > 0.0) || !(p.discount < 1.0))
        throw std::invalid_argument("InventoryParams: discount must lie in (0, 1)");
    if (p.demand_n < 0) throw std::invalid_argument("InventoryParams: demand_n must be >= 0");
    if (!(p.demand_q >= 0.0) || !(p.demand_q <= 1.0))
        throw std::invalid_argument("InventoryParams: demand_q must lie in [0, 1]");
    if (!(p.hold_cost >= 0.0) || !std::isfinite(p.hold_cost))
        throw std::invalid_argument("InventoryParams: hold_cost must be finite and >= 0");
    if (!(p.short_cost >= 0.0) || !std::isfinite(p.short_cost))
        throw std::invalid_argument("InventoryParams: short_cost must be finite and >= 0");
    if (!(p.proc_cost >= 0.0) || !std::isfinite(p.proc_cost))
        throw std::invalid_argument("InventoryParams: proc_cost must be finite and >= 0");
}

std::vector<double> binomial_pmf(int n, double q) {
    if (n < 0) throw std::invalid_argument("binomial_pmf: n must be >= 0");
    if (!(q >= 0.0) || !(q <= 1.0))
        throw std::invalid_argument("binomial_pmf: q must lie in [0, 1]");
    std::vector<double> pmf(static_cast<size_t>(n) + 1, 0.0);
    if (q == 0.0) {
        pmf.front() = 1.0;
        return pmf;
    }
    if (q == 1.0) {
        pmf.back() = 1.0;
        return pmf;
    }
    const double log_q = std::log(q);
    const double log_1mq = std::log1p(-q);
    const double log_n_fact = std::lgamma(n + 1.0);
    for (int k = 0; k <= n; ++k) {
        double log_p = log_n_fact - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) +
                       k * log_q + (n - k) * log_1mq;
        pmf[k] = std::exp(log_p);
    }
    double total = 0.0;
    for (double v : pmf) total += v;
    auto mode = std::max_element(pmf.begin(), pmf.end());
    *mode += 1.0 - total;
    return pmf;
}

FiniteMdp build_inventory(const InventoryParams& params) {
    require_valid(params);
    const int s_max = params.s_max;
    const int n_states = 2 * s_max + 1;
    const int n_actions = s_max + 1;
    const std::vector<double> pmf = binomial_pmf(params.demand_n, params.demand_q);
    const int n = params.demand_n;

    std::vector<int> labels(n_states);
    for (int i = 0; i < n_states; ++i) labels[i] = i - s_max;

    auto clip = [s_max](int level) { return std::clamp(level, -s_max, s_max); };

    std::vector<double> cost(static_cast<size_t>(n_states) * n_actions);
    std::vector<std::vector<Transition>> rows(static_cast<size_t>(n_states) * n_actions);
    for (int i = 0; i < n_states; ++i) {
        const int s = labels[i];
        const double stock_cost =
            params.hold_cost * std::max(s, 0) + params.short_cost * std::max(-s, 0);
        for (int a = 0; a < n_actions; ++a) {
            const size_t idx = static_cast<size_t>(i) * n_actions + a;
            cost[idx] = params.proc_cost * a + stock_cost;
            // Demand w maps the post-order level s + a to clip(s + a - w); the
            // image is a contiguous label run, so accumulate per destination.
            const int lo = clip(s + a - n);
            const int hi = clip(s + a);
            std::vector<Transition>& row = rows[idx];
            row.resize(static_cast<size_t>(hi - lo) + 1);
            for (int next = lo; next <= hi; ++next)
                row[next - lo] = Transition{next + s_max, 0.0};
            for (int w = 0; w <= n; ++w) row[clip(s + a - w) - lo].prob += pmf[w];
        }
    }
    return FiniteMdp(n_states, n_actions, params.discount, std::move(cost), rows,
                     std::move(labels));
}

WeightFn build_weight(const InventoryParams& params_hat, double ell, int n_states) {
    require_valid(params_hat);
    if (!(ell >= 0.0) || !std::isfinite(ell))
        throw std::invalid_argument("build_weight: ell must be finite and >= 0");
    if (n_states != 2 * params_hat.s_max + 1)
        throw std::invalid_argument("build_weight: n_states does not match 2*s_max+1");
    std::vector<double> w(static_cast<size_t>(n_states));
    for (int i = 0; i < n_states; ++i) {
        const int s = i - params_hat.s_max;
        w[i] = 1.0 + ell * (params_hat.hold_cost * std::max(s, 0) +
                            params_hat.short_cost * std::max(-s, 0));
    }
    return WeightFn(std::move(w));
}

std::vector<WeightFn> build_weight_family(const WeightFamilySpec& spec, int n_states) {
    std::vector<WeightFn> family;
    family.reserve(spec.ell_values.size());
    for (double ell : spec.ell_values) family.push_back(build_weight(spec.shape, ell, n_states));
    return family;
}

}  // namespace mdpa
