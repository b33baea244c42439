#include "mdpa/solve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

namespace mdpa {

namespace {

struct SpanStats {
    double lo;  // min of (next - cur)
    double hi;  // max of (next - cur)
    double span() const { return hi - lo; }
};

SpanStats diff_stats(const ValueVec& next, const ValueVec& cur) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    const int n = static_cast<int>(next.size());
    // min/max reductions are exact regardless of evaluation order.
#pragma omp parallel for schedule(static) reduction(min : lo) reduction(max : hi) if (n > 256)
    for (int s = 0; s < n; ++s) {
        double d = next[s] - cur[s];
        lo = std::min(lo, d);
        hi = std::max(hi, d);
    }
    return {lo, hi};
}

// Stopping threshold on span(V_{k+1} - V_k). Chosen so that the
// midpoint-corrected iterate V~ satisfies both
//   ||V~ - V_fix||_inf <= tol            (bracket width)
//   ||B V~ - V~||_inf  <= tol (1-g)/g    (via (1+g)||V~ - V_fix||).
double stop_threshold(double tol, double g) {
    return 2.0 * tol * (1.0 - g) * (1.0 - g) / (g * g * (1.0 + g));
}

template <typename Backup>
std::pair<ValueVec, std::pair<long, double>> iterate_to_fixed_point(const FiniteMdp& m,
                                                                    const SolveOptions& options,
                                                                    Backup&& backup) {
    if (!(options.tol > 0.0)) throw std::invalid_argument("solver tolerance must be > 0");
    if (options.max_iter < 1) throw std::invalid_argument("solver needs max_iter >= 1");
    const double g = m.discount();
    const double threshold = stop_threshold(options.tol, g);

    ValueVec cur(m.num_states(), 0.0);
    for (long k = 1; k <= options.max_iter; ++k) {
        ValueVec next = backup(cur);
        SpanStats d = diff_stats(next, cur);
        if (d.span() <= threshold) {
            double mid = g / (1.0 - g) * 0.5 * (d.lo + d.hi);
            for (double& x : next) x += mid;
            double err = g / (1.0 - g) * 0.5 * d.span();
            return {std::move(next), {k, err}};
        }
        cur = std::move(next);
    }
    double residual = g / (1.0 - g) * 0.5 * diff_stats(backup(cur), cur).span();
    throw SolveError("solver did not converge within the iteration budget", residual,
                     options.max_iter);
}

}  // namespace

SolveResult value_iteration(const FiniteMdp& m, const SolveOptions& options) {
    auto backup = [&](const ValueVec& v) {
        return options.parallel ? bellman_optimal(m, v).values : serial::bellman_optimal(m, v).values;
    };
    auto [value, stats] = iterate_to_fixed_point(m, options, backup);
    auto final_backup =
        options.parallel ? bellman_optimal(m, value) : serial::bellman_optimal(m, value);
    return {std::move(value), Policy::deterministic(std::move(final_backup.greedy)), stats.first,
            stats.second};
}

EvalResult policy_evaluation(const FiniteMdp& m, const Policy& pi, const SolveOptions& options) {
    check_compatible(m, pi);
    auto backup = [&](const ValueVec& v) {
        return options.parallel ? bellman_policy(m, pi, v) : serial::bellman_policy(m, pi, v);
    };
    auto [value, stats] = iterate_to_fixed_point(m, options, backup);
    return {std::move(value), stats.first, stats.second};
}

}  // namespace mdpa
