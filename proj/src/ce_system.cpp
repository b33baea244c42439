#include "mdpa/ce_system.hpp"

#include <cmath>
#include <stdexcept>

namespace mdpa {

CeSystem build_ce_system(const CeParams& params) {
    if (params.grid_radius < 1) throw std::invalid_argument("grid radius must be >= 1");
    if (params.action_radius < 0) throw std::invalid_argument("action radius must be >= 0");
    if (!(params.discount > 0.0) || !(params.discount < 1.0))
        throw std::invalid_argument("discount must lie in (0, 1)");
    if (!std::isfinite(params.drift)) throw std::invalid_argument("drift must be finite");
    if (params.noise_support.empty() ||
        params.noise_support.size() != params.noise_probs.size())
        throw std::invalid_argument("noise support and probabilities must match and be nonempty");

    double total = 0.0, mean = 0.0, mean_abs = 0.0;
    for (size_t i = 0; i < params.noise_probs.size(); ++i) {
        double p = params.noise_probs[i];
        if (!(p >= 0.0) || !std::isfinite(p))
            throw std::invalid_argument("noise probabilities must be finite and >= 0");
        total += p;
        mean += p * params.noise_support[i];
        mean_abs += p * std::abs(params.noise_support[i]);
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw std::invalid_argument("noise probabilities must sum to 1");
    if (std::abs(mean) > 1e-12)
        throw std::invalid_argument("noise must have mean zero (the noise-free model uses the mean)");

    const int radius = params.grid_radius;
    const int n = 2 * radius + 1;
    const int na = 2 * params.action_radius + 1;
    auto clip_index = [&](long target) {
        if (target < -radius) target = -radius;
        if (target > radius) target = radius;
        return static_cast<int>(target + radius);
    };

    std::vector<double> cost(static_cast<size_t>(n) * na);
    std::vector<std::vector<Transition>> rows_true(cost.size());
    std::vector<std::vector<Transition>> rows_det(cost.size());
    std::vector<int> labels(n);
    for (int s = 0; s < n; ++s) labels[s] = s - radius;

    for (int s = 0; s < n; ++s) {
        long base = std::lround(params.drift * labels[s]);
        for (int a = 0; a < na; ++a) {
            int u = a - params.action_radius;
            size_t idx = static_cast<size_t>(s) * na + a;
            cost[idx] = params.state_cost * static_cast<double>(labels[s]) * labels[s] +
                        params.action_cost * static_cast<double>(u) * u;
            for (size_t k = 0; k < params.noise_support.size(); ++k)
                rows_true[idx].push_back(
                    {clip_index(base + u + params.noise_support[k]), params.noise_probs[k]});
            rows_det[idx].push_back({clip_index(base + u), 1.0});
        }
    }

    FiniteMdp stoch(n, na, params.discount, cost, rows_true, labels);
    FiniteMdp det(n, na, params.discount, cost, rows_det, std::move(labels));
    return CeSystem{ModelPair(std::move(stoch), std::move(det)), mean_abs};
}

}  // namespace mdpa
