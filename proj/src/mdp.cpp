#include "mdpa/mdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace mdpa {

namespace {

constexpr double kRowSumTol = 1e-12;

void check_scalars(int n_states, int n_actions, double discount) {
    if (n_states <= 0 || n_actions <= 0)
        throw std::invalid_argument("model needs at least one state and one action");
    if (!(discount > 0.0) || !(discount < 1.0))
        throw std::invalid_argument("discount must lie strictly inside (0, 1), got " +
                                    std::to_string(discount));
}

}  // namespace

FiniteMdp::FiniteMdp(int n_states, int n_actions, double discount, std::vector<double> cost,
                     const std::vector<std::vector<Transition>>& rows, std::vector<int> labels) {
    check_scalars(n_states, n_actions, discount);
    size_t n_rows = static_cast<size_t>(n_states) * n_actions;
    if (cost.size() != n_rows) throw std::invalid_argument("cost table size mismatch");
    if (rows.size() != n_rows) throw std::invalid_argument("transition table size mismatch");
    if (!labels.empty() && labels.size() != static_cast<size_t>(n_states))
        throw std::invalid_argument("label vector size mismatch");
    for (double c : cost)
        if (!std::isfinite(c)) throw std::invalid_argument("costs must be finite");

    auto offsets = std::make_shared<std::vector<size_t>>();
    auto entries = std::make_shared<std::vector<Transition>>();
    offsets->reserve(n_rows + 1);
    offsets->push_back(0);

    std::vector<Transition> sorted;
    for (size_t i = 0; i < n_rows; ++i) {
        sorted.assign(rows[i].begin(), rows[i].end());
        std::sort(sorted.begin(), sorted.end(),
                  [](const Transition& x, const Transition& y) { return x.next < y.next; });
        double total = 0.0;
        int prev = -1;
        for (const Transition& t : sorted) {
            if (t.next < 0 || t.next >= n_states)
                throw std::invalid_argument("transition targets a state out of range");
            if (!(t.prob >= 0.0) || !std::isfinite(t.prob))
                throw std::invalid_argument("transition probabilities must be finite and >= 0");
            total += t.prob;
            if (t.next == prev)
                entries->back().prob += t.prob;  // coalesce duplicate destinations
            else
                entries->push_back(t);
            prev = t.next;
        }
        if (std::abs(total - 1.0) > kRowSumTol)
            throw std::invalid_argument("transition row " + std::to_string(i) +
                                        " sums to " + std::to_string(total) + ", expected 1");
        offsets->push_back(entries->size());
    }

    n_states_ = n_states;
    n_actions_ = n_actions;
    discount_ = discount;
    auto [lo, hi] = std::minmax_element(cost.begin(), cost.end());
    min_cost_ = *lo;
    max_cost_ = *hi;
    cost_ = std::make_shared<const std::vector<double>>(std::move(cost));
    offsets_ = std::move(offsets);
    entries_ = std::move(entries);
    labels_ = std::make_shared<const std::vector<int>>(std::move(labels));
}

FiniteMdp FiniteMdp::from_dense(int n_states, int n_actions, double discount,
                                const std::vector<double>& probs, std::vector<double> cost,
                                std::vector<int> labels) {
    check_scalars(n_states, n_actions, discount);
    size_t n_rows = static_cast<size_t>(n_states) * n_actions;
    if (probs.size() != n_rows * n_states)
        throw std::invalid_argument("dense transition table size mismatch");
    std::vector<std::vector<Transition>> rows(n_rows);
    for (size_t i = 0; i < n_rows; ++i) {
        rows[i].reserve(n_states);
        for (int next = 0; next < n_states; ++next) {
            double p = probs[i * n_states + next];
            if (p != 0.0) rows[i].push_back({next, p});
        }
    }
    return FiniteMdp(n_states, n_actions, discount, std::move(cost), rows, std::move(labels));
}

const std::vector<int>& FiniteMdp::labels() const {
    if (!has_labels()) throw std::logic_error("model has no state labels");
    return *labels_;
}

FiniteMdp FiniteMdp::with_cost_transform(AffineTransform t) const {
    require_valid(t);
    FiniteMdp out = *this;
    std::vector<double> cost(*cost_);
    for (double& c : cost) c = t.scale * c + t.shift;
    auto [lo, hi] = std::minmax_element(cost.begin(), cost.end());
    out.min_cost_ = *lo;
    out.max_cost_ = *hi;
    out.cost_ = std::make_shared<const std::vector<double>>(std::move(cost));
    return out;
}

Policy Policy::deterministic(std::vector<int> actions) {
    if (actions.empty()) throw std::invalid_argument("policy needs at least one state");
    Policy p;
    p.n_states_ = static_cast<int>(actions.size());
    p.actions_ = std::move(actions);
    for (int a : p.actions_)
        if (a < 0) throw std::invalid_argument("policy actions must be >= 0");
    return p;
}

Policy Policy::open_loop(int n_states, int action) {
    return deterministic(std::vector<int>(n_states, action));
}

Policy Policy::stochastic(int n_states, int n_actions, std::vector<double> probs) {
    if (n_states <= 0 || n_actions <= 0)
        throw std::invalid_argument("stochastic policy needs positive dimensions");
    if (probs.size() != static_cast<size_t>(n_states) * n_actions)
        throw std::invalid_argument("stochastic policy table size mismatch");
    for (int s = 0; s < n_states; ++s) {
        double total = 0.0;
        for (int a = 0; a < n_actions; ++a) {
            double p = probs[static_cast<size_t>(s) * n_actions + a];
            if (!(p >= 0.0) || !std::isfinite(p))
                throw std::invalid_argument("policy probabilities must be finite and >= 0");
            total += p;
        }
        if (std::abs(total - 1.0) > kRowSumTol)
            throw std::invalid_argument("policy row " + std::to_string(s) + " does not sum to 1");
    }
    Policy p;
    p.n_states_ = n_states;
    p.n_actions_ = n_actions;
    p.probs_ = std::move(probs);
    return p;
}

void check_compatible(const FiniteMdp& m, const Policy& pi) {
    if (pi.num_states() != m.num_states())
        throw std::invalid_argument("policy and model disagree on the number of states");
    if (pi.is_deterministic()) {
        for (int s = 0; s < m.num_states(); ++s)
            if (pi.action(s) >= m.num_actions())
                throw std::invalid_argument("policy plays an action the model does not have");
    } else {
        if (pi.action_probs(0).size() != static_cast<size_t>(m.num_actions()))
            throw std::invalid_argument("policy and model disagree on the number of actions");
    }
}

}  // namespace mdpa
