#pragma once

#include <memory>
#include <span>
#include <vector>

#include "mdpa/types.hpp"

namespace mdpa {

/// One entry of a sparse transition row: probability of moving to `next`.
struct Transition {
    int next;
    double prob;
};

/// Finite discounted MDP with per-(state, action) cost and sparse transition
/// rows. Rows are stored CSR-style (sorted by destination, duplicates
/// coalesced), which serves both dense test models and builders such as the
/// inventory model whose rows have small support. Instances are immutable and
/// cheap to copy (storage is shared).
///
/// States may carry integer labels (e.g. inventory levels, grid points); the
/// labels drive Wasserstein ground metrics and plot axes.
class FiniteMdp {
  public:
    /// `rows[s * n_actions + a]` is the transition row of (s, a). Each row
    /// must sum to 1 within 1e-12 with entries >= 0; violations throw.
    FiniteMdp(int n_states, int n_actions, double discount, std::vector<double> cost,
              const std::vector<std::vector<Transition>>& rows, std::vector<int> labels = {});

    /// Dense constructor for small models: `probs[(s * n_actions + a) * n_states + next]`.
    static FiniteMdp from_dense(int n_states, int n_actions, double discount,
                                const std::vector<double>& probs, std::vector<double> cost,
                                std::vector<int> labels = {});

    int num_states() const { return n_states_; }
    int num_actions() const { return n_actions_; }
    double discount() const { return discount_; }

    double cost(int s, int a) const { return (*cost_)[static_cast<size_t>(s) * n_actions_ + a]; }
    std::span<const Transition> row(int s, int a) const {
        size_t i = static_cast<size_t>(s) * n_actions_ + a;
        return {entries_->data() + (*offsets_)[i], (*offsets_)[i + 1] - (*offsets_)[i]};
    }

    double min_cost() const { return min_cost_; }
    double max_cost() const { return max_cost_; }

    bool has_labels() const { return labels_ && !labels_->empty(); }
    int label(int s) const { return (*labels_)[s]; }
    const std::vector<int>& labels() const;

    /// Same dynamics, cost scale*c + shift. Transition storage is shared.
    FiniteMdp with_cost_transform(AffineTransform t) const;

  private:
    FiniteMdp() = default;

    int n_states_ = 0;
    int n_actions_ = 0;
    double discount_ = 0.0;
    double min_cost_ = 0.0;
    double max_cost_ = 0.0;
    std::shared_ptr<const std::vector<double>> cost_;
    std::shared_ptr<const std::vector<size_t>> offsets_;
    std::shared_ptr<const std::vector<Transition>> entries_;
    std::shared_ptr<const std::vector<int>> labels_;
};

/// Markov policy, either deterministic (one action per state) or stochastic
/// (a probability row over actions per state).
class Policy {
  public:
    static Policy deterministic(std::vector<int> actions);
    /// All states play the same fixed action.
    static Policy open_loop(int n_states, int action);
    /// `probs[s * n_actions + a]`; rows must sum to 1 within 1e-12.
    static Policy stochastic(int n_states, int n_actions, std::vector<double> probs);

    bool is_deterministic() const { return probs_.empty(); }
    int num_states() const { return n_states_; }

    int action(int s) const { return actions_[s]; }
    std::span<const double> action_probs(int s) const {
        return {probs_.data() + static_cast<size_t>(s) * n_actions_, static_cast<size_t>(n_actions_)};
    }

    /// Probability of playing `a` in `s` (works for both representations).
    double prob(int s, int a) const {
        if (is_deterministic()) return actions_[s] == a ? 1.0 : 0.0;
        return probs_[static_cast<size_t>(s) * n_actions_ + a];
    }

  private:
    Policy() = default;

    int n_states_ = 0;
    int n_actions_ = 0;            // only tracked for stochastic policies
    std::vector<int> actions_;     // deterministic representation
    std::vector<double> probs_;    // stochastic representation
};

/// Throws std::invalid_argument unless the policy indexes valid actions of m.
void check_compatible(const FiniteMdp& m, const Policy& pi);

}  // namespace mdpa
