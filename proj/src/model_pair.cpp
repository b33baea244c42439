#include "mdpa/model_pair.hpp"

#include <stdexcept>

namespace mdpa {

ModelPair::ModelPair(FiniteMdp m, FiniteMdp m_hat)
    : true_model(std::move(m)), approx_model(std::move(m_hat)) {
    if (true_model.num_states() != approx_model.num_states() ||
        true_model.num_actions() != approx_model.num_actions())
        throw std::invalid_argument("paired models must share the state and action spaces");
    if (true_model.discount() != approx_model.discount())
        throw std::invalid_argument("paired models must share the discount factor");
    if (true_model.has_labels() && approx_model.has_labels() &&
        true_model.labels() != approx_model.labels())
        throw std::invalid_argument("paired models carry different state labels");
}

SolvedPair solve_pair(ModelPair pair, const SolveOptions& options, bool with_oracle) {
    SolveResult approx = value_iteration(pair.approx_model, options);
    EvalResult deployed = policy_evaluation(pair.true_model, approx.greedy, options);
    SolvedPair out{std::move(pair),
                   std::move(approx.value),
                   std::move(approx.greedy),
                   std::move(deployed.value),
                   std::nullopt,
                   std::nullopt};
    if (with_oracle) {
        SolveResult truth = value_iteration(out.pair.true_model, options);
        out.true_value = std::move(truth.value);
        out.true_policy = std::move(truth.greedy);
    }
    return out;
}

}  // namespace mdpa
