#pragma once

#include <vector>

#include "mdpa/mdp.hpp"
#include "mdpa/types.hpp"

namespace mdpa {

/// State weight w: S -> [1, inf) defining the weighted sup norm
/// ||v||_w = sup_s |v(s)| / w(s). Entries below 1 are rejected so that the
/// weighted norm is always dominated by the plain sup norm.
class WeightFn {
  public:
    explicit WeightFn(std::vector<double> w);
    static WeightFn uniform(int n_states) { return WeightFn(std::vector<double>(n_states, 1.0)); }

    int size() const { return static_cast<int>(w_.size()); }
    double operator[](int s) const { return w_[s]; }
    const std::vector<double>& values() const { return w_; }
    bool is_uniform() const { return uniform_; }

  private:
    std::vector<double> w_;
    bool uniform_;
};

/// sup_s |v(s)| / w(s).
double weighted_norm(const ValueVec& v, const WeightFn& w);
/// sup_s |a(s) - b(s)| / w(s) without materializing the difference.
double weighted_norm_diff(const ValueVec& a, const ValueVec& b, const WeightFn& w);

/// How much a transition kernel can expand the weight, plus the weighted
/// size of the associated cost. For a policy certificate:
///   kappa = sup_s sum_s' w(s') P_pi(s'|s) / w(s),   cost_norm = ||c_pi||_w;
/// for a model certificate the suprema run over all (s, a) pairs.
/// Bounds built from (kappa, w) are valid when discount * kappa < 1 (checked
/// via cert_gate_ok; kappa itself is never rounded or padded).
struct StabilityCert {
    double kappa = 0.0;
    double cost_norm = 0.0;
    int arg_state = -1;   // state attaining kappa
    int arg_action = -1;  // action attaining kappa (-1 for policy certificates)
};

StabilityCert kappa_policy(const FiniteMdp& m, const Policy& pi, const WeightFn& w);
StabilityCert kappa_model(const FiniteMdp& m, const WeightFn& w);

}  // namespace mdpa
