#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mdpa/ipm.hpp"
#include "mdpa/mismatch.hpp"
#include "mdpa/model_pair.hpp"
#include "mdpa/weighting.hpp"

namespace mdpa {

/// Which mismatch functionals a bound is assembled from and which value
/// function they are evaluated at.
enum class BoundVariant {
    pair_at_approx,  // optimal-policy-pair mismatch, evaluated at the approximate optimum
    pair_at_true,    // ... evaluated at scale * (true optimum); needs the oracle side
    opt_at_approx,   // optimizing-backup mismatch at the approximate optimum
    opt_at_true,     // ... at scale * (true optimum); needs the oracle side
};

struct BoundTerm {
    std::string name;
    double value;
};

/// A certified (or explicitly uncertified) upper bound on a weighted-norm
/// gap, with the pieces it was assembled from. `rule` names the inequality
/// family ("gap.*" for value/policy gaps, "loss.*" for deployment loss).
/// When the stability gate discount*kappa < 1 fails the bound is +infinity.
struct BoundReport {
    std::string rule;
    double bound = 0.0;
    double kappa = 0.0;
    WeightFn weight;
    AffineTransform transform;
    bool certified = false;      // every required stability check passed
    bool oracle_checked = true;  // false when oracle-side checks had to be skipped
    std::vector<BoundTerm> terms;
    std::vector<std::string> notes;      // reasons for failed/skipped checks
    std::optional<double> realized;      // the bounded quantity, when computable
};

/// Bound on || V^pi - Vhat^pihat ||_w from the pair mismatch at either
/// policy's value, divided by (1 - discount * kappa). Requires pi stable in
/// the true model and pi_hat stable in the approximate model.
BoundReport policy_error_bound(const ModelPair& pair, const Policy& pi, const Policy& pi_hat,
                               const WeightFn& w, double kappa, const SolveOptions& options = {});

/// Bound on || V* - Vhat* ||_w (gap between the two models' optima).
BoundReport value_error_bound(const SolvedPair& solved, const WeightFn& w, double kappa,
                              BoundVariant variant);

/// Bound on || V^pihat* - V* ||_w: the loss of deploying the approximate
/// model's greedy policy in the true model, under the cost transform.
BoundReport performance_loss_bound(const SolvedPair& solved, const WeightFn& w, double kappa,
                                   BoundVariant variant, AffineTransform t = {});

/// The largest stability factor over exactly the witness policies
/// performance_loss_bound checks for `variant`: the deployed greedy in both
/// models, the true-model optimum (when the oracle side is present), and the
/// variant's cross-greedy witness. Feeding the result back as `kappa` yields
/// a self-consistent certificate whenever the gate discount * kappa < 1
/// holds.
double witness_kappa(const SolvedPair& solved, const WeightFn& w, BoundVariant variant,
                     AffineTransform t = {});

/// Deployment-loss bound from the per-action mismatch, valid when every
/// constant-action policy is stable in both models. `at_true` evaluates the
/// mismatch at scale * (true optimum) with the squared-denominator form.
BoundReport openloop_bound(const SolvedPair& solved, const WeightFn& w, double kappa,
                           bool at_true, AffineTransform t = {});

/// Deployment-loss bound assembled from model distances instead of exact
/// mismatches: each mismatch term is replaced by its uniform surrogate
/// cost_gap + discount * gauge * kernel_gap, which never undercuts the exact
/// term, so these bounds dominate performance_loss_bound's. The rule string
/// carries the distance family, e.g. "loss.tv.opt@approx".
BoundReport ipm_performance_bound(const SolvedPair& solved, const WeightFn& w, double kappa,
                                  const IpmKind& kind, BoundVariant variant,
                                  AffineTransform t = {});

/// Distance-based analogue of openloop_bound, from the maximal model
/// distance over all state-action pairs.
BoundReport ipm_openloop_bound(const SolvedPair& solved, const WeightFn& w, double kappa,
                               const IpmKind& kind, bool at_true, AffineTransform t = {});

/// Certainty-equivalence specialization: when both models share the per-step
/// cost and the approximate kernel replaces additive zero-mean noise by its
/// mean, every kernel row of the pair is within Wasserstein distance
/// noise_mean = E||N|| of its noise-free counterpart, giving
///
///   || V^deployed - V* ||_w <= 2 discount noise_mean Lip(Vhat*) / (1 - discount kappa).
///
/// `kind` supplies the ground metric for the Lipschitz gauge of the
/// approximate optimum. Requires every constant-action policy stable.
BoundReport certainty_equivalence_bound(const SolvedPair& solved, const WeightFn& w, double kappa,
                                        double noise_mean, const IpmKind& kind);

/// Convenience overload: builds and solves the (stochastic, deterministic)
/// pair and reads the 1-D ground metric off the deterministic model's state
/// labels.
BoundReport certainty_equivalence_bound(const FiniteMdp& stoch, const FiniteMdp& det,
                                        double noise_mean, const WeightFn& w, double kappa,
                                        const SolveOptions& options = {});

/// Pointwise envelope implied by a deployment-loss bound: the true optimum
/// lies in [upper - bound * w, upper] with upper = the deployed policy's value.
struct ValueEnvelope {
    ValueVec upper;
    ValueVec lower;
};

ValueEnvelope envelope(const SolvedPair& solved, const BoundReport& report);

/// One (weight, kappa) member of a weight family.
struct WeightedMember {
    WeightFn weight;
    double kappa;
};

/// Per-state best envelope over a family of weights: each member yields its
/// own bound, and the lower envelope takes the pointwise max of the member
/// lower bounds. Members whose certification fails are skipped.
struct EnvelopeSweep {
    ValueEnvelope env;
    std::vector<BoundReport> reports;  // one per member, in input order
    std::vector<int> argmin_member;    // member attaining the lower envelope per state (-1 if none)
    std::vector<int> skipped;          // indices of uncertified members
};

EnvelopeSweep best_envelope_over_weights(const SolvedPair& solved,
                                         const std::vector<WeightedMember>& family,
                                         BoundVariant variant = BoundVariant::opt_at_approx,
                                         AffineTransform t = {});

/// Evaluates the loss bound on a grid of cost transforms and reports the
/// best certified one (`best = -1` when none certifies).
struct TransformSweep {
    std::vector<BoundReport> reports;
    int best = -1;
};

TransformSweep best_bound_over_transforms(const SolvedPair& solved, const WeightFn& w,
                                          double kappa,
                                          const std::vector<AffineTransform>& transforms,
                                          BoundVariant variant = BoundVariant::opt_at_approx);

}  // namespace mdpa
