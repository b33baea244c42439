#include "mdpa/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mdpa/bellman.hpp"

namespace mdpa {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

BoundReport make_report(std::string rule, const WeightFn& w, double kappa, AffineTransform t) {
    BoundReport rep{std::move(rule), 0.0, kappa, w, t, true, true, {}, {}, std::nullopt};
    return rep;
}

/// Applies the gate discount * kappa < 1. On failure the report is
/// uncertified and the bound is forced to +infinity (trivially sound).
bool apply_gate(BoundReport& rep, double discount) {
    if (cert_gate_ok(discount, rep.kappa)) return true;
    rep.certified = false;
    rep.notes.push_back("stability gate failed: discount * kappa >= 1");
    return false;
}

void check_stable(BoundReport& rep, const char* name, const FiniteMdp& model, const Policy& pi,
                  const WeightFn& w) {
    double k = kappa_policy(model, pi, w).kappa;
    rep.terms.push_back({std::string("kappa.") + name, k});
    if (k > rep.kappa) {
        rep.certified = false;
        rep.notes.push_back(std::string(name) + " exceeds kappa (" + std::to_string(k) + ")");
    }
}

/// The checks every deployment-loss bound shares: the approximate greedy
/// must be stable in both models, and the true model's own greedy must be
/// stable in the true model (skipped without the oracle side).
void check_common_loss(BoundReport& rep, const SolvedPair& solved, const WeightFn& w) {
    check_stable(rep, "approx_greedy/true_model", solved.pair.true_model, solved.approx_policy, w);
    check_stable(rep, "approx_greedy/approx_model", solved.pair.approx_model, solved.approx_policy,
                 w);
    if (solved.has_oracle()) {
        check_stable(rep, "true_greedy/true_model", solved.pair.true_model, *solved.true_policy, w);
    } else {
        rep.oracle_checked = false;
        rep.notes.push_back("true-model greedy stability not checked (no oracle)");
    }
}

/// Worst constant-action kappa in both models; required by the bounds built
/// from per-action mismatches or maximal model distances.
void check_open_loop(BoundReport& rep, const ModelPair& pair, const WeightFn& w) {
    double worst_true = 0.0, worst_approx = 0.0;
    for (int a = 0; a < pair.num_actions(); ++a) {
        Policy pi_a = Policy::open_loop(pair.num_states(), a);
        worst_true = std::max(worst_true, kappa_policy(pair.true_model, pi_a, w).kappa);
        worst_approx = std::max(worst_approx, kappa_policy(pair.approx_model, pi_a, w).kappa);
    }
    rep.terms.push_back({"kappa.open_loop/true_model", worst_true});
    rep.terms.push_back({"kappa.open_loop/approx_model", worst_approx});
    if (worst_true > rep.kappa || worst_approx > rep.kappa) {
        rep.certified = false;
        rep.notes.push_back("a constant-action policy exceeds kappa");
    }
}

ValueVec scaled_true_value(const SolvedPair& solved, double scale) {
    ValueVec v = *solved.true_value;
    for (double& x : v) x *= scale;
    return v;
}

void require_oracle(const SolvedPair& solved, const char* what) {
    if (!solved.has_oracle())
        throw std::invalid_argument(std::string(what) + " needs the pair solved with the oracle side");
}

}  // namespace

BoundReport policy_error_bound(const ModelPair& pair, const Policy& pi, const Policy& pi_hat,
                               const WeightFn& w, double kappa, const SolveOptions& options) {
    BoundReport rep = make_report("gap.policy_pair", w, kappa, {});
    ValueVec v_pi = policy_evaluation(pair.true_model, pi, options).value;
    ValueVec v_pi_hat = policy_evaluation(pair.approx_model, pi_hat, options).value;

    double at_true = mismatch_policy_pair(pair, pi, pi_hat, v_pi, w).value;
    double at_approx = mismatch_policy_pair(pair, pi, pi_hat, v_pi_hat, w).value;
    rep.terms.push_back({"pair_mismatch@true_policy_value", at_true});
    rep.terms.push_back({"pair_mismatch@approx_policy_value", at_approx});

    check_stable(rep, "pi/true_model", pair.true_model, pi, w);
    check_stable(rep, "pi_hat/approx_model", pair.approx_model, pi_hat, w);
    if (apply_gate(rep, pair.discount())) {
        double denom = 1.0 - pair.discount() * kappa;
        rep.bound = std::min(at_true, at_approx) / denom;
    } else {
        rep.bound = kInf;
    }
    rep.realized = weighted_norm_diff(v_pi, v_pi_hat, w);
    return rep;
}

BoundReport value_error_bound(const SolvedPair& solved, const WeightFn& w, double kappa,
                              BoundVariant variant) {
    const ModelPair& pair = solved.pair;
    const double g = pair.discount();
    const bool at_true = variant == BoundVariant::pair_at_true ||
                         variant == BoundVariant::opt_at_true;
    const bool pair_kind = variant == BoundVariant::pair_at_approx ||
                           variant == BoundVariant::pair_at_true;
    if (pair_kind || at_true) require_oracle(solved, "this value-gap variant");

    BoundReport rep = make_report(pair_kind ? (at_true ? "gap.pair@true" : "gap.pair@approx")
                                            : (at_true ? "gap.opt@true" : "gap.opt@approx"),
                                  w, kappa, {});
    const ValueVec& v = at_true ? *solved.true_value : solved.approx_value;
    double mismatch =
        pair_kind ? mismatch_policy_pair(pair, *solved.true_policy, solved.approx_policy, v, w).value
                  : mismatch_optimal(pair, v, w).value;
    rep.terms.push_back({pair_kind ? "pair_mismatch" : "opt_mismatch", mismatch});

    check_common_loss(rep, solved, w);
    if (!pair_kind) {
        // The optimizing-backup variants additionally need a stable greedy
        // witness in the model whose backup is replaced.
        if (!at_true) {
            Policy witness =
                Policy::deterministic(bellman_optimal(pair.true_model, solved.approx_value).greedy);
            check_stable(rep, "cross_greedy/true_model", pair.true_model, witness, w);
        } else {
            Policy witness =
                Policy::deterministic(bellman_optimal(pair.approx_model, *solved.true_value).greedy);
            check_stable(rep, "cross_greedy/approx_model", pair.approx_model, witness, w);
        }
    }

    rep.bound = apply_gate(rep, g) ? mismatch / (1.0 - g * kappa) : kInf;
    if (solved.has_oracle())
        rep.realized = weighted_norm_diff(*solved.true_value, solved.approx_value, w);
    return rep;
}

BoundReport performance_loss_bound(const SolvedPair& solved, const WeightFn& w, double kappa,
                                   BoundVariant variant, AffineTransform t) {
    require_valid(t);
    const ModelPair& pair = solved.pair;
    const double g = pair.discount();
    const bool at_true = variant == BoundVariant::pair_at_true ||
                         variant == BoundVariant::opt_at_true;
    const bool pair_kind = variant == BoundVariant::pair_at_approx ||
                           variant == BoundVariant::pair_at_true;
    if (pair_kind || at_true) require_oracle(solved, "this loss-bound variant");

    BoundReport rep = make_report(pair_kind ? (at_true ? "loss.pair@true" : "loss.pair@approx")
                                            : (at_true ? "loss.opt@true" : "loss.opt@approx"),
                                  w, kappa, t);
    const ValueVec v = at_true ? scaled_true_value(solved, t.scale) : solved.approx_value;

    double policy_mismatch = mismatch_policy(pair, solved.approx_policy, v, w, t).value;
    double second = pair_kind
                        ? mismatch_policy_pair(pair, *solved.true_policy, solved.approx_policy, v,
                                               w, t)
                              .value
                        : mismatch_optimal(pair, v, w, t).value;
    rep.terms.push_back({"policy_mismatch", policy_mismatch});
    rep.terms.push_back({pair_kind ? "pair_mismatch" : "opt_mismatch", second});

    check_common_loss(rep, solved, w);
    if (!pair_kind) {
        if (!at_true) {
            Policy witness = Policy::deterministic(
                bellman_optimal(pair.true_model, solved.approx_value, t).greedy);
            check_stable(rep, "cross_greedy/true_model", pair.true_model, witness, w);
        } else {
            Policy witness = Policy::deterministic(bellman_optimal(pair.approx_model, v).greedy);
            check_stable(rep, "cross_greedy/approx_model", pair.approx_model, witness, w);
        }
    }

    if (apply_gate(rep, g)) {
        double denom = 1.0 - g * kappa;
        rep.bound = at_true ? policy_mismatch / (t.scale * denom) +
                                  (1.0 + g * kappa) * second / (t.scale * denom * denom)
                            : (policy_mismatch + second) / (t.scale * denom);
    } else {
        rep.bound = kInf;
    }
    if (solved.has_oracle())
        rep.realized = weighted_norm_diff(solved.deployed_value, *solved.true_value, w);
    return rep;
}

double witness_kappa(const SolvedPair& solved, const WeightFn& w, BoundVariant variant,
                     AffineTransform t) {
    require_valid(t);
    const ModelPair& pair = solved.pair;
    const bool at_true = variant == BoundVariant::pair_at_true ||
                         variant == BoundVariant::opt_at_true;
    const bool pair_kind = variant == BoundVariant::pair_at_approx ||
                           variant == BoundVariant::pair_at_true;
    if (pair_kind || at_true) require_oracle(solved, "this loss-bound variant");

    double kappa = std::max(kappa_policy(pair.true_model, solved.approx_policy, w).kappa,
                            kappa_policy(pair.approx_model, solved.approx_policy, w).kappa);
    if (solved.has_oracle())
        kappa = std::max(kappa, kappa_policy(pair.true_model, *solved.true_policy, w).kappa);
    if (!pair_kind) {
        if (!at_true) {
            Policy witness = Policy::deterministic(
                bellman_optimal(pair.true_model, solved.approx_value, t).greedy);
            kappa = std::max(kappa, kappa_policy(pair.true_model, witness, w).kappa);
        } else {
            Policy witness = Policy::deterministic(
                bellman_optimal(pair.approx_model, scaled_true_value(solved, t.scale)).greedy);
            kappa = std::max(kappa, kappa_policy(pair.approx_model, witness, w).kappa);
        }
    }
    return kappa;
}

BoundReport openloop_bound(const SolvedPair& solved, const WeightFn& w, double kappa, bool at_true,
                           AffineTransform t) {
    require_valid(t);
    const ModelPair& pair = solved.pair;
    const double g = pair.discount();
    if (at_true) require_oracle(solved, "the open-loop bound at the true optimum");

    BoundReport rep = make_report(at_true ? "loss.openloop@true" : "loss.openloop@approx", w,
                                  kappa, t);
    const ValueVec v = at_true ? scaled_true_value(solved, t.scale) : solved.approx_value;
    double max_mismatch = mismatch_max(pair, v, w, t).value;
    rep.terms.push_back({"max_mismatch", max_mismatch});

    check_common_loss(rep, solved, w);
    check_open_loop(rep, pair, w);

    if (apply_gate(rep, g)) {
        double denom = 1.0 - g * kappa;
        rep.bound = at_true ? 2.0 * max_mismatch / (t.scale * denom * denom)
                            : 2.0 * max_mismatch / (t.scale * denom);
    } else {
        rep.bound = kInf;
    }
    if (solved.has_oracle())
        rep.realized = weighted_norm_diff(solved.deployed_value, *solved.true_value, w);
    return rep;
}

BoundReport ipm_performance_bound(const SolvedPair& solved, const WeightFn& w, double kappa,
                                  const IpmKind& kind, BoundVariant variant, AffineTransform t) {
    require_valid(t);
    const ModelPair& pair = solved.pair;
    const double g = pair.discount();
    const bool at_true = variant == BoundVariant::pair_at_true ||
                         variant == BoundVariant::opt_at_true;
    const bool pair_kind = variant == BoundVariant::pair_at_approx ||
                           variant == BoundVariant::pair_at_true;
    if (pair_kind || at_true) require_oracle(solved, "this distance-bound variant");

    BoundReport rep = make_report("loss." + kind.name() + (pair_kind ? ".pair" : ".opt") +
                                      (at_true ? "@true" : "@approx"),
                                  w, kappa, t);

    // First bracket: the deployed policy compared across the two models.
    ModelDistance d1 =
        model_distance(pair, solved.approx_policy, solved.approx_policy, w, kind, t);
    rep.terms.push_back({"eps.deployed", d1.cost_gap});
    rep.terms.push_back({"delta.deployed", d1.kernel_gap});

    check_common_loss(rep, solved, w);

    // Second bracket: a true-model optimizer (or greedy witness) against the
    // policy completing the mismatch it surrogates.
    ModelDistance d2;
    if (pair_kind) {
        d2 = model_distance(pair, *solved.true_policy, solved.approx_policy, w, kind, t);
    } else if (!at_true) {
        Policy witness =
            Policy::deterministic(bellman_optimal(pair.true_model, solved.approx_value, t).greedy);
        check_stable(rep, "cross_greedy/true_model", pair.true_model, witness, w);
        d2 = model_distance(pair, witness, solved.approx_policy, w, kind, t);
    } else {
        Policy witness = Policy::deterministic(
            bellman_optimal(pair.approx_model, scaled_true_value(solved, t.scale)).greedy);
        check_stable(rep, "cross_greedy/approx_model", pair.approx_model, witness, w);
        d2 = model_distance(pair, *solved.true_policy, witness, w, kind, t);
    }
    rep.terms.push_back({"eps.opt_pair", d2.cost_gap});
    rep.terms.push_back({"delta.opt_pair", d2.kernel_gap});

    // Evaluated at the approximate optimum the gauge enters as-is; at the
    // true optimum it enters scaled, matching the scaled value the exact
    // mismatch would be evaluated at.
    double gauge_v = at_true ? t.scale * kind.gauge(*solved.true_value)
                             : kind.gauge(solved.approx_value);
    rep.terms.push_back({"gauge", gauge_v});

    if (apply_gate(rep, g)) {
        double denom = 1.0 - g * kappa;
        double m1 = mismatch_from_distance(d1, gauge_v, g);
        double m2 = mismatch_from_distance(d2, gauge_v, g);
        rep.bound = at_true ? m1 / (t.scale * denom) +
                                  (1.0 + g * kappa) * m2 / (t.scale * denom * denom)
                            : (m1 + m2) / (t.scale * denom);
    } else {
        rep.bound = kInf;
    }
    if (solved.has_oracle())
        rep.realized = weighted_norm_diff(solved.deployed_value, *solved.true_value, w);
    return rep;
}

BoundReport ipm_openloop_bound(const SolvedPair& solved, const WeightFn& w, double kappa,
                               const IpmKind& kind, bool at_true, AffineTransform t) {
    require_valid(t);
    const ModelPair& pair = solved.pair;
    const double g = pair.discount();
    if (at_true) require_oracle(solved, "the open-loop distance bound at the true optimum");

    BoundReport rep = make_report("loss." + kind.name() + ".openloop" +
                                      (at_true ? "@true" : "@approx"),
                                  w, kappa, t);
    ModelDistance dm = model_distance_max(pair, w, kind, t);
    double gauge_v = at_true ? t.scale * kind.gauge(*solved.true_value)
                             : kind.gauge(solved.approx_value);
    rep.terms.push_back({"eps.max", dm.cost_gap});
    rep.terms.push_back({"delta.max", dm.kernel_gap});
    rep.terms.push_back({"gauge", gauge_v});

    check_common_loss(rep, solved, w);
    check_open_loop(rep, pair, w);

    if (apply_gate(rep, g)) {
        double denom = 1.0 - g * kappa;
        double m = mismatch_from_distance(dm, gauge_v, g);
        rep.bound = at_true ? 2.0 * m / (t.scale * denom * denom) : 2.0 * m / (t.scale * denom);
    } else {
        rep.bound = kInf;
    }
    if (solved.has_oracle())
        rep.realized = weighted_norm_diff(solved.deployed_value, *solved.true_value, w);
    return rep;
}

BoundReport certainty_equivalence_bound(const SolvedPair& solved, const WeightFn& w, double kappa,
                                        double noise_mean, const IpmKind& kind) {
    if (kind.family() != IpmFamily::wasserstein)
        throw std::invalid_argument("the certainty-equivalence bound needs a Wasserstein metric");
    if (!std::isfinite(noise_mean) || noise_mean < 0.0)
        throw std::invalid_argument("noise mean size must be finite and >= 0");
    const ModelPair& pair = solved.pair;
    const double g = pair.discount();
    BoundReport rep = make_report("loss.ce", w, kappa, {});

    // The specialization drops the cost-gap term entirely, so it is only
    // sound when the two models share the per-step cost exactly.
    double cost_gap = 0.0;
    for (int s = 0; s < pair.num_states(); ++s)
        for (int a = 0; a < pair.num_actions(); ++a)
            cost_gap = std::max(cost_gap, std::abs(pair.true_model.cost(s, a) -
                                                   pair.approx_model.cost(s, a)));
    if (cost_gap != 0.0) {
        rep.certified = false;
        rep.notes.push_back("models do not share the per-step cost");
    }

    double lip = kind.gauge(solved.approx_value);
    rep.terms.push_back({"noise_mean", noise_mean});
    rep.terms.push_back({"gauge", lip});

    check_common_loss(rep, solved, w);
    check_open_loop(rep, pair, w);

    rep.bound = apply_gate(rep, g) ? 2.0 * g * noise_mean * lip / (1.0 - g * kappa) : kInf;
    if (solved.has_oracle())
        rep.realized = weighted_norm_diff(solved.deployed_value, *solved.true_value, w);
    return rep;
}

BoundReport certainty_equivalence_bound(const FiniteMdp& stoch, const FiniteMdp& det,
                                        double noise_mean, const WeightFn& w, double kappa,
                                        const SolveOptions& options) {
    if (!det.has_labels())
        throw std::invalid_argument(
            "the deterministic model needs state labels to define the ground metric");
    SolvedPair solved = solve_pair(ModelPair(stoch, det), options, /*with_oracle=*/true);
    std::vector<double> positions(det.labels().begin(), det.labels().end());
    return certainty_equivalence_bound(solved, w, kappa, noise_mean,
                                       IpmKind::wasserstein(std::move(positions)));
}

ValueEnvelope envelope(const SolvedPair& solved, const BoundReport& report) {
    if (report.weight.size() != solved.pair.num_states())
        throw std::invalid_argument("bound report weight does not match the pair");
    ValueEnvelope env{solved.deployed_value, solved.deployed_value};
    for (int s = 0; s < solved.pair.num_states(); ++s) env.lower[s] -= report.bound * report.weight[s];
    return env;
}

EnvelopeSweep best_envelope_over_weights(const SolvedPair& solved,
                                         const std::vector<WeightedMember>& family,
                                         BoundVariant variant, AffineTransform t) {
    if (family.empty()) throw std::invalid_argument("weight family must not be empty");
    const int n = solved.pair.num_states();
    EnvelopeSweep sweep;
    sweep.env.upper = solved.deployed_value;
    sweep.env.lower.assign(n, -kInf);
    sweep.argmin_member.assign(n, -1);

    for (size_t i = 0; i < family.size(); ++i) {
        BoundReport rep =
            performance_loss_bound(solved, family[i].weight, family[i].kappa, variant, t);
        if (!rep.certified) {
            sweep.skipped.push_back(static_cast<int>(i));
            sweep.reports.push_back(std::move(rep));
            continue;
        }
        for (int s = 0; s < n; ++s) {
            double lower = sweep.env.upper[s] - rep.bound * family[i].weight[s];
            if (lower > sweep.env.lower[s]) {
                sweep.env.lower[s] = lower;
                sweep.argmin_member[s] = static_cast<int>(i);
            }
        }
        sweep.reports.push_back(std::move(rep));
    }
    return sweep;
}

TransformSweep best_bound_over_transforms(const SolvedPair& solved, const WeightFn& w,
                                          double kappa,
                                          const std::vector<AffineTransform>& transforms,
                                          BoundVariant variant) {
    if (transforms.empty()) throw std::invalid_argument("transform grid must not be empty");
    TransformSweep sweep;
    double best = kInf;
    for (size_t i = 0; i < transforms.size(); ++i) {
        BoundReport rep = performance_loss_bound(solved, w, kappa, variant, transforms[i]);
        if (rep.certified && rep.bound < best) {
            best = rep.bound;
            sweep.best = static_cast<int>(i);
        }
        sweep.reports.push_back(std::move(rep));
    }
    return sweep;
}

}  // namespace mdpa
