// Acceptance gate: one line per criterion, [PASS]/[FAIL], exit code = number
// of failures. Criteria 1-6 share one solved desk-scale inventory pair.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <set>
#include <string>
#include <vector>

#include "mdpa/bounds.hpp"
#include "mdpa/ce_system.hpp"
#include "mdpa/experiment.hpp"
#include "mdpa/inventory.hpp"
#include "mdpa/lqr.hpp"
#include "mdpa/solve.hpp"
#include "mdpa/suite.hpp"
#include "mdpa/weighting.hpp"

#include "fixtures.hpp"

using namespace mdpa;

namespace {

int g_failures = 0;

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void report(int index, const std::string& name, bool ok, const std::string& detail) {
    std::printf("[%s] %2d. %s — %s\n", ok ? "PASS" : "FAIL", index, name.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", x);
    return buf;
}

bool on_window(const FiniteMdp& m, int s) { return std::abs(m.label(s)) <= 10; }

}  // namespace

int main() {
    FigureConfig cfg;  // desk-scale defaults: s_max = 500, the published pair
    auto start_solve = std::chrono::steady_clock::now();
    SolvedPair solved = solve_figure_pair(cfg);
    const FiniteMdp& approx = solved.pair.approx_model;
    const int n = solved.pair.num_states();
    const double g = solved.pair.discount();

    // ---- 1. stability certificate at the published weight ----------------
    {
        WeightFn w = build_weight(cfg.approx_params, cfg.ell, n);
        double kappa = witness_kappa(solved, w, BoundVariant::opt_at_approx);
        double elapsed = seconds_since(start_solve);
        bool ok = kappa > 1.0 && kappa <= 1.08 && cert_gate_ok(g, kappa) && elapsed <= 60.0;
        report(1, "inventory stability certificate", ok,
               "max witness kappa = " + fmt(kappa) + " in (1, 1.08], discount*kappa = " +
                   fmt(g * kappa) + " < 1, " + fmt(elapsed) + " s");
    }

    // ---- 2. base-stock structure of the approximate optimum --------------
    {
        int mismatches = 0;
        bool seen = false;
        int first_bad = 0;
        for (int s = 0; s < n; ++s) {
            int label = approx.label(s);
            int expected = std::min(std::max(0, 2 - label), cfg.approx_params.s_max);
            if (solved.approx_policy.action(s) != expected) {
                ++mismatches;
                if (!seen) {
                    first_bad = label;
                    seen = true;
                }
            }
        }
        bool ok = mismatches == 0;
        int observed = solved.approx_policy.action(cfg.approx_params.s_max);  // label 0
        report(2, "base-stock structure (order up to 2, capped by the order limit)", ok,
               ok ? "policy equals max(0, 2 - s) at all " + std::to_string(n) + " states"
                  : std::to_string(mismatches) + " states deviate, first at s = " +
                        std::to_string(first_bad) + "; solved policy orders up to " +
                        std::to_string(observed));
    }

    // ---- 3. envelope soundness; weighted beats sup-norm on the window ----
    {
        WeightFn w = build_weight(cfg.approx_params, cfg.ell, n);
        WeightFn ones = WeightFn::uniform(n);
        BoundReport weighted = performance_loss_bound(
            solved, w, witness_kappa(solved, w, BoundVariant::opt_at_approx),
            BoundVariant::opt_at_approx);
        BoundReport sup = performance_loss_bound(
            solved, ones, witness_kappa(solved, ones, BoundVariant::opt_at_approx),
            BoundVariant::opt_at_approx);
        ValueEnvelope env_w = envelope(solved, weighted);
        ValueEnvelope env_s = envelope(solved, sup);
        const ValueVec& truth = *solved.true_value;

        bool contained = weighted.certified && sup.certified;
        bool strict = true;
        for (int s = 0; s < n && contained; ++s) {
            contained = env_w.lower[s] <= truth[s] + 1e-8 && truth[s] <= env_w.upper[s] + 1e-8 &&
                        env_s.lower[s] <= truth[s] + 1e-8 && truth[s] <= env_s.upper[s] + 1e-8;
        }
        for (int s = 0; s < n; ++s)
            if (on_window(approx, s) && env_w.lower[s] <= env_s.lower[s]) strict = false;
        report(3, "envelope soundness and weighted-over-sup dominance", contained && strict,
               "bounds " + fmt(weighted.bound) + " (weighted) vs " + fmt(sup.bound) +
                   " (sup); optimum inside both envelopes: " + (contained ? "yes" : "no") +
                   "; strictly tighter on the centre window: " + (strict ? "yes" : "no"));
    }

    // ---- 4. weight-family envelope ----------------------------------------
    {
        std::vector<WeightFn> weights =
            build_weight_family({cfg.ell_family, cfg.approx_params}, n);
        std::vector<WeightedMember> family;
        for (const WeightFn& w : weights)
            family.push_back({w, witness_kappa(solved, w, BoundVariant::opt_at_approx)});
        EnvelopeSweep sweep = best_envelope_over_weights(solved, family);

        std::set<int> argmins;
        for (int s = 0; s < n; ++s)
            if (on_window(approx, s) && sweep.argmin_member[s] >= 0)
                argmins.insert(sweep.argmin_member[s]);

        bool dominates = true;
        for (size_t i = 0; i < family.size(); ++i) {
            if (!sweep.reports[i].certified) continue;
            for (int s = 0; s < n; ++s) {
                double lower_i = solved.deployed_value[s] -
                                 sweep.reports[i].bound * sweep.reports[i].weight[s];
                if (sweep.env.lower[s] < lower_i - 1e-9) dominates = false;
            }
        }
        bool ok = argmins.size() >= 2 && dominates;
        report(4, "weight-family envelope", ok,
               std::to_string(argmins.size()) +
                   " distinct best members across the centre window; envelope dominates every "
                   "member: " +
                   (dominates ? "yes" : "no"));
    }

    // ---- 5. cost-transform improvement ------------------------------------
    {
        WeightFn w = build_weight(cfg.approx_params, cfg.ell, n);
        BoundReport base = performance_loss_bound(
            solved, w, witness_kappa(solved, w, BoundVariant::opt_at_approx, cfg.alpha_base),
            BoundVariant::opt_at_approx, cfg.alpha_base);
        BoundReport tuned = performance_loss_bound(
            solved, w, witness_kappa(solved, w, BoundVariant::opt_at_approx, cfg.alpha_tuned),
            BoundVariant::opt_at_approx, cfg.alpha_tuned);
        ValueEnvelope env_b = envelope(solved, base);
        ValueEnvelope env_t = envelope(solved, tuned);
        bool ge_everywhere = base.certified && tuned.certified;
        bool strict_somewhere = false;
        for (int s = 0; s < n; ++s) {
            if (!on_window(approx, s)) continue;
            if (env_t.lower[s] < env_b.lower[s] - 1e-12) ge_everywhere = false;
            if (env_t.lower[s] > env_b.lower[s] + 1e-12) strict_somewhere = true;
        }
        report(5, "cost-transform improvement", ge_everywhere && strict_somewhere,
               "bounds " + fmt(tuned.bound) + " (tuned) vs " + fmt(base.bound) +
                   " (plain); tuned lower bound dominates on the centre window, strictly at >= 1 "
                   "state: " +
                   (strict_somewhere ? "yes" : "no"));
    }

    // ---- 6. model-level stability threshold --------------------------------
    {
        auto model_kappa = [&](double ell) {
            WeightFn w = build_weight(cfg.approx_params, ell, n);
            return std::max(kappa_model(solved.pair.true_model, w).kappa,
                            kappa_model(solved.pair.approx_model, w).kappa);
        };
        double k_ok = model_kappa(1.75e-4);
        double k_bad = model_kappa(2.0e-4);
        bool threshold = cert_gate_ok(g, k_ok) && !cert_gate_ok(g, k_bad);

        std::vector<WeightFn> weights = build_weight_family({cfg.ell_model, cfg.approx_params}, n);
        std::vector<WeightedMember> family;
        for (size_t i = 0; i < weights.size(); ++i)
            family.push_back({weights[i], model_kappa(cfg.ell_model[i])});
        EnvelopeSweep sweep = best_envelope_over_weights(solved, family);
        bool zero_tightest = sweep.reports[0].certified;
        for (size_t i = 1; i < family.size() && zero_tightest; ++i) {
            if (!sweep.reports[i].certified) continue;
            for (int s = 0; s < n; ++s) {
                double lower_0 = solved.deployed_value[s] - sweep.reports[0].bound;
                double lower_i = solved.deployed_value[s] -
                                 sweep.reports[i].bound * sweep.reports[i].weight[s];
                if (lower_0 < lower_i - 1e-9) zero_tightest = false;
            }
        }
        report(6, "model-level stability threshold", threshold && zero_tightest,
               "discount*kappa = " + fmt(g * k_ok) + " at 1.75e-4 (< 1), " + fmt(g * k_bad) +
                   " at 2.0e-4 (>= 1); uniform weight tightest among certified: " +
                   (zero_tightest ? "yes" : "no"));
    }

    // ---- 7. matching cost transform collapses the bound --------------------
    {
        Rng rng(20260814);
        FiniteMdp truth = fixtures::random_mdp(rng, 6, 3, 0.85);
        AffineTransform alpha{2.0, 1.0};
        SolveOptions opt;
        opt.tol = 1e-11;
        SolvedPair pair = solve_pair(ModelPair(truth, truth.with_cost_transform(alpha)), opt);
        WeightFn ones = WeightFn::uniform(6);
        BoundReport matched =
            performance_loss_bound(pair, ones, 1.0, BoundVariant::opt_at_true, alpha);
        BoundReport identity = performance_loss_bound(pair, ones, 1.0, BoundVariant::opt_at_true);
        bool ok = matched.certified && matched.bound <= 1e-10 && identity.bound > 1e-3;
        report(7, "matching-transform zero bound", ok,
               "bound " + fmt(matched.bound) + " at the matching transform vs " +
                   fmt(identity.bound) + " at the identity");
    }

    // ---- 8. noise-free twin: certainty equivalence --------------------------
    {
        LqrModel m;
        m.a_mat = Matrix::Constant(1, 1, 0.9);
        m.b_mat = Matrix::Constant(1, 1, 1.0);
        m.q_mat = Matrix::Constant(1, 1, 1.0);
        m.r_mat = Matrix::Constant(1, 1, 0.3);
        m.noise_cov = Matrix::Constant(1, 1, 0.1);
        m.discount = 0.9;
        LqrModel m_hat = m;
        m_hat.noise_cov = Matrix::Zero(1, 1);
        LqrBoundReport rep = lqr_performance_bound(m, m_hat, 0.01);
        bool ok = rep.rho_d_star <= 1e-9 && rep.rho_d_pihat <= 1e-9 && rep.certified &&
                  rep.bound <= 1e-9;
        report(8, "noise-free linear-quadratic twin", ok,
               "rho(d_star) = " + fmt(rep.rho_d_star) + ", rho(d_pihat) = " + fmt(rep.rho_d_pihat) +
                   ", bound = " + fmt(rep.bound));
    }

    // ---- 9. linear-quadratic soundness battery ------------------------------
    {
        auto t0 = std::chrono::steady_clock::now();
        LqrSuiteConfig cfg_lqr;
        cfg_lqr.instances = 100;
        SuiteReport rep = run_lqr_suite(cfg_lqr);
        double elapsed = seconds_since(t0);
        bool ok = rep.instances == 100 && rep.ok() && elapsed <= 60.0;
        report(9, "linear-quadratic bound battery", ok,
               std::to_string(rep.instances) + " instances, " + std::to_string(rep.checks) +
                   " checks, " + std::to_string(rep.violations) + " violations, " + fmt(elapsed) +
                   " s" + (rep.failures.empty() ? "" : "; first: " + rep.failures.front()));
    }

    // ---- 10. finite-model soundness battery ---------------------------------
    {
        auto t0 = std::chrono::steady_clock::now();
        SuiteConfig cfg_suite;  // 200 instances, <= 8 states, <= 4 actions,
                                // 5 duality samples per kind per instance
        SuiteReport rep = run_random_suite(cfg_suite);
        double elapsed = seconds_since(t0);
        bool ok = rep.instances == 200 && rep.ok() && elapsed <= 300.0;
        report(10, "finite-model bound battery", ok,
               std::to_string(rep.instances) + " instances, " + std::to_string(rep.checks) +
                   " checks, " + std::to_string(rep.violations) + " violations, " + fmt(elapsed) +
                   " s" + (rep.failures.empty() ? "" : "; first: " + rep.failures.front()));
    }

    // ---- 11. additive-noise certainty-equivalence check ----------------------
    {
        CeParams params;
        CeSystem sys = build_ce_system(params);
        SolveOptions opt;
        opt.tol = 1e-10;
        SolvedPair pair = solve_pair(sys.pair, opt);
        WeightFn ones = WeightFn::uniform(sys.pair.num_states());
        std::vector<double> pos(sys.pair.approx_model.labels().begin(),
                                sys.pair.approx_model.labels().end());
        IpmKind metric = IpmKind::wasserstein(pos);
        BoundReport rep = certainty_equivalence_bound(pair, ones, 1.0, sys.noise_mean_abs, metric);

        CeParams doubled = params;
        doubled.noise_support = {-2, 0, 2};
        CeSystem sys2 = build_ce_system(doubled);
        SolvedPair pair2 = solve_pair(sys2.pair, opt);
        BoundReport rep2 =
            certainty_equivalence_bound(pair2, ones, 1.0, sys2.noise_mean_abs, metric);

        bool sound = rep.certified && rep.realized && *rep.realized <= rep.bound + 1e-8 &&
                     rep2.realized && *rep2.realized <= rep2.bound + 1e-8;
        bool linear = std::abs(rep2.bound - 2.0 * rep.bound) <= 1e-9 * (1.0 + rep2.bound);
        report(11, "additive-noise certainty equivalence", sound && linear,
               "realized " + fmt(rep.realized ? *rep.realized : -1.0) + " <= bound " +
                   fmt(rep.bound) + "; doubling E|N| doubles the bound: " +
                   (linear ? "yes" : "no"));
    }

    std::printf("%d of 11 criteria passed\n", 11 - g_failures);
    return g_failures;
}
