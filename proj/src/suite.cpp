#include "mdpa/suite.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mdpa/bounds.hpp"
#include "mdpa/csv.hpp"
#include "mdpa/lqr.hpp"
#include "mdpa/random.hpp"

namespace mdpa {
namespace {

constexpr size_t kMaxFailures = 25;

struct Checker {
    SuiteReport rep;

    void expect(bool ok, const std::string& what) {
        ++rep.checks;
        if (!ok) {
            ++rep.violations;
            if (rep.failures.size() < kMaxFailures) rep.failures.push_back(what);
        }
    }

    void expect_le(double x, double y, double tol, const std::string& what) {
        expect(x <= y + tol, what + ": " + format_double(x) + " > " + format_double(y) +
                                 " (tol " + format_double(tol) + ")");
    }
};

/// Scales to unit sum, folding the rounding residual onto the largest entry
/// so the FiniteMdp row validation (sum within 1e-12) passes exactly.
void normalize_exact(std::vector<double>& p) {
    double total = 0.0;
    for (double x : p) total += x;
    int top = 0;
    for (size_t i = 0; i < p.size(); ++i) {
        p[i] /= total;
        if (p[i] > p[top]) top = static_cast<int>(i);
    }
    double sum = 0.0;
    for (double x : p) sum += x;
    p[top] += 1.0 - sum;
}

FiniteMdp random_model(Rng& rng, int n, int na, double discount,
                       const std::vector<int>& labels) {
    std::vector<double> probs(static_cast<size_t>(n) * na * n);
    std::vector<double> cost(static_cast<size_t>(n) * na);
    for (int s = 0; s < n; ++s)
        for (int a = 0; a < na; ++a) {
            std::vector<double> row = rng.simplex(n);
            std::copy(row.begin(), row.end(),
                      probs.begin() + (static_cast<size_t>(s) * na + a) * n);
            cost[static_cast<size_t>(s) * na + a] = rng.uniform(-1.0, 2.0);
        }
    return FiniteMdp::from_dense(n, na, discount, probs, std::move(cost), labels);
}

/// A nearby model: kernel rows mixed with fresh noise, costs nudged. Keeps
/// the pairs interesting (small but nonzero mismatches) half the time.
FiniteMdp perturbed_model(Rng& rng, const FiniteMdp& base, const std::vector<int>& labels) {
    const int n = base.num_states();
    const int na = base.num_actions();
    std::vector<double> probs(static_cast<size_t>(n) * na * n);
    std::vector<double> cost(static_cast<size_t>(n) * na);
    for (int s = 0; s < n; ++s)
        for (int a = 0; a < na; ++a) {
            std::vector<double> row(n, 0.0);
            for (const Transition& tr : base.row(s, a)) row[tr.next] = tr.prob;
            std::vector<double> noise = rng.simplex(n);
            for (int j = 0; j < n; ++j) row[j] = 0.8 * row[j] + 0.2 * noise[j];
            normalize_exact(row);
            std::copy(row.begin(), row.end(),
                      probs.begin() + (static_cast<size_t>(s) * na + a) * n);
            cost[static_cast<size_t>(s) * na + a] = base.cost(s, a) + rng.uniform(-0.2, 0.2);
        }
    return FiniteMdp::from_dense(n, na, base.discount(), probs, std::move(cost), labels);
}

Policy random_policy(Rng& rng, int n, int na) {
    std::vector<int> actions(n);
    for (int& a : actions) a = rng.uniform_int(na);
    return Policy::deterministic(std::move(actions));
}

ValueVec random_value(Rng& rng, int n) {
    ValueVec v(n);
    for (double& x : v) x = rng.uniform(-3.0, 3.0);
    return v;
}

/// Random weight in [1, 5), shrunk toward the sup-norm weight until the
/// model-level gate passes (w == 1 always does).
WeightFn certified_weight(Rng& rng, const ModelPair& pair, double* kappa_bar) {
    std::vector<double> w(pair.num_states());
    for (double& x : w) x = 1.0 + 4.0 * rng.uniform();
    for (int round = 0; round < 64; ++round) {
        WeightFn wf(w);
        double kbar = std::max(kappa_model(pair.true_model, wf).kappa,
                               kappa_model(pair.approx_model, wf).kappa);
        if (cert_gate_ok(pair.discount(), kbar)) {
            *kappa_bar = kbar;
            return wf;
        }
        for (double& x : w) x = 1.0 + (x - 1.0) / 2.0;
    }
    WeightFn wf = WeightFn::uniform(pair.num_states());
    *kappa_bar = std::max(kappa_model(pair.true_model, wf).kappa,
                          kappa_model(pair.approx_model, wf).kappa);
    return wf;
}

/// The same solved pair re-expressed with the transformed true model, built
/// without re-solving: optimal policies are invariant under affine cost
/// transforms and values move affinely.
SolvedPair transformed_solved(const SolvedPair& solved, AffineTransform t) {
    auto shift_value = [&](const ValueVec& v) {
        ValueVec out = v;
        double c = t.shift / (1.0 - solved.pair.discount());
        for (double& x : out) x = t.scale * x + c;
        return out;
    };
    SolvedPair out{ModelPair(solved.pair.true_model.with_cost_transform(t),
                             solved.pair.approx_model),
                   solved.approx_value,
                   solved.approx_policy,
                   shift_value(solved.deployed_value),
                   shift_value(*solved.true_value),
                   solved.true_policy};
    return out;
}

void check_exact_bounds(Checker& ck, const SolvedPair& solved, const WeightFn& w, double kbar,
                        Rng& rng, const std::string& tag) {
    const double tol = 1e-8;
    const int n = solved.pair.num_states();
    const int na = solved.pair.num_actions();
    const double realized_loss = weighted_norm_diff(solved.deployed_value, *solved.true_value, w);
    const double realized_gap =
        weighted_norm_diff(*solved.true_value, solved.approx_value, w);

    const BoundVariant variants[] = {BoundVariant::pair_at_approx, BoundVariant::pair_at_true,
                                     BoundVariant::opt_at_approx, BoundVariant::opt_at_true};
    const AffineTransform transforms[] = {{},
                                          {rng.uniform(0.5, 2.0), rng.uniform(-1.0, 1.0)}};

    for (const AffineTransform& t : transforms) {
        const std::string ttag =
            tag + " t=(" + format_double(t.scale) + "," + format_double(t.shift) + ") ";
        SolvedPair moved = transformed_solved(solved, t);
        for (BoundVariant variant : variants) {
            BoundReport rep = performance_loss_bound(solved, w, kbar, variant, t);
            ck.expect(rep.certified, ttag + rep.rule + " certified");
            ck.expect_le(realized_loss, rep.bound, tol, ttag + rep.rule + " vs realized");

            // Transform consistency: bounding the pair under the transform
            // must agree with bounding the transformed pair, up to the scale.
            BoundReport rep_moved = performance_loss_bound(moved, w, kbar, variant);
            ck.expect_le(std::abs(rep_moved.bound - t.scale * rep.bound), 0.0,
                         1e-9 * (1.0 + std::abs(rep_moved.bound)),
                         ttag + rep.rule + " transform consistency");
        }
        for (bool at_true : {false, true}) {
            BoundReport rep = openloop_bound(solved, w, kbar, at_true, t);
            ck.expect(rep.certified, ttag + rep.rule + " certified");
            ck.expect_le(realized_loss, rep.bound, tol, ttag + rep.rule + " vs realized");
        }

        // The per-action mismatch dominates every fixed-policy and
        // optimizing mismatch at the same value function.
        for (const ValueVec& v : {solved.approx_value, random_value(rng, n)}) {
            double mx = mismatch_max(solved.pair, v, w, t).value;
            ck.expect_le(mismatch_optimal(solved.pair, v, w, t).value, mx, 1e-10,
                         ttag + "opt mismatch vs max mismatch");
            ck.expect_le(mismatch_policy(solved.pair, solved.approx_policy, v, w, t).value, mx,
                         1e-10, ttag + "policy mismatch vs max mismatch");
        }
    }

    for (BoundVariant variant : variants) {
        BoundReport rep = value_error_bound(solved, w, kbar, variant);
        ck.expect(rep.certified, tag + rep.rule + " certified");
        ck.expect_le(realized_gap, rep.bound, tol, tag + rep.rule + " vs realized");
    }

    {
        Policy pi = random_policy(rng, n, na);
        Policy pi_hat = random_policy(rng, n, na);
        BoundReport rep = policy_error_bound(solved.pair, pi, pi_hat, w, kbar);
        ck.expect(rep.certified, tag + rep.rule + " certified");
        ck.expect_le(*rep.realized, rep.bound, tol, tag + rep.rule + " vs realized");
    }

    {
        BoundReport rep =
            performance_loss_bound(solved, w, kbar, BoundVariant::opt_at_approx);
        ValueEnvelope env = envelope(solved, rep);
        for (int s = 0; s < n; ++s) {
            ck.expect((*solved.true_value)[s] <= env.upper[s] + tol &&
                          (*solved.true_value)[s] >= env.lower[s] - tol,
                      tag + "envelope contains the true optimum at state " +
                          std::to_string(s));
        }
    }
}

void check_ipm(Checker& ck, const SolvedPair& solved, const WeightFn& w, double kbar, Rng& rng,
               int duality_samples, const std::string& tag) {
    const ModelPair& pair = solved.pair;
    const int n = pair.num_states();
    const double g = pair.discount();
    std::vector<double> positions(pair.true_model.labels().begin(),
                                  pair.true_model.labels().end());

    const IpmKind kinds[] = {IpmKind::total_variation(), IpmKind::wasserstein(positions),
                             IpmKind::weighted_total_variation(w)};
    const AffineTransform t{rng.uniform(0.5, 2.0), rng.uniform(-1.0, 1.0)};
    const double realized_loss = weighted_norm_diff(solved.deployed_value, *solved.true_value, w);

    for (const IpmKind& kind : kinds) {
        const std::string ktag = tag + kind.name() + " ";

        // Surrogate vs exact mismatch, fixed policies: purely algebraic.
        Policy pi = random_policy(rng, n, pair.num_actions());
        Policy pi_hat = random_policy(rng, n, pair.num_actions());
        ModelDistance dist = model_distance(pair, pi, pi_hat, w, kind, t);
        for (const ValueVec& v : {solved.approx_value, random_value(rng, n)}) {
            double exact = mismatch_policy_pair(pair, pi, pi_hat, v, w, t).value;
            double surrogate = mismatch_from_distance(dist, kind.gauge(v), g);
            ck.expect_le(exact, surrogate, 1e-9 * (1.0 + surrogate),
                         ktag + "policy-pair mismatch vs distance surrogate");

            double exact_max = mismatch_max(pair, v, w, t).value;
            double surrogate_max =
                mismatch_from_distance(model_distance_max(pair, w, kind, t), kind.gauge(v), g);
            ck.expect_le(exact_max, surrogate_max, 1e-9 * (1.0 + surrogate_max),
                         ktag + "max mismatch vs max-distance surrogate");
        }

        // Surrogate vs the optimizing mismatch at the approximate optimum:
        // exact up to the solver tolerance in the fixed-point identity.
        {
            Policy greedy_true = Policy::deterministic(
                bellman_optimal(pair.true_model, solved.approx_value, t).greedy);
            double exact = mismatch_optimal(pair, solved.approx_value, w, t).value;
            double surrogate = mismatch_from_distance(
                model_distance(pair, greedy_true, solved.approx_policy, w, kind, t),
                kind.gauge(solved.approx_value), g);
            ck.expect_le(exact, surrogate, 1e-7 * (1.0 + surrogate),
                         ktag + "optimizing mismatch vs distance surrogate");
        }

        // Distance bounds certify, dominate their realized loss, and never
        // undercut the exact-mismatch bound they surrogate.
        const BoundVariant variants[] = {BoundVariant::pair_at_approx,
                                         BoundVariant::pair_at_true,
                                         BoundVariant::opt_at_approx, BoundVariant::opt_at_true};
        for (BoundVariant variant : variants) {
            BoundReport coarse = ipm_performance_bound(solved, w, kbar, kind, variant, t);
            BoundReport exact = performance_loss_bound(solved, w, kbar, variant, t);
            ck.expect(coarse.certified, ktag + coarse.rule + " certified");
            ck.expect_le(realized_loss, coarse.bound, 1e-8, ktag + coarse.rule + " vs realized");
            ck.expect_le(exact.bound, coarse.bound, 1e-7 * (1.0 + coarse.bound),
                         ktag + coarse.rule + " dominates the exact-mismatch bound");
        }
        for (bool at_true : {false, true}) {
            BoundReport coarse = ipm_openloop_bound(solved, w, kbar, kind, at_true, t);
            BoundReport exact = openloop_bound(solved, w, kbar, at_true, t);
            ck.expect(coarse.certified, ktag + coarse.rule + " certified");
            ck.expect_le(realized_loss, coarse.bound, 1e-8, ktag + coarse.rule + " vs realized");
            ck.expect_le(exact.bound, coarse.bound, 1e-9 * (1.0 + coarse.bound),
                         ktag + coarse.rule + " dominates the exact-mismatch bound");
        }

        // Duality: |<f, p - q>| <= gauge(f) * d(p, q); plus the metric axioms.
        for (int k = 0; k < duality_samples; ++k) {
            ValueVec f = random_value(rng, n);
            std::vector<double> p = rng.simplex(n);
            std::vector<double> q = rng.simplex(n);
            std::vector<double> r = rng.simplex(n);
            double lhs = 0.0;
            for (int i = 0; i < n; ++i) lhs += f[i] * (p[i] - q[i]);
            double d_pq = kind.distance(std::span<const double>(p),
                                        std::span<const double>(q));
            ck.expect_le(std::abs(lhs), kind.gauge(f) * d_pq, 1e-9,
                         ktag + "duality inequality");

            double d_qp = kind.distance(std::span<const double>(q),
                                        std::span<const double>(p));
            double d_pp = kind.distance(std::span<const double>(p),
                                        std::span<const double>(p));
            double d_pr = kind.distance(std::span<const double>(p),
                                        std::span<const double>(r));
            double d_qr = kind.distance(std::span<const double>(q),
                                        std::span<const double>(r));
            ck.expect_le(d_pp, 0.0, 1e-12, ktag + "identity axiom");
            ck.expect_le(std::abs(d_pq - d_qp), 0.0, 1e-10 * (1.0 + d_pq),
                         ktag + "symmetry axiom");
            ck.expect_le(d_pr, d_pq + d_qr, 1e-10 * (1.0 + d_pq + d_qr),
                         ktag + "triangle axiom");
        }
    }
}

}  // namespace

SuiteReport run_random_suite(const SuiteConfig& cfg) {
    Checker ck;
    Rng rng(cfg.seed);
    for (int inst = 0; inst < cfg.instances; ++inst) {
        const std::string tag = "instance " + std::to_string(inst) + ": ";
        const int n = 2 + rng.uniform_int(cfg.max_states - 1);
        const int na = 1 + rng.uniform_int(cfg.max_actions);
        const double discount = rng.uniform(0.5, 0.95);

        std::vector<int> labels(n);
        int level = rng.uniform_int(5) - 10;
        for (int& l : labels) {
            l = level;
            level += 1 + rng.uniform_int(3);
        }

        FiniteMdp true_model = random_model(rng, n, na, discount, labels);
        FiniteMdp approx_model = rng.uniform() < 0.5
                                     ? perturbed_model(rng, true_model, labels)
                                     : random_model(rng, n, na, discount, labels);
        ModelPair pair(std::move(true_model), std::move(approx_model));

        double kbar = 0.0;
        WeightFn w = certified_weight(rng, pair, &kbar);
        SolvedPair solved = solve_pair(std::move(pair), cfg.solve, /*with_oracle=*/true);

        check_exact_bounds(ck, solved, w, kbar, rng, tag);
        check_ipm(ck, solved, w, kbar, rng, cfg.duality_samples, tag);
        ++ck.rep.instances;
    }
    return ck.rep;
}

namespace {

Matrix random_matrix(Rng& rng, int rows, int cols, double scale) {
    Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = scale * rng.uniform(-1.0, 1.0);
    return m;
}

Matrix random_psd(Rng& rng, int n, double scale, double ridge) {
    Matrix g = random_matrix(rng, n, n, scale);
    return Matrix(g.transpose() * g + ridge * Matrix::Identity(n, n));
}

LqrModel random_lqr(Rng& rng, int d, int m) {
    LqrModel model;
    model.a_mat = random_matrix(rng, d, d, 1.0);
    double top = spectral_norm(model.a_mat);
    if (top > 0.0) model.a_mat *= rng.uniform(0.3, 1.05) / top;
    model.b_mat = random_matrix(rng, d, m, 1.0);
    if (spectral_norm(model.b_mat) < 0.3)
        model.b_mat += 0.5 * Matrix::Identity(d, d).leftCols(m);
    model.q_mat = random_psd(rng, d, 1.0, 0.05);
    model.r_mat = random_psd(rng, m, 1.0, 0.1);
    model.noise_cov = rng.uniform() < 0.15 ? Matrix::Zero(d, d)
                                           : random_psd(rng, d, rng.uniform(0.0, 0.2), 0.0);
    model.discount = rng.uniform(0.6, 0.95);
    return model;
}

}  // namespace

SuiteReport run_lqr_suite(const LqrSuiteConfig& cfg) {
    Checker ck;
    Rng rng(cfg.seed);
    for (int inst = 0; inst < cfg.instances; ++inst) {
        const std::string tag = "lqr instance " + std::to_string(inst) + ": ";
        const int d = inst % 2 == 0 ? 1 : 2;
        const int m = d == 1 ? 1 : 1 + rng.uniform_int(2);

        // Rejection-sample a pair whose stability certificate passes.
        bool found = false;
        LqrModel truth, approx;
        double ell = 0.0;
        for (int attempt = 0; attempt < 1000 && !found; ++attempt) {
            truth = random_lqr(rng, d, m);
            approx = truth;
            approx.a_mat += random_matrix(rng, d, d, 0.05);
            approx.b_mat += random_matrix(rng, d, m, 0.05);
            approx.q_mat = Matrix(approx.q_mat + random_psd(rng, d, 0.1, 0.0));
            approx.r_mat = Matrix(approx.r_mat + random_psd(rng, m, 0.1, 0.0));
            if (rng.uniform() < 0.2) approx.noise_cov = Matrix::Zero(d, d);
            ell = rng.uniform(1e-3, 0.1);
            try {
                found = certify_lq_stability(truth, approx, ell).valid;
            } catch (const std::exception&) {
                found = false;
            }
        }
        ck.expect(found, tag + "failed to sample a certifiable pair");
        if (!found) continue;

        LqrBoundReport rep = lqr_performance_bound(truth, approx, ell);
        ck.expect(rep.certified, tag + "bound certified");

        RiccatiSolution opt = solve_riccati(truth);
        LinearPolicyValue deployed = evaluate_linear_policy(truth, rep.k_hat);
        double realized = weighted_quadratic_sup(
            Matrix(deployed.value - opt.value), deployed.offset - opt.offset, ell);
        ck.expect_le(realized, rep.bound, 1e-8, tag + "realized loss vs bound");

        LqrBoundReport rep_zero = lqr_performance_bound(truth, approx, ell, 0.0);
        ck.expect_le(rep.bound, rep_zero.bound, 1e-12 * (1.0 + rep_zero.bound),
                     tag + "auto shift vs zero shift");

        ck.expect_le((rep.d_star - rep.d_star.transpose()).cwiseAbs().maxCoeff(), 0.0, 1e-8,
                     tag + "d_star symmetry");
        ck.expect_le((rep.d_pihat - rep.d_pihat.transpose()).cwiseAbs().maxCoeff(), 0.0, 1e-8,
                     tag + "d_pihat symmetry");

        // The approximate Riccati solution is self-consistent: its own gain
        // evaluated in the approximate model reproduces it.
        RiccatiSolution hat = solve_riccati(approx);
        LinearPolicyValue replay = evaluate_linear_policy(approx, hat.gain);
        ck.expect_le((replay.value - hat.value).cwiseAbs().maxCoeff(), 0.0,
                     1e-7 * (1.0 + hat.value.cwiseAbs().maxCoeff()),
                     tag + "Riccati/Lyapunov consistency");
        ++ck.rep.instances;
    }
    return ck.rep;
}

}  // namespace mdpa
