#include "mdpa/certification.hpp"

#include <algorithm>
#include <cmath>

#include "mdpa/bellman.hpp"

namespace mdpa {

namespace {

WitnessCheck check_policy(const FiniteMdp* in_true, const FiniteMdp* in_approx, Policy witness,
                          const WeightFn& w, double kappa, bool gate_ok) {
    WitnessCheck out;
    bool ok = gate_ok;
    if (in_true) {
        out.kappa_true = kappa_policy(*in_true, witness, w).kappa;
        ok = ok && out.kappa_true <= kappa;
    }
    if (in_approx) {
        out.kappa_approx = kappa_policy(*in_approx, witness, w).kappa;
        ok = ok && out.kappa_approx <= kappa;
    }
    out.status = ok ? CheckStatus::certified : CheckStatus::not_certified;
    out.witness = std::move(witness);
    return out;
}

}  // namespace

AssumptionReport check_assumptions(const SolvedPair& solved, const WeightFn& w, double kappa,
                                   AffineTransform t) {
    require_valid(t);
    const FiniteMdp& m = solved.pair.true_model;
    const FiniteMdp& m_hat = solved.pair.approx_model;

    AssumptionReport report;
    report.kappa = kappa;
    report.gate_ok = cert_gate_ok(m.discount(), kappa);

    report.approx_greedy = check_policy(&m, &m_hat, solved.approx_policy, w, kappa, report.gate_ok);

    Policy cross_true = Policy::deterministic(bellman_optimal(m, solved.approx_value, t).greedy);
    report.cross_greedy_true = check_policy(&m, nullptr, std::move(cross_true), w, kappa,
                                            report.gate_ok);

    if (solved.has_oracle()) {
        report.true_greedy = check_policy(&m, nullptr, *solved.true_policy, w, kappa,
                                          report.gate_ok);
        ValueVec scaled = *solved.true_value;
        for (double& x : scaled) x *= t.scale;
        Policy cross_approx = Policy::deterministic(bellman_optimal(m_hat, scaled).greedy);
        report.cross_greedy_approx = check_policy(nullptr, &m_hat, std::move(cross_approx), w,
                                                  kappa, report.gate_ok);
    }

    {
        WitnessCheck all_actions;
        all_actions.kappa_true = 0.0;
        all_actions.kappa_approx = 0.0;
        for (int a = 0; a < m.num_actions(); ++a) {
            Policy pi_a = Policy::open_loop(m.num_states(), a);
            all_actions.kappa_true =
                std::max(all_actions.kappa_true, kappa_policy(m, pi_a, w).kappa);
            all_actions.kappa_approx =
                std::max(all_actions.kappa_approx, kappa_policy(m_hat, pi_a, w).kappa);
        }
        bool ok = report.gate_ok && all_actions.kappa_true <= kappa &&
                  all_actions.kappa_approx <= kappa;
        all_actions.status = ok ? CheckStatus::certified : CheckStatus::not_certified;
        report.open_loop = std::move(all_actions);
    }

    double worst = std::max({report.approx_greedy.kappa_true, report.approx_greedy.kappa_approx,
                             report.cross_greedy_true.kappa_true});
    if (solved.has_oracle()) worst = std::max(worst, report.true_greedy.kappa_true);
    report.max_witness_kappa = worst;
    return report;
}

}  // namespace mdpa
