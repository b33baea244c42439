#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <map>

#include "mdpa/bounds.hpp"
#include "mdpa/ce_system.hpp"
#include "mdpa/inventory.hpp"
#include "mdpa/solve.hpp"
#include "oracles.hpp"

using namespace mdpa;

namespace {

int clip(int x, int lo, int hi) { return std::max(lo, std::min(hi, x)); }

// Dense next-state distribution computed straight from the narrative:
// next = clip(s + a - demand), demand ~ pmf.
std::map<int, double> row_ref(const InventoryParams& p, const std::vector<double>& pmf, int s,
                              int a) {
    std::map<int, double> out;
    for (int w = 0; w < static_cast<int>(pmf.size()); ++w)
        out[clip(s + a - w, -p.s_max, p.s_max)] += pmf[static_cast<size_t>(w)];
    return out;
}

}  // namespace

TEST_CASE("binomial probabilities match the multiplicative recurrence") {
    for (auto [n, q] : std::vector<std::pair<int, double>>{
             {10, 0.4}, {10, 0.5}, {1, 0.2}, {25, 0.93}, {6, 0.0}, {6, 1.0}}) {
        std::vector<double> lib = binomial_pmf(n, q);
        std::vector<double> ref = oracle::binomial_pmf_direct(n, q);
        REQUIRE(lib.size() == static_cast<size_t>(n) + 1);
        double sum = 0.0;
        for (size_t k = 0; k < lib.size(); ++k) {
            CHECK(lib[k] == doctest::Approx(ref[k]).epsilon(1e-12));
            sum += lib[k];
        }
        CHECK(sum == 1.0);  // exact: residual folded onto the mode
    }
    CHECK_THROWS_AS(binomial_pmf(-1, 0.4), std::invalid_argument);
    CHECK_THROWS_AS(binomial_pmf(5, 1.5), std::invalid_argument);
}

TEST_CASE("inventory model wires costs, labels, and demand shifts") {
    InventoryParams p;
    p.s_max = 6;
    p.demand_n = 4;
    p.demand_q = 0.3;
    FiniteMdp m = build_inventory(p);
    CHECK(m.num_states() == 13);
    CHECK(m.num_actions() == 7);
    CHECK(m.discount() == p.discount);
    REQUIRE(m.has_labels());
    CHECK(m.label(0) == -6);
    CHECK(m.label(12) == 6);

    std::vector<double> pmf = binomial_pmf(p.demand_n, p.demand_q);
    for (int s_label = -6; s_label <= 6; ++s_label) {
        int s = s_label + 6;
        for (int a = 0; a <= 6; ++a) {
            CHECK(m.cost(s, a) ==
                  doctest::Approx(p.proc_cost * a + p.hold_cost * std::max(s_label, 0) +
                                  p.short_cost * std::max(-s_label, 0)));
            std::map<int, double> ref = row_ref(p, pmf, s_label, a);
            auto row = m.row(s, a);
            REQUIRE(row.size() == ref.size());
            double sum = 0.0;
            for (const auto& tr : row) {
                int lbl = tr.next - 6;
                REQUIRE(ref.count(lbl) == 1);
                CHECK(tr.prob == doctest::Approx(ref[lbl]).epsilon(1e-12));
                sum += tr.prob;
            }
            CHECK(sum == doctest::Approx(1.0).epsilon(1e-15));
        }
    }
}

TEST_CASE("boundary accumulation keeps rows exact at the clip edges") {
    InventoryParams p;
    p.s_max = 3;
    p.demand_n = 10;
    p.demand_q = 0.5;
    FiniteMdp m = build_inventory(p);
    // From the lowest stock with no order, every demand outcome clips to the
    // bottom state.
    auto row = m.row(0, 0);
    REQUIRE(row.size() == 1);
    CHECK(row[0].next == 0);
    CHECK(row[0].prob == 1.0);
}

TEST_CASE("small-scale optimal policy has base-stock structure") {
    // Shortage must out-price procurement for ordering to engage at this
    // scale: the stock boundary caps the shortage penalty at short * s_max
    // per period, so with cheap shortages never ordering wins outright.
    InventoryParams p;
    p.s_max = 15;
    p.proc_cost = 1.0;
    p.hold_cost = 4.0;
    p.short_cost = 10.0;
    SolveOptions opt;
    opt.tol = 1e-10;
    SolveResult res = value_iteration(build_inventory(p), opt);
    // Read the base-stock level off the zero-stock state, then check the
    // order-up-to form everywhere (capped by the largest order).
    int level = res.greedy.action(p.s_max);  // state labelled 0
    REQUIRE(level > 0);
    for (int s_label = -p.s_max; s_label <= p.s_max; ++s_label) {
        int expected = clip(level - s_label, 0, p.s_max);
        CHECK(res.greedy.action(s_label + p.s_max) == expected);
    }
}

TEST_CASE("cost-shaped weights follow the holding and shortage slopes") {
    InventoryParams shape;
    shape.s_max = 4;
    shape.hold_cost = 3.8;
    shape.short_cost = 2.0;
    WeightFn w = build_weight(shape, 0.5, 9);
    CHECK(w[4] == 1.0);                               // label 0
    CHECK(w[5] == doctest::Approx(1.0 + 0.5 * 3.8));  // label +1: holding slope
    CHECK(w[3] == doctest::Approx(1.0 + 0.5 * 2.0));  // label -1: shortage slope
    CHECK(w[8] == doctest::Approx(1.0 + 0.5 * 3.8 * 4));
    CHECK(w[0] == doctest::Approx(1.0 + 0.5 * 2.0 * 4));

    CHECK(build_weight(shape, 0.0, 9).is_uniform());
    CHECK_THROWS_AS(build_weight(shape, -0.1, 9), std::invalid_argument);
    CHECK_THROWS_AS(build_weight(shape, 0.5, 8), std::invalid_argument);

    WeightFamilySpec spec{{0.0, 0.1, 0.2}, shape};
    std::vector<WeightFn> family = build_weight_family(spec, 9);
    REQUIRE(family.size() == 3);
    CHECK(family[0].is_uniform());
    CHECK(family[2][8] == doctest::Approx(1.0 + 0.2 * 3.8 * 4));
}

TEST_CASE("additive-noise system pairs a stochastic and a noise-free model") {
    CeParams p;
    p.grid_radius = 6;
    p.action_radius = 1;
    CeSystem sys = build_ce_system(p);
    const FiniteMdp& stoch = sys.pair.true_model;
    const FiniteMdp& det = sys.pair.approx_model;
    CHECK(stoch.num_states() == 13);
    CHECK(stoch.num_actions() == 3);
    CHECK(sys.noise_mean_abs == doctest::Approx(2.0 / 3.0));

    // Shared quadratic cost.
    for (int s = 0; s < 13; ++s)
        for (int a = 0; a < 3; ++a) {
            int s_label = s - 6, u = a - 1;
            CHECK(stoch.cost(s, a) ==
                  doctest::Approx(p.state_cost * s_label * s_label + p.action_cost * u * u));
            CHECK(det.cost(s, a) == stoch.cost(s, a));
        }

    // Deterministic rows are point masses at clip(round(drift s) + u).
    for (int s = 0; s < 13; ++s)
        for (int a = 0; a < 3; ++a) {
            auto row = det.row(s, a);
            REQUIRE(row.size() == 1);
            int s_label = s - 6, u = a - 1;
            int target = clip(static_cast<int>(std::lround(p.drift * s_label)) + u, -6, 6) + 6;
            CHECK(row[0].next == target);
            CHECK(row[0].prob == 1.0);
        }

    // Stochastic rows spread the deterministic target by the noise pmf.
    for (int s : {0, 3, 6, 9, 12})
        for (int a = 0; a < 3; ++a) {
            auto row = stoch.row(s, a);
            double sum = 0.0;
            for (const auto& tr : row) sum += tr.prob;
            CHECK(sum == doctest::Approx(1.0).epsilon(1e-15));
            int s_label = s - 6, u = a - 1;
            int base = static_cast<int>(std::lround(p.drift * s_label)) + u;
            std::map<int, double> ref;
            for (size_t k = 0; k < p.noise_support.size(); ++k)
                ref[clip(base + p.noise_support[k], -6, 6) + 6] += p.noise_probs[k];
            REQUIRE(row.size() == ref.size());
            for (const auto& tr : row) CHECK(tr.prob == doctest::Approx(ref[tr.next]).epsilon(1e-14));
        }

    // Noise with a nonzero mean is rejected.
    CeParams biased = p;
    biased.noise_probs = {0.5, 0.25, 0.25};
    CHECK_THROWS_AS(build_ce_system(biased), std::invalid_argument);
}

TEST_CASE("certainty-equivalence bound is sound and linear in the noise size") {
    CeParams p;
    p.grid_radius = 8;
    CeSystem sys = build_ce_system(p);
    SolveOptions opt;
    opt.tol = 1e-10;
    SolvedPair solved = solve_pair(sys.pair, opt);
    WeightFn w = WeightFn::uniform(sys.pair.num_states());
    std::vector<double> pos(sys.pair.approx_model.labels().begin(),
                            sys.pair.approx_model.labels().end());
    BoundReport rep = certainty_equivalence_bound(solved, w, 1.0, sys.noise_mean_abs,
                                                  IpmKind::wasserstein(pos));
    CHECK(rep.certified);
    REQUIRE(rep.realized.has_value());
    CHECK(*rep.realized <= rep.bound + 1e-8);

    // Doubling the noise support doubles E|N| and exactly doubles the bound:
    // the noise-free design model, and with it the Lipschitz gauge, kappa,
    // and discount, are unchanged.
    CeParams wide = p;
    wide.noise_support = {-2, 0, 2};
    CeSystem sys2 = build_ce_system(wide);
    SolvedPair solved2 = solve_pair(sys2.pair, opt);
    CHECK(sys2.noise_mean_abs == doctest::Approx(2 * sys.noise_mean_abs));
    BoundReport rep2 = certainty_equivalence_bound(solved2, w, 1.0, sys2.noise_mean_abs,
                                                   IpmKind::wasserstein(pos));
    CHECK(rep2.bound == doctest::Approx(2 * rep.bound).epsilon(1e-12));
    CHECK(*rep2.realized <= rep2.bound + 1e-8);
}
