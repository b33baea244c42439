#include "mdpa/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace mdpa {
namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

std::string compact(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", x);
    return buf;
}

std::string params_string(const InventoryParams& p) {
    return "(" + std::to_string(p.s_max) + ", " + compact(p.discount) + ", " +
           std::to_string(p.demand_n) + ", " + compact(p.demand_q) + ", " +
           compact(p.hold_cost) + ", " + compact(p.short_cost) + ", " + compact(p.proc_cost) +
           ")";
}

void add_common_meta(CsvTable& t, const std::string& experiment, const FigureConfig& cfg) {
    t.add_meta("experiment", experiment);
    t.add_meta("true_model", params_string(cfg.true_params));
    t.add_meta("approx_model", params_string(cfg.approx_params));
    t.add_meta("discount", compact(cfg.true_params.discount));
    t.add_meta("solver_tol", compact(cfg.solve.tol));
    t.add_meta("oracle", cfg.with_oracle ? "1" : "0");
}

/// Per-state envelope table rows: s, deployed value, one lower bound per
/// configured report column, optionally the oracle optimum last.
struct RowBuilder {
    const SolvedPair& solved;
    bool with_oracle;

    std::vector<double> row(int s, std::initializer_list<double> bounds_cols) const {
        std::vector<double> r;
        r.reserve(2 + bounds_cols.size() + (with_oracle ? 1 : 0));
        r.push_back(solved.pair.true_model.label(s));
        r.push_back(solved.deployed_value[s]);
        for (double v : bounds_cols) r.push_back(v);
        if (with_oracle) r.push_back((*solved.true_value)[s]);
        return r;
    }
};

double lower_at(const SolvedPair& solved, const BoundReport& rep, int s) {
    return solved.deployed_value[s] - rep.bound * rep.weight[s];
}

ExperimentOutput fig_im_bound(const FigureConfig& cfg, const SolvedPair& solved) {
    const int n = solved.pair.num_states();
    WeightFn w_weighted = build_weight(cfg.approx_params, cfg.ell, n);
    WeightFn w_sup = WeightFn::uniform(n);
    double kappa_weighted = witness_kappa(solved, w_weighted, BoundVariant::opt_at_approx);
    double kappa_sup = witness_kappa(solved, w_sup, BoundVariant::opt_at_approx);
    BoundReport rep_weighted =
        performance_loss_bound(solved, w_weighted, kappa_weighted, BoundVariant::opt_at_approx);
    BoundReport rep_sup =
        performance_loss_bound(solved, w_sup, kappa_sup, BoundVariant::opt_at_approx);

    ExperimentOutput out;
    out.experiment = "fig_im_bound";
    CsvTable t;
    t.name = "fig_im_bound";
    add_common_meta(t, out.experiment, cfg);
    t.add_meta("ell", compact(cfg.ell));
    t.add_meta("kappa_weighted", kappa_weighted);
    t.add_meta("kappa_sup", kappa_sup);
    t.add_meta("bound_weighted", rep_weighted.bound);
    t.add_meta("bound_sup", rep_sup.bound);
    t.add_meta("certified_weighted", rep_weighted.certified ? "1" : "0");
    t.add_meta("certified_sup", rep_sup.certified ? "1" : "0");
    t.header = {"s", "V_hat_pi", "lower_weighted", "lower_sup"};
    if (cfg.with_oracle) t.header.push_back("V_star");
    RowBuilder rb{solved, cfg.with_oracle};
    for (int s = 0; s < n; ++s)
        t.rows.push_back(rb.row(s, {lower_at(solved, rep_weighted, s), lower_at(solved, rep_sup, s)}));
    out.tables.push_back(std::move(t));
    out.reports.push_back({"weighted", std::move(rep_weighted)});
    out.reports.push_back({"sup", std::move(rep_sup)});
    out.n_total = 2;
    for (const NamedReport& r : out.reports) out.n_certified += r.report.certified ? 1 : 0;
    return out;
}

/// Shared body of the two weight-grid experiments; they differ only in the
/// grid and in how the certificate kappa of each member is obtained.
template <typename KappaFn>
ExperimentOutput weight_grid_experiment(const std::string& experiment, const FigureConfig& cfg,
                                        const SolvedPair& solved,
                                        const std::vector<double>& ells, KappaFn member_kappa) {
    if (ells.empty()) throw std::invalid_argument(experiment + ": ell grid must not be empty");
    const int n = solved.pair.num_states();

    std::vector<WeightedMember> members;
    members.reserve(ells.size());
    for (double ell : ells) {
        WeightFn w = build_weight(cfg.approx_params, ell, n);
        double kappa = member_kappa(w);
        members.push_back({std::move(w), kappa});
    }
    EnvelopeSweep sweep =
        best_envelope_over_weights(solved, members, BoundVariant::opt_at_approx);

    ExperimentOutput out;
    out.experiment = experiment;
    RowBuilder rb{solved, cfg.with_oracle};
    for (size_t i = 0; i < ells.size(); ++i) {
        const BoundReport& rep = sweep.reports[i];
        CsvTable t;
        t.name = experiment + "_w" + std::to_string(i);
        add_common_meta(t, experiment, cfg);
        t.add_meta("ell", compact(ells[i]));
        t.add_meta("kappa", members[i].kappa);
        t.add_meta("gate", cfg.true_params.discount * members[i].kappa);
        t.add_meta("bound", rep.bound);
        t.add_meta("certified", rep.certified ? "1" : "0");
        t.header = {"s", "V_hat_pi", "lower", "certified"};
        if (cfg.with_oracle) t.header.push_back("V_star");
        for (int s = 0; s < n; ++s)
            t.rows.push_back(rb.row(s, {lower_at(solved, rep, s), rep.certified ? 1.0 : 0.0}));
        out.tables.push_back(std::move(t));
        out.reports.push_back({"ell=" + compact(ells[i]), sweep.reports[i]});
    }

    CsvTable env;
    env.name = experiment + "_envelope";
    add_common_meta(env, experiment, cfg);
    env.add_meta("n_members", static_cast<double>(ells.size()));
    env.add_meta("n_certified",
                 static_cast<double>(ells.size() - sweep.skipped.size()));
    env.header = {"s", "V_hat_pi", "lower_envelope", "argmin_ell"};
    if (cfg.with_oracle) env.header.push_back("V_star");
    for (int s = 0; s < n; ++s) {
        int m = sweep.argmin_member[s];
        env.rows.push_back(rb.row(s, {sweep.env.lower[s], m >= 0 ? ells[m] : kNan}));
    }
    out.tables.push_back(std::move(env));

    out.n_total = static_cast<int>(ells.size());
    out.n_certified = static_cast<int>(ells.size() - sweep.skipped.size());
    return out;
}

ExperimentOutput fig_weight_family(const FigureConfig& cfg, const SolvedPair& solved) {
    return weight_grid_experiment("fig_weight_family", cfg, solved, cfg.ell_family,
                                  [&](const WeightFn& w) {
                                      return witness_kappa(solved, w,
                                                           BoundVariant::opt_at_approx);
                                  });
}

ExperimentOutput fig_model_stability(const FigureConfig& cfg, const SolvedPair& solved) {
    return weight_grid_experiment(
        "fig_model_stability", cfg, solved, cfg.ell_model, [&](const WeightFn& w) {
            return std::max(kappa_model(solved.pair.true_model, w).kappa,
                            kappa_model(solved.pair.approx_model, w).kappa);
        });
}

ExperimentOutput fig_alpha(const FigureConfig& cfg, const SolvedPair& solved) {
    const int n = solved.pair.num_states();
    WeightFn w = build_weight(cfg.approx_params, cfg.ell, n);
    double kappa_base = witness_kappa(solved, w, BoundVariant::opt_at_approx, cfg.alpha_base);
    double kappa_tuned = witness_kappa(solved, w, BoundVariant::opt_at_approx, cfg.alpha_tuned);
    BoundReport rep_base = performance_loss_bound(solved, w, kappa_base,
                                                  BoundVariant::opt_at_approx, cfg.alpha_base);
    BoundReport rep_tuned = performance_loss_bound(solved, w, kappa_tuned,
                                                   BoundVariant::opt_at_approx, cfg.alpha_tuned);

    ExperimentOutput out;
    out.experiment = "fig_alpha";
    CsvTable t;
    t.name = "fig_alpha";
    add_common_meta(t, out.experiment, cfg);
    t.add_meta("ell", compact(cfg.ell));
    t.add_meta("alpha_base", "(" + compact(cfg.alpha_base.scale) + ", " +
                                 compact(cfg.alpha_base.shift) + ")");
    t.add_meta("alpha_tuned", "(" + compact(cfg.alpha_tuned.scale) + ", " +
                                  compact(cfg.alpha_tuned.shift) + ")");
    t.add_meta("kappa_base", kappa_base);
    t.add_meta("kappa_tuned", kappa_tuned);
    t.add_meta("bound_base", rep_base.bound);
    t.add_meta("bound_tuned", rep_tuned.bound);
    t.add_meta("certified_base", rep_base.certified ? "1" : "0");
    t.add_meta("certified_tuned", rep_tuned.certified ? "1" : "0");
    t.header = {"s", "V_hat_pi", "lower_base_alpha", "lower_tuned_alpha"};
    if (cfg.with_oracle) t.header.push_back("V_star");
    RowBuilder rb{solved, cfg.with_oracle};
    for (int s = 0; s < n; ++s)
        t.rows.push_back(rb.row(s, {lower_at(solved, rep_base, s), lower_at(solved, rep_tuned, s)}));
    out.tables.push_back(std::move(t));
    out.reports.push_back({"alpha_base", std::move(rep_base)});
    out.reports.push_back({"alpha_tuned", std::move(rep_tuned)});
    out.n_total = 2;
    for (const NamedReport& r : out.reports) out.n_certified += r.report.certified ? 1 : 0;
    return out;
}

}  // namespace

const std::vector<std::string>& figure_experiment_names() {
    static const std::vector<std::string> names = {"fig_im_bound", "fig_weight_family",
                                                   "fig_alpha", "fig_model_stability"};
    return names;
}

SolvedPair solve_figure_pair(const FigureConfig& cfg) {
    ModelPair pair(build_inventory(cfg.true_params), build_inventory(cfg.approx_params));
    return solve_pair(std::move(pair), cfg.solve, cfg.with_oracle);
}

ExperimentOutput run_figure_experiment(const std::string& name, const FigureConfig& cfg,
                                       const SolvedPair& solved) {
    if (name == "fig_im_bound") return fig_im_bound(cfg, solved);
    if (name == "fig_weight_family") return fig_weight_family(cfg, solved);
    if (name == "fig_alpha") return fig_alpha(cfg, solved);
    if (name == "fig_model_stability") return fig_model_stability(cfg, solved);
    throw std::invalid_argument("unknown experiment: " + name);
}

ExperimentOutput run_figure_experiment(const std::string& name, const FigureConfig& cfg) {
    return run_figure_experiment(name, cfg, solve_figure_pair(cfg));
}

std::vector<std::pair<std::string, LinePlot>> experiment_plots(const ExperimentOutput& out) {
    std::vector<std::pair<std::string, LinePlot>> plots;
    for (const CsvTable& t : out.tables) {
        if (t.header.empty() || t.header[0] != "s") continue;
        std::vector<size_t> cols;
        for (size_t c = 1; c < t.header.size(); ++c)
            if (t.header[c] != "certified" && t.header[c] != "argmin_ell") cols.push_back(c);

        LinePlot full;
        full.title = t.name;
        full.x_label = "inventory level s";
        full.y_label = "value";
        LinePlot zoom = full;
        zoom.title = t.name + " (|s| <= 10)";
        for (size_t c : cols) {
            PlotSeries sf{t.header[c], {}, {}};
            PlotSeries sz = sf;
            for (const auto& row : t.rows) {
                sf.x.push_back(row[0]);
                sf.y.push_back(row[c]);
                if (std::abs(row[0]) <= 10.0) {
                    sz.x.push_back(row[0]);
                    sz.y.push_back(row[c]);
                }
            }
            full.series.push_back(std::move(sf));
            zoom.series.push_back(std::move(sz));
        }
        plots.emplace_back(t.name, std::move(full));
        plots.emplace_back(t.name + "_zoom", std::move(zoom));
    }
    return plots;
}

}  // namespace mdpa
