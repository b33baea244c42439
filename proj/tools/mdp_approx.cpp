// mdp-approx: command-line front end for the model-approximation bound
// library. Subcommands: inventory (figure experiments), lqr (closed-form
// linear-quadratic bound), ce (certainty-equivalence bound on the
// discretized scalar system), random-suite (soundness property battery).
//
// Exit codes: 0 success, 2 when results were produced but none certified,
// 1 on errors.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "mdpa/bounds.hpp"
#include "mdpa/ce_system.hpp"
#include "mdpa/csv.hpp"
#include "mdpa/experiment.hpp"
#include "mdpa/lqr.hpp"
#include "mdpa/suite.hpp"
#include "mdpa/svg.hpp"

namespace {

using nlohmann::json;
using namespace mdpa;

struct GlobalArgs {
    std::string config_path;
    std::string out_dir = "out";
    bool out_given = false;
    bool emit_plots = false;
    bool no_oracle = false;
    std::optional<std::uint64_t> seed;
};

json load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        return json::parse(buf.str());
    } catch (const json::parse_error& e) {
        throw std::runtime_error("config parse error in " + path + ": " + e.what());
    }
}

void require_known_keys(const json& j, const std::string& section,
                        std::initializer_list<const char*> allowed) {
    if (!j.is_object())
        throw std::runtime_error("config section '" + section + "' must be an object");
    for (const auto& item : j.items()) {
        bool known = false;
        for (const char* key : allowed)
            if (item.key() == key) {
                known = true;
                break;
            }
        if (!known)
            throw std::runtime_error("config section '" + section + "': unknown field '" +
                                     item.key() + "'");
    }
}

InventoryParams parse_inventory_params(const json& j, const std::string& section,
                                       InventoryParams base) {
    require_known_keys(j, section,
                       {"s_max", "discount", "demand_n", "demand_q", "hold_cost", "short_cost",
                        "proc_cost"});
    base.s_max = j.value("s_max", base.s_max);
    base.discount = j.value("discount", base.discount);
    base.demand_n = j.value("demand_n", base.demand_n);
    base.demand_q = j.value("demand_q", base.demand_q);
    base.hold_cost = j.value("hold_cost", base.hold_cost);
    base.short_cost = j.value("short_cost", base.short_cost);
    base.proc_cost = j.value("proc_cost", base.proc_cost);
    return base;
}

AffineTransform parse_alpha(const json& j, const std::string& field) {
    if (!j.is_array() || j.size() != 2)
        throw std::runtime_error("config field '" + field + "' must be [scale, shift]");
    return AffineTransform{j[0].get<double>(), j[1].get<double>()};
}

FigureConfig parse_figure_config(const json& root, const GlobalArgs& args) {
    FigureConfig cfg;
    cfg.with_oracle = !args.no_oracle;
    if (!root.contains("inventory")) return cfg;
    const json& j = root.at("inventory");
    require_known_keys(j, "inventory",
                       {"true_model", "approx_model", "ell", "ell_family", "ell_model",
                        "alpha_base", "alpha_tuned", "tol"});
    if (j.contains("true_model"))
        cfg.true_params = parse_inventory_params(j.at("true_model"), "inventory.true_model",
                                                 cfg.true_params);
    if (j.contains("approx_model"))
        cfg.approx_params = parse_inventory_params(j.at("approx_model"),
                                                   "inventory.approx_model", cfg.approx_params);
    cfg.ell = j.value("ell", cfg.ell);
    if (j.contains("ell_family")) cfg.ell_family = j.at("ell_family").get<std::vector<double>>();
    if (j.contains("ell_model")) cfg.ell_model = j.at("ell_model").get<std::vector<double>>();
    if (j.contains("alpha_base")) cfg.alpha_base = parse_alpha(j.at("alpha_base"), "alpha_base");
    if (j.contains("alpha_tuned"))
        cfg.alpha_tuned = parse_alpha(j.at("alpha_tuned"), "alpha_tuned");
    cfg.solve.tol = j.value("tol", cfg.solve.tol);
    return cfg;
}

Matrix parse_matrix(const json& j, const std::string& field) {
    if (!j.is_array() || j.empty())
        throw std::runtime_error("config field '" + field + "' must be a 2-D array");
    const size_t rows = j.size();
    if (!j[0].is_array() || j[0].empty())
        throw std::runtime_error("config field '" + field + "' must be a 2-D array");
    const size_t cols = j[0].size();
    Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (size_t i = 0; i < rows; ++i) {
        if (!j[i].is_array() || j[i].size() != cols)
            throw std::runtime_error("config field '" + field + "' must be rectangular");
        for (size_t k = 0; k < cols; ++k) m(i, k) = j[i][k].get<double>();
    }
    return m;
}

LqrModel parse_lqr_model(const json& spec, const std::string& section, double discount) {
    // A model is given inline as an object or as a path to a JSON file
    // holding the same object.
    json j = spec;
    if (spec.is_string()) j = load_config(spec.get<std::string>());
    require_known_keys(j, section, {"a", "b", "q", "r", "noise_cov"});
    LqrModel m;
    m.a_mat = parse_matrix(j.at("a"), section + ".a");
    m.b_mat = parse_matrix(j.at("b"), section + ".b");
    m.q_mat = parse_matrix(j.at("q"), section + ".q");
    m.r_mat = parse_matrix(j.at("r"), section + ".r");
    if (j.contains("noise_cov"))
        m.noise_cov = parse_matrix(j.at("noise_cov"), section + ".noise_cov");
    else
        m.noise_cov = Matrix::Zero(m.a_mat.rows(), m.a_mat.rows());
    m.discount = discount;
    return m;
}

CeParams parse_ce_params(const json& root) {
    CeParams p;
    if (!root.contains("ce")) return p;
    const json& j = root.at("ce");
    require_known_keys(j, "ce",
                       {"grid_radius", "action_radius", "drift", "discount", "state_cost",
                        "action_cost", "noise_support", "noise_probs"});
    p.grid_radius = j.value("grid_radius", p.grid_radius);
    p.action_radius = j.value("action_radius", p.action_radius);
    p.drift = j.value("drift", p.drift);
    p.discount = j.value("discount", p.discount);
    p.state_cost = j.value("state_cost", p.state_cost);
    p.action_cost = j.value("action_cost", p.action_cost);
    if (j.contains("noise_support"))
        p.noise_support = j.at("noise_support").get<std::vector<int>>();
    if (j.contains("noise_probs"))
        p.noise_probs = j.at("noise_probs").get<std::vector<double>>();
    return p;
}

void print_kv(const std::string& key, const std::string& value) {
    std::cout << key << " = " << value << "\n";
}

void print_kv(const std::string& key, double value) { print_kv(key, format_double(value)); }

void print_report_summary(const std::string& name, const BoundReport& rep) {
    std::cout << name << ": rule = " << rep.rule << ", bound = " << format_double(rep.bound)
              << ", kappa = " << format_double(rep.kappa)
              << ", certified = " << (rep.certified ? 1 : 0);
    if (rep.realized) std::cout << ", realized = " << format_double(*rep.realized);
    std::cout << "\n";
    for (const std::string& note : rep.notes) std::cout << "  note: " << note << "\n";
}

int run_inventory(const GlobalArgs& args, const std::string& experiment) {
    json root = args.config_path.empty() ? json::object() : load_config(args.config_path);
    FigureConfig cfg = parse_figure_config(root, args);

    std::vector<std::string> names;
    if (experiment == "all")
        names = figure_experiment_names();
    else
        names.push_back(experiment);

    SolvedPair solved = solve_figure_pair(cfg);
    int n_certified = 0;
    for (const std::string& name : names) {
        ExperimentOutput out = run_figure_experiment(name, cfg, solved);
        n_certified += out.n_certified;
        std::cout << "experiment " << name << ": certified " << out.n_certified << "/"
                  << out.n_total << "\n";
        for (const NamedReport& nr : out.reports) print_report_summary("  " + nr.name, nr.report);
        for (const CsvTable& t : out.tables)
            std::cout << "  wrote " << write_csv(t, args.out_dir) << "\n";
        if (args.emit_plots)
            for (const auto& [stem, plot] : experiment_plots(out))
                std::cout << "  wrote " << write_svg(plot, args.out_dir, stem) << "\n";
    }
    return n_certified > 0 ? 0 : 2;
}

int run_lqr(const GlobalArgs& args) {
    LqrModel truth, approx;
    double ell = 1e-2;
    std::optional<double> alpha2;
    if (args.config_path.empty()) {
        // Default: a scalar pair whose approximation drops the noise — the
        // classical certainty-equivalent design, whose loss bound is zero.
        truth.a_mat = Matrix::Constant(1, 1, 0.9);
        truth.b_mat = Matrix::Constant(1, 1, 1.0);
        truth.q_mat = Matrix::Constant(1, 1, 1.0);
        truth.r_mat = Matrix::Constant(1, 1, 0.3);
        truth.noise_cov = Matrix::Constant(1, 1, 0.1);
        truth.discount = 0.9;
        approx = truth;
        approx.noise_cov = Matrix::Zero(1, 1);
    } else {
        json root = load_config(args.config_path);
        if (!root.contains("lqr")) throw std::runtime_error("config has no 'lqr' section");
        const json& j = root.at("lqr");
        require_known_keys(j, "lqr", {"discount", "ell", "alpha2", "true_model", "approx_model"});
        double discount = j.value("discount", 0.9);
        ell = j.value("ell", ell);
        if (j.contains("alpha2") && !j.at("alpha2").is_null())
            alpha2 = j.at("alpha2").get<double>();
        truth = parse_lqr_model(j.at("true_model"), "lqr.true_model", discount);
        approx = parse_lqr_model(j.at("approx_model"), "lqr.approx_model", discount);
    }

    LqrBoundReport rep = lqr_performance_bound(truth, approx, ell, alpha2);
    print_kv("rho_d_star", rep.rho_d_star);
    print_kv("rho_d_pihat", rep.rho_d_pihat);
    print_kv("d_sigma", rep.d_sigma);
    print_kv("alpha2", rep.alpha2);
    print_kv("kappa", rep.cert.kappa);
    print_kv("b_cov", rep.cert.b_cov);
    print_kv("b_gain", rep.cert.b_gain);
    print_kv("ell", ell);
    print_kv("certified", rep.certified ? "1" : "0");
    print_kv("bound", rep.bound);

    if (args.out_given) {
        CsvTable t;
        t.name = "lqr_bound";
        t.add_meta("ell", ell);
        t.add_meta("alpha2", rep.alpha2);
        t.header = {"rho_d_star", "rho_d_pihat", "d_sigma", "kappa", "certified", "bound"};
        t.rows.push_back({rep.rho_d_star, rep.rho_d_pihat, rep.d_sigma, rep.cert.kappa,
                          rep.certified ? 1.0 : 0.0, rep.bound});
        std::cout << "wrote " << write_csv(t, args.out_dir) << "\n";
    }
    return rep.certified ? 0 : 2;
}

int run_ce(const GlobalArgs& args) {
    json root = args.config_path.empty() ? json::object() : load_config(args.config_path);
    CeParams params = parse_ce_params(root);
    CeSystem system = build_ce_system(params);

    SolveOptions options;
    SolvedPair solved = solve_pair(system.pair, options, /*with_oracle=*/!args.no_oracle);
    const FiniteMdp& det = solved.pair.approx_model;
    std::vector<double> positions(det.labels().begin(), det.labels().end());
    WeightFn w = WeightFn::uniform(det.num_states());
    BoundReport rep = certainty_equivalence_bound(solved, w, /*kappa=*/1.0,
                                                  system.noise_mean_abs,
                                                  IpmKind::wasserstein(std::move(positions)));

    print_kv("noise_mean_abs", system.noise_mean_abs);
    for (const BoundTerm& term : rep.terms)
        if (term.name == "gauge") print_kv("lipschitz_gauge", term.value);
    print_kv("kappa", rep.kappa);
    print_kv("certified", rep.certified ? "1" : "0");
    print_kv("bound", rep.bound);
    if (rep.realized) print_kv("realized", *rep.realized);
    for (const std::string& note : rep.notes) std::cout << "note: " << note << "\n";

    if (args.out_given) {
        CsvTable t;
        t.name = "ce_bound";
        t.add_meta("noise_mean_abs", system.noise_mean_abs);
        t.header = {"noise_mean_abs", "kappa", "certified", "bound", "realized"};
        t.rows.push_back({system.noise_mean_abs, rep.kappa, rep.certified ? 1.0 : 0.0, rep.bound,
                          rep.realized ? *rep.realized : std::numeric_limits<double>::quiet_NaN()});
        std::cout << "wrote " << write_csv(t, args.out_dir) << "\n";
    }
    return rep.certified ? 0 : 2;
}

int run_suite(const GlobalArgs& args, int instances) {
    json root = args.config_path.empty() ? json::object() : load_config(args.config_path);
    SuiteConfig cfg;
    if (root.contains("random_suite")) {
        const json& j = root.at("random_suite");
        require_known_keys(j, "random_suite",
                           {"instances", "seed", "max_states", "max_actions", "duality_samples"});
        cfg.instances = j.value("instances", cfg.instances);
        cfg.seed = j.value("seed", cfg.seed);
        cfg.max_states = j.value("max_states", cfg.max_states);
        cfg.max_actions = j.value("max_actions", cfg.max_actions);
        cfg.duality_samples = j.value("duality_samples", cfg.duality_samples);
    }
    if (instances > 0) cfg.instances = instances;
    if (args.seed) cfg.seed = *args.seed;

    SuiteReport rep = run_random_suite(cfg);
    std::cout << "instances = " << rep.instances << "\n";
    std::cout << "checks = " << rep.checks << "\n";
    std::cout << "violations = " << rep.violations << "\n";
    for (const std::string& f : rep.failures) std::cout << "violation: " << f << "\n";
    std::cout << (rep.ok() ? "PASS" : "FAIL") << "\n";
    return rep.ok() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"certified performance-loss bounds for approximate MDP models"};
    app.require_subcommand(1);

    GlobalArgs args;
    std::uint64_t seed_value = 0;
    app.add_option("--config", args.config_path, "JSON config file");
    auto* out_opt = app.add_option("--out", args.out_dir, "output directory for CSV/SVG files");
    app.add_flag("--emit-plots", args.emit_plots, "also write SVG plots");
    app.add_flag("--no-oracle", args.no_oracle, "skip solving the true model's optimum");
    auto* seed_opt = app.add_option("--seed", seed_value, "seed for random-suite");

    std::string experiment = "fig_im_bound";
    CLI::App* inv = app.add_subcommand("inventory", "inventory figure experiments");
    inv->add_option("--experiment", experiment,
                    "fig_im_bound | fig_weight_family | fig_alpha | fig_model_stability | all");

    CLI::App* lqr = app.add_subcommand("lqr", "closed-form linear-quadratic bound");
    CLI::App* ce = app.add_subcommand("ce", "certainty-equivalence bound on the scalar system");

    int instances = 0;
    CLI::App* suite = app.add_subcommand("random-suite", "randomized soundness battery");
    suite->add_option("--instances", instances, "number of random instances");

    // Global flags are accepted both before and after the subcommand.
    for (CLI::App* sub : {inv, lqr, ce, suite}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }
    args.out_given = out_opt->count() > 0;
    if (seed_opt->count() > 0) args.seed = seed_value;

    try {
        if (inv->parsed()) return run_inventory(args, experiment);
        if (lqr->parsed()) return run_lqr(args);
        if (ce->parsed()) return run_ce(args);
        if (suite->parsed()) return run_suite(args, instances);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
