#pragma once

#include <string>
#include <vector>

#include "mdpa/bounds.hpp"
#include "mdpa/csv.hpp"
#include "mdpa/inventory.hpp"
#include "mdpa/svg.hpp"

namespace mdpa {

/// Parameters of the four figure experiments on the inventory pair. The
/// defaults reproduce the reference desk-scale runs: true/approximate models
/// differing in demand probability and holding cost, cost-shaped weights,
/// and the documented ell/alpha grids.
struct FigureConfig {
    InventoryParams true_params{};
    InventoryParams approx_params{500, 0.75, 10, 0.5, 3.8, 2.0, 5.0};
    SolveOptions solve{};
    bool with_oracle = true;
    /// Weight coefficient for the single-weight experiments.
    double ell = 1.5e-2;
    /// Per-policy-certificate weight grid.
    std::vector<double> ell_family{0.0, 0.5e-2, 1.0e-2, 1.5e-2, 2.0e-2, 2.5e-2};
    /// Model-level-certificate weight grid; brackets the largest ell whose
    /// model certificate still passes the gate.
    std::vector<double> ell_model{0.0,    0.25e-4, 0.5e-4,  0.75e-4, 1.0e-4,
                                  1.25e-4, 1.5e-4,  1.75e-4, 2.0e-4};
    AffineTransform alpha_base{1.0, 0.0};
    AffineTransform alpha_tuned{0.98, 0.8};
};

struct NamedReport {
    std::string name;
    BoundReport report;
};

struct ExperimentOutput {
    std::string experiment;
    std::vector<CsvTable> tables;
    std::vector<NamedReport> reports;
    int n_certified = 0;
    int n_total = 0;

    /// 0 when at least one configuration certified, 2 when none did.
    int exit_code() const { return n_certified > 0 ? 0 : 2; }
};

/// The four experiment names: fig_im_bound, fig_weight_family, fig_alpha,
/// fig_model_stability.
const std::vector<std::string>& figure_experiment_names();

/// Builds and solves the configured inventory pair.
SolvedPair solve_figure_pair(const FigureConfig& cfg);

/// Runs one figure experiment against an already-solved pair (reusable
/// across experiments) or end to end. Unknown names throw.
ExperimentOutput run_figure_experiment(const std::string& name, const FigureConfig& cfg,
                                       const SolvedPair& solved);
ExperimentOutput run_figure_experiment(const std::string& name, const FigureConfig& cfg);

/// Line plots for the experiment's per-state tables, keyed by file stem: one
/// full-range plot per table plus a zoomed companion (stem suffix "_zoom")
/// over the window |s| <= 10.
std::vector<std::pair<std::string, LinePlot>> experiment_plots(const ExperimentOutput& out);

}  // namespace mdpa
