#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "ctsid/estimator.hpp"
#include "ctsid/lti.hpp"
#include "ctsid/signals.hpp"

namespace ctsid {

enum class EstimatorKind { SRIVC, SRIVC_C };

std::string to_string(EstimatorKind kind);

/// One experimental condition: a sample count plus a sampling-grid recipe.
struct Condition {
    std::string label;
    int N = 0;
    std::variant<SamplingGrid::Regular, SamplingGrid::IrregularUniform> grid;
    double value = 0.0;  ///< the swept quantity (N, h, or h_hb), for plot output
};

struct ExperimentSpec {
    TransferFunction system;
    Multisine input;
    double noise_variance = 0.0;
    std::vector<Condition> conditions;
    int runs = 1;
    std::uint64_t master_seed = 0;
    std::vector<EstimatorKind> estimators;
    ModelOrder order;
    EstimatorConfig config;
    double t1 = 0.0;
};

struct RunRecord {
    int condition = 0;
    int run = 0;
    EstimatorKind estimator = EstimatorKind::SRIVC;
    bool errored = false;
    bool converged = false;
    int iterations = 0;
    Eigen::VectorXd theta;
};

struct CellSummary {
    EstimatorKind estimator = EstimatorKind::SRIVC;
    std::string condition;
    double condition_value = 0.0;
    std::vector<double> truth;
    std::vector<double> mean;
    std::vector<double> mse;   ///< vs the true value, 1/R normalization
    std::vector<double> stdev;  ///< sample standard deviation (R-1)
    int run_count = 0;         ///< runs included in the statistics
    int divergence_count = 0;  ///< errored runs, excluded
};

struct MonteCarloSummary {
    ModelOrder order;
    std::vector<CellSummary> cells;
    std::vector<RunRecord> runs;  ///< per-run raw results, deterministic order

    /// a1..an then b0..bm
    std::string param_name(std::size_t p) const;
};

/// Runs conditions x runs x estimators; per-run seeds derive from
/// (master_seed, condition, run) so any parallelism degree gives identical
/// output. Errored runs are excluded from statistics and counted;
/// non-converged runs are included and flagged.
MonteCarloSummary run_experiment(const ExperimentSpec& spec, int jobs = 0);

ExperimentSpec preset_fig1_fig2();
ExperimentSpec preset_table1();
ExperimentSpec preset_fig3();

/// The benchmark plant 1.25 / (0.25 p^2 + 0.7 p + 1) and its
/// three-sine excitation, shared by all presets.
TransferFunction benchmark_system();
Multisine benchmark_input();

void export_summary(const MonteCarloSummary& summary, const std::string& path);
void export_per_run(const MonteCarloSummary& summary, const std::string& path);
/// Plot-ready table: condition_value,estimator,param,mean,mse,std.
void export_plot_table(const MonteCarloSummary& summary, const std::string& path);

/// Human-readable mean/MSE table, one block per condition.
std::string format_summary_table(const MonteCarloSummary& summary);

}  // namespace ctsid
