// Command-line front end: dataset generation, single estimations, experiment
// presets, and diagnostics sweeps.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ctsid/diagnostics.hpp"
#include "ctsid/errors.hpp"
#include "ctsid/estimator.hpp"
#include "ctsid/harness.hpp"
#include "ctsid/io.hpp"
#include "ctsid/signals.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitNotConverged = 3;
constexpr int kExitNumerical = 4;
constexpr int kExitDiagnostic = 5;

std::vector<double> parse_double_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string field;
    while (std::getline(ss, field, ',')) out.push_back(std::stod(field));
    return out;
}

ctsid::Hold parse_hold(const std::string& s) {
    if (s == "zoh") return ctsid::Hold::ZOH;
    if (s == "foh") return ctsid::Hold::FOH;
    throw CLI::ValidationError("hold must be zoh or foh");
}

struct GenerateOpts {
    int n = 2000;
    double h = 0.3;
    double h_lb = 0.0, h_hb = 0.0;
    double t1 = 0.0;
    std::uint64_t seed = 1;
    double variance = 0.1;
    std::string num = "1.25", den = "1,0.7,0.25";
    std::string input_file;
    std::string out, input_out;
};

int cmd_generate(const GenerateOpts& o) {
    const ctsid::TransferFunction system(ctsid::Polynomial(parse_double_list(o.num)),
                                         ctsid::Polynomial(parse_double_list(o.den)));
    const ctsid::Multisine input = o.input_file.empty()
                                       ? ctsid::benchmark_input()
                                       : ctsid::read_multisine(o.input_file);
    ctsid::SamplingGrid grid;
    if (o.h_lb > 0.0) {
        grid = ctsid::generate_grid(
            ctsid::SamplingGrid::IrregularUniform{o.h_lb, o.h_hb, o.seed ^ 0x67726964ULL},
            o.n, o.t1);
    } else {
        grid = ctsid::generate_grid(ctsid::SamplingGrid::Regular{o.h}, o.n, o.t1);
    }
    const ctsid::Dataset ds =
        ctsid::generate_dataset(system, input, grid, ctsid::NoiseModel{o.variance, o.seed});
    if (ds.resonant_grid)
        std::cerr << "warning: sampling grid is near-resonant for the input frequencies\n";
    ctsid::write_dataset_csv(o.out, ds.u, ds.y);
    if (!o.input_out.empty()) ctsid::write_multisine(o.input_out, ds.input);
    std::cout << "wrote " << ds.y.size() << " samples to " << o.out << " (seed " << o.seed
              << ")\n";
    return kExitOk;
}

struct EstimateOpts {
    std::string data, input_file, report;
    std::string estimator = "srivc-c";
    int n = 2, m = 0;
    double epsilon = 1e-4;
    int max_iter = 50;
    std::string input_hold = "foh", output_hold = "foh";
    double cutoff = 0.0;
    double condition_limit = 1e12;
};

int cmd_estimate(const EstimateOpts& o) {
    auto [u, y] = ctsid::read_dataset_csv(o.data);
    ctsid::ModelOrder order{o.n, o.m};
    ctsid::EstimatorConfig cfg;
    cfg.epsilon = o.epsilon;
    cfg.max_iter = o.max_iter;
    cfg.input_hold = parse_hold(o.input_hold);
    cfg.output_hold = parse_hold(o.output_hold);
    cfg.condition_limit = o.condition_limit;

    ctsid::Multisine input;
    const bool have_input = !o.input_file.empty();
    if (have_input) input = ctsid::read_multisine(o.input_file);
    if (o.estimator == "srivc-c" && !have_input)
        throw CLI::ValidationError("srivc-c requires --input (the continuous-time input)");

    double cutoff = o.cutoff;
    if (cutoff <= 0.0) {
        if (have_input)
            for (const auto& c : input.components) cutoff = std::max(cutoff, c.omega);
        if (cutoff <= 0.0) cutoff = ctsid::default_cutoff(y);
    }

    try {
        const ctsid::ThetaVector theta1 = ctsid::initialize(u, y, order, cutoff, cfg);
        const ctsid::EstimationResult res =
            o.estimator == "srivc" ? ctsid::srivc(u, y, order, theta1, cfg)
                                   : ctsid::srivc_c(input, y, order, theta1, cfg);
        std::cout << "theta =";
        for (int p = 0; p < res.theta.packed.size(); ++p)
            std::cout << ' ' << res.theta.packed(p);
        std::cout << "\nconverged = " << (res.converged ? "yes" : "no")
                  << "\niterations = " << res.iterations.size() << '\n';
        if (!o.report.empty()) ctsid::write_report(o.report, res, o.estimator);
        return res.converged ? kExitOk : kExitNotConverged;
    } catch (const ctsid::NearSingularNormalMatrix& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const ctsid::SingularRegression& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    }
}

struct ReproduceOpts {
    std::string preset;
    int runs = -1;
    std::string n_list;
    std::uint64_t seed = 0;
    int jobs = 0;
    std::string out_dir = ".";
    double epsilon = 1e-4;
    int max_iter = 50;
};

int cmd_reproduce(const ReproduceOpts& o) {
    ctsid::ExperimentSpec spec = o.preset == "table1" ? ctsid::preset_table1()
                                 : o.preset == "fig3" ? ctsid::preset_fig3()
                                                      : ctsid::preset_fig1_fig2();
    if (o.runs > 0) spec.runs = o.runs;
    spec.master_seed = o.seed;
    spec.config.epsilon = o.epsilon;
    spec.config.max_iter = o.max_iter;
    if (!o.n_list.empty()) {
        std::vector<ctsid::Condition> conds;
        for (double nv : parse_double_list(o.n_list)) {
            const int N = static_cast<int>(nv);
            conds.push_back({"N=" + std::to_string(N), N,
                             ctsid::SamplingGrid::Regular{0.3}, static_cast<double>(N)});
        }
        spec.conditions = std::move(conds);
    }

    const ctsid::MonteCarloSummary summary = ctsid::run_experiment(spec, o.jobs);
    std::filesystem::create_directories(o.out_dir);
    const std::string prefix = o.out_dir + "/" + o.preset + "_";
    ctsid::export_summary(summary, prefix + "summary.csv");
    ctsid::export_per_run(summary, prefix + "per_run.csv");
    ctsid::export_plot_table(summary, prefix + "plot.csv");
    if (o.preset == "table1") std::cout << ctsid::format_summary_table(summary);
    std::cout << "wrote " << prefix << "{summary,per_run,plot}.csv\n";
    return kExitOk;
}

struct DiagnoseOpts {
    std::string kind;
    int n_samples = 100000;
    std::uint64_t seed = 1;
    double h = 0.3;
    std::string h_list = "0.06,0.2,0.6";
    std::string input_file;
    int n = 2, m = 0;
};

int cmd_diagnose(const DiagnoseOpts& o) {
    const ctsid::TransferFunction system = ctsid::benchmark_system();
    const ctsid::Multisine input = o.input_file.empty()
                                       ? ctsid::benchmark_input()
                                       : ctsid::read_multisine(o.input_file);
    const ctsid::ModelOrder order{o.n, o.m};
    bool pass = true;

    if (o.kind == "psi") {
        const ctsid::SamplingGrid grid =
            ctsid::generate_grid(ctsid::SamplingGrid::Regular{o.h}, o.n_samples, 0.0);
        const ctsid::EmpiricalMoment psi = ctsid::empirical_psi(
            system.den(), input, ctsid::NoiseModel{0.1, o.seed}, grid, order);
        for (int i = 0; i < psi.value.rows(); ++i)
            for (int j = 0; j < psi.value.cols(); ++j) {
                const double se = psi.stderr_estimate(i, j);
                const bool entry_ok =
                    se == 0.0 ? psi.value(i, j) == 0.0
                              : std::abs(psi.value(i, j)) <= 4.0 * se;
                std::printf("psi(%d,%d) = % .3e  stderr %.3e  %s\n", i, j, psi.value(i, j),
                            se, entry_ok ? "ok" : "VIOLATION");
                pass = pass && entry_ok;
            }
    } else if (o.kind == "power") {
        const ctsid::SamplingGrid grid =
            ctsid::generate_grid(ctsid::SamplingGrid::Regular{o.h}, o.n_samples, 0.0);
        const double analytic = ctsid::analytic_average_power(system, input);
        const ctsid::EmpiricalMoment emp =
            ctsid::empirical_average_power(system, input, grid);
        const double rel = std::abs(emp.scalar() - analytic) / std::abs(analytic);
        std::printf("analytic %.10g  empirical %.10g  rel.err %.3e%s\n", analytic,
                    emp.scalar(), rel, emp.resonant_grid ? "  (resonant grid)" : "");
        pass = rel < 0.01;
    } else if (o.kind == "phistar") {
        if (!ctsid::excitation_condition_holds(input, order)) {
            std::cout << "AssumptionA3Violated: too few sinusoids for the model order\n";
            return kExitDiagnostic;
        }
        const double min_eig = ctsid::phi_star_min_eig(system, input, order);
        std::printf("min eigenvalue %.6e\n", min_eig);
        pass = min_eig > 0.0;
    } else {  // condsweep
        const auto sweep = ctsid::normal_matrix_condition_sweep(
            system, input, order, parse_double_list(o.h_list), o.n_samples > 2000 ? 2000 : o.n_samples);
        for (const auto& [h, cond] : sweep) {
            std::printf("h=%g  condition %.6e\n", h, cond);
            pass = pass && cond < 1e10;
        }
    }
    std::cout << (pass ? "PASS" : "FAIL") << '\n';
    return pass ? kExitOk : kExitDiagnostic;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Continuous-time system identification with multisine inputs"};
    app.require_subcommand(1);
    app.set_config("--config");
    // Long-only help so that --h stays available as the sampling-period option.
    app.set_help_flag("--help", "Print help and exit");

    GenerateOpts gen;
    auto* sg = app.add_subcommand("generate", "Generate a synthetic dataset");
    sg->set_help_flag("--help", "Print help and exit");
    sg->add_option("--n", gen.n, "Number of samples");
    sg->add_option("--h", gen.h, "Regular sampling period [s]");
    sg->add_option("--h-lb", gen.h_lb, "Irregular sampling: lower gap bound");
    sg->add_option("--h-hb", gen.h_hb, "Irregular sampling: upper gap bound");
    sg->add_option("--t1", gen.t1, "First timestamp");
    sg->add_option("--seed", gen.seed, "Noise/grid seed");
    sg->add_option("--variance", gen.variance, "Output noise variance");
    sg->add_option("--num", gen.num, "System numerator, ascending coefficients");
    sg->add_option("--den", gen.den, "System denominator, ascending coefficients");
    sg->add_option("--input-file", gen.input_file, "Multisine definition to use as input");
    sg->add_option("--out", gen.out, "Dataset CSV path")->required();
    sg->add_option("--input-out", gen.input_out, "Where to write the input definition");

    EstimateOpts est;
    auto* se = app.add_subcommand("estimate", "Run one estimation on a dataset");
    se->add_option("--data", est.data, "Dataset CSV")->required();
    se->add_option("--input", est.input_file, "Multisine input definition");
    se->add_option("--estimator", est.estimator, "srivc or srivc-c")
        ->check(CLI::IsMember({"srivc", "srivc-c"}));
    se->add_option("--order-n", est.n, "Denominator degree");
    se->add_option("--order-m", est.m, "Numerator degree");
    se->add_option("--epsilon", est.epsilon, "Relative-step tolerance");
    se->add_option("--max-iter", est.max_iter, "Maximum iterations");
    se->add_option("--input-hold", est.input_hold, "zoh or foh");
    se->add_option("--output-hold", est.output_hold, "zoh or foh");
    se->add_option("--cutoff", est.cutoff, "SVF initialization cutoff [rad/s]");
    se->add_option("--condition-limit", est.condition_limit, "Normal-matrix condition limit");
    se->add_option("--report", est.report, "Report file path");

    ReproduceOpts rep;
    auto* sr = app.add_subcommand("reproduce", "Run an experiment preset");
    sr->add_option("preset", rep.preset, "fig1, fig2, table1 or fig3")
        ->required()
        ->check(CLI::IsMember({"fig1", "fig2", "table1", "fig3"}));
    sr->add_option("--runs", rep.runs, "Monte Carlo runs per condition");
    sr->add_option("--n-list", rep.n_list, "Override sample-size list (fig1/fig2)");
    sr->add_option("--seed", rep.seed, "Master seed");
    sr->add_option("--jobs", rep.jobs, "Worker threads (0 = hardware)");
    sr->add_option("--out-dir", rep.out_dir, "Output directory");
    sr->add_option("--epsilon", rep.epsilon, "Relative-step tolerance");
    sr->add_option("--max-iter", rep.max_iter, "Maximum iterations");

    DiagnoseOpts dia;
    auto* sd = app.add_subcommand("diagnose", "Numerical checks of the theory");
    sd->set_help_flag("--help", "Print help and exit");
    sd->add_option("kind", dia.kind, "psi, power, phistar or condsweep")
        ->required()
        ->check(CLI::IsMember({"psi", "power", "phistar", "condsweep"}));
    sd->add_option("--n-samples", dia.n_samples, "Sample count");
    sd->add_option("--seed", dia.seed, "Noise seed");
    sd->add_option("--h", dia.h, "Sampling period");
    sd->add_option("--h-list", dia.h_list, "Sampling periods for condsweep");
    sd->add_option("--input-file", dia.input_file, "Multisine definition override");
    sd->add_option("--order-n", dia.n, "Denominator degree");
    sd->add_option("--order-m", dia.m, "Numerator degree");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (sg->parsed()) return cmd_generate(gen);
        if (se->parsed()) return cmd_estimate(est);
        if (sr->parsed()) return cmd_reproduce(rep);
        return cmd_diagnose(dia);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ctsid::NearSingularNormalMatrix& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const ctsid::SingularRegression& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
