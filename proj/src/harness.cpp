#include "ctsid/harness.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <thread>

#include "ctsid/errors.hpp"

namespace ctsid {

std::string to_string(EstimatorKind kind) {
    return kind == EstimatorKind::SRIVC ? "srivc" : "srivc-c";
}

TransferFunction benchmark_system() {
    return TransferFunction(Polynomial{1.25}, Polynomial{1.0, 0.7, 0.25});
}

Multisine benchmark_input() {
    const double half_pi = std::numbers::pi / 2.0;
    Multisine u;
    u.components = {{1.0, 0.714, -half_pi}, {1.0, 1.428, -half_pi}, {1.0, 2.142, -half_pi}};
    return u;
}

namespace {

ExperimentSpec base_spec() {
    ExperimentSpec spec{benchmark_system(), benchmark_input(), 0.1,
                        {},                 300,               0,
                        {EstimatorKind::SRIVC, EstimatorKind::SRIVC_C},
                        ModelOrder{2, 0},   EstimatorConfig{}, 0.0};
    return spec;
}

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double max_input_freq(const Multisine& ms) {
    double w = 0.0;
    for (const auto& c : ms.components) w = std::max(w, c.omega);
    return w;
}

}  // namespace

ExperimentSpec preset_fig1_fig2() {
    ExperimentSpec spec = base_spec();
    // 60 sample sizes, log-spaced from 100 to 25500, rounded and deduplicated.
    const double lo = std::log10(100.0), hi = std::log10(25500.0);
    int prev = 0;
    for (int i = 0; i < 60; ++i) {
        const int N =
            static_cast<int>(std::lround(std::pow(10.0, lo + (hi - lo) * i / 59.0)));
        if (N == prev) continue;
        prev = N;
        spec.conditions.push_back(
            {"N=" + std::to_string(N), N, SamplingGrid::Regular{0.3}, static_cast<double>(N)});
    }
    return spec;
}

ExperimentSpec preset_table1() {
    ExperimentSpec spec = base_spec();
    for (double h : {0.06, 0.2, 0.6}) {
        std::ostringstream label;
        label << "h=" << h;
        spec.conditions.push_back({label.str(), 2000, SamplingGrid::Regular{h}, h});
    }
    return spec;
}

ExperimentSpec preset_fig3() {
    ExperimentSpec spec = base_spec();
    for (double hb : {0.1, 0.2, 0.3, 0.4, 0.5, 0.6}) {
        std::ostringstream label;
        label << "hhb=" << hb;
        spec.conditions.push_back(
            {label.str(), 2000, SamplingGrid::IrregularUniform{0.05, hb, 0}, hb});
    }
    return spec;
}

MonteCarloSummary run_experiment(const ExperimentSpec& spec, int jobs) {
    if (spec.runs < 1) throw SpecInvalid("run_experiment: runs must be >= 1");
    if (spec.conditions.empty()) throw SpecInvalid("run_experiment: no conditions");
    if (spec.estimators.empty()) throw SpecInvalid("run_experiment: no estimators");
    for (const auto& c : spec.conditions)
        if (c.N < 2) throw SpecInvalid("run_experiment: condition sample count too small");

    const int C = static_cast<int>(spec.conditions.size());
    const int R = spec.runs;
    const int E = static_cast<int>(spec.estimators.size());
    const double cutoff = max_input_freq(spec.input) > 0.0
                              ? max_input_freq(spec.input)
                              : 0.0;  // fall back to grid-based default per run

    std::vector<RunRecord> records(static_cast<std::size_t>(C) * R * E);

    auto work_cell = [&](int ci, int run) {
        const Condition& cond = spec.conditions[static_cast<std::size_t>(ci)];
        const std::uint64_t seed = derive_seed(spec.master_seed,
                                               static_cast<std::uint64_t>(ci),
                                               static_cast<std::uint64_t>(run));
        for (int ei = 0; ei < E; ++ei) {
            RunRecord& rec =
                records[(static_cast<std::size_t>(ci) * R + run) * E + ei];
            rec.condition = ci;
            rec.run = run;
            rec.estimator = spec.estimators[static_cast<std::size_t>(ei)];
            rec.errored = true;
        }
        try {
            SamplingGrid grid;
            if (std::holds_alternative<SamplingGrid::Regular>(cond.grid)) {
                grid = generate_grid(std::get<SamplingGrid::Regular>(cond.grid), cond.N,
                                     spec.t1);
            } else {
                auto kind = std::get<SamplingGrid::IrregularUniform>(cond.grid);
                kind.seed = derive_seed(seed, 0x67726964ULL, 0);  // independent grid stream
                grid = generate_grid(kind, cond.N, spec.t1);
            }
            const Dataset ds =
                generate_dataset(spec.system, spec.input, grid, NoiseModel{spec.noise_variance, seed});
            const double wc = cutoff > 0.0 ? cutoff : default_cutoff(ds.y);
            const ThetaVector theta1 =
                initialize(ds.u, ds.y, spec.order, wc, spec.config);

            for (int ei = 0; ei < E; ++ei) {
                RunRecord& rec =
                    records[(static_cast<std::size_t>(ci) * R + run) * E + ei];
                try {
                    const EstimationResult res =
                        rec.estimator == EstimatorKind::SRIVC
                            ? srivc(ds.u, ds.y, spec.order, theta1, spec.config)
                            : srivc_c(ds.input, ds.y, spec.order, theta1, spec.config);
                    rec.errored = false;
                    rec.converged = res.converged;
                    rec.iterations = static_cast<int>(res.iterations.size());
                    rec.theta = res.theta.packed;
                } catch (const Error&) {
                    rec.errored = true;
                }
            }
        } catch (const Error&) {
            // dataset or initialization failure: all estimators stay errored
        }
    };

    const int total = C * R;
    int n_threads = jobs > 0 ? jobs : static_cast<int>(std::thread::hardware_concurrency());
    n_threads = std::max(1, std::min(n_threads, total));
    if (n_threads == 1) {
        for (int idx = 0; idx < total; ++idx) work_cell(idx / R, idx % R);
    } else {
        std::atomic<int> next{0};
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(n_threads));
        for (int t = 0; t < n_threads; ++t)
            pool.emplace_back([&] {
                int idx;
                while ((idx = next.fetch_add(1)) < total) work_cell(idx / R, idx % R);
            });
        for (auto& th : pool) th.join();
    }

    // Deterministic ordered reduction.
    const ThetaVector truth =
        ThetaVector::from_polys(spec.system.den(), spec.system.num(), spec.order);
    const int d = spec.order.dim();
    MonteCarloSummary summary;
    summary.order = spec.order;
    summary.runs = records;
    for (int ei = 0; ei < E; ++ei)
        for (int ci = 0; ci < C; ++ci) {
            CellSummary cell;
            cell.estimator = spec.estimators[static_cast<std::size_t>(ei)];
            cell.condition = spec.conditions[static_cast<std::size_t>(ci)].label;
            cell.condition_value = spec.conditions[static_cast<std::size_t>(ci)].value;
            cell.truth.assign(truth.packed.data(), truth.packed.data() + d);
            cell.mean.assign(static_cast<std::size_t>(d), 0.0);
            cell.mse.assign(static_cast<std::size_t>(d), 0.0);
            cell.stdev.assign(static_cast<std::size_t>(d), 0.0);
            for (int run = 0; run < R; ++run) {
                const RunRecord& rec =
                    records[(static_cast<std::size_t>(ci) * R + run) * E + ei];
                if (rec.errored) {
                    ++cell.divergence_count;
                    continue;
                }
                ++cell.run_count;
                for (int p = 0; p < d; ++p) {
                    cell.mean[static_cast<std::size_t>(p)] += rec.theta(p);
                    const double e = rec.theta(p) - truth.packed(p);
                    cell.mse[static_cast<std::size_t>(p)] += e * e;
                }
            }
            if (cell.run_count > 0)
                for (int p = 0; p < d; ++p) {
                    cell.mean[static_cast<std::size_t>(p)] /= cell.run_count;
                    cell.mse[static_cast<std::size_t>(p)] /= cell.run_count;
                }
            if (cell.run_count > 1) {
                for (int run = 0; run < R; ++run) {
                    const RunRecord& rec =
                        records[(static_cast<std::size_t>(ci) * R + run) * E + ei];
                    if (rec.errored) continue;
                    for (int p = 0; p < d; ++p) {
                        const double e =
                            rec.theta(p) - cell.mean[static_cast<std::size_t>(p)];
                        cell.stdev[static_cast<std::size_t>(p)] += e * e;
                    }
                }
                for (int p = 0; p < d; ++p)
                    cell.stdev[static_cast<std::size_t>(p)] = std::sqrt(
                        cell.stdev[static_cast<std::size_t>(p)] / (cell.run_count - 1));
            }
            summary.cells.push_back(std::move(cell));
        }
    return summary;
}

std::string MonteCarloSummary::param_name(std::size_t p) const {
    return p < static_cast<std::size_t>(order.n) ? "a" + std::to_string(p + 1)
                                                 : "b" + std::to_string(p - order.n);
}

void export_summary(const MonteCarloSummary& summary, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("export_summary: cannot open " + path);
    out << "estimator,condition,param,true_value,mean,mse,std,runs,divergences\n";
    for (const auto& cell : summary.cells) {
        for (std::size_t p = 0; p < cell.truth.size(); ++p) {
            out << to_string(cell.estimator) << ',' << cell.condition << ','
                << summary.param_name(p) << ',' << fmt_double(cell.truth[p]) << ','
                << fmt_double(cell.mean[p]) << ',' << fmt_double(cell.mse[p]) << ','
                << fmt_double(cell.stdev[p]) << ',' << cell.run_count << ','
                << cell.divergence_count << '\n';
        }
    }
    if (!out) throw IoError("export_summary: write failure on " + path);
}

void export_per_run(const MonteCarloSummary& summary, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("export_per_run: cannot open " + path);
    out << "condition,run,estimator,converged,iters,theta...\n";
    for (const auto& rec : summary.runs) {
        out << rec.condition << ',' << rec.run << ',' << to_string(rec.estimator) << ','
            << (rec.errored ? "error" : (rec.converged ? "1" : "0")) << ','
            << rec.iterations;
        for (int p = 0; p < rec.theta.size(); ++p) out << ',' << fmt_double(rec.theta(p));
        out << '\n';
    }
    if (!out) throw IoError("export_per_run: write failure on " + path);
}

void export_plot_table(const MonteCarloSummary& summary, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("export_plot_table: cannot open " + path);
    out << "condition_value,estimator,param,mean,mse,std\n";
    for (const auto& cell : summary.cells)
        for (std::size_t p = 0; p < cell.truth.size(); ++p)
            out << fmt_double(cell.condition_value) << ',' << to_string(cell.estimator)
                << ',' << summary.param_name(p) << ',' << fmt_double(cell.mean[p]) << ','
                << fmt_double(cell.mse[p]) << ',' << fmt_double(cell.stdev[p]) << '\n';
    if (!out) throw IoError("export_plot_table: write failure on " + path);
}

std::string format_summary_table(const MonteCarloSummary& summary) {
    std::ostringstream out;
    for (const auto& cell : summary.cells) {
        out << to_string(cell.estimator) << "  " << cell.condition << "  (runs="
            << cell.run_count << ", divergences=" << cell.divergence_count << ")\n";
        for (std::size_t p = 0; p < cell.truth.size(); ++p) {
            char line[160];
            std::snprintf(line, sizeof(line),
                          "  %s (true %.6g): mean %.6g   mse %.3g   std %.3g\n",
                          summary.param_name(p).c_str(), cell.truth[p], cell.mean[p],
                          cell.mse[p], cell.stdev[p]);
            out << line;
        }
    }
    return out.str();
}

}  // namespace ctsid
