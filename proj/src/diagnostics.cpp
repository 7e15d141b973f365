#include "ctsid/diagnostics.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "ctsid/errors.hpp"

namespace ctsid {

Multisine DerivativeStack::entry(int i) const {
    if (i < 0 || i >= depth) throw DimensionMismatch("DerivativeStack: index out of range");
    return derivative(base, depth - 1 - i);
}

namespace {

/// Entrywise batch-means standard error of the running mean of per-sample
/// matrices produced by `sample(k)`.
template <typename SampleFn>
EmpiricalMoment batch_mean(int N, int rows, int cols, SampleFn&& sample) {
    const int batches = std::max(2, std::min(50, N / 20));
    const int per_batch = N / batches;

    EmpiricalMoment m;
    m.N = N;
    m.value.setZero(rows, cols);
    m.stderr_estimate.setZero(rows, cols);

    std::vector<Eigen::MatrixXd> batch_means;
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(rows, cols);
    Eigen::MatrixXd batch_acc = Eigen::MatrixXd::Zero(rows, cols);
    int in_batch = 0;
    for (int k = 0; k < N; ++k) {
        const Eigen::MatrixXd s = sample(k);
        acc += s;
        if (static_cast<int>(batch_means.size()) < batches) {
            batch_acc += s;
            if (++in_batch == per_batch) {
                batch_means.push_back(batch_acc / per_batch);
                batch_acc.setZero();
                in_batch = 0;
            }
        }
    }
    m.value = acc / N;

    const int B = static_cast<int>(batch_means.size());
    if (B >= 2) {
        Eigen::MatrixXd mean = Eigen::MatrixXd::Zero(rows, cols);
        for (const auto& b : batch_means) mean += b;
        mean /= B;
        Eigen::MatrixXd var = Eigen::MatrixXd::Zero(rows, cols);
        for (const auto& b : batch_means) var += (b - mean).cwiseProduct(b - mean);
        var /= (B - 1);
        m.stderr_estimate = (var / B).cwiseSqrt();
    }
    return m;
}

bool regular_gap(const SamplingGrid& grid, double* h_out) {
    if (grid.times.size() < 2) return false;
    const double h0 = grid.times[1] - grid.times[0];
    for (std::size_t k = 1; k + 1 < grid.times.size(); ++k)
        if (std::abs(grid.times[k + 1] - grid.times[k] - h0) > 1e-12 * std::max(1.0, h0))
            return false;
    *h_out = h0;
    return true;
}

}  // namespace

EmpiricalMoment empirical_psi(const Polynomial& Aj, const Multisine& u_ct,
                              const NoiseModel& noise, const SamplingGrid& grid,
                              const ModelOrder& order) {
    if (!is_stable(Aj)) throw UnstableFilter("empirical_psi: Aj unstable");
    const int d = order.dim();
    const int N = static_cast<int>(grid.times.size());
    const Polynomial Aj2 = Aj * Aj;

    // Analytic filtered derivative stack at the grid points, N x d.
    Eigen::MatrixXd U(N, d);
    for (int i = 0; i < d; ++i) {
        const Multisine f = filter_multisine(derivative_filter(Aj2, d - 1 - i), u_ct);
        for (int k = 0; k < N; ++k) U(k, i) = f.eval(grid.times[static_cast<std::size_t>(k)]);
    }

    // Hold-filtered noise columns p^l/Aj, l = 1..n; zeros elsewhere.
    SampledSignal v;
    v.times = grid.times;
    v.values = noise.generate(N);
    std::vector<Polynomial> nums;
    for (int l = 1; l <= order.n; ++l) nums.push_back(Polynomial::monomial(l));
    const Eigen::MatrixXd vcols = filter_bank(Aj, nums, v, Hold::FOH);
    Eigen::MatrixXd V = Eigen::MatrixXd::Zero(N, d);
    V.leftCols(order.n) = vcols;

    return batch_mean(N, d, d, [&](int k) -> Eigen::MatrixXd {
        return U.row(k).transpose() * V.row(k);
    });
}

double analytic_cross_power(const TransferFunction& h1, const TransferFunction& h2,
                            const Multisine& ms) {
    if (!h1.stable() || !h2.stable())
        throw UnstableFilter("analytic_cross_power: unstable filter");
    double acc = 0.0;
    if (ms.offset != 0.0)
        acc += freq_response(h1, 0.0).real() * freq_response(h2, 0.0).real() * ms.offset *
               ms.offset;
    for (const auto& c : ms.components) {
        const std::complex<double> r1 = freq_response(h1, c.omega);
        const std::complex<double> r2 = freq_response(h2, c.omega);
        acc += 0.5 * c.amp * c.amp * (r1 * std::conj(r2)).real();
    }
    return acc;
}

double analytic_average_power(const TransferFunction& filter, const Multisine& ms) {
    return analytic_cross_power(filter, filter, ms);
}

EmpiricalMoment empirical_average_power(const TransferFunction& filter, const Multisine& ms,
                                        const SamplingGrid& grid) {
    const Multisine f = filter_multisine(filter, ms);
    const int N = static_cast<int>(grid.times.size());
    EmpiricalMoment m = batch_mean(N, 1, 1, [&](int k) -> Eigen::MatrixXd {
        Eigen::MatrixXd s(1, 1);
        const double v = f.eval(grid.times[static_cast<std::size_t>(k)]);
        s(0, 0) = v * v;
        return s;
    });

    double h = 0.0;
    if (regular_gap(grid, &h)) {
        for (std::size_t i = 0; i < ms.components.size(); ++i) {
            const double wi = ms.components[i].omega;
            if (std::abs(std::sin(wi * h / 2.0)) < 1e-6) m.resonant_grid = true;
            for (std::size_t j = i + 1; j < ms.components.size(); ++j) {
                const double wj = ms.components[j].omega;
                if (std::abs(std::sin((wi + wj) * h / 2.0)) < 1e-6 ||
                    std::abs(std::sin((wi - wj) * h / 2.0)) < 1e-6)
                    m.resonant_grid = true;
            }
        }
    }
    return m;
}

bool excitation_condition_holds(const Multisine& ms, const ModelOrder& order) {
    const int mu = static_cast<int>(ms.components.size());
    if (ms.offset != 0.0) return 2 * mu >= order.n + order.m;
    return 2 * mu >= order.n + order.m + 1;
}

double phi_star_min_eig(const TransferFunction& system, const Multisine& ms,
                        const ModelOrder& order, bool enforce_excitation) {
    if (enforce_excitation && !excitation_condition_holds(ms, order))
        throw AssumptionA3Violated(
            "phi_star_min_eig: too few sinusoids for the model order");
    const Polynomial A2 = system.den() * system.den();
    const int d = order.dim();
    Eigen::MatrixXd phi(d, d);
    for (int j = 0; j < d; ++j)
        for (int l = j; l < d; ++l) {
            const double v = analytic_cross_power(derivative_filter(A2, d - 1 - j),
                                                  derivative_filter(A2, d - 1 - l), ms);
            phi(j, l) = v;
            phi(l, j) = v;
        }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(phi, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

std::vector<std::pair<double, double>> normal_matrix_condition_sweep(
    const TransferFunction& system, const Multisine& ms, const ModelOrder& order,
    const std::vector<double>& h_list, int N) {
    const ThetaVector truth = ThetaVector::from_polys(system.den(), system.num(), order);
    EstimatorConfig cfg;
    std::vector<std::pair<double, double>> out;
    for (double h : h_list) {
        const SamplingGrid grid = generate_grid(SamplingGrid::Regular{h}, N, 0.0);
        const Dataset ds = generate_dataset(system, ms, grid, NoiseModel{0.0, 0});
        const Eigen::MatrixXd phi =
            build_regressor_srivc_c(truth.den(), ms, ds.y, order, cfg);
        const Eigen::MatrixXd phi_hat =
            build_instrument_srivc_c(truth.den(), truth.num(), ms, grid.times, order);
        const Eigen::MatrixXd M = (phi_hat.transpose() * phi) / N;
        const Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
        const double smin = svd.singularValues().minCoeff();
        const double smax = svd.singularValues().maxCoeff();
        out.emplace_back(h, smin > 0.0 ? smax / smin
                                       : std::numeric_limits<double>::infinity());
    }
    return out;
}

}  // namespace ctsid
