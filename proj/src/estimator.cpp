#include "ctsid/estimator.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Dense>

#include "ctsid/errors.hpp"

namespace ctsid {

Polynomial ThetaVector::den() const {
    std::vector<double> c(static_cast<std::size_t>(order.n) + 1, 0.0);
    c[0] = 1.0;
    for (int i = 1; i <= order.n; ++i) c[static_cast<std::size_t>(i)] = a(i);
    return Polynomial(std::move(c));
}

Polynomial ThetaVector::num() const {
    std::vector<double> c(static_cast<std::size_t>(order.m) + 1, 0.0);
    for (int i = 0; i <= order.m; ++i) c[static_cast<std::size_t>(i)] = b(i);
    return Polynomial(std::move(c));
}

ThetaVector ThetaVector::from_polys(const Polynomial& A, const Polynomial& B,
                                    const ModelOrder& order) {
    if (A.degree() > order.n || B.degree() > order.m)
        throw DimensionMismatch("ThetaVector: polynomial degree exceeds model order");
    if (std::abs(A.constant()) < 1e-12)
        throw ZeroConstantTerm("ThetaVector: denominator constant term vanishes");
    ThetaVector th;
    th.order = order;
    th.packed.resize(order.dim());
    // Joint rescale so the denominator constant term is 1 and B/A is preserved.
    for (int i = 1; i <= order.n; ++i) th.packed(i - 1) = A.coeff(i) / A.constant();
    for (int i = 0; i <= order.m; ++i) th.packed(order.n + i) = B.coeff(i) / A.constant();
    return th;
}

double default_cutoff(const SampledSignal& y) {
    validate(y);
    const double span = y.times.back() - y.times.front();
    const double mean_gap = span / static_cast<double>(y.size() - 1);
    return std::numbers::pi / (10.0 * mean_gap);
}

namespace {

std::vector<Polynomial> monomials(int lo, int hi) {
    std::vector<Polynomial> ms;
    for (int i = lo; i <= hi; ++i) ms.push_back(Polynomial::monomial(i));
    return ms;
}

/// Analytic columns {p^i/den u(t)}_{t_k} for i in [lo, hi].
Eigen::MatrixXd analytic_columns(const Polynomial& den, const Multisine& u_ct,
                                 const std::vector<double>& times, int lo, int hi) {
    Eigen::MatrixXd out(static_cast<int>(times.size()), hi - lo + 1);
    for (int i = lo; i <= hi; ++i) {
        const Multisine f = filter_multisine(derivative_filter(den, i), u_ct);
        for (std::size_t k = 0; k < times.size(); ++k)
            out(static_cast<int>(k), i - lo) = f.eval(times[k]);
    }
    return out;
}

}  // namespace

Eigen::MatrixXd build_regressor_srivc(const Polynomial& Aj, const SampledSignal& u,
                                      const SampledSignal& y, const ModelOrder& order,
                                      const EstimatorConfig& cfg) {
    const Eigen::MatrixXd ycols =
        filter_bank(Aj, monomials(1, order.n), y, cfg.output_hold, cfg.force_per_interval);
    const Eigen::MatrixXd ucols =
        filter_bank(Aj, monomials(0, order.m), u, cfg.input_hold, cfg.force_per_interval);
    Eigen::MatrixXd phi(ycols.rows(), order.dim());
    phi.leftCols(order.n) = -ycols;
    phi.rightCols(order.m + 1) = ucols;
    return phi;
}

Eigen::MatrixXd build_instrument_srivc(const Polynomial& Aj, const Polynomial& Bj,
                                       const SampledSignal& u, const ModelOrder& order,
                                       const EstimatorConfig& cfg) {
    const Polynomial Aj2 = Aj * Aj;
    std::vector<Polynomial> cascade;
    for (int i = 1; i <= order.n; ++i) cascade.push_back(-(Polynomial::monomial(i) * Bj));
    const Eigen::MatrixXd xcols = filter_bank(Aj2, cascade, u, cfg.input_hold, cfg.force_per_interval);
    const Eigen::MatrixXd ucols =
        filter_bank(Aj, monomials(0, order.m), u, cfg.input_hold, cfg.force_per_interval);
    Eigen::MatrixXd phi_hat(xcols.rows(), order.dim());
    phi_hat.leftCols(order.n) = xcols;
    phi_hat.rightCols(order.m + 1) = ucols;
    return phi_hat;
}

Eigen::MatrixXd build_regressor_srivc_c(const Polynomial& Aj, const Multisine& u_ct,
                                        const SampledSignal& y, const ModelOrder& order,
                                        const EstimatorConfig& cfg) {
    const Eigen::MatrixXd ycols =
        filter_bank(Aj, monomials(1, order.n), y, cfg.output_hold, cfg.force_per_interval);
    const Eigen::MatrixXd ucols = analytic_columns(Aj, u_ct, y.times, 0, order.m);
    Eigen::MatrixXd phi(ycols.rows(), order.dim());
    phi.leftCols(order.n) = -ycols;
    phi.rightCols(order.m + 1) = ucols;
    return phi;
}

Eigen::MatrixXd build_instrument_srivc_c(const Polynomial& Aj, const Polynomial& Bj,
                                         const Multisine& u_ct,
                                         const std::vector<double>& times,
                                         const ModelOrder& order) {
    const Polynomial Aj2 = Aj * Aj;
    Eigen::MatrixXd phi_hat(static_cast<int>(times.size()), order.dim());
    for (int i = 1; i <= order.n; ++i) {
        const TransferFunction tf(-(Polynomial::monomial(i) * Bj), Aj2);
        const Multisine f = filter_multisine(tf, u_ct);
        for (std::size_t k = 0; k < times.size(); ++k)
            phi_hat(static_cast<int>(k), i - 1) = f.eval(times[k]);
    }
    phi_hat.rightCols(order.m + 1) = analytic_columns(Aj, u_ct, times, 0, order.m);
    return phi_hat;
}

Eigen::VectorXd filtered_output(const Polynomial& Aj, const SampledSignal& y,
                                const EstimatorConfig& cfg) {
    return filter_bank(Aj, {Polynomial::monomial(0)}, y, cfg.output_hold, cfg.force_per_interval)
        .col(0);
}

IvStep iv_step(const Eigen::MatrixXd& phi_hat, const Eigen::MatrixXd& phi,
               const Eigen::VectorXd& y_f, double condition_limit) {
    if (phi_hat.rows() != phi.rows() || phi_hat.cols() != phi.cols() ||
        y_f.size() != phi.rows())
        throw DimensionMismatch("iv_step: non-conformable inputs");
    if (phi.rows() < phi.cols()) throw Error("iv_step: fewer samples than parameters");

    const Eigen::MatrixXd M = phi_hat.transpose() * phi;
    const Eigen::VectorXd r = phi_hat.transpose() * y_f;

    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
    const double smin = svd.singularValues().minCoeff();
    const double smax = svd.singularValues().maxCoeff();
    const double cond = smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
    if (!(cond <= condition_limit))
        throw NearSingularNormalMatrix("iv_step: normal matrix condition estimate " +
                                       std::to_string(cond) + " exceeds limit");

    IvStep step;
    step.condition = cond;
    step.theta = Eigen::FullPivLU<Eigen::MatrixXd>(M).solve(r);
    return step;
}

ThetaVector initialize(const SampledSignal& u, const SampledSignal& y, const ModelOrder& order,
                       double cutoff, const EstimatorConfig& cfg) {
    validate(u);
    validate(y);
    if (order.n < 1 || order.m < 0 || order.m > order.n)
        throw SpecInvalid("initialize: invalid model order");
    if (static_cast<int>(y.size()) < 5 * order.dim())
        throw Error("initialize: not enough samples for SVF least squares");
    if (!(cutoff > 0.0)) throw Error("initialize: cutoff must be positive");

    // State-variable filter denominator (1 + p/wc)^n.
    Polynomial f{1.0};
    const Polynomial first_order{1.0, 1.0 / cutoff};
    for (int i = 0; i < order.n; ++i) f = f * first_order;

    const Eigen::MatrixXd ycols =
        filter_bank(f, monomials(1, order.n), y, cfg.output_hold, cfg.force_per_interval);
    const Eigen::MatrixXd ucols =
        filter_bank(f, monomials(0, order.m), u, cfg.input_hold, cfg.force_per_interval);
    const Eigen::VectorXd target =
        filter_bank(f, {Polynomial::monomial(0)}, y, cfg.output_hold, cfg.force_per_interval)
            .col(0);

    Eigen::MatrixXd reg(ycols.rows(), order.dim());
    reg.leftCols(order.n) = -ycols;
    reg.rightCols(order.m + 1) = ucols;

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(reg, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const double smin = svd.singularValues().minCoeff();
    const double smax = svd.singularValues().maxCoeff();
    const double normal_cond =
        smin > 0.0 ? (smax / smin) * (smax / smin) : std::numeric_limits<double>::infinity();
    if (!(normal_cond <= cfg.condition_limit))
        throw SingularRegression("initialize: SVF normal matrix condition " +
                                 std::to_string(normal_cond) + " exceeds limit");

    ThetaVector th;
    th.order = order;
    th.packed = svd.solve(target);
    const Polynomial A = reflect_unstable(th.den());
    return ThetaVector::from_polys(A, th.num(), order);
}

namespace {

template <typename BuildPhi, typename BuildPhiHat>
EstimationResult run_iterations(const SampledSignal& y, const ModelOrder& order,
                                const ThetaVector& theta1, const EstimatorConfig& cfg,
                                BuildPhi&& build_phi, BuildPhiHat&& build_phi_hat) {
    validate(y);
    if (order.n < 1 || order.m < 0 || order.m > order.n)
        throw SpecInvalid("estimator: invalid model order");
    if (theta1.order.n != order.n || theta1.order.m != order.m)
        throw DimensionMismatch("estimator: initial vector does not match model order");
    if (!(cfg.epsilon > 0.0) || cfg.max_iter < 1)
        throw SpecInvalid("estimator: invalid tolerance or iteration limit");

    ThetaVector theta = theta1;
    if (!is_stable(theta.den()))
        theta = ThetaVector::from_polys(reflect_unstable(theta.den()), theta.num(), order);

    EstimationResult res{theta, false, {}, TransferFunction(theta.num(), theta.den())};
    for (int j = 1; j <= cfg.max_iter; ++j) {
        const Polynomial Aj = theta.den();
        const Polynomial Bj = theta.num();

        const Eigen::MatrixXd phi = build_phi(Aj);
        const Eigen::MatrixXd phi_hat = build_phi_hat(Aj, Bj);
        const Eigen::VectorXd y_f = filtered_output(Aj, y, cfg);
        const IvStep step = iv_step(phi_hat, phi, y_f, cfg.condition_limit);

        ThetaVector next;
        next.order = order;
        next.packed = step.theta;
        bool reflected = false;
        if (!is_stable(next.den())) {
            next = ThetaVector::from_polys(reflect_unstable(next.den()), next.num(), order);
            reflected = true;
        }

        const double base = std::max(theta.packed.norm(), 1e-300);
        const double rel = (next.packed - theta.packed).norm() / base;
        res.iterations.push_back({j, next, rel, reflected, step.condition});
        theta = next;
        if (rel < cfg.epsilon) {
            res.converged = true;
            break;
        }
    }
    res.theta = theta;
    res.final_model = TransferFunction(theta.num(), theta.den());
    return res;
}

}  // namespace

EstimationResult srivc(const SampledSignal& u, const SampledSignal& y, const ModelOrder& order,
                       const ThetaVector& theta1, const EstimatorConfig& cfg) {
    validate(u);
    return run_iterations(
        y, order, theta1, cfg,
        [&](const Polynomial& Aj) { return build_regressor_srivc(Aj, u, y, order, cfg); },
        [&](const Polynomial& Aj, const Polynomial& Bj) {
            return build_instrument_srivc(Aj, Bj, u, order, cfg);
        });
}

EstimationResult srivc_c(const Multisine& u_ct, const SampledSignal& y, const ModelOrder& order,
                         const ThetaVector& theta1, const EstimatorConfig& cfg) {
    validate(u_ct);
    return run_iterations(
        y, order, theta1, cfg,
        [&](const Polynomial& Aj) { return build_regressor_srivc_c(Aj, u_ct, y, order, cfg); },
        [&](const Polynomial& Aj, const Polynomial& Bj) {
            return build_instrument_srivc_c(Aj, Bj, u_ct, y.times, order);
        });
}

}  // namespace ctsid
