#pragma once

#include <vector>

#include <Eigen/Core>

#include "ctsid/lti.hpp"
#include "ctsid/polynomial.hpp"
#include "ctsid/sampled_signal.hpp"
#include "ctsid/signals.hpp"

namespace ctsid {

/// Denominator degree n >= 1, numerator degree m with n >= m >= 0.
struct ModelOrder {
    int n = 1;
    int m = 0;

    int dim() const { return n + m + 1; }
};

/// Parameter vector theta = [a1 ... an, b0 ... bm]^T. The denominator has
/// constant term 1 by convention.
struct ThetaVector {
    Eigen::VectorXd packed;
    ModelOrder order;

    double a(int i) const { return packed(i - 1); }            // i = 1..n
    double b(int i) const { return packed(order.n + i); }      // i = 0..m

    Polynomial den() const;  ///< 1 + a1 p + ... + an p^n
    Polynomial num() const;  ///< b0 + ... + bm p^m

    static ThetaVector from_polys(const Polynomial& A, const Polynomial& B,
                                  const ModelOrder& order);
};

struct IterationRecord {
    int index = 0;
    ThetaVector theta;
    double relative_step = 0.0;
    bool reflected = false;
    double condition_estimate = 0.0;
};

struct EstimationResult {
    ThetaVector theta;
    bool converged = false;
    std::vector<IterationRecord> iterations;
    TransferFunction final_model;
};

struct EstimatorConfig {
    double epsilon = 1e-4;
    int max_iter = 50;
    Hold input_hold = Hold::FOH;   // SRIVC only
    Hold output_hold = Hold::FOH;
    double condition_limit = 1e12;
    bool force_per_interval = false;  // per-interval discretization even on regular grids
};

/// State-variable-filter least squares followed by pole reflection; the
/// filter chain is p^i / (1 + p/cutoff)^n.
ThetaVector initialize(const SampledSignal& u, const SampledSignal& y, const ModelOrder& order,
                       double cutoff, const EstimatorConfig& cfg = {});

/// Default SVF cutoff: the highest excitation frequency when the input is
/// known, otherwise pi / (10 * mean sampling gap).
double default_cutoff(const SampledSignal& y);

/// Hold-based filtered regressor rows
/// [-(p/Aj)y, ..., -(p^n/Aj)y, (1/Aj)u, ..., (p^m/Aj)u].
Eigen::MatrixXd build_regressor_srivc(const Polynomial& Aj, const SampledSignal& u,
                                      const SampledSignal& y, const ModelOrder& order,
                                      const EstimatorConfig& cfg);

/// Hold-based filtered instrument rows; the cascade filters p^i Bj / Aj^2 are
/// formed symbolically and applied in one pass.
Eigen::MatrixXd build_instrument_srivc(const Polynomial& Aj, const Polynomial& Bj,
                                       const SampledSignal& u, const ModelOrder& order,
                                       const EstimatorConfig& cfg);

/// Regressor with exact analytic input columns (steady-state multisine
/// response) and hold-based output columns.
Eigen::MatrixXd build_regressor_srivc_c(const Polynomial& Aj, const Multisine& u_ct,
                                        const SampledSignal& y, const ModelOrder& order,
                                        const EstimatorConfig& cfg);

/// Fully analytic instrument rows.
Eigen::MatrixXd build_instrument_srivc_c(const Polynomial& Aj, const Polynomial& Bj,
                                         const Multisine& u_ct,
                                         const std::vector<double>& times,
                                         const ModelOrder& order);

/// Filtered output (1/Aj) y, hold-based.
Eigen::VectorXd filtered_output(const Polynomial& Aj, const SampledSignal& y,
                                const EstimatorConfig& cfg);

struct IvStep {
    Eigen::VectorXd theta;
    double condition = 0.0;
};

/// Solves [sum phi_hat phi^T] theta = [sum phi_hat y_f] with a pivoted
/// factorization; throws NearSingularNormalMatrix past the condition limit.
IvStep iv_step(const Eigen::MatrixXd& phi_hat, const Eigen::MatrixXd& phi,
               const Eigen::VectorXd& y_f, double condition_limit = 1e12);

/// Classical SRIVC: iterative IV with hold-based prefiltering of both input
/// and output samples.
EstimationResult srivc(const SampledSignal& u, const SampledSignal& y, const ModelOrder& order,
                       const ThetaVector& theta1, const EstimatorConfig& cfg = {});

/// SRIVC-c: input-side filtered quantities computed exactly for the known
/// continuous-time multisine input; output filtering stays hold-based.
EstimationResult srivc_c(const Multisine& u_ct, const SampledSignal& y, const ModelOrder& order,
                         const ThetaVector& theta1, const EstimatorConfig& cfg = {});

}  // namespace ctsid
