#pragma once

#include <utility>
#include <vector>

#include <Eigen/Core>

#include "ctsid/estimator.hpp"
#include "ctsid/lti.hpp"
#include "ctsid/signals.hpp"

namespace ctsid {

/// Derivative stack [d^{n+m}/dt^{n+m} u, ..., u]^T of a multisine; entry i
/// (0-based) is derivative(base, depth-1-i).
struct DerivativeStack {
    Multisine base;
    int depth = 0;

    Multisine entry(int i) const;
};

struct EmpiricalMoment {
    Eigen::MatrixXd value;
    int N = 0;
    Eigen::MatrixXd stderr_estimate;  // batch-means standard error, entrywise
    bool resonant_grid = false;

    double scalar() const { return value(0, 0); }
    double scalar_stderr() const { return stderr_estimate(0, 0); }
};

/// Sample average of [u_du / Aj^2](t_k) v_f^T(t_k): the analytically filtered
/// derivative stack against hold-filtered noise. Should vanish statistically
/// for zero-mean noise.
EmpiricalMoment empirical_psi(const Polynomial& Aj, const Multisine& u_ct,
                              const NoiseModel& noise, const SamplingGrid& grid,
                              const ModelOrder& order);

/// Closed-form time-average of (H1 u)(t) (H2 u)(t) for a multisine u:
///   H1(0) H2(0) a0^2 + 1/2 sum_l a_l^2 Re{H1(i w_l) conj(H2(i w_l))}.
double analytic_cross_power(const TransferFunction& h1, const TransferFunction& h2,
                            const Multisine& ms);

/// H(0)^2 a0^2 + 1/2 sum_l a_l^2 |H(i w_l)|^2.
double analytic_average_power(const TransferFunction& filter, const Multisine& ms);

/// Sample mean of the squared analytically filtered multisine at the grid
/// points; flags near-resonant regular grids.
EmpiricalMoment empirical_average_power(const TransferFunction& filter, const Multisine& ms,
                                        const SamplingGrid& grid);

/// Smallest eigenvalue of the analytically assembled moment matrix of the
/// derivative stack filtered by 1/A^2. Positive under the excitation
/// condition (enough sinusoids for the model order).
double phi_star_min_eig(const TransferFunction& system, const Multisine& ms,
                        const ModelOrder& order, bool enforce_excitation = true);

/// True iff the input satisfies the persistence-of-excitation requirement
/// for the given order: m_u >= (n+m)/2 with a nonzero offset, or
/// m_u >= (n+m+1)/2 without one.
bool excitation_condition_holds(const Multisine& ms, const ModelOrder& order);

/// For each h: condition number of (1/N) sum phi_hat phi^T built from a
/// noiseless dataset at the true parameters.
std::vector<std::pair<double, double>> normal_matrix_condition_sweep(
    const TransferFunction& system, const Multisine& ms, const ModelOrder& order,
    const std::vector<double>& h_list, int N = 2000);

}  // namespace ctsid
