#pragma once

#include <complex>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "ctsid/polynomial.hpp"
#include "ctsid/sampled_signal.hpp"

namespace ctsid {

/// Proper continuous-time transfer function B(p)/A(p).
class TransferFunction {
  public:
    TransferFunction(Polynomial num, Polynomial den);

    const Polynomial& num() const { return num_; }
    const Polynomial& den() const { return den_; }

    bool stable() const;

  private:
    Polynomial num_;
    Polynomial den_;
};

/// p^i / den
TransferFunction derivative_filter(const Polynomial& den, int i);

struct StateSpace {
    Eigen::MatrixXd A;  // n x n
    Eigen::VectorXd B;  // n x 1
    Eigen::RowVectorXd C;
    double D = 0.0;

    int order() const { return static_cast<int>(A.rows()); }
};

/// Exact hold-equivalent discrete filter. For ZOH, Bd1 is zero. The FOH form
/// is the two-tap update x+ = Ad x + Bd0 u_k + Bd1 u_{k+1}.
struct DiscreteFilter {
    Eigen::MatrixXd Ad;
    Eigen::VectorXd Bd0;
    Eigen::VectorXd Bd1;
    Eigen::RowVectorXd C;
    double D = 0.0;
    Hold hold = Hold::ZOH;
    std::optional<double> h;
};

std::complex<double> freq_response(const TransferFunction& tf, double omega);

/// Controllable-canonical-form realization.
StateSpace to_state_space(const TransferFunction& tf);

/// Exact hold-equivalent discretization via an augmented matrix exponential.
DiscreteFilter discretize(const StateSpace& ss, double h, Hold hold);

/// Sample-wise filtering with zero initial state. A non-uniform grid is
/// handled by per-interval discretization.
SampledSignal filter_samples(const TransferFunction& tf, const SampledSignal& sig, Hold hold);

/// Same as filter_samples but always rediscretizes per interval.
SampledSignal filter_samples_irregular(const TransferFunction& tf, const SampledSignal& sig,
                                       Hold hold);

/// Filters one signal through several numerators sharing a common denominator
/// in a single pass (one state trajectory, one output row per numerator).
/// Returns an N x nums.size() matrix; column i is num[i]/den applied to sig.
Eigen::MatrixXd filter_bank(const Polynomial& den, const std::vector<Polynomial>& nums,
                            const SampledSignal& sig, Hold hold,
                            bool force_per_interval = false);

}  // namespace ctsid
