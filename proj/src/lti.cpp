#include "ctsid/lti.hpp"

#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

#include "ctsid/errors.hpp"

namespace ctsid {

void validate(const SampledSignal& sig) {
    if (sig.times.empty()) throw EmptySignal("SampledSignal: no samples");
    if (sig.times.size() != sig.values.size())
        throw DimensionMismatch("SampledSignal: times/values length mismatch");
    for (std::size_t k = 1; k < sig.times.size(); ++k)
        if (sig.times[k] <= sig.times[k - 1])
            throw Error("SampledSignal: timestamps must be strictly increasing");
}

TransferFunction::TransferFunction(Polynomial num, Polynomial den)
    : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) throw Error("TransferFunction: zero denominator");
    if (num_.degree() > den_.degree())
        throw ImproperTransferFunction("TransferFunction: numerator degree exceeds denominator");
}

bool TransferFunction::stable() const {
    if (den_.degree() < 1) return true;  // static gain
    return is_stable(den_);
}

TransferFunction derivative_filter(const Polynomial& den, int i) {
    return TransferFunction(Polynomial::monomial(i), den);
}

std::complex<double> freq_response(const TransferFunction& tf, double omega) {
    const std::complex<double> s(0.0, omega);
    const std::complex<double> d = tf.den().eval(s);
    if (std::abs(d) < 1e-300) throw PoleOnGrid("freq_response: pole at evaluation frequency");
    return tf.num().eval(s) / d;
}

StateSpace to_state_space(const TransferFunction& tf) {
    const int n = tf.den().degree();
    const double an = tf.den().leading();
    StateSpace ss;
    ss.A.setZero(n, n);
    ss.B.setZero(n);
    ss.C.setZero(n);
    ss.D = tf.num().coeff(n) / an;
    if (n == 0) return ss;
    for (int i = 0; i + 1 < n; ++i) ss.A(i, i + 1) = 1.0;
    for (int i = 0; i < n; ++i) ss.A(n - 1, i) = -tf.den().coeff(i) / an;
    ss.B(n - 1) = 1.0;
    for (int i = 0; i < n; ++i) ss.C(i) = tf.num().coeff(i) / an - ss.D * tf.den().coeff(i) / an;
    return ss;
}

DiscreteFilter discretize(const StateSpace& ss, double h, Hold hold) {
    if (!(h > 0.0)) throw Error("discretize: sampling interval must be positive");
    const int n = ss.order();
    DiscreteFilter df;
    df.C = ss.C;
    df.D = ss.D;
    df.hold = hold;
    df.h = h;
    if (n == 0) {
        df.Ad.resize(0, 0);
        df.Bd0.resize(0);
        df.Bd1.resize(0);
        return df;
    }
    if (hold == Hold::ZOH) {
        Eigen::MatrixXd aug = Eigen::MatrixXd::Zero(n + 1, n + 1);
        aug.topLeftCorner(n, n) = ss.A;
        aug.block(0, n, n, 1) = ss.B;
        const Eigen::MatrixXd e = (aug * h).exp();
        df.Ad = e.topLeftCorner(n, n);
        df.Bd0 = e.block(0, n, n, 1);
        df.Bd1 = Eigen::VectorXd::Zero(n);
    } else {
        Eigen::MatrixXd aug = Eigen::MatrixXd::Zero(n + 2, n + 2);
        aug.topLeftCorner(n, n) = ss.A;
        aug.block(0, n, n, 1) = ss.B;
        aug(n, n + 1) = 1.0;
        const Eigen::MatrixXd e = (aug * h).exp();
        df.Ad = e.topLeftCorner(n, n);
        const Eigen::VectorXd g1 = e.block(0, n, n, 1);      // int_0^h e^{A(h-s)} B ds
        const Eigen::VectorXd g2 = e.block(0, n + 1, n, 1);  // int_0^h e^{A(h-s)} B s ds
        df.Bd1 = g2 / h;
        df.Bd0 = g1 - df.Bd1;
    }
    return df;
}

namespace {

bool grid_is_regular(const std::vector<double>& times) {
    if (times.size() < 3) return true;
    const double h0 = times[1] - times[0];
    for (std::size_t k = 1; k + 1 < times.size(); ++k) {
        const double h = times[k + 1] - times[k];
        if (std::abs(h - h0) > 1e-12 * std::max(1.0, std::abs(h0))) return false;
    }
    return true;
}

}  // namespace

Eigen::MatrixXd filter_bank(const Polynomial& den, const std::vector<Polynomial>& nums,
                            const SampledSignal& sig, Hold hold, bool force_per_interval) {
    validate(sig);
    const int n = den.degree();
    const int N = static_cast<int>(sig.size());
    const int K = static_cast<int>(nums.size());

    // Shared controllable-canonical state; per-numerator output maps.
    std::vector<Eigen::RowVectorXd> Cs(nums.size());
    std::vector<double> Ds(nums.size());
    for (std::size_t i = 0; i < nums.size(); ++i) {
        TransferFunction tf(nums[i], den);
        StateSpace ss = to_state_space(tf);
        Cs[i] = ss.C;
        Ds[i] = ss.D;
    }

    Eigen::MatrixXd out(N, K);
    if (n == 0) {
        for (int k = 0; k < N; ++k)
            for (int i = 0; i < K; ++i) out(k, i) = Ds[static_cast<std::size_t>(i)] * sig.values[static_cast<std::size_t>(k)];
        return out;
    }

    const StateSpace ss = to_state_space(TransferFunction(Polynomial::monomial(0), den));
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    const bool regular = !force_per_interval && grid_is_regular(sig.times);

    DiscreteFilter df;
    if (regular && N > 1) df = discretize(ss, sig.times[1] - sig.times[0], hold);

    for (int k = 0; k < N; ++k) {
        const double uk = sig.values[static_cast<std::size_t>(k)];
        for (int i = 0; i < K; ++i)
            out(k, i) = Cs[static_cast<std::size_t>(i)].dot(x) + Ds[static_cast<std::size_t>(i)] * uk;
        if (k + 1 < N) {
            if (!regular) df = discretize(ss, sig.times[static_cast<std::size_t>(k) + 1] - sig.times[static_cast<std::size_t>(k)], hold);
            const double uk1 = sig.values[static_cast<std::size_t>(k) + 1];
            if (hold == Hold::ZOH)
                x = df.Ad * x + df.Bd0 * uk;
            else
                x = df.Ad * x + df.Bd0 * uk + df.Bd1 * uk1;
        }
    }
    return out;
}

SampledSignal filter_samples(const TransferFunction& tf, const SampledSignal& sig, Hold hold) {
    const Eigen::MatrixXd out = filter_bank(tf.den(), {tf.num()}, sig, hold);
    SampledSignal res;
    res.times = sig.times;
    res.values.assign(out.col(0).data(), out.col(0).data() + out.rows());
    res.hold_tag = hold;
    return res;
}

SampledSignal filter_samples_irregular(const TransferFunction& tf, const SampledSignal& sig,
                                       Hold hold) {
    const Eigen::MatrixXd out = filter_bank(tf.den(), {tf.num()}, sig, hold, true);
    SampledSignal res;
    res.times = sig.times;
    res.values.assign(out.col(0).data(), out.col(0).data() + out.rows());
    res.hold_tag = hold;
    return res;
}

}  // namespace ctsid
