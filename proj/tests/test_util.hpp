#pragma once

#include <cmath>
#include <random>
#include <vector>

#include <unsupported/Eigen/MatrixFunctions>

#include "ctsid/lti.hpp"
#include "ctsid/signals.hpp"

namespace testutil {

// Reference filtering oracle: integrates the variation-of-constants formula
//   x(t_{k+1}) = e^{A h} x(t_k) + int_0^h e^{A (h - s)} B u(t_k + s) ds
// with composite Simpson quadrature and a plain matrix exponential per node.
// Deliberately independent of the augmented-exponential production path.
inline std::vector<double> quadrature_filter(const ctsid::TransferFunction& tf,
                                             const ctsid::SampledSignal& sig,
                                             ctsid::Hold hold, int subdiv = 200) {
    const ctsid::StateSpace ss = ctsid::to_state_space(tf);
    const int n = ss.order();
    const std::size_t N = sig.size();
    std::vector<double> out(N, 0.0);
    if (n == 0) {
        for (std::size_t k = 0; k < N; ++k) out[k] = ss.D * sig.values[k];
        return out;
    }

    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    std::vector<Eigen::MatrixXd> node;
    double cached_h = -1.0;
    for (std::size_t k = 0; k < N; ++k) {
        out[k] = ss.C.dot(x) + ss.D * sig.values[k];
        if (k + 1 == N) break;
        const double h = sig.times[k + 1] - sig.times[k];
        if (std::abs(h - cached_h) > 1e-15) {
            cached_h = h;
            node.assign(static_cast<std::size_t>(subdiv) + 1, Eigen::MatrixXd());
            for (int j = 0; j <= subdiv; ++j) {
                const double s = h * j / subdiv;
                node[static_cast<std::size_t>(j)] = ((h - s) * ss.A).exp();
            }
        }
        const double delta = h / subdiv;
        Eigen::VectorXd integral = Eigen::VectorXd::Zero(n);
        for (int j = 0; j <= subdiv; ++j) {
            const double s = h * j / subdiv;
            const double u = hold == ctsid::Hold::ZOH
                                 ? sig.values[k]
                                 : sig.values[k] + (sig.values[k + 1] - sig.values[k]) * s / h;
            double w = (j == 0 || j == subdiv) ? 1.0 : (j % 2 == 1 ? 4.0 : 2.0);
            integral += (w * delta / 3.0 * u) * (node[static_cast<std::size_t>(j)] * ss.B);
        }
        x = node[0] * x + integral;
    }
    return out;
}

// Random strictly stable transfer function of exact denominator degree n and
// numerator degree at most m.
inline ctsid::TransferFunction random_stable_tf(std::mt19937_64& rng, int n, int m) {
    std::uniform_real_distribution<double> re(-3.0, -0.3);
    std::uniform_real_distribution<double> im(0.2, 3.0);
    std::uniform_real_distribution<double> coef(-2.0, 2.0);
    ctsid::Polynomial den{1.0};
    int left = n;
    while (left > 0) {
        if (left >= 2 && (rng() & 1u)) {
            const double a = re(rng);
            const double b = im(rng);
            den = den * ctsid::Polynomial{a * a + b * b, -2.0 * a, 1.0};
            left -= 2;
        } else {
            den = den * ctsid::Polynomial{-re(rng), 1.0};
            left -= 1;
        }
    }
    std::vector<double> num(static_cast<std::size_t>(m) + 1);
    for (double& v : num) v = coef(rng);
    if (std::abs(num.front()) < 0.1) num.front() = 0.5;
    return {ctsid::Polynomial(num), den};
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double d = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) d = std::max(d, std::abs(a[k] - b[k]));
    return d;
}

}  // namespace testutil
