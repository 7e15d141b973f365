#include "ctsid/polynomial.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "ctsid/errors.hpp"

namespace ctsid {

namespace {

void trim_trailing_zeros(std::vector<double>& c) {
    while (c.size() > 1 && c.back() == 0.0) c.pop_back();
}

double max_abs_coeff(const Polynomial& p) {
    double m = 0.0;
    for (double c : p.coeffs()) m = std::max(m, std::abs(c));
    return m;
}

}  // namespace

Polynomial::Polynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) throw Error("Polynomial: empty coefficient list");
    for (double c : coeffs_) {
        if (!std::isfinite(c)) throw Error("Polynomial: non-finite coefficient");
    }
    trim_trailing_zeros(coeffs_);
}

Polynomial::Polynomial(std::initializer_list<double> coeffs)
    : Polynomial(std::vector<double>(coeffs)) {}

Polynomial Polynomial::monomial(int k, double scale) {
    std::vector<double> c(static_cast<std::size_t>(k) + 1, 0.0);
    c.back() = scale;
    return Polynomial(std::move(c));
}

std::complex<double> Polynomial::eval(std::complex<double> s) const {
    std::complex<double> acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * s + *it;
    return acc;
}

double Polynomial::eval(double s) const {
    double acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * s + *it;
    return acc;
}

Polynomial Polynomial::operator+(const Polynomial& rhs) const {
    std::vector<double> c(std::max(coeffs_.size(), rhs.coeffs_.size()), 0.0);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = coeff(static_cast<int>(i)) + rhs.coeff(static_cast<int>(i));
    return Polynomial(std::move(c));
}

Polynomial Polynomial::operator-(const Polynomial& rhs) const {
    std::vector<double> c(std::max(coeffs_.size(), rhs.coeffs_.size()), 0.0);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = coeff(static_cast<int>(i)) - rhs.coeff(static_cast<int>(i));
    return Polynomial(std::move(c));
}

Polynomial Polynomial::operator*(const Polynomial& rhs) const {
    if (is_zero() || rhs.is_zero()) return Polynomial{0.0};
    std::vector<double> c(coeffs_.size() + rhs.coeffs_.size() - 1, 0.0);
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
        for (std::size_t j = 0; j < rhs.coeffs_.size(); ++j) c[i + j] += coeffs_[i] * rhs.coeffs_[j];
    return Polynomial(std::move(c));
}

Polynomial Polynomial::operator*(double scale) const {
    std::vector<double> c = coeffs_;
    for (double& v : c) v *= scale;
    return Polynomial(std::move(c));
}

std::vector<std::complex<double>> roots(const Polynomial& poly) {
    const int deg = poly.degree();
    if (deg < 1) throw DegreeZero("roots: polynomial is constant");
    const double scale = max_abs_coeff(poly);
    if (std::abs(poly.leading()) <= 1e-12 * scale)
        throw IllConditioned("roots: leading coefficient vanishes relative to coefficient scale");

    // Balanced companion matrix of the monic-normalized polynomial.
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(deg, deg);
    for (int i = 1; i < deg; ++i) companion(i, i - 1) = 1.0;
    for (int i = 0; i < deg; ++i) companion(i, deg - 1) = -poly.coeff(i) / poly.leading();

    // Diagonal balancing (Parlett-Reinsch) to improve eigenvalue accuracy.
    bool converged = false;
    while (!converged) {
        converged = true;
        for (int i = 0; i < deg; ++i) {
            double c = companion.col(i).lpNorm<1>() - std::abs(companion(i, i));
            double r = companion.row(i).lpNorm<1>() - std::abs(companion(i, i));
            if (c == 0.0 || r == 0.0) continue;
            double f = 1.0;
            const double s = c + r;
            while (c < r / 2.0) {
                c *= 2.0;
                r /= 2.0;
                f *= 2.0;
            }
            while (c > r * 2.0) {
                c /= 2.0;
                r *= 2.0;
                f /= 2.0;
            }
            if (c + r < 0.95 * s) {
                converged = false;
                companion.col(i) *= f;
                companion.row(i) /= f;
            }
        }
    }

    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
    if (solver.info() != Eigen::Success)
        throw IllConditioned("roots: eigenvalue iteration failed to converge");

    std::vector<std::complex<double>> rs(static_cast<std::size_t>(deg));
    for (int i = 0; i < deg; ++i) rs[static_cast<std::size_t>(i)] = solver.eigenvalues()(i);
    std::sort(rs.begin(), rs.end(), [](const auto& a, const auto& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });

    for (const auto& r : rs) {
        const double rscale = scale * std::max(1.0, std::pow(std::abs(r), deg));
        if (std::abs(poly.eval(r)) > 1e-8 * rscale)
            throw IllConditioned("roots: residual check failed");
    }
    return rs;
}

bool is_stable(const Polynomial& poly) {
    for (const auto& r : roots(poly))
        if (r.real() >= 0.0) return false;
    return true;
}

Polynomial reflect_unstable(const Polynomial& poly) {
    constexpr double kDelta = 1e-9;
    auto rs = roots(poly);
    bool changed = false;
    for (auto& r : rs) {
        double re = r.real();
        if (re > 0.0) {
            re = -re;  // mirror: r -> -conj(r), imaginary part kept
            changed = true;
        }
        if (re > -kDelta) {
            re = -kDelta;
            changed = true;
        }
        r = {re, r.imag()};
    }
    if (!changed) return poly;

    // Rebuild monic from roots; conjugate symmetry makes the result real.
    std::vector<std::complex<double>> c{1.0};
    for (const auto& r : rs) {
        std::vector<std::complex<double>> next(c.size() + 1, 0.0);
        for (std::size_t i = 0; i < c.size(); ++i) {
            next[i] += c[i] * (-r);
            next[i + 1] += c[i];
        }
        c = std::move(next);
    }
    const std::complex<double> c0 = c.front();
    if (std::abs(c0) < 1e-12)
        throw ZeroConstantTerm("reflect_unstable: cannot normalize, constant term vanishes");
    std::vector<double> out(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) out[i] = (c[i] / c0).real();
    out.front() = 1.0;
    return Polynomial(std::move(out));
}

SylvesterMatrix sylvester(const Polynomial& negB, const Polynomial& A, int n, int m) {
    if (A.degree() > n || negB.degree() > m)
        throw DimensionMismatch("sylvester: polynomial degree exceeds nominal degree");
    const int d = n + m + 1;
    SylvesterMatrix s;
    s.n = n;
    s.m = m;
    s.entries.setZero(d, d);
    // Row i (0-based, i < n) holds p^{i+1} * negB; column j holds power p^{n+m-j}.
    for (int i = 0; i < n; ++i)
        for (int k = 0; k <= m; ++k) s.entries(i, n + m - k - i - 1) = negB.coeff(k);
    // Row n+r holds p^r * A.
    for (int r = 0; r <= m; ++r)
        for (int k = 0; k <= n; ++k) s.entries(n + r, n + m - k - r) = A.coeff(k);
    return s;
}

}  // namespace ctsid
