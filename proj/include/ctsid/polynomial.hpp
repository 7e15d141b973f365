#pragma once

#include <complex>
#include <vector>

#include <Eigen/Core>
#include <Eigen/LU>

namespace ctsid {

/// Real polynomial in the differential operator p, stored as ascending
/// coefficients: coeffs[k] multiplies p^k. Trailing zeros are trimmed on
/// construction; the zero polynomial is stored as {0}.
class Polynomial {
  public:
    Polynomial() : coeffs_{0.0} {}
    explicit Polynomial(std::vector<double> coeffs);
    Polynomial(std::initializer_list<double> coeffs);

    /// x^k
    static Polynomial monomial(int k, double scale = 1.0);

    const std::vector<double>& coeffs() const { return coeffs_; }
    double coeff(int k) const {
        return (k >= 0 && k < static_cast<int>(coeffs_.size())) ? coeffs_[k] : 0.0;
    }
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    double leading() const { return coeffs_.back(); }
    double constant() const { return coeffs_.front(); }
    bool is_zero() const { return coeffs_.size() == 1 && coeffs_[0] == 0.0; }

    std::complex<double> eval(std::complex<double> s) const;
    double eval(double s) const;

    Polynomial operator+(const Polynomial& rhs) const;
    Polynomial operator-(const Polynomial& rhs) const;
    Polynomial operator*(const Polynomial& rhs) const;
    Polynomial operator*(double scale) const;
    Polynomial operator-() const { return *this * -1.0; }
    bool operator==(const Polynomial& rhs) const { return coeffs_ == rhs.coeffs_; }

  private:
    std::vector<double> coeffs_;
};

inline Polynomial operator*(double scale, const Polynomial& p) { return p * scale; }

/// All degree-many roots, sorted by (real, imag). Complex roots of the real
/// polynomial come in exact conjugate pairs.
std::vector<std::complex<double>> roots(const Polynomial& poly);

/// True iff every root has strictly negative real part. A root on the
/// imaginary axis counts as unstable.
bool is_stable(const Polynomial& poly);

/// Mirror every root with positive real part across the imaginary axis and
/// push roots within 1e-9 of the axis to real part -1e-9. The result is
/// rebuilt from its roots and rescaled so the constant term equals 1.
/// A polynomial whose roots are all at real part <= -1e-9 is returned as-is.
Polynomial reflect_unstable(const Polynomial& poly);

struct SylvesterMatrix {
    Eigen::MatrixXd entries;
    int n = 0;  ///< nominal degree of the denominator-role polynomial
    int m = 0;  ///< nominal degree of the numerator-role polynomial

    double determinant() const { return entries.determinant(); }
};

/// Sylvester-type matrix S(negB, A) of size (n+m+1) x (n+m+1). Column j
/// (0-based) corresponds to the power p^{n+m-j}. The first n rows hold the
/// coefficients of p^i * negB (i = 1..n), the last m+1 rows those of
/// p^r * A (r = 0..m). With this layout,
///   phi_hat(t) = S(-B, A) * [p^{n+m} u, ..., u]^T filtered by 1/A^2,
/// which is the defining identity of the instrument construction.
SylvesterMatrix sylvester(const Polynomial& negB, const Polynomial& A, int n, int m);

}  // namespace ctsid
