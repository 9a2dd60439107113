#pragma once

#include <cmath>
#include <complex>
#include <map>
#include <span>
#include <vector>

namespace qplr {

using Complex = std::complex<double>;
using Wavevector = std::vector<int>;

/// Reduce a phase to [0, 1).
inline double wrap_unit(double t) {
  double r = t - std::floor(t);
  return r >= 1.0 ? 0.0 : r;
}

/// Frequency vector alpha in (0,1)^d. Rational independence of {1, alpha_i}
/// cannot be checked in floating point; the caller asserts it through
/// `trusted_irrational`.
class FrequencyVector {
 public:
  explicit FrequencyVector(std::vector<double> alpha, bool trusted_irrational = true);

  /// (sqrt(5) - 1) / 2.
  static FrequencyVector golden();

  std::size_t dimension() const noexcept { return alpha_.size(); }
  double operator[](std::size_t i) const { return alpha_[i]; }
  std::span<const double> values() const noexcept { return alpha_; }
  bool trusted_irrational() const noexcept { return trusted_; }

 private:
  std::vector<double> alpha_;
  bool trusted_;
};

/// Real trigonometric polynomial v on the d-torus, stored by its Fourier
/// coefficients v(x) = sum_k vhat_k exp(2 pi i k.x). Construction enforces
/// vhat_{-k} = conj(vhat_k).
class Potential {
 public:
  Potential(int dimension, std::map<Wavevector, Complex> coefficients);

  static Potential zero(int dimension = 1);
  /// v(x) = c.
  static Potential constant(double c, int dimension = 1);
  /// Almost Mathieu: v(x) = 2 lambda cos(2 pi x), i.e. vhat_{+-1} = lambda.
  static Potential almost_mathieu(double lambda);

  int dimension() const noexcept { return dim_; }
  const std::map<Wavevector, Complex>& coefficients() const noexcept { return coeffs_; }
  /// vhat_k, zero when k is outside the support.
  Complex coefficient(const Wavevector& k) const;
  bool is_zero() const noexcept { return coeffs_.empty(); }

  /// v(x) for x on the torus; x need not be reduced.
  double operator()(std::span<const double> x) const;
  double operator()(double x) const { return (*this)(std::span<const double>(&x, 1)); }

  /// v(x + n alpha), n scalar, with each component reduced mod 1 before use.
  double along_orbit(std::span<const double> x, const FrequencyVector& alpha, long n) const;

  /// Sum of |vhat_k|, an upper bound for sup |v|.
  double sup_bound() const;

 private:
  struct Term {
    std::vector<int> k;
    double re;
    double im;
  };

  int dim_;
  std::map<Wavevector, Complex> coeffs_;
  double constant_ = 0.0;
  std::vector<Term> terms_;  // one representative of each +-k pair
};

/// Evaluate the potential and return the real part; throws if the imaginary
/// residue exceeds 1e-12.
double eval_potential(const Potential& p, std::span<const double> x);

}  // namespace qplr
