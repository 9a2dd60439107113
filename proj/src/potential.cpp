#include "qplr/potential.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "qplr/error.hpp"

namespace qplr {

namespace {

constexpr double kSymmetryTol = 1e-14;
constexpr double kImagResidueTol = 1e-12;

Wavevector negate(const Wavevector& k) {
  Wavevector m(k.size());
  for (std::size_t i = 0; i < k.size(); ++i) m[i] = -k[i];
  return m;
}

bool is_zero_vector(const Wavevector& k) {
  for (int c : k)
    if (c != 0) return false;
  return true;
}

}  // namespace

FrequencyVector::FrequencyVector(std::vector<double> alpha, bool trusted_irrational)
    : alpha_(std::move(alpha)), trusted_(trusted_irrational) {
  if (alpha_.empty()) throw InvalidArgument("model", "frequency vector must be nonempty");
  for (double a : alpha_)
    if (!(a > 0.0 && a < 1.0))
      throw InvalidArgument("model", "frequency components must lie in (0,1), got " + std::to_string(a));
}

FrequencyVector FrequencyVector::golden() { return FrequencyVector({(std::sqrt(5.0) - 1.0) / 2.0}); }

Potential::Potential(int dimension, std::map<Wavevector, Complex> coefficients) : dim_(dimension) {
  if (dimension < 1) throw InvalidArgument("model", "potential dimension must be positive");
  for (auto& [k, c] : coefficients) {
    if (static_cast<int>(k.size()) != dimension)
      throw InvalidArgument("model", "wavevector length does not match potential dimension");
    if (c != Complex(0.0, 0.0)) coeffs_.emplace(k, c);
  }
  for (const auto& [k, c] : coeffs_) {
    const Complex mirror = coefficient(negate(k));
    if (std::abs(mirror - std::conj(c)) > kSymmetryTol * std::max(1.0, std::abs(c)))
      throw InvalidArgument("model", "potential violates Hermitian symmetry vhat(-k) = conj(vhat(k))");
    if (is_zero_vector(k) && std::abs(c.imag()) > kSymmetryTol)
      throw InvalidArgument("model", "constant Fourier mode must be real");
    if (is_zero_vector(k))
      constant_ = c.real();
    else if (!(k < negate(k)))
      terms_.push_back({k, c.real(), c.imag()});
  }
}

Potential Potential::zero(int dimension) { return Potential(dimension, {}); }

Potential Potential::constant(double c, int dimension) {
  return Potential(dimension, {{Wavevector(dimension, 0), Complex(c, 0.0)}});
}

Potential Potential::almost_mathieu(double lambda) {
  return Potential(1, {{Wavevector{1}, Complex(lambda, 0.0)}, {Wavevector{-1}, Complex(lambda, 0.0)}});
}

Complex Potential::coefficient(const Wavevector& k) const {
  auto it = coeffs_.find(k);
  return it == coeffs_.end() ? Complex(0.0, 0.0) : it->second;
}

double Potential::operator()(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim_)
    throw InvalidArgument("model", "evaluation point has wrong dimension");
  // Pair k with -k: vhat_k e(k.x) + conj(vhat_k e(k.x)) = 2 Re(vhat_k e(k.x)).
  double sum = constant_;
  for (const Term& t : terms_) {
    double phase = 0.0;
    for (int i = 0; i < dim_; ++i) phase += t.k[i] * wrap_unit(x[i]);
    phase = 2.0 * std::numbers::pi * wrap_unit(phase);
    sum += 2.0 * (t.re * std::cos(phase) - t.im * std::sin(phase));
  }
  return sum;
}

double Potential::along_orbit(std::span<const double> x, const FrequencyVector& alpha, long n) const {
  if (alpha.dimension() != static_cast<std::size_t>(dim_))
    throw InvalidArgument("model", "frequency vector dimension does not match potential");
  double buffer[8];
  std::vector<double> heap;
  double* shifted = buffer;
  if (dim_ > 8) {
    heap.resize(dim_);
    shifted = heap.data();
  }
  for (int i = 0; i < dim_; ++i) shifted[i] = wrap_unit(x[i] + wrap_unit(static_cast<double>(n) * alpha[i]));
  return (*this)(std::span<const double>(shifted, dim_));
}

double Potential::sup_bound() const {
  double s = 0.0;
  for (const auto& [k, c] : coeffs_) s += std::abs(c);
  return s;
}

double eval_potential(const Potential& p, std::span<const double> x) {
  Complex sum(0.0, 0.0);
  for (const auto& [k, c] : p.coefficients()) {
    double phase = 0.0;
    for (std::size_t i = 0; i < k.size(); ++i) phase += k[i] * wrap_unit(x[i]);
    sum += c * std::polar(1.0, 2.0 * std::numbers::pi * wrap_unit(phase));
  }
  if (std::abs(sum.imag()) > kImagResidueTol)
    throw InvalidArgument("model", "potential evaluated to a non-real value");
  return sum.real();
}

}  // namespace qplr
