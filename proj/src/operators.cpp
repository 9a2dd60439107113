#include "qplr/operators.hpp"

#include <cmath>
#include <map>
#include <numbers>

#include "qplr/error.hpp"

namespace qplr {

namespace {

constexpr double kHermitianTol = 1e-14;

long wrap_index(long n, const Window& w) {
  const long len = static_cast<long>(w.size());
  long r = (n - w.first) % len;
  if (r < 0) r += len;
  return w.first + r;
}

}  // namespace

Window Window::centered(std::size_t size) {
  const long first = -static_cast<long>(size / 2);
  return Window{first, first + static_cast<long>(size) - 1};
}

Box::Box(std::vector<Window> axes) : axes_(std::move(axes)) {
  if (axes_.empty()) throw InvalidArgument("model", "box needs at least one axis");
  size_ = 1;
  for (const auto& w : axes_) {
    if (w.size() == 0) throw InvalidArgument("model", "box axis is empty");
    size_ *= w.size();
  }
}

std::vector<long> Box::site(std::size_t index) const {
  std::vector<long> m(axes_.size());
  for (std::size_t i = axes_.size(); i-- > 0;) {
    const std::size_t len = axes_[i].size();
    m[i] = axes_[i].first + static_cast<long>(index % len);
    index /= len;
  }
  return m;
}

std::optional<std::size_t> Box::index(std::span<const long> m, Boundary boundary) const {
  std::size_t idx = 0;
  for (std::size_t i = 0; i < axes_.size(); ++i) {
    long c = m[i];
    if (!axes_[i].contains(c)) {
      if (boundary == Boundary::dirichlet) return std::nullopt;
      c = wrap_index(c, axes_[i]);
    }
    idx = idx * axes_[i].size() + static_cast<std::size_t>(c - axes_[i].first);
  }
  return idx;
}

TruncatedOperator::TruncatedOperator(Box box, std::vector<double> diagonal, std::vector<Hopping> hoppings,
                                     Boundary boundary)
    : box_(std::move(box)), diagonal_(std::move(diagonal)), hoppings_(std::move(hoppings)), boundary_(boundary) {
  if (diagonal_.size() != box_.size()) throw InvalidArgument("model", "diagonal length does not match window");
  for (const auto& h : hoppings_)
    if (h.offset.size() != box_.dimension()) throw InvalidArgument("model", "hopping offset has wrong dimension");
  if (boundary_ == Boundary::periodic)
    for (const auto& w : box_.axes())
      if (w.size() < 3) throw InvalidArgument("model", "periodic boundary needs at least 3 sites per axis");
}

const Window& TruncatedOperator::window() const {
  if (box_.dimension() != 1) throw InvalidArgument("model", "window() is only defined for 1D operators");
  return box_.axis(0);
}

bool TruncatedOperator::hermitian() const {
  std::map<std::vector<long>, Complex> table;
  for (const auto& h : hoppings_) table[h.offset] += h.coefficient;
  for (const auto& [o, c] : table) {
    std::vector<long> neg(o.size());
    for (std::size_t i = 0; i < o.size(); ++i) neg[i] = -o[i];
    auto it = table.find(neg);
    const Complex mirror = it == table.end() ? Complex(0.0, 0.0) : it->second;
    if (std::abs(mirror - std::conj(c)) > kHermitianTol * std::max(1.0, std::abs(c))) return false;
  }
  return true;
}

bool TruncatedOperator::is_real() const {
  for (const auto& h : hoppings_)
    if (h.coefficient.imag() != 0.0) return false;
  return true;
}

bool TruncatedOperator::is_real_tridiagonal() const {
  if (box_.dimension() != 1 || boundary_ != Boundary::dirichlet || !is_real()) return false;
  for (const auto& h : hoppings_)
    if (std::abs(h.offset[0]) > 1) return false;
  return true;
}

std::vector<double> TruncatedOperator::full_diagonal() const {
  std::vector<double> d = diagonal_;
  for (const auto& h : hoppings_) {
    bool zero = true;
    for (long c : h.offset) zero = zero && c == 0;
    if (zero)
      for (double& v : d) v += h.coefficient.real();
  }
  return d;
}

std::vector<double> TruncatedOperator::off_diagonal() const {
  if (!is_real_tridiagonal()) throw InvalidArgument("spectral", "operator is not real tridiagonal");
  const std::size_t n = size();
  double sub = 0.0;  // H[n+1, n] comes from offset -1
  for (const auto& h : hoppings_)
    if (h.offset[0] == -1) sub += h.coefficient.real();
  return std::vector<double>(n > 0 ? n - 1 : 0, sub);
}

Eigen::MatrixXcd TruncatedOperator::dense() const {
  const std::size_t n = size();
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(n, n);
  for (std::size_t i = 0; i < n; ++i) h(i, i) = diagonal_[i];
  std::vector<long> target(box_.dimension());
  for (std::size_t i = 0; i < n; ++i) {
    const auto m = box_.site(i);
    for (const auto& hop : hoppings_) {
      for (std::size_t a = 0; a < m.size(); ++a) target[a] = m[a] + hop.offset[a];
      if (auto j = box_.index(target, boundary_)) h(i, *j) += hop.coefficient;
    }
  }
  return h;
}

Eigen::MatrixXd TruncatedOperator::dense_real() const {
  if (!is_real()) throw InvalidArgument("model", "operator has complex hoppings");
  return dense().real();
}

VelocityObservable::VelocityObservable(Window window, Boundary boundary) : window_(window), boundary_(boundary) {
  if (window_.size() == 0) throw InvalidArgument("model", "velocity observable needs a nonempty window");
  if (boundary_ == Boundary::periodic && window_.size() < 3)
    throw InvalidArgument("model", "periodic boundary needs at least 3 sites");
}

Eigen::MatrixXd VelocityObservable::generator() const {
  const Eigen::Index n = static_cast<Eigen::Index>(size());
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    k(i + 1, i) = 1.0;
    k(i, i + 1) = -1.0;
  }
  if (boundary_ == Boundary::periodic) {
    k(0, n - 1) = 1.0;
    k(n - 1, 0) = -1.0;
  }
  return k;
}

Eigen::MatrixXcd VelocityObservable::dense() const { return Complex(0.0, 1.0) * generator().cast<Complex>(); }

TruncatedOperator build_effective_from_sites(std::span<const double> onsite, Window window, Boundary boundary) {
  if (window.size() < 2) throw InvalidArgument("model", "effective operator window must have at least 2 sites");
  if (onsite.size() != window.size()) throw InvalidArgument("model", "on-site sequence does not match window");
  std::vector<Hopping> hops{{{1}, Complex(1.0, 0.0)}, {{-1}, Complex(1.0, 0.0)}};
  return TruncatedOperator(Box(window), std::vector<double>(onsite.begin(), onsite.end()), std::move(hops), boundary);
}

TruncatedOperator build_effective(const Potential& p, const FrequencyVector& alpha, std::span<const double> x,
                                  Window window, Boundary boundary) {
  if (window.size() < 2) throw InvalidArgument("model", "effective operator window must have at least 2 sites");
  if (x.size() != static_cast<std::size_t>(p.dimension()))
    throw InvalidArgument("model", "phase x has wrong dimension");
  std::vector<double> diag(window.size());
  for (long n = window.first; n <= window.last; ++n) diag[n - window.first] = p.along_orbit(x, alpha, n);
  return build_effective_from_sites(diag, window, boundary);
}

TruncatedOperator build_effective(const Potential& p, const FrequencyVector& alpha, double x, Window window,
                                  Boundary boundary) {
  return build_effective(p, alpha, std::span<const double>(&x, 1), window, boundary);
}

TruncatedOperator build_dual(const Potential& p, const FrequencyVector& alpha, double theta, const Box& box) {
  const std::size_t d = static_cast<std::size_t>(p.dimension());
  if (box.dimension() != d || alpha.dimension() != d)
    throw InvalidArgument("model", "dual box, potential and frequency dimensions differ");
  std::vector<double> diag(box.size());
  for (std::size_t i = 0; i < box.size(); ++i) {
    const auto m = box.site(i);
    double phase = theta;
    for (std::size_t a = 0; a < d; ++a) phase += wrap_unit(static_cast<double>(m[a]) * alpha[a]);
    diag[i] = 2.0 * std::cos(2.0 * std::numbers::pi * wrap_unit(phase));
  }
  // (H psi)_m contains vhat_k psi_{m-k}: entry H[m, m-k] = vhat_k.
  std::vector<Hopping> hops;
  for (const auto& [k, c] : p.coefficients()) {
    std::vector<long> offset(d);
    for (std::size_t a = 0; a < d; ++a) offset[a] = -static_cast<long>(k[a]);
    hops.push_back({std::move(offset), c});
  }
  return TruncatedOperator(box, std::move(diag), std::move(hops), Boundary::dirichlet);
}

VelocityObservable build_velocity(Window window, Boundary boundary) { return VelocityObservable(window, boundary); }

}  // namespace qplr
