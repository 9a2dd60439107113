#include "qplr/transport.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qplr/error.hpp"
#include "qplr/linalg.hpp"

namespace qplr {

namespace {

// sin(s)/s and (1 - cos s)/s, the real and imaginary parts of phi(s).
inline void phi_parts(double s, double& c, double& v) {
  if (std::abs(s) < 1e-4) {
    const double s2 = s * s;
    c = 1.0 - s2 / 6.0;
    v = s * (0.5 - s2 / 24.0);
    return;
  }
  c = std::sin(s) / s;
  v = (1.0 - std::cos(s)) / s;
}

Complex phi(double s) {
  double c, v;
  phi_parts(s, c, v);
  return {c, v};
}

double median_sorted(const std::vector<double>& v) {
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

void check_window_match(const SpectralData& s, const VelocityObservable& a) {
  if (s.box().dimension() != 1 || s.window() != a.window())
    throw InvalidArgument("transport", "velocity observable window does not match the operator");
}

}  // namespace

Eigen::VectorXcd site_vector(const Window& window, long site) {
  if (!window.contains(site)) throw InvalidArgument("transport", "site " + std::to_string(site) + " outside window");
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(window.size()));
  v(site - window.first) = 1.0;
  return v;
}

Eigen::VectorXcd evolve(const SpectralData& s, const Eigen::VectorXcd& psi0, double t) {
  if (psi0.size() != static_cast<Eigen::Index>(s.size()))
    throw InvalidArgument("transport", "initial state dimension does not match the operator");
  const auto& lambda = s.values();
  Eigen::VectorXcd phase(lambda.size());
  for (Eigen::Index j = 0; j < lambda.size(); ++j) phase(j) = std::polar(1.0, -lambda(j) * t);
  if (s.is_real()) {
    const auto& u = s.real_vectors();
    const Eigen::VectorXd re = psi0.real(), im = psi0.imag();
    Eigen::VectorXcd c(lambda.size());
    c.real() = u.transpose() * re;
    c.imag() = u.transpose() * im;
    c = c.cwiseProduct(phase);
    Eigen::VectorXcd out(lambda.size());
    out.real() = u * c.real();
    out.imag() = u * c.imag();
    return out;
  }
  const Eigen::MatrixXcd u = s.complex_vectors();
  return u * (phase.cwiseProduct(u.adjoint() * psi0));
}

Complex propagator_element(const SpectralData& s, long l, long r, double t) {
  const Eigen::Index il = s.row_of(l), ir = s.row_of(r);
  const auto& lambda = s.values();
  Complex sum(0.0, 0.0);
  if (s.is_real()) {
    const auto& u = s.real_vectors();
    for (Eigen::Index j = 0; j < lambda.size(); ++j) sum += std::polar(u(ir, j) * u(il, j), -lambda(j) * t);
    return sum;
  }
  const Eigen::MatrixXcd u = s.complex_vectors();
  for (Eigen::Index j = 0; j < lambda.size(); ++j)
    sum += std::polar(1.0, -lambda(j) * t) * u(ir, j) * std::conj(u(il, j));
  return sum;
}

CesaroAverager::CesaroAverager(const SpectralData& s, const VelocityObservable& a) : s_(s), real_(s.is_real()) {
  check_window_match(s, a);
  if (real_) {
    const auto& u = s.real_vectors();
    k_real_ = u.transpose() * (a.generator() * u);
  } else {
    const Eigen::MatrixXcd u = s.complex_vectors();
    a_complex_ = u.adjoint() * (a.dense() * u);
  }
}

Eigen::MatrixXcd CesaroAverager::eigenbasis_average(double T) const {
  const auto& lambda = s_.values();
  const Eigen::Index n = lambda.size();
  Eigen::MatrixXcd m(n, n);
  if (real_) {
    // A' = i K' and phi = C + iS give A' o phi = -K' o S + i K' o C.
    for (Eigen::Index k = 0; k < n; ++k)
      for (Eigen::Index j = 0; j < n; ++j) {
        double c, v;
        phi_parts((lambda(j) - lambda(k)) * T, c, v);
        m(j, k) = Complex(-k_real_(j, k) * v, k_real_(j, k) * c);
      }
    return m;
  }
  for (Eigen::Index k = 0; k < n; ++k)
    for (Eigen::Index j = 0; j < n; ++j) m(j, k) = a_complex_(j, k) * phi((lambda(j) - lambda(k)) * T);
  return m;
}

CesaroResult CesaroAverager::average(double T, bool keep_matrix) const {
  if (!(T > 0.0)) throw InvalidArgument("transport", "averaging time must be positive");
  const Eigen::Index n = static_cast<Eigen::Index>(s_.size());
  const auto block = CentralBlock::of(n);
  CesaroResult out;
  out.T = T;
  const Eigen::MatrixXcd m = eigenbasis_average(T);

  Eigen::MatrixXcd central;
  if (real_) {
    const auto& u = s_.real_vectors();
    const Eigen::MatrixXd uc = u.middleRows(block.offset, block.size);
    const Eigen::MatrixXd re = m.real(), im = m.imag();
    central.resize(block.size, block.size);
    central.real() = uc * (re * uc.transpose());
    central.imag() = uc * (im * uc.transpose());
    if (keep_matrix) {
      out.matrix.resize(n, n);
      out.matrix.real() = u * (re * u.transpose());
      out.matrix.imag() = u * (im * u.transpose());
    }
  } else {
    const Eigen::MatrixXcd u = s_.complex_vectors();
    const Eigen::MatrixXcd uc = u.middleRows(block.offset, block.size);
    central = uc * (m * uc.adjoint());
    if (keep_matrix) out.matrix = u * (m * u.adjoint());
  }

  if (block.size > 0) {
    const Eigen::VectorXd ev = linalg::hermitian_eigensystem(central, false).values;
    out.central_norm = std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
    out.min_singular = ev.cwiseAbs().minCoeff();
  }
  // U is unitary, so the full-window norm is the norm of the eigenbasis matrix.
  out.full_norm = n <= kExactNormLimit ? linalg::hermitian_norm(m) : linalg::hermitian_norm_lanczos(m);
  return out;
}

CesaroResult cesaro_Q(const SpectralData& s, const VelocityObservable& a, double T) {
  return CesaroAverager(s, a).average(T, true);
}

double containment_limit(std::size_t window_size, double time_scale) {
  return static_cast<double>(window_size) / (8.0 * time_scale);
}

void check_containment(std::size_t window_size, const std::vector<double>& times, double time_scale) {
  const double limit = containment_limit(window_size, time_scale);
  for (double t : times) {
    if (!(t >= 0.0)) throw InvalidArgument("transport", "times must be nonnegative");
    if (t > limit)
      throw ContainmentError("transport", "time " + std::to_string(t) + " exceeds the containment limit " +
                                              std::to_string(limit) + " for a window of " +
                                              std::to_string(window_size) + " sites");
  }
}

void summarize_plateau(QNormCurve& curve) {
  const std::size_t n = curve.central_norm.size();
  if (n == 0) return;
  const std::size_t tail = std::max<std::size_t>(1, (n + 3) / 4);
  std::vector<double> last(curve.central_norm.end() - static_cast<long>(tail), curve.central_norm.end());
  std::sort(last.begin(), last.end());
  curve.plateau = median_sorted(last);
  curve.band_low = last.front();
  curve.band_high = last.back();
  curve.oscillation = 0.5 * (curve.band_high - curve.band_low);
}

QNormCurve q_norm_curve(const SpectralData& s, const VelocityObservable& a, const std::vector<double>& t_grid) {
  if (t_grid.empty()) throw InvalidArgument("transport", "T grid is empty");
  if (!std::is_sorted(t_grid.begin(), t_grid.end()))
    throw InvalidArgument("transport", "T grid must be increasing");
  check_containment(s.size(), t_grid);
  const CesaroAverager averager(s, a);
  QNormCurve curve;
  for (double T : t_grid) {
    const auto r = averager.average(T, false);
    curve.T.push_back(T);
    curve.central_norm.push_back(r.central_norm);
    curve.full_norm.push_back(r.full_norm);
    curve.min_singular.push_back(r.min_singular);
  }
  summarize_plateau(curve);
  return curve;
}

QNormCurve q_norm_curve(const TruncatedOperator& op, const VelocityObservable& a, const std::vector<double>& t_grid) {
  if (!t_grid.empty()) check_containment(op.size(), t_grid);
  return q_norm_curve(eigensolve(op), a, t_grid);
}

LightConeGrid light_cone(const SpectralData& s, long l, const std::vector<double>& t_grid, double time_scale) {
  if (!(time_scale > 0.0)) throw InvalidArgument("transport", "time scale must be positive");
  check_containment(s.size(), t_grid, time_scale);
  const Eigen::Index il = s.row_of(l);
  const Window& w = s.window();
  LightConeGrid grid;
  grid.times = t_grid;
  grid.sites.resize(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) grid.sites[i] = w.first + static_cast<long>(i);
  const Eigen::Index n = static_cast<Eigen::Index>(s.size());
  const long count = static_cast<long>(t_grid.size());
  grid.values.resize(n, count);
  const auto& lambda = s.values();
  if (s.is_real()) {
    const auto& u = s.real_vectors();
    const Eigen::VectorXd row = u.row(il).transpose();
#pragma omp parallel for schedule(static)
    for (long k = 0; k < count; ++k) {
      Eigen::VectorXd cr(n), ci(n);
      for (Eigen::Index j = 0; j < n; ++j) {
        const double arg = -lambda(j) * time_scale * t_grid[k];
        cr(j) = row(j) * std::cos(arg);
        ci(j) = row(j) * std::sin(arg);
      }
      const Eigen::VectorXd re = u * cr, im = u * ci;
      grid.values.col(k) = re.cwiseAbs2() + im.cwiseAbs2();
    }
    return grid;
  }
  const Eigen::MatrixXcd u = s.complex_vectors();
  const Eigen::VectorXcd row = u.row(il).adjoint();
#pragma omp parallel for schedule(static)
  for (long k = 0; k < count; ++k) {
    Eigen::VectorXcd c(n);
    for (Eigen::Index j = 0; j < n; ++j) c(j) = row(j) * std::polar(1.0, -lambda(j) * time_scale * t_grid[k]);
    grid.values.col(k) = (u * c).cwiseAbs2();
  }
  return grid;
}

LightConeGrid light_cone(const TruncatedOperator& op, long l, const std::vector<double>& t_grid, double time_scale) {
  check_containment(op.size(), t_grid, time_scale);
  return light_cone(eigensolve(op), l, t_grid, time_scale);
}

std::optional<long> front_radius(const LightConeGrid& grid, long l, std::size_t k, double threshold) {
  if (k >= grid.times.size()) throw InvalidArgument("transport", "time index out of range");
  const double level = threshold * threshold;
  std::optional<long> best;
  for (std::size_t i = 0; i < grid.sites.size(); ++i) {
    if (grid.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) < level) continue;
    const long d = std::abs(grid.sites[i] - l);
    if (!best || d > *best) best = d;
  }
  return best;
}

double position_moment(const SpectralData& s, const Eigen::VectorXcd& psi0, double t, double p) {
  if (!(p > 0.0)) throw InvalidArgument("transport", "moment order must be positive");
  check_containment(s.size(), {std::abs(t)});
  const Eigen::VectorXcd psi = evolve(s, psi0, t);
  const Window& w = s.window();
  const long center = w.center();
  double sum = 0.0;
  for (Eigen::Index i = 0; i < psi.size(); ++i) {
    const double d = std::abs(static_cast<double>(w.first + i - center));
    sum += std::pow(d, p) * std::norm(psi(i));
  }
  return sum;
}

double position_moment(const TruncatedOperator& op, const Eigen::VectorXcd& psi0, double t, double p) {
  return position_moment(eigensolve(op), psi0, t, p);
}

}  // namespace qplr
