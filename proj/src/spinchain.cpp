#include "qplr/spinchain.hpp"

#include <cmath>
#include <string>

#include "qplr/error.hpp"
#include "qplr/linalg.hpp"
#include "qplr/transport.hpp"

namespace qplr {

namespace {

constexpr double kElementTol = 1e-10;

void check_sites(int n) {
  if (n < 1 || n > kMaxChainSites)
    throw InvalidArgument("spinchain", "chain length must lie in [1, 12], got " + std::to_string(n));
}

// Bit of site j (1-based) in a basis index; 0 = up.
inline int bit_of(long index, int j, int n) { return static_cast<int>((index >> (n - j)) & 1L); }

}  // namespace

ManyBodyOperator build_chain(std::span<const double> nu, int n) {
  if (n < 2 || n > kMaxChainSites)
    throw InvalidArgument("spinchain", "chain length must lie in [2, 12], got " + std::to_string(n));
  if (nu.size() != static_cast<std::size_t>(n)) throw InvalidArgument("spinchain", "field vector length must equal n");
  const long dim = 1L << n;
  ManyBodyOperator h;
  h.n_sites = n;
  h.nu.assign(nu.begin(), nu.end());
  h.matrix = Eigen::MatrixXd::Zero(dim, dim);
  for (long s = 0; s < dim; ++s) {
    double diag = 0.0;
    for (int j = 1; j <= n; ++j) diag -= nu[j - 1] * (bit_of(s, j, n) ? -1.0 : 1.0);
    h.matrix(s, s) = diag;
    // sx sx + sy sy = 2 (s+ s- + s- s+) swaps antiparallel neighbours.
    for (int j = 1; j < n; ++j) {
      if (bit_of(s, j, n) == bit_of(s, j + 1, n)) continue;
      const long flipped = s ^ (1L << (n - j)) ^ (1L << (n - j - 1));
      h.matrix(flipped, s) = -2.0;
    }
  }
  return h;
}

FermionFrame jordan_wigner(int n) {
  check_sites(n);
  const long dim = 1L << n;
  FermionFrame f;
  f.n_sites = n;
  for (int j = 1; j <= n; ++j) {
    std::vector<Eigen::Triplet<double>> ct, at;
    for (long s = 0; s < dim; ++s) {
      if (bit_of(s, j, n) == 0) {
        // a_j: up -> down, with the sz string of sites 1..j-1.
        int downs = 0;
        for (int i = 1; i < j; ++i) downs += bit_of(s, i, n);
        ct.emplace_back(s | (1L << (n - j)), s, downs % 2 ? -1.0 : 1.0);
      } else {
        at.emplace_back(s & ~(1L << (n - j)), s, 1.0);
      }
    }
    SparseMatrix c(dim, dim), a(dim, dim);
    c.setFromTriplets(ct.begin(), ct.end());
    a.setFromTriplets(at.begin(), at.end());
    f.c.push_back(std::move(c));
    f.a_star.push_back(std::move(a));
  }
  return f;
}

double car_residual(const FermionFrame& frame) {
  const long dim = 1L << frame.n_sites;
  SparseMatrix id(dim, dim);
  id.setIdentity();
  double worst = 0.0;
  auto max_abs = [](const SparseMatrix& m) {
    double v = 0.0;
    for (int k = 0; k < m.outerSize(); ++k)
      for (SparseMatrix::InnerIterator it(m, k); it; ++it) v = std::max(v, std::abs(it.value()));
    return v;
  };
  for (int i = 0; i < frame.n_sites; ++i)
    for (int j = 0; j < frame.n_sites; ++j) {
      const SparseMatrix ci = frame.c[i], cj = frame.c[j];
      const SparseMatrix cj_star = SparseMatrix(cj.transpose());
      SparseMatrix mixed = SparseMatrix(ci * cj_star) + SparseMatrix(cj_star * ci);
      if (i == j) mixed -= id;
      const SparseMatrix same = SparseMatrix(ci * cj) + SparseMatrix(cj * ci);
      worst = std::max({worst, max_abs(mixed), max_abs(same)});
    }
  return worst;
}

TruncatedOperator chain_effective(const ManyBodyOperator& chain) {
  std::vector<double> onsite(chain.nu.size());
  for (std::size_t j = 0; j < onsite.size(); ++j) onsite[j] = -chain.nu[j];
  return build_effective_from_sites(onsite, Window{1, chain.n_sites});
}

ChainEvolution::ChainEvolution(const ManyBodyOperator& chain) {
  auto sys = linalg::symmetric_eigensystem(chain.matrix, true);
  energies_ = std::move(sys.values);
  vectors_ = std::move(sys.vectors);
}

Eigen::MatrixXcd ChainEvolution::heisenberg(const SparseMatrix& x, double t) const {
  const Eigen::MatrixXd xe = vectors_.transpose() * (x * vectors_);
  const Eigen::Index n = energies_.size();
  Eigen::MatrixXd re(n, n), im(n, n);
  for (Eigen::Index b = 0; b < n; ++b)
    for (Eigen::Index a = 0; a < n; ++a) {
      const double arg = (energies_(a) - energies_(b)) * t;
      re(a, b) = xe(a, b) * std::cos(arg);
      im(a, b) = xe(a, b) * std::sin(arg);
    }
  Eigen::MatrixXcd out(n, n);
  out.real() = vectors_ * re * vectors_.transpose();
  out.imag() = vectors_ * im * vectors_.transpose();
  return out;
}

double covariance_check(const ManyBodyOperator& chain, const FermionFrame& frame, double t) {
  if (frame.n_sites != chain.n_sites) throw InvalidArgument("spinchain", "frame and chain sizes differ");
  const ChainEvolution evolution(chain);
  const SpectralData one = eigensolve(chain_effective(chain));
  const int n = chain.n_sites;
  double worst = 0.0;
  for (int j = 1; j <= n; ++j) {
    Eigen::MatrixXcd diff = evolution.heisenberg(frame.c[j - 1], t);
    for (int k = 1; k <= n; ++k) {
      // [exp(-2itH)]_{jk} = <delta_j, exp(-2itH) delta_k>.
      const Complex g = propagator_element(one, k, j, 2.0 * t);
      diff -= g * Eigen::MatrixXcd(frame.c[k - 1].cast<Complex>());
    }
    worst = std::max(worst, diff.norm());
  }
  return worst;
}

CommutatorCheck commutator_bound_check(const ChainEvolution& evolution, const ManyBodyOperator& chain,
                                       const FermionFrame& frame, int l, int r, double t) {
  const int n = chain.n_sites;
  if (frame.n_sites != n) throw InvalidArgument("spinchain", "frame and chain sizes differ");
  if (!(1 <= l && l <= r && r <= n))
    throw InvalidArgument("spinchain", "commutator sites must satisfy 1 <= l <= r <= n");
  const Eigen::MatrixXcd cl = evolution.heisenberg(frame.c[l - 1], t);
  const Eigen::MatrixXcd ar = Eigen::MatrixXcd(frame.a_star[r - 1].cast<Complex>());
  const Eigen::MatrixXcd comm = cl * ar - ar * cl;
  CommutatorCheck out;
  out.lhs = linalg::spectral_norm(comm);
  // u = all up is basis state 0.
  out.matrix_element = comm(0, 0);
  const SpectralData one = eigensolve(chain_effective(chain));
  out.propagator = propagator_element(one, r, l, 2.0 * t);
  out.rhs = std::abs(out.propagator);
  out.bound_holds = out.lhs >= out.rhs - kElementTol;
  out.element_matches = std::abs(out.matrix_element + out.propagator) <= kElementTol;
  return out;
}

CommutatorCheck commutator_bound_check(const ManyBodyOperator& chain, const FermionFrame& frame, int l, int r,
                                       double t) {
  return commutator_bound_check(ChainEvolution(chain), chain, frame, l, r, t);
}

LineFit least_squares(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n != y.size() || n < 2) throw FitError("spinchain", "line fit needs at least two points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw FitError("spinchain", "line fit needs at least two distinct times");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  if (n > 2) {
    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double e = y[i] - f.intercept - f.slope * x[i];
      rss += e * e;
    }
    f.stderr_slope = std::sqrt(rss / static_cast<double>(n - 2) / sxx);
  }
  return f;
}

namespace {

std::optional<LineFit> fit_front(const LightConeGrid& grid, long l, double threshold, std::vector<long>* radii) {
  std::vector<double> y;
  for (std::size_t k = 0; k < grid.times.size(); ++k) {
    const auto r = front_radius(grid, l, k, threshold);
    if (!r) return std::nullopt;
    y.push_back(static_cast<double>(*r));
    if (radii) radii->push_back(*r);
  }
  return least_squares(grid.times, y);
}

}  // namespace

VelocityFit lr_velocity_fit(const SpectralData& s, const std::vector<double>& t_grid, double threshold) {
  if (!(threshold > 0.0 && threshold < 1.0)) throw InvalidArgument("spinchain", "front threshold must lie in (0, 1)");
  if (t_grid.size() < 2) throw InvalidArgument("spinchain", "velocity fit needs at least two times");
  const long l = s.window().center();
  const LightConeGrid grid = light_cone(s, l, t_grid, 2.0);
  VelocityFit out;
  out.T = t_grid;
  out.threshold = threshold;
  const auto main = fit_front(grid, l, threshold, &out.radius);
  if (!main) throw FitError("spinchain", "front threshold " + std::to_string(threshold) + " never attained");
  out.v_emp = main->slope;
  out.intercept = main->intercept;
  out.stderr_slope = main->stderr_slope;
  const double decade = std::sqrt(10.0);
  if (const auto lo = fit_front(grid, l, threshold / decade, nullptr)) out.v_low_threshold = lo->slope;
  if (threshold * decade < 1.0)
    if (const auto hi = fit_front(grid, l, threshold * decade, nullptr)) out.v_high_threshold = hi->slope;
  return out;
}

VelocityFit lr_velocity_fit(const Potential& p, const FrequencyVector& alpha, std::span<const double> x,
                            std::size_t window_size, const std::vector<double>& t_grid, double threshold) {
  const Window w = Window::centered(window_size);
  check_containment(window_size, t_grid, 2.0);
  return lr_velocity_fit(eigensolve(build_effective(p, alpha, x, w)), t_grid, threshold);
}

}  // namespace qplr
