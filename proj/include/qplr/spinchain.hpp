#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <optional>
#include <span>
#include <vector>

#include "qplr/operators.hpp"
#include "qplr/spectral.hpp"

namespace qplr {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Open isotropic XY chain on sites 1..n,
///   H = -sum_{j<n} (sx_j sx_{j+1} + sy_j sy_{j+1}) - sum_j nu_j sz_j.
/// Site 1 is the leftmost tensor factor; local basis (1,0) = up, sz = +1.
/// H is real in this basis.
struct ManyBodyOperator {
  int n_sites = 0;
  std::vector<double> nu;
  Eigen::MatrixXd matrix;
};

constexpr int kMaxChainSites = 12;

ManyBodyOperator build_chain(std::span<const double> nu, int n);

/// Jordan-Wigner frame: a = (sx - i sy)/2 = [[0,0],[1,0]],
/// c_j = sz_1 ... sz_{j-1} a_j, and the raising operators a_j^*.
struct FermionFrame {
  int n_sites = 0;
  std::vector<SparseMatrix> c;       // c[j-1] = c_j
  std::vector<SparseMatrix> a_star;  // a_star[j-1] = a_j^*
};

FermionFrame jordan_wigner(int n);

/// max over i, j of the entrywise deviation in {c_i, c_j^*} = delta_ij and
/// {c_i, c_j} = 0.
double car_residual(const FermionFrame& frame);

/// One-particle operator of the chain: unit hopping, diagonal -nu_j, on
/// Window{1, n}. With the frame above, c(t) = exp(-2 i t H_eff) c.
TruncatedOperator chain_effective(const ManyBodyOperator& chain);

/// Heisenberg evolution exp(iHt) X exp(-iHt) through a full eigensolve.
class ChainEvolution {
 public:
  explicit ChainEvolution(const ManyBodyOperator& chain);

  Eigen::MatrixXcd heisenberg(const SparseMatrix& x, double t) const;
  const Eigen::VectorXd& energies() const noexcept { return energies_; }

 private:
  Eigen::VectorXd energies_;
  Eigen::MatrixXd vectors_;
};

/// max_j || c_j(t) - sum_k [exp(-2itH_eff)]_{jk} c_k ||_F. The Frobenius
/// norm bounds the operator norm from above.
double covariance_check(const ManyBodyOperator& chain, const FermionFrame& frame, double t);

struct CommutatorCheck {
  double lhs = 0.0;  // || [c_l(t), a_r^*] ||
  double rhs = 0.0;  // |<delta_r, exp(-2itH_eff) delta_l>|
  Complex matrix_element;  // <u|[c_l(t), a_r^*]|u>, u = all up
  Complex propagator;      // [exp(-2itH_eff)]_{lr}
  bool bound_holds = false;     // lhs >= rhs - 1e-10
  bool element_matches = false; // matrix_element == -propagator to 1e-10
};

/// Sites are 1-based with 1 <= l <= r <= n.
CommutatorCheck commutator_bound_check(const ManyBodyOperator& chain, const FermionFrame& frame, int l, int r,
                                       double t);
CommutatorCheck commutator_bound_check(const ChainEvolution& evolution, const ManyBodyOperator& chain,
                                       const FermionFrame& frame, int l, int r, double t);

struct VelocityFit {
  std::vector<double> T;
  std::vector<long> radius;
  double v_emp = 0.0;
  double stderr_slope = 0.0;
  double intercept = 0.0;
  double threshold = 0.0;
  /// Slopes at threshold / sqrt(10) and threshold * sqrt(10); nullopt when
  /// the front is not found at that level.
  std::optional<double> v_low_threshold;
  std::optional<double> v_high_threshold;
};

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double stderr_slope = 0.0;
};

LineFit least_squares(std::span<const double> x, std::span<const double> y);

/// Front radius of |<delta_r, exp(-2iTH) delta_l>| >= threshold from the
/// window centre l, fitted linearly in T. Requires T <= window/16.
VelocityFit lr_velocity_fit(const Potential& p, const FrequencyVector& alpha, std::span<const double> x,
                            std::size_t window_size, const std::vector<double>& t_grid, double threshold = 1e-4);
VelocityFit lr_velocity_fit(const SpectralData& s, const std::vector<double>& t_grid, double threshold = 1e-4);

}  // namespace qplr
