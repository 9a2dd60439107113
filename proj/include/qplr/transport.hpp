#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "qplr/operators.hpp"
#include "qplr/spectral.hpp"

namespace qplr {

/// U exp(-i Lambda t) U^* psi0.
Eigen::VectorXcd evolve(const SpectralData& s, const Eigen::VectorXcd& psi0, double t);

/// <delta_r, exp(-i H t) delta_l> = sum_j exp(-i lambda_j t) U_rj conj(U_lj).
/// Sites are window coordinates.
Complex propagator_element(const SpectralData& s, long l, long r, double t);

/// Middle half of a window of n sites: rows [n/4, n/4 + n/2).
struct CentralBlock {
  Eigen::Index offset = 0;
  Eigen::Index size = 0;
  static CentralBlock of(Eigen::Index n) { return {n / 4, n / 2}; }
};

struct CesaroResult {
  double T = 0.0;
  Eigen::MatrixXcd matrix;  // empty unless requested
  double central_norm = 0.0;
  double full_norm = 0.0;
  /// Smallest |eigenvalue| of the central block, the trivial-kernel proxy.
  double min_singular = 0.0;
};

/// Exact Cesaro average Q_T = (1/T) int_0^T exp(iHt) A exp(-iHt) dt. In the
/// eigenbasis entry (j, k) of A is multiplied by phi((lambda_j - lambda_k) T),
/// phi(s) = (exp(is) - 1)/(is), phi(0) = 1. The transform of A is computed
/// once and reused for every T.
class CesaroAverager {
 public:
  CesaroAverager(const SpectralData& s, const VelocityObservable& a);

  /// Full-window norms above this size use Lanczos instead of a dense solve.
  static constexpr Eigen::Index kExactNormLimit = 1024;

  CesaroResult average(double T, bool keep_matrix = true) const;

 private:
  Eigen::MatrixXcd eigenbasis_average(double T) const;

  const SpectralData& s_;
  bool real_;
  Eigen::MatrixXd k_real_;     // U^T K U for real U, A = iK
  Eigen::MatrixXcd a_complex_;  // U^* A U otherwise
};

CesaroResult cesaro_Q(const SpectralData& s, const VelocityObservable& a, double T);

struct QNormCurve {
  std::vector<double> T;
  std::vector<double> central_norm;
  std::vector<double> full_norm;
  std::vector<double> min_singular;
  /// Median of the last quartile of the T grid and the half-width of the
  /// range over that quartile.
  double plateau = 0.0;
  double oscillation = 0.0;
  double band_low = 0.0;
  double band_high = 0.0;
};

/// Largest time allowed for a window of n sites with propagation speed
/// 2 * time_scale: n / (8 * time_scale).
double containment_limit(std::size_t window_size, double time_scale = 1.0);
void check_containment(std::size_t window_size, const std::vector<double>& times, double time_scale = 1.0);

QNormCurve q_norm_curve(const TruncatedOperator& op, const VelocityObservable& a, const std::vector<double>& t_grid);
QNormCurve q_norm_curve(const SpectralData& s, const VelocityObservable& a, const std::vector<double>& t_grid);

/// Plateau statistics of a curve sampled on an increasing T grid.
void summarize_plateau(QNormCurve& curve);

/// values(i, k) = |<delta_{sites[i]}, exp(-i time_scale t_k H) delta_l>|^2.
struct LightConeGrid {
  std::vector<double> times;
  std::vector<long> sites;
  Eigen::MatrixXd values;
};

LightConeGrid light_cone(const TruncatedOperator& op, long l, const std::vector<double>& t_grid,
                         double time_scale = 1.0);
LightConeGrid light_cone(const SpectralData& s, long l, const std::vector<double>& t_grid, double time_scale = 1.0);

/// max |r - l| with |amplitude| >= threshold at time index k; nullopt when
/// no site reaches the threshold.
std::optional<long> front_radius(const LightConeGrid& grid, long l, std::size_t k, double threshold);

/// sum_n |n - center|^p |psi(t)_n|^2, center = window center.
double position_moment(const SpectralData& s, const Eigen::VectorXcd& psi0, double t, double p);
double position_moment(const TruncatedOperator& op, const Eigen::VectorXcd& psi0, double t, double p);

/// delta at a window site.
Eigen::VectorXcd site_vector(const Window& window, long site);

}  // namespace qplr
