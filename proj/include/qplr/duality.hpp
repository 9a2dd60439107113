#pragma once

#include <optional>
#include <vector>

#include "qplr/operators.hpp"
#include "qplr/spectral.hpp"

namespace qplr {

/// Diagonal entries of the averaged dual velocity operator, one per
/// normalized eigenvector u_k of the dual truncation:
///   entry_k = sum_m 2 sin(2 pi (alpha.m + theta)) |u_k(m)|^2.
struct DualDiagonal {
  double theta = 0.0;
  std::vector<double> eigenvalues;
  std::vector<double> entries;
  /// Centre of mass sum_m m |u_k(m)|^2, one coordinate per axis.
  std::vector<std::vector<double>> centers;
  /// Centre in the middle half of every axis and less than kEdgeWeight of
  /// the weight in the outer quarter at either end.
  std::vector<bool> bulk;

  static constexpr double kEdgeWeight = 1e-6;

  /// max |entry| over bulk eigenvectors (0 when none).
  double bulk_sup() const;
};

DualDiagonal dual_Q_diagonal(const SpectralData& s, const FrequencyVector& alpha, double theta);

/// Eigensolve H~(theta) on the box and compute its diagonal, for each theta.
/// Parallel over theta.
std::vector<DualDiagonal> dual_theta_sweep(const Potential& p, const FrequencyVector& alpha,
                                           const std::vector<double>& thetas, const Box& box);

struct DTheta {
  double value = 0.0;
  std::size_t index = 0;  // eigenvector index
  bool ambiguous = false;
  std::optional<double> alternative;
  std::optional<std::size_t> alternative_index;
};

/// Diagonal entry of the eigenvector whose centre is nearest the given site
/// (default: the box centre). Ambiguous when the two nearest centres both lie
/// within half a site of it; both values are then returned.
DTheta d_theta(const DualDiagonal& diag, const Box& box, std::optional<std::vector<double>> target = std::nullopt);
DTheta d_theta(const SpectralData& s, const FrequencyVector& alpha, double theta);

/// sup over |k| <= K of |d(theta + k alpha)|. Shift covariance of the dual,
/// H~(theta + alpha) = translate of H~(theta), turns d(theta + k alpha) into
/// the entry of the eigenvector of H~(theta) centred nearest centre + k, so a
/// single eigensolve serves the whole orbit (1D only).
double orbit_sup(const DualDiagonal& diag, const Box& box, int k_max);

/// Hausdorff distance between the bulk spectra of H(x) and H~(theta) on
/// centred windows of the given size (d = 1). Eigenvectors carrying more than
/// half their weight in the outer 5% at either end are boundary states and
/// are dropped.
double dual_spectrum_check(const Potential& p, const FrequencyVector& alpha, double theta, double x,
                           std::size_t window_size);

/// Eigenvalues of s whose eigenvectors are not edge states in the sense above.
std::vector<double> bulk_eigenvalues(const SpectralData& s);

double hausdorff_distance(std::vector<double> a, std::vector<double> b);

}  // namespace qplr
