#pragma once

#include <Eigen/Dense>
#include <vector>

#include "qplr/operators.hpp"
#include "qplr/phases.hpp"

namespace qplr {

/// Eigenvalues (ascending) and orthonormal eigenvectors of a truncated
/// operator. Real operators keep real eigenvectors.
class SpectralData {
 public:
  SpectralData(Eigen::VectorXd values, Eigen::MatrixXd vectors, Box source);
  SpectralData(Eigen::VectorXd values, Eigen::MatrixXcd vectors, Box source);

  std::size_t size() const noexcept { return static_cast<std::size_t>(values_.size()); }
  const Eigen::VectorXd& values() const noexcept { return values_; }
  bool is_real() const noexcept { return real_; }
  const Eigen::MatrixXd& real_vectors() const;
  /// Complex eigenvectors; real ones are promoted on the fly.
  Eigen::MatrixXcd complex_vectors() const;
  const Box& box() const noexcept { return box_; }
  const Window& window() const { return box_.axis(0); }

  /// Row index of site n in the eigenvector matrix (1D only).
  Eigen::Index row_of(long site) const;

  /// max |U^* U - I|.
  double orthonormality_residual() const;
  /// max |H - U diag(values) U^*|.
  double reconstruction_residual(const TruncatedOperator& op) const;

 private:
  Eigen::VectorXd values_;
  Eigen::MatrixXd real_vectors_;
  Eigen::MatrixXcd complex_vectors_;
  Box box_;
  bool real_;
};

SpectralData eigensolve(const TruncatedOperator& op);
/// Eigenvalues only; O(n^2) for tridiagonal operators.
Eigen::VectorXd eigenvalues(const TruncatedOperator& op);

/// Sampled integrated density of states. `levels` holds the pooled,
/// sorted eigenvalues of every sampled window, so N(E) is exact counting.
struct IdsTable {
  std::vector<double> grid;
  std::vector<double> n_values;
  std::size_t phase_count = 0;
  std::size_t window_size = 0;
  std::vector<double> levels;

  static IdsTable from_levels(std::vector<double> levels, std::size_t window_size, std::size_t phase_count,
                              std::vector<double> grid = {});

  /// Fraction of pooled levels strictly below E.
  double count_below(double e) const;
};

std::vector<double> linear_grid(double lo, double hi, std::size_t count);

/// Eigenvalues of H(x_j) on [0, window_size) for every sampled phase,
/// pooled and sorted. Parallel over phases.
std::vector<double> pooled_levels(const Potential& p, const FrequencyVector& alpha, std::size_t window_size,
                                  const PhaseSampling& sampling);

IdsTable ids(const Potential& p, const FrequencyVector& alpha, std::size_t window_size,
             const PhaseSampling& sampling, const std::vector<double>& e_grid);

/// Left-continuous quantile E(N) of an IdsTable.
class QuantileFunction {
 public:
  explicit QuantileFunction(std::vector<double> levels);
  double operator()(double n) const;
  double bottom() const { return levels_.front(); }
  double top() const { return levels_.back(); }

 private:
  std::vector<double> levels_;
};

QuantileFunction inverse_ids(const IdsTable& table);

struct GroupVelocity {
  double q_norm_bound = 0.0;       // (1/pi) ess sup dE/dN
  double lr_velocity_bound = 0.0;  // 2 * q_norm_bound
  double delta_n = 0.0;
  double gap_filter_factor = 0.0;
  double median_slope = 0.0;
  double argmax_n = 0.0;
  std::size_t slopes = 0;
  std::size_t excluded = 0;
  std::size_t window = 0;
  std::size_t phases = 0;
};

/// (1/pi) ess sup dE/dN from finite differences of E(N) at spacing delta_n.
///
/// E(N) is first averaged over one level per sampled window (a block of
/// phase_count pooled levels, the counting resolution 1/window_size); this
/// removes the staircase of a single Dirichlet spectrum without touching
/// structure at the scale delta_n. Slopes above gap_filter_factor times the
/// median slope are gap jumps and are dropped; each retained slope is then
/// replaced by the median of its five retained neighbours, which discards
/// isolated spikes from gaps too small for the global filter.
GroupVelocity group_velocity_bound(const IdsTable& table, double delta_n = 1e-3, double gap_filter_factor = 20.0);

struct Gap {
  double e_left = 0.0;
  double e_right = 0.0;
  double n_value = 0.0;
};

struct GapReport {
  std::vector<Gap> gaps;
  const Gap* largest() const;
};

/// Intervals between consecutive pooled levels wider than threshold.
GapReport detect_gaps(const IdsTable& table, double threshold);

/// Histogram estimate of dN/dE on [e - width/2, e + width/2).
double histogram_density(const IdsTable& table, double e, double width);

}  // namespace qplr
