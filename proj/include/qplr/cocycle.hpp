#pragma once

#include <Eigen/Dense>
#include <complex>
#include <span>
#include <vector>

#include "qplr/potential.hpp"

namespace qplr {

using TransferMatrix = Eigen::Matrix2d;

/// S(x) = [[E - v(x), -1], [1, 0]]; det S = 1.
TransferMatrix transfer(const Potential& p, const FrequencyVector& alpha, double energy, std::span<const double> x);
TransferMatrix transfer(const Potential& p, const FrequencyVector& alpha, double energy, double x);

/// One pass of the cocycle along x0 + j alpha, j = 0..length-1, acting on the
/// vector (psi_n, psi_{n-1}) renormalized every step.
struct CocycleTrace {
  double energy = 0.0;
  std::vector<double> x0;
  long length = 0;
  double log_norm_sum = 0.0;  // sum of log renormalization factors
  double winding = 0.0;       // accumulated projective angle / pi
  // Batch estimates (10 equal blocks) used for the stderr columns.
  std::vector<double> block_log_norm;
  std::vector<double> block_winding;
};

CocycleTrace trace_cocycle(const Potential& p, const FrequencyVector& alpha, double energy,
                           std::span<const double> x0, long length);

struct Estimate {
  double value = 0.0;
  double stderr_estimate = 0.0;
};

/// Lyapunov exponent: log_norm_sum / length.
Estimate lyapunov(const Potential& p, const FrequencyVector& alpha, double energy, std::span<const double> x0,
                  long length);
/// Fibered rotation number in [0, 1/2]; N(E) = 1 - 2 rho(E).
Estimate rotation_number(const Potential& p, const FrequencyVector& alpha, double energy, std::span<const double> x0,
                         long length);

inline Estimate lyapunov(const Potential& p, const FrequencyVector& alpha, double energy, double x0, long length) {
  return lyapunov(p, alpha, energy, std::span<const double>(&x0, 1), length);
}
inline Estimate rotation_number(const Potential& p, const FrequencyVector& alpha, double energy, double x0,
                                long length) {
  return rotation_number(p, alpha, energy, std::span<const double>(&x0, 1), length);
}

/// Right half-line Green function m(z, x) = <delta_1, (H_+ - z)^{-1} delta_1>
/// by the backward recursion m_n = 1/(v(x + n alpha) - z - m_{n+1}), seeded
/// with m_depth = i. The result is compared against a run from 2*depth and a
/// ConvergenceError is raised when they differ by more than 1e-8 (relative to
/// max(1, |m|)).
std::complex<double> m_function(const Potential& p, const FrequencyVector& alpha, std::complex<double> z,
                                std::span<const double> x, long depth);
inline std::complex<double> m_function(const Potential& p, const FrequencyVector& alpha, std::complex<double> z,
                                       double x, long depth) {
  return m_function(p, alpha, z, std::span<const double>(&x, 1), depth);
}

/// Recursion without the doubling check; exposed for the convergence test.
std::complex<double> m_function_unchecked(const Potential& p, const FrequencyVector& alpha, std::complex<double> z,
                                          std::span<const double> x, long depth);

/// Default recursion depth for a given imaginary part.
long default_m_depth(double epsilon);

struct KotaniOptions {
  double epsilon = 1e-4;
  std::size_t phase_samples = 100;
  long depth = 0;  // 0 picks default_m_depth(epsilon)
};

/// dN/dE = (1/2 pi) * mean over x of 1/Im m(E + i eps, x), x from the
/// equidistributed phase sampler. Parallel over phases with an ordered
/// reduction.
Estimate kotani_density(const Potential& p, const FrequencyVector& alpha, double energy,
                        const KotaniOptions& options = {});

}  // namespace qplr
