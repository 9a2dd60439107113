#include "qplr/cocycle.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>

#include "qplr/error.hpp"
#include "qplr/phases.hpp"

namespace qplr {

namespace {

constexpr long kMinLength = 1000;
constexpr int kBlocks = 10;
constexpr double kMTolerance = 1e-8;

void check_phase(const Potential& p, const FrequencyVector& alpha, std::span<const double> x) {
  if (x.size() != static_cast<std::size_t>(p.dimension()))
    throw InvalidArgument("cocycle", "phase has wrong dimension");
  if (alpha.dimension() != static_cast<std::size_t>(p.dimension()))
    throw InvalidArgument("cocycle", "frequency vector dimension does not match potential");
}

Estimate batch_estimate(const std::vector<double>& blocks, double total) {
  double mean = 0.0;
  for (double b : blocks) mean += b;
  mean /= static_cast<double>(blocks.size());
  double var = 0.0;
  for (double b : blocks) var += (b - mean) * (b - mean);
  var /= static_cast<double>(blocks.size() - 1);
  return {total, std::sqrt(var / static_cast<double>(blocks.size()))};
}

}  // namespace

TransferMatrix transfer(const Potential& p, const FrequencyVector& alpha, double energy, std::span<const double> x) {
  check_phase(p, alpha, x);
  TransferMatrix s;
  s << energy - p(x), -1.0, 1.0, 0.0;
  return s;
}

TransferMatrix transfer(const Potential& p, const FrequencyVector& alpha, double energy, double x) {
  return transfer(p, alpha, energy, std::span<const double>(&x, 1));
}

CocycleTrace trace_cocycle(const Potential& p, const FrequencyVector& alpha, double energy,
                           std::span<const double> x0, long length) {
  check_phase(p, alpha, x0);
  if (length < kMinLength) throw InvalidArgument("cocycle", "cocycle length must be at least 1000");
  CocycleTrace t;
  t.energy = energy;
  t.x0.assign(x0.begin(), x0.end());
  t.length = length;
  t.block_log_norm.assign(kBlocks, 0.0);
  t.block_winding.assign(kBlocks, 0.0);

  // w = (psi_n, psi_{n-1}); one step is w <- S(x + n alpha) w.
  double a = 1.0, b = 0.0;
  for (long n = 0; n < length; ++n) {
    const double e = energy - p.along_orbit(x0, alpha, n);
    const double na = e * a - b;
    const double nb = a;
    // Projective angle increment, taken in (-pi/2, 3pi/2]: the cocycle turns
    // vectors counterclockwise by less than a full half-turn per step.
    double delta = std::atan2(a * nb - b * na, a * na + b * nb);
    if (delta < -0.5 * std::numbers::pi) delta += 2.0 * std::numbers::pi;
    const double norm = std::hypot(na, nb);
    a = na / norm;
    b = nb / norm;
    const double lg = std::log(norm);
    const auto block = static_cast<std::size_t>(n * kBlocks / length);
    t.log_norm_sum += lg;
    t.winding += delta / std::numbers::pi;
    t.block_log_norm[block] += lg;
    t.block_winding[block] += delta / std::numbers::pi;
  }
  for (int k = 0; k < kBlocks; ++k) {
    const long lo = (length * k + kBlocks - 1) / kBlocks;
    const long hi = (length * (k + 1) + kBlocks - 1) / kBlocks;
    const auto count = static_cast<double>(hi - lo);
    t.block_log_norm[k] /= count;
    t.block_winding[k] /= count;
  }
  return t;
}

Estimate lyapunov(const Potential& p, const FrequencyVector& alpha, double energy, std::span<const double> x0,
                  long length) {
  const auto t = trace_cocycle(p, alpha, energy, x0, length);
  return batch_estimate(t.block_log_norm, t.log_norm_sum / static_cast<double>(length));
}

Estimate rotation_number(const Potential& p, const FrequencyVector& alpha, double energy, std::span<const double> x0,
                         long length) {
  const auto t = trace_cocycle(p, alpha, energy, x0, length);
  // winding is in units of pi; rho = total angle / (2 pi N).
  std::vector<double> blocks = t.block_winding;
  for (double& b : blocks) b *= 0.5;
  return batch_estimate(blocks, std::clamp(0.5 * t.winding / static_cast<double>(length), 0.0, 0.5));
}

std::complex<double> m_function_unchecked(const Potential& p, const FrequencyVector& alpha, std::complex<double> z,
                                          std::span<const double> x, long depth) {
  check_phase(p, alpha, x);
  if (!(z.imag() > 0.0)) throw InvalidArgument("cocycle", "m-function needs Im z > 0");
  if (depth < 1) throw InvalidArgument("cocycle", "m-function depth must be positive");
  std::complex<double> m(0.0, 1.0);
  for (long n = depth - 1; n >= 1; --n) m = 1.0 / (p.along_orbit(x, alpha, n) - z - m);
  return m;
}

std::complex<double> m_function(const Potential& p, const FrequencyVector& alpha, std::complex<double> z,
                                std::span<const double> x, long depth) {
  if (depth < kMinLength) throw InvalidArgument("cocycle", "m-function depth must be at least 1000");
  const auto shallow = m_function_unchecked(p, alpha, z, x, depth);
  const auto deep = m_function_unchecked(p, alpha, z, x, 2 * depth);
  if (std::abs(deep - shallow) > kMTolerance * std::max(1.0, std::abs(deep)))
    throw ConvergenceError("cocycle", "m-function not converged at depth " + std::to_string(depth) +
                                          " (Im z = " + std::to_string(z.imag()) + ")");
  if (!(deep.imag() > 0.0)) throw ConvergenceError("cocycle", "m-function left the upper half-plane");
  return deep;
}

long default_m_depth(double epsilon) {
  if (!(epsilon > 0.0)) throw InvalidArgument("cocycle", "epsilon must be positive");
  return std::max(kMinLength, static_cast<long>(std::ceil(20.0 / epsilon)));
}

Estimate kotani_density(const Potential& p, const FrequencyVector& alpha, double energy,
                        const KotaniOptions& options) {
  if (!(options.epsilon >= 1e-6 && options.epsilon <= 1e-2))
    throw InvalidArgument("cocycle", "Kotani epsilon must lie in [1e-6, 1e-2]");
  if (options.phase_samples < 100) throw InvalidArgument("cocycle", "Kotani average needs at least 100 phases");
  const long depth = options.depth > 0 ? options.depth : default_m_depth(options.epsilon);
  const auto phases = sample_phases({PhaseMode::equidistributed, options.phase_samples, 0}, p.dimension());
  const std::complex<double> z(energy, options.epsilon);
  const long count = static_cast<long>(phases.size());
  std::vector<double> inv_im(phases.size());
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
  for (long j = 0; j < count; ++j) {
    try {
      inv_im[j] = 1.0 / m_function(p, alpha, z, phases[j], depth).imag();
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  // Ordered reduction: the sum does not depend on the thread schedule.
  double sum = 0.0;
  for (double v : inv_im) sum += v;
  const double mean = sum / static_cast<double>(count);
  double var = 0.0;
  for (double v : inv_im) var += (v - mean) * (v - mean);
  var /= static_cast<double>(count - 1);
  const double scale = 0.5 / std::numbers::pi;
  return {scale * mean, scale * std::sqrt(var / static_cast<double>(count))};
}

}  // namespace qplr
