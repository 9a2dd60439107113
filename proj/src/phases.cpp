#include "qplr/phases.hpp"

#include <cmath>
#include <random>

#include "qplr/error.hpp"
#include "qplr/potential.hpp"

namespace qplr {

namespace {

// Unique positive root of x^(d+1) = x + 1.
double harmonious_ratio(int d) {
  double x = 2.0;
  for (int it = 0; it < 64; ++it) x = std::pow(1.0 + x, 1.0 / (d + 1));
  return x;
}

}  // namespace

std::vector<double> midpoint_grid(std::size_t count) {
  std::vector<double> out(count);
  for (std::size_t j = 0; j < count; ++j) out[j] = (static_cast<double>(j) + 0.5) / static_cast<double>(count);
  return out;
}

std::vector<std::vector<double>> sample_phases(const PhaseSampling& sampling, int dimension) {
  if (sampling.count == 0) throw InvalidArgument("spectral", "phase count must be at least 1");
  if (dimension < 1) throw InvalidArgument("spectral", "phase dimension must be positive");
  std::vector<std::vector<double>> out(sampling.count, std::vector<double>(dimension));
  if (sampling.mode == PhaseMode::random) {
    std::mt19937_64 rng(sampling.seed);
    for (auto& x : out)
      for (double& c : x) c = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return out;
  }
  if (dimension == 1) {
    const auto grid = midpoint_grid(sampling.count);
    for (std::size_t j = 0; j < sampling.count; ++j) out[j][0] = grid[j];
    return out;
  }
  const double phi = harmonious_ratio(dimension);
  std::vector<double> g(dimension);
  for (int i = 0; i < dimension; ++i) g[i] = wrap_unit(std::pow(1.0 / phi, i + 1));
  for (std::size_t j = 0; j < sampling.count; ++j)
    for (int i = 0; i < dimension; ++i) out[j][i] = wrap_unit(0.5 + static_cast<double>(j) * g[i]);
  return out;
}

}  // namespace qplr
