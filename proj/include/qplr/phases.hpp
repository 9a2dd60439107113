#pragma once

#include <cstdint>
#include <vector>

namespace qplr {

enum class PhaseMode { equidistributed, random };

struct PhaseSampling {
  PhaseMode mode = PhaseMode::equidistributed;
  std::size_t count = 32;
  std::uint64_t seed = 0;
};

/// Phase points on the d-torus. Equidistributed mode uses stratified
/// midpoints (j + 1/2)/P for d = 1 and the R_d Kronecker sequence offset by
/// 1/2 for d > 1; random mode draws from mt19937_64 with the given seed. Both
/// are bit-reproducible.
std::vector<std::vector<double>> sample_phases(const PhaseSampling& sampling, int dimension);

/// Midpoint grid (j + 1/2)/count on [0, 1).
std::vector<double> midpoint_grid(std::size_t count);

}  // namespace qplr
