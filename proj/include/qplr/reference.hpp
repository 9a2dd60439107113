#pragma once

#include <vector>

#include "qplr/cocycle.hpp"
#include "qplr/duality.hpp"
#include "qplr/spectral.hpp"
#include "qplr/transport.hpp"

// Straightforward serial versions of the parallel kernels, kept for testing.
namespace qplr::reference {

std::vector<double> pooled_levels(const Potential& p, const FrequencyVector& alpha, std::size_t window_size,
                                  const PhaseSampling& sampling);

Estimate kotani_density(const Potential& p, const FrequencyVector& alpha, double energy,
                        const KotaniOptions& options = {});

/// Column k is |evolve(s, delta_l, time_scale * t_k)|^2.
LightConeGrid light_cone(const SpectralData& s, long l, const std::vector<double>& t_grid, double time_scale = 1.0);

std::vector<DualDiagonal> dual_theta_sweep(const Potential& p, const FrequencyVector& alpha,
                                           const std::vector<double>& thetas, const Box& box);

}  // namespace qplr::reference
