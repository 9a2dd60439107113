#include "qplr/reference.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qplr/phases.hpp"

namespace qplr::reference {

std::vector<double> pooled_levels(const Potential& p, const FrequencyVector& alpha, std::size_t window_size,
                                  const PhaseSampling& sampling) {
  const Window window{0, static_cast<long>(window_size) - 1};
  std::vector<double> pooled;
  for (const auto& x : sample_phases(sampling, p.dimension())) {
    const Eigen::VectorXd ev = eigenvalues(build_effective(p, alpha, x, window));
    pooled.insert(pooled.end(), ev.data(), ev.data() + ev.size());
  }
  std::sort(pooled.begin(), pooled.end());
  return pooled;
}

Estimate kotani_density(const Potential& p, const FrequencyVector& alpha, double energy,
                        const KotaniOptions& options) {
  const long depth = options.depth > 0 ? options.depth : default_m_depth(options.epsilon);
  const std::complex<double> z(energy, options.epsilon);
  std::vector<double> inv_im;
  for (const auto& x : sample_phases({PhaseMode::equidistributed, options.phase_samples, 0}, p.dimension()))
    inv_im.push_back(1.0 / m_function(p, alpha, z, x, depth).imag());
  double sum = 0.0;
  for (double v : inv_im) sum += v;
  const double mean = sum / static_cast<double>(inv_im.size());
  double var = 0.0;
  for (double v : inv_im) var += (v - mean) * (v - mean);
  var /= static_cast<double>(inv_im.size() - 1);
  const double scale = 0.5 / std::numbers::pi;
  return {scale * mean, scale * std::sqrt(var / static_cast<double>(inv_im.size()))};
}

LightConeGrid light_cone(const SpectralData& s, long l, const std::vector<double>& t_grid, double time_scale) {
  const Window& w = s.window();
  LightConeGrid grid;
  grid.times = t_grid;
  for (long site = w.first; site <= w.last; ++site) grid.sites.push_back(site);
  grid.values.resize(static_cast<Eigen::Index>(w.size()), static_cast<Eigen::Index>(t_grid.size()));
  const Eigen::VectorXcd start = site_vector(w, l);
  for (std::size_t k = 0; k < t_grid.size(); ++k)
    grid.values.col(static_cast<Eigen::Index>(k)) = evolve(s, start, time_scale * t_grid[k]).cwiseAbs2();
  return grid;
}

std::vector<DualDiagonal> dual_theta_sweep(const Potential& p, const FrequencyVector& alpha,
                                           const std::vector<double>& thetas, const Box& box) {
  std::vector<DualDiagonal> out;
  for (double theta : thetas) out.push_back(dual_Q_diagonal(eigensolve(build_dual(p, alpha, theta, box)), alpha, theta));
  return out;
}

}  // namespace qplr::reference
