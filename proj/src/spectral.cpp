#include "qplr/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qplr/error.hpp"
#include "qplr/linalg.hpp"

namespace qplr {

SpectralData::SpectralData(Eigen::VectorXd values, Eigen::MatrixXd vectors, Box source)
    : values_(std::move(values)), real_vectors_(std::move(vectors)), box_(std::move(source)), real_(true) {}

SpectralData::SpectralData(Eigen::VectorXd values, Eigen::MatrixXcd vectors, Box source)
    : values_(std::move(values)), complex_vectors_(std::move(vectors)), box_(std::move(source)), real_(false) {}

const Eigen::MatrixXd& SpectralData::real_vectors() const {
  if (!real_) throw InvalidArgument("spectral", "eigenvectors are complex");
  return real_vectors_;
}

Eigen::MatrixXcd SpectralData::complex_vectors() const {
  return real_ ? Eigen::MatrixXcd(real_vectors_.cast<Complex>()) : complex_vectors_;
}

Eigen::Index SpectralData::row_of(long site) const {
  const Window& w = window();
  if (!w.contains(site)) throw InvalidArgument("transport", "site " + std::to_string(site) + " outside window");
  return static_cast<Eigen::Index>(site - w.first);
}

double SpectralData::orthonormality_residual() const {
  const auto n = static_cast<Eigen::Index>(size());
  if (real_) return (real_vectors_.transpose() * real_vectors_ - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
  return (complex_vectors_.adjoint() * complex_vectors_ - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff();
}

double SpectralData::reconstruction_residual(const TruncatedOperator& op) const {
  const Eigen::MatrixXcd u = complex_vectors();
  const Eigen::MatrixXcd rebuilt = u * values_.cast<Complex>().asDiagonal() * u.adjoint();
  return (op.dense() - rebuilt).cwiseAbs().maxCoeff();
}

SpectralData eigensolve(const TruncatedOperator& op) {
  if (!op.hermitian()) throw InvalidArgument("spectral", "operator is not Hermitian");
  if (op.is_real_tridiagonal()) {
    auto sys = linalg::tridiagonal_eigensystem(op.full_diagonal(), op.off_diagonal());
    return SpectralData(std::move(sys.values), std::move(sys.vectors), op.box());
  }
  if (op.is_real()) {
    auto sys = linalg::symmetric_eigensystem(op.dense_real(), true);
    return SpectralData(std::move(sys.values), std::move(sys.vectors), op.box());
  }
  auto sys = linalg::hermitian_eigensystem(op.dense(), true);
  return SpectralData(std::move(sys.values), std::move(sys.vectors), op.box());
}

Eigen::VectorXd eigenvalues(const TruncatedOperator& op) {
  if (!op.hermitian()) throw InvalidArgument("spectral", "operator is not Hermitian");
  if (op.is_real_tridiagonal()) return linalg::tridiagonal_eigenvalues(op.full_diagonal(), op.off_diagonal());
  if (op.is_real()) return linalg::symmetric_eigensystem(op.dense_real(), false).values;
  return linalg::hermitian_eigensystem(op.dense(), false).values;
}

IdsTable IdsTable::from_levels(std::vector<double> levels, std::size_t window_size, std::size_t phase_count,
                               std::vector<double> grid) {
  if (levels.empty()) throw InvalidArgument("spectral", "IDS table needs at least one level");
  std::sort(levels.begin(), levels.end());
  IdsTable t;
  t.levels = std::move(levels);
  t.window_size = window_size;
  t.phase_count = phase_count;
  t.grid = std::move(grid);
  std::sort(t.grid.begin(), t.grid.end());
  t.n_values.reserve(t.grid.size());
  for (double e : t.grid) t.n_values.push_back(t.count_below(e));
  return t;
}

double IdsTable::count_below(double e) const {
  const auto it = std::lower_bound(levels.begin(), levels.end(), e);
  return static_cast<double>(it - levels.begin()) / static_cast<double>(levels.size());
}

std::vector<double> linear_grid(double lo, double hi, std::size_t count) {
  std::vector<double> g(count);
  if (count == 1) {
    g[0] = lo;
    return g;
  }
  for (std::size_t i = 0; i < count; ++i)
    g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  return g;
}

std::vector<double> pooled_levels(const Potential& p, const FrequencyVector& alpha, std::size_t window_size,
                                  const PhaseSampling& sampling) {
  if (window_size < 2) throw InvalidArgument("spectral", "IDS window must have at least 2 sites");
  if (alpha.dimension() != static_cast<std::size_t>(p.dimension()))
    throw InvalidArgument("spectral", "frequency vector dimension does not match potential");
  const auto phases = sample_phases(sampling, p.dimension());
  const Window window{0, static_cast<long>(window_size) - 1};
  const long count = static_cast<long>(phases.size());
  std::vector<double> pooled(window_size * phases.size());
  // Each phase fills its own slice; the final sort makes the result
  // independent of scheduling.
#pragma omp parallel for schedule(dynamic)
  for (long j = 0; j < count; ++j) {
    const auto op = build_effective(p, alpha, phases[j], window);
    const Eigen::VectorXd ev = eigenvalues(op);
    std::copy(ev.data(), ev.data() + ev.size(), pooled.begin() + j * static_cast<long>(window_size));
  }
  std::sort(pooled.begin(), pooled.end());
  return pooled;
}

IdsTable ids(const Potential& p, const FrequencyVector& alpha, std::size_t window_size,
             const PhaseSampling& sampling, const std::vector<double>& e_grid) {
  return IdsTable::from_levels(pooled_levels(p, alpha, window_size, sampling), window_size, sampling.count, e_grid);
}

QuantileFunction::QuantileFunction(std::vector<double> levels) : levels_(std::move(levels)) {
  if (levels_.empty()) throw InvalidArgument("spectral", "empty quantile function");
}

double QuantileFunction::operator()(double n) const {
  const double m = static_cast<double>(levels_.size());
  if (n <= 0.0) return levels_.front();
  if (n >= 1.0) return levels_.back();
  // Smallest E with N(E+) >= n: the ceil(n M)-th level.
  auto k = static_cast<std::size_t>(std::ceil(n * m));
  k = std::clamp<std::size_t>(k, 1, levels_.size());
  return levels_[k - 1];
}

QuantileFunction inverse_ids(const IdsTable& table) { return QuantileFunction(table.levels); }

namespace {

double median_of(std::vector<double> v) {
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + mid, v.end());
  double m = v[mid];
  if (v.size() % 2 == 0) m = 0.5 * (m + *std::max_element(v.begin(), v.begin() + mid));
  return m;
}

}  // namespace

GroupVelocity group_velocity_bound(const IdsTable& table, double delta_n, double gap_filter_factor) {
  if (!(delta_n >= 1e-4 && delta_n <= 1e-2)) throw InvalidArgument("spectral", "deltaN must lie in [1e-4, 1e-2]");
  if (!(gap_filter_factor > 1.0)) throw InvalidArgument("spectral", "gap filter factor must exceed 1");
  const auto& lv = table.levels;
  const std::size_t m = lv.size();
  if (m < 2) throw DegenerateSpectrumError("spectral", "too few levels for a slope");

  const std::size_t block = std::clamp<std::size_t>(table.phase_count, 1, m);
  std::vector<long double> prefix(m + 1, 0.0L);
  for (std::size_t i = 0; i < m; ++i) prefix[i + 1] = prefix[i] + lv[i];
  auto smoothed = [&](double n) {
    const double start = std::round(n * static_cast<double>(m) - 0.5 * static_cast<double>(block));
    const auto lo = static_cast<std::size_t>(std::clamp(start, 0.0, static_cast<double>(m - block)));
    return static_cast<double>((prefix[lo + block] - prefix[lo]) / static_cast<long double>(block));
  };

  const auto steps = static_cast<std::size_t>(std::llround(1.0 / delta_n));
  const double h = 1.0 / static_cast<double>(steps);
  std::vector<double> slope(steps);
  double prev = smoothed(0.0);
  for (std::size_t k = 0; k < steps; ++k) {
    const double next = smoothed(static_cast<double>(k + 1) * h);
    slope[k] = (next - prev) / h;
    prev = next;
  }

  GroupVelocity out;
  out.delta_n = h;
  out.gap_filter_factor = gap_filter_factor;
  out.slopes = steps;
  out.window = table.window_size;
  out.phases = table.phase_count;
  out.median_slope = median_of(slope);
  if (!(out.median_slope > 0.0))
    throw DegenerateSpectrumError("spectral", "median slope of E(N) is zero: no continuous spectrum");

  std::vector<double> kept;
  std::vector<std::size_t> kept_at;
  for (std::size_t k = 0; k < steps; ++k) {
    if (slope[k] > gap_filter_factor * out.median_slope) continue;
    kept.push_back(slope[k]);
    kept_at.push_back(k);
  }
  out.excluded = steps - kept.size();
  if (kept.empty()) throw DegenerateSpectrumError("spectral", "every slope was classified as a gap");

  double best = -1.0;
  for (std::size_t i = 0; i < kept.size(); ++i) {
    const std::size_t lo = i >= 2 ? i - 2 : 0;
    const std::size_t hi = std::min(kept.size(), i + 3);
    const double local = median_of(std::vector<double>(kept.begin() + lo, kept.begin() + hi));
    if (local > best) {
      best = local;
      out.argmax_n = (static_cast<double>(kept_at[i]) + 0.5) * h;
    }
  }
  out.q_norm_bound = best / std::numbers::pi;
  out.lr_velocity_bound = 2.0 * out.q_norm_bound;
  return out;
}

const Gap* GapReport::largest() const {
  if (gaps.empty()) return nullptr;
  return &*std::max_element(gaps.begin(), gaps.end(), [](const Gap& a, const Gap& b) {
    return a.e_right - a.e_left < b.e_right - b.e_left;
  });
}

GapReport detect_gaps(const IdsTable& table, double threshold) {
  if (!(threshold > 0.0)) throw InvalidArgument("spectral", "gap threshold must be positive");
  if (table.grid.size() >= 2) {
    const double spacing = (table.grid.back() - table.grid.front()) / static_cast<double>(table.grid.size() - 1);
    if (threshold <= spacing) throw InvalidArgument("spectral", "gap threshold must exceed the E-grid spacing");
  }
  GapReport report;
  const auto& lv = table.levels;
  const double m = static_cast<double>(lv.size());
  for (std::size_t i = 0; i + 1 < lv.size(); ++i)
    if (lv[i + 1] - lv[i] > threshold) report.gaps.push_back({lv[i], lv[i + 1], static_cast<double>(i + 1) / m});
  return report;
}

double histogram_density(const IdsTable& table, double e, double width) {
  if (!(width > 0.0)) throw InvalidArgument("spectral", "histogram width must be positive");
  return (table.count_below(e + 0.5 * width) - table.count_below(e - 0.5 * width)) / width;
}

}  // namespace qplr
