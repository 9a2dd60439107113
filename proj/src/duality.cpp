#include "qplr/duality.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>

#include "qplr/error.hpp"

namespace qplr {

namespace {

double distance(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

std::vector<double> box_center(const Box& box) {
  std::vector<double> c(box.dimension());
  for (std::size_t a = 0; a < box.dimension(); ++a) c[a] = static_cast<double>(box.axis(a).center());
  return c;
}

// |u_k(m)|^2, one column per eigenvector.
Eigen::MatrixXd weights(const SpectralData& s) {
  if (s.is_real()) return s.real_vectors().cwiseAbs2();
  return s.complex_vectors().cwiseAbs2();
}

}  // namespace

double DualDiagonal::bulk_sup() const {
  double best = 0.0;
  for (std::size_t k = 0; k < entries.size(); ++k)
    if (bulk[k]) best = std::max(best, std::abs(entries[k]));
  return best;
}

DualDiagonal dual_Q_diagonal(const SpectralData& s, const FrequencyVector& alpha, double theta) {
  const Box& box = s.box();
  const std::size_t d = box.dimension();
  if (alpha.dimension() != d) throw InvalidArgument("duality", "frequency dimension does not match the dual box");
  const std::size_t n = s.size();
  std::vector<double> weight_fn(n);
  std::vector<std::vector<long>> sites(n);
  for (std::size_t i = 0; i < n; ++i) {
    sites[i] = box.site(i);
    double phase = theta;
    for (std::size_t a = 0; a < d; ++a) phase += wrap_unit(static_cast<double>(sites[i][a]) * alpha[a]);
    weight_fn[i] = 2.0 * std::sin(2.0 * std::numbers::pi * wrap_unit(phase));
  }

  DualDiagonal out;
  out.theta = theta;
  out.eigenvalues.assign(s.values().data(), s.values().data() + n);
  out.entries.resize(n);
  out.centers.assign(n, std::vector<double>(d, 0.0));
  out.bulk.assign(n, false);
  const Eigen::MatrixXd all = weights(s);
  for (std::size_t k = 0; k < n; ++k) {
    const auto w = all.col(static_cast<Eigen::Index>(k));
    double entry = 0.0;
    std::vector<double> edge_low(d, 0.0), edge_high(d, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      entry += weight_fn[i] * w(static_cast<Eigen::Index>(i));
      for (std::size_t a = 0; a < d; ++a) {
        const Window& ax = box.axis(a);
        const long quarter = static_cast<long>(ax.size() / 4);
        out.centers[k][a] += static_cast<double>(sites[i][a]) * w(static_cast<Eigen::Index>(i));
        if (sites[i][a] < ax.first + quarter) edge_low[a] += w(static_cast<Eigen::Index>(i));
        if (sites[i][a] > ax.last - quarter) edge_high[a] += w(static_cast<Eigen::Index>(i));
      }
    }
    out.entries[k] = entry;
    bool bulk = true;
    for (std::size_t a = 0; a < d; ++a) {
      const Window& ax = box.axis(a);
      const double quarter = static_cast<double>(ax.size()) / 4.0;
      const double c = out.centers[k][a];
      if (c < ax.first + quarter || c > ax.last - quarter) bulk = false;
      if (edge_low[a] > DualDiagonal::kEdgeWeight || edge_high[a] > DualDiagonal::kEdgeWeight) bulk = false;
    }
    out.bulk[k] = bulk;
  }
  return out;
}

std::vector<DualDiagonal> dual_theta_sweep(const Potential& p, const FrequencyVector& alpha,
                                           const std::vector<double>& thetas, const Box& box) {
  std::vector<DualDiagonal> out(thetas.size());
  const long count = static_cast<long>(thetas.size());
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
  for (long j = 0; j < count; ++j) {
    try {
      out[j] = dual_Q_diagonal(eigensolve(build_dual(p, alpha, thetas[j], box)), alpha, thetas[j]);
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

DTheta d_theta(const DualDiagonal& diag, const Box& box, std::optional<std::vector<double>> target) {
  if (diag.entries.empty()) throw InvalidArgument("duality", "dual diagonal is empty");
  const std::vector<double> c = target ? *target : box_center(box);
  if (c.size() != box.dimension()) throw InvalidArgument("duality", "target site has wrong dimension");
  std::size_t first = 0, second = 0;
  double d1 = std::numeric_limits<double>::infinity(), d2 = d1;
  for (std::size_t k = 0; k < diag.entries.size(); ++k) {
    const double dk = distance(diag.centers[k], c);
    if (dk < d1) {
      second = first;
      d2 = d1;
      first = k;
      d1 = dk;
    } else if (dk < d2) {
      second = k;
      d2 = dk;
    }
  }
  DTheta out;
  out.value = diag.entries[first];
  out.index = first;
  if (diag.entries.size() > 1 && d1 < 0.5 && d2 < 0.5) {
    out.ambiguous = true;
    out.alternative = diag.entries[second];
    out.alternative_index = second;
  }
  return out;
}

DTheta d_theta(const SpectralData& s, const FrequencyVector& alpha, double theta) {
  return d_theta(dual_Q_diagonal(s, alpha, theta), s.box());
}

double orbit_sup(const DualDiagonal& diag, const Box& box, int k_max) {
  if (box.dimension() != 1) throw InvalidArgument("duality", "orbit sup is implemented for d = 1");
  if (k_max < 0) throw InvalidArgument("duality", "orbit radius must be nonnegative");
  const double c0 = static_cast<double>(box.axis(0).center());
  if (2.0 * k_max + 1.0 > static_cast<double>(box.size()) / 2.0)
    throw InvalidArgument("duality", "orbit radius exceeds the bulk of the dual window");
  double best = 0.0;
  for (int k = -k_max; k <= k_max; ++k)
    best = std::max(best, std::abs(d_theta(diag, box, std::vector<double>{c0 + k}).value));
  return best;
}

std::vector<double> bulk_eigenvalues(const SpectralData& s) {
  if (s.box().dimension() != 1) throw InvalidArgument("duality", "bulk filter is implemented for d = 1");
  const Eigen::Index n = static_cast<Eigen::Index>(s.size());
  const Eigen::Index edge = std::max<Eigen::Index>(1, n / 20);
  const Eigen::MatrixXd w = weights(s);
  std::vector<double> out;
  for (Eigen::Index k = 0; k < n; ++k) {
    const double low = w.col(k).head(edge).sum(), high = w.col(k).tail(edge).sum();
    if (low > 0.5 || high > 0.5) continue;
    out.push_back(s.values()(k));
  }
  return out;
}

double hausdorff_distance(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw InvalidArgument("duality", "Hausdorff distance of an empty set");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  auto directed = [](const std::vector<double>& from, const std::vector<double>& to) {
    double worst = 0.0;
    for (double v : from) {
      const auto it = std::lower_bound(to.begin(), to.end(), v);
      double best = std::numeric_limits<double>::infinity();
      if (it != to.end()) best = *it - v;
      if (it != to.begin()) best = std::min(best, v - *std::prev(it));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(directed(a, b), directed(b, a));
}

double dual_spectrum_check(const Potential& p, const FrequencyVector& alpha, double theta, double x,
                           std::size_t window_size) {
  if (p.dimension() != 1) throw InvalidArgument("duality", "spectrum check is implemented for d = 1");
  const Window w = Window::centered(window_size);
  const auto direct = bulk_eigenvalues(eigensolve(build_effective(p, alpha, x, w)));
  const auto dual = bulk_eigenvalues(eigensolve(build_dual(p, alpha, theta, Box(w))));
  return hausdorff_distance(direct, dual);
}

}  // namespace qplr
