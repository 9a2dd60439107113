#include "qplr/linalg.hpp"

#include <lapacke.h>

#include <unistd.h>

#include <algorithm>
#include <cstdlib>
#include <cmath>
#include <string>
#include <vector>

#include "qplr/error.hpp"

namespace qplr::linalg {

namespace {

void check_info(lapack_int info, const char* routine) {
  if (info != 0) throw ConvergenceError("spectral", std::string(routine) + " failed with info " + std::to_string(info));
}

}  // namespace

RealEigensystem tridiagonal_eigensystem(std::span<const double> diag, std::span<const double> sub) {
  const lapack_int n = static_cast<lapack_int>(diag.size());
  RealEigensystem out;
  out.values = Eigen::Map<const Eigen::VectorXd>(diag.data(), n);
  if (n == 0) return out;
  std::vector<double> e(sub.begin(), sub.end());
  e.resize(std::max<lapack_int>(n - 1, 1));
  out.vectors.resize(n, n);
  check_info(LAPACKE_dstevd(LAPACK_COL_MAJOR, 'V', n, out.values.data(), e.data(), out.vectors.data(), n), "dstevd");
  return out;
}

Eigen::VectorXd tridiagonal_eigenvalues(std::span<const double> diag, std::span<const double> sub) {
  const lapack_int n = static_cast<lapack_int>(diag.size());
  Eigen::VectorXd d = Eigen::Map<const Eigen::VectorXd>(diag.data(), n);
  if (n == 0) return d;
  std::vector<double> e(sub.begin(), sub.end());
  e.resize(std::max<lapack_int>(n - 1, 1));
  check_info(LAPACKE_dsterf(n, d.data(), e.data()), "dsterf");
  return d;
}

RealEigensystem symmetric_eigensystem(Eigen::MatrixXd a, bool want_vectors) {
  const lapack_int n = static_cast<lapack_int>(a.rows());
  RealEigensystem out;
  out.values.resize(n);
  if (n == 0) return out;
  check_info(LAPACKE_dsyevd(LAPACK_COL_MAJOR, want_vectors ? 'V' : 'N', 'L', n, a.data(), n, out.values.data()),
             "dsyevd");
  if (want_vectors) out.vectors = std::move(a);
  return out;
}

HermitianEigensystem hermitian_eigensystem(Eigen::MatrixXcd a, bool want_vectors) {
  const lapack_int n = static_cast<lapack_int>(a.rows());
  HermitianEigensystem out;
  out.values.resize(n);
  if (n == 0) return out;
  check_info(LAPACKE_zheevd(LAPACK_COL_MAJOR, want_vectors ? 'V' : 'N', 'L', n,
                            reinterpret_cast<lapack_complex_double*>(a.data()), n, out.values.data()),
             "zheevd");
  if (want_vectors) out.vectors = std::move(a);
  return out;
}

double hermitian_norm(const Eigen::MatrixXcd& a) {
  if (a.size() == 0) return 0.0;
  const auto ev = hermitian_eigensystem(a, false).values;
  return std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
}

double hermitian_norm_lanczos(const Eigen::MatrixXcd& a, int steps) {
  const Eigen::Index n = a.rows();
  if (n == 0) return 0.0;
  const Eigen::Index k_max = std::min<Eigen::Index>(steps, n);
  Eigen::MatrixXcd basis(n, k_max);
  Eigen::VectorXcd v(n);
  // Deterministic start vector with support on every site.
  for (Eigen::Index i = 0; i < n; ++i) v(i) = {1.0 + 0.5 * std::sin(1.3 * static_cast<double>(i)), 0.25 * std::cos(0.7 * i)};
  v.normalize();
  std::vector<double> alpha, beta;
  Eigen::Index k = 0;
  for (; k < k_max; ++k) {
    basis.col(k) = v;
    Eigen::VectorXcd w = a * v;
    alpha.push_back(v.dot(w).real());
    // Full reorthogonalization, applied twice.
    for (int pass = 0; pass < 2; ++pass) w -= basis.leftCols(k + 1) * (basis.leftCols(k + 1).adjoint() * w);
    const double b = w.norm();
    if (k + 1 == k_max || b < 1e-13) {
      ++k;
      break;
    }
    beta.push_back(b);
    v = w / b;
  }
  const auto ritz = tridiagonal_eigenvalues(alpha, std::span<const double>(beta.data(), alpha.size() - 1));
  return std::max(std::abs(ritz(0)), std::abs(ritz(ritz.size() - 1)));
}

double spectral_norm(const Eigen::MatrixXcd& a) {
  if (a.size() == 0) return 0.0;
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(a);
  return svd.singularValues()(0);
}

double gemm_self_check() {
  constexpr Eigen::Index n = 320;
  Eigen::MatrixXd a(n, n), b(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) {
      a(i, j) = std::sin(0.37 * static_cast<double>(i) + 1.1 * static_cast<double>(j));
      b(i, j) = std::cos(0.53 * static_cast<double>(i) - 0.7 * static_cast<double>(j));
    }
  const Eigen::MatrixXd fast = a.transpose() * b;
  double worst = 0.0;
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) {
      double s = 0.0;
      for (Eigen::Index k = 0; k < n; ++k) s += a(k, i) * b(k, j);
      worst = std::max(worst, std::abs(s - fast(i, j)));
    }
  return worst;
}

bool ensure_working_blas(char** argv) {
  if (gemm_self_check() < 1e-9) return true;
  if (std::getenv("OPENBLAS_CORETYPE") == nullptr && argv != nullptr) {
    setenv("OPENBLAS_CORETYPE", "SkylakeX", 1);
    execv("/proc/self/exe", argv);
  }
  return false;
}

}  // namespace qplr::linalg
