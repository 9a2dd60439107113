#pragma once

#include <Eigen/Dense>
#include <span>

// Thin wrappers over LAPACK eigensolvers. All results are ascending.
namespace qplr::linalg {

struct RealEigensystem {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;  // columns; empty when only values were requested
};

struct HermitianEigensystem {
  Eigen::VectorXd values;
  Eigen::MatrixXcd vectors;
};

/// Symmetric tridiagonal: diag (n), sub (n-1). Divide and conquer (dstevd).
RealEigensystem tridiagonal_eigensystem(std::span<const double> diag, std::span<const double> sub);
/// Eigenvalues only (dsterf), O(n^2).
Eigen::VectorXd tridiagonal_eigenvalues(std::span<const double> diag, std::span<const double> sub);

RealEigensystem symmetric_eigensystem(Eigen::MatrixXd a, bool want_vectors = true);
HermitianEigensystem hermitian_eigensystem(Eigen::MatrixXcd a, bool want_vectors = true);

/// Operator norm of a Hermitian matrix, max |eigenvalue|, from a full
/// eigenvalue solve.
double hermitian_norm(const Eigen::MatrixXcd& a);

/// Operator norm of a Hermitian matrix by Lanczos with full
/// reorthogonalization. Returns a lower bound that converges from below.
double hermitian_norm_lanczos(const Eigen::MatrixXcd& a, int steps = 160);

/// Largest singular value of a general matrix.
double spectral_norm(const Eigen::MatrixXcd& a);

/// Max deviation of a 320 x 320 BLAS product from a plain loop. Some
/// OpenBLAS 0.3.20 kernels selected at runtime (Cooperlake) return wrong
/// products; this detects it.
double gemm_self_check();

/// For executables: when gemm_self_check fails and OPENBLAS_CORETYPE is not
/// set, re-executes the current program with OPENBLAS_CORETYPE=SkylakeX.
/// Returns false when the BLAS is still broken.
bool ensure_working_blas(char** argv);

}  // namespace qplr::linalg
