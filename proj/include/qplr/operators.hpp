#pragma once

#include <Eigen/Dense>
#include <optional>
#include <span>
#include <vector>

#include "qplr/potential.hpp"

namespace qplr {

enum class Boundary { dirichlet, periodic };

/// Integer interval [first, last].
struct Window {
  long first = 0;
  long last = -1;

  static Window centered(std::size_t size);

  std::size_t size() const noexcept { return last >= first ? static_cast<std::size_t>(last - first + 1) : 0; }
  bool contains(long n) const noexcept { return n >= first && n <= last; }
  long center() const noexcept { return first + static_cast<long>(size() / 2); }
  bool operator==(const Window&) const = default;
};

/// Product of integer intervals, a box in Z^d. Sites are linearized with the
/// last axis fastest.
class Box {
 public:
  Box() = default;
  explicit Box(std::vector<Window> axes);
  Box(Window w) : Box(std::vector<Window>{w}) {}

  std::size_t dimension() const noexcept { return axes_.size(); }
  std::size_t size() const noexcept { return size_; }
  const Window& axis(std::size_t i) const { return axes_[i]; }
  const std::vector<Window>& axes() const noexcept { return axes_; }

  std::vector<long> site(std::size_t index) const;
  /// Linear index of site m, or nullopt when outside; periodic wraps each axis.
  std::optional<std::size_t> index(std::span<const long> m, Boundary boundary) const;

 private:
  std::vector<Window> axes_;
  std::size_t size_ = 0;
};

/// Matrix element H[m, m + offset] = coefficient.
struct Hopping {
  std::vector<long> offset;
  Complex coefficient;
};

/// Finite-window restriction of H(x) or of the dual operator. Values are
/// immutable once built.
class TruncatedOperator {
 public:
  TruncatedOperator(Box box, std::vector<double> diagonal, std::vector<Hopping> hoppings,
                    Boundary boundary = Boundary::dirichlet);

  const Box& box() const noexcept { return box_; }
  /// The 1D window; throws for multi-dimensional boxes.
  const Window& window() const;
  std::size_t size() const noexcept { return box_.size(); }
  const std::vector<double>& diagonal() const noexcept { return diagonal_; }
  const std::vector<Hopping>& hoppings() const noexcept { return hoppings_; }
  Boundary boundary() const noexcept { return boundary_; }

  /// Hopping list is closed under offset -> -offset with conjugated coefficient.
  bool hermitian() const;
  bool is_real() const;
  /// 1D Dirichlet operator with real hoppings at offsets {0, +-1} only.
  bool is_real_tridiagonal() const;
  /// Diagonal including any offset-0 hopping; valid for any operator.
  std::vector<double> full_diagonal() const;
  /// Sub-diagonal H[n+1, n]; requires is_real_tridiagonal().
  std::vector<double> off_diagonal() const;

  Eigen::MatrixXcd dense() const;
  Eigen::MatrixXd dense_real() const;

 private:
  Box box_;
  std::vector<double> diagonal_;
  std::vector<Hopping> hoppings_;
  Boundary boundary_;
};

/// (A psi) restricted to a window, realized as A[n+1, n] = i, A[n, n+1] = -i.
/// A = i K with K the real antisymmetric matrix K[n+1, n] = 1, K[n, n+1] = -1.
class VelocityObservable {
 public:
  explicit VelocityObservable(Window window, Boundary boundary = Boundary::dirichlet);

  const Window& window() const noexcept { return window_; }
  Boundary boundary() const noexcept { return boundary_; }
  std::size_t size() const noexcept { return window_.size(); }

  Eigen::MatrixXcd dense() const;
  Eigen::MatrixXd generator() const;

 private:
  Window window_;
  Boundary boundary_;
};

/// H(x) on a window: diagonal v(x + n alpha), unit hopping at offset +-1.
TruncatedOperator build_effective(const Potential& p, const FrequencyVector& alpha, std::span<const double> x,
                                  Window window, Boundary boundary = Boundary::dirichlet);
TruncatedOperator build_effective(const Potential& p, const FrequencyVector& alpha, double x, Window window,
                                  Boundary boundary = Boundary::dirichlet);

/// Effective operator with a given on-site sequence (e.g. a spin-chain field).
TruncatedOperator build_effective_from_sites(std::span<const double> onsite, Window window,
                                             Boundary boundary = Boundary::dirichlet);

/// Dual operator on a box in Z^d: sum_k vhat_k psi_{m-k} + 2 cos(2 pi (alpha.m + theta)) psi_m.
TruncatedOperator build_dual(const Potential& p, const FrequencyVector& alpha, double theta, const Box& box);

VelocityObservable build_velocity(Window window, Boundary boundary = Boundary::dirichlet);

}  // namespace qplr
