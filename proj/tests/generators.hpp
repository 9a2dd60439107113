#pragma once

#include <gtest/gtest.h>

#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <string>

#include <Eigen/Dense>

#include "qplr/potential.hpp"

// Hand-rolled property generators: each case draws from a seeded engine and
// the seed is attached to any failure.
namespace gen {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  long integer(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng_); }

  Eigen::MatrixXcd hermitian(int n, double scale = 1.0) {
    Eigen::MatrixXcd m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = {uniform(-scale, scale), uniform(-scale, scale)};
    return (m + m.adjoint()) / 2.0;
  }

  // Real trigonometric polynomial of degree <= max_k in one variable.
  qplr::Potential potential(int max_k, double scale) {
    std::map<qplr::Wavevector, qplr::Complex> c;
    c[{0}] = uniform(-scale, scale);
    for (int k = 1; k <= max_k; ++k) {
      const qplr::Complex v(uniform(-scale, scale), uniform(-scale, scale));
      c[{k}] = v;
      c[{-k}] = std::conj(v);
    }
    return qplr::Potential(1, std::move(c));
  }

 private:
  std::mt19937_64 rng_;
};

inline void for_all(int cases, std::uint64_t seed, const std::function<void(Gen&)>& property) {
  for (int i = 0; i < cases; ++i) {
    const std::uint64_t s = seed + static_cast<std::uint64_t>(i);
    SCOPED_TRACE("property seed " + std::to_string(s));
    Gen g(s);
    property(g);
    if (::testing::Test::HasFatalFailure()) return;
  }
}

}  // namespace gen
