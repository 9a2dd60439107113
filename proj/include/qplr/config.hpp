#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "qplr/phases.hpp"
#include "qplr/potential.hpp"

namespace qplr {

using Json = nlohmann::ordered_json;

/// Potential declaration: "amo" (lambda), "zero", "constant" (value) or
/// "fourier" with [k-vector, re, im] triples.
struct PotentialSpec {
  std::string type = "amo";
  double lambda = 0.5;
  double value = 0.0;
  int dimension = 1;
  struct Term {
    std::vector<int> k;
    double re = 0.0;
    double im = 0.0;
  };
  std::vector<Term> terms;

  Potential build() const;
};

struct KotaniConfig {
  double epsilon = 1e-4;
  std::size_t phase_samples = 100;
  long depth = 0;  // 0: default for epsilon
  std::vector<double> energies;
};

struct CocycleConfig {
  long length = 100000;
  std::vector<double> energies;
};

struct ChainConfig {
  int n = 8;
  std::vector<double> times{0.5, 1.0, 2.0};
};

struct MomentsConfig {
  std::vector<double> times;
  std::vector<double> orders{1.0, 2.0};
};

struct DualConfig {
  int k_max = 50;
  std::vector<double> thetas;  // empty: the configured theta
};

struct SweepConfig {
  std::string axis;
  std::vector<double> values;
};

/// Tolerances of the verification report.
struct CheckConfig {
  double q_vs_groupvel = 0.07;
  double velocity_margin = 0.1;
  double dual_vs_q = 0.07;
};

struct ExperimentConfig {
  PotentialSpec potential;
  std::vector<double> alpha{(2.23606797749978969640 - 1.0) / 2.0};
  bool trusted_irrational = true;
  std::vector<double> x{0.0};
  double theta = 0.1234;
  PhaseSampling sampling;
  std::size_t window = 2048;      // transport, duality and light-cone window
  std::size_t ids_window = 2048;  // per-phase window of the IDS
  std::vector<double> t_grid;     // Cesaro times, <= window/8
  std::vector<double> lr_t_grid;  // light-cone fit times, <= window/16
  std::vector<double> e_grid;
  double delta_n = 1e-3;
  double gap_filter_factor = 20.0;
  double gap_threshold = 0.02;
  double front_threshold = 1e-4;
  KotaniConfig kotani;
  CocycleConfig cocycle;
  ChainConfig chain;
  MomentsConfig moments;
  DualConfig dual;
  std::optional<SweepConfig> sweep;
  CheckConfig checks;
  std::string output_dir = "qplr_out";

  FrequencyVector frequency() const { return FrequencyVector(alpha, trusted_irrational); }
};

/// Parse and validate; unknown keys and out-of-range values raise ConfigError.
ExperimentConfig parse_config(const Json& j);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Canonical form: every field, defaults filled in, fixed key order.
Json to_json(const ExperimentConfig& c);

/// FNV-1a 64-bit hash of the canonical dump, as 16 hex digits.
std::string config_hash(const ExperimentConfig& c);

/// Re-validate after programmatic edits (sweeps, CLI overrides).
void validate(const ExperimentConfig& c);

// Grids left empty in the file resolve to defaults derived from the window
// sizes and the potential, so a window sweep rescales them.
std::vector<double> resolved_t_grid(const ExperimentConfig& c);     // window/64 .. window/8, 8 points
std::vector<double> resolved_lr_t_grid(const ExperimentConfig& c);  // window/128 .. window/16, 8 points
std::vector<double> resolved_e_grid(const ExperimentConfig& c);     // +-(2 + sup|v| + 0.1), 601 points
std::vector<double> resolved_kotani_energies(const ExperimentConfig& c);
std::vector<double> resolved_cocycle_energies(const ExperimentConfig& c);
std::vector<double> resolved_moment_times(const ExperimentConfig& c);
std::vector<double> resolved_thetas(const ExperimentConfig& c);

}  // namespace qplr
