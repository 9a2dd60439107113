#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "qplr/config.hpp"

namespace qplr {

struct VerificationReport {
  std::string config_hash;
  double q_norm = 0.0;
  double q_band_low = 0.0;
  double q_band_high = 0.0;
  double q_oscillation = 0.0;
  double q_min_singular = 0.0;
  double group_velocity_bound = 0.0;
  double dual_sup = 0.0;
  double dual_orbit_sup = 0.0;
  double d_theta = 0.0;
  bool d_theta_ambiguous = false;
  double v_emp = 0.0;
  double v_emp_stderr = 0.0;
  std::optional<double> v_emp_low_threshold;
  std::optional<double> v_emp_high_threshold;
  double covariance_max_dev = 0.0;
  int commutator_checks = 0;
  int commutator_checks_passed = 0;

  double q_vs_groupvel = 0.0;  // |q - gv| / gv
  double dual_vs_q = 0.0;      // |dual - q| / q
  double velocity_margin = 0.0;  // v_emp - (2 q - margin)
  bool pass_q_vs_groupvel = false;
  bool pass_velocity = false;
  bool pass_dual_vs_q = false;
  bool pass_chain = false;

  bool passed() const { return pass_q_vs_groupvel && pass_velocity && pass_dual_vs_q && pass_chain; }
  Json to_json() const;
};

/// spectral -> transport -> duality -> spinchain. Writes ids.csv, qnorm.csv,
/// dual.csv, lrfit.csv and report.json under out_dir. Stage failures
/// propagate as qplr::Error tagged with the stage.
VerificationReport run_verify(const ExperimentConfig& config, const std::filesystem::path& out_dir);

struct SweepEntry {
  double value = 0.0;
  VerificationReport report;
};

/// One run_verify per value of the configured axis, each into
/// out_dir/sweep_<index>; merged long-format table in out_dir/sweep.csv.
/// workers > 1 runs points concurrently; results do not depend on it.
std::vector<SweepEntry> run_sweep(const ExperimentConfig& config, const std::filesystem::path& out_dir,
                                  int workers = 1);

/// Config with the sweep axis set to value.
ExperimentConfig apply_sweep_value(const ExperimentConfig& config, const std::string& axis, double value);

struct CommandOptions {
  std::filesystem::path out_dir;
  int workers = 1;
};

/// Names of all subcommands.
const std::vector<std::string>& subcommands();

/// Runs a subcommand and returns its exit status: 0 pass, 1 check failure.
/// Numerical errors propagate as exceptions.
int run_command(const std::string& name, const ExperimentConfig& config, const CommandOptions& options);

}  // namespace qplr
