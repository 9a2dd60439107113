#include "qplr/runner.hpp"

#include <cmath>
#include <exception>
#include <functional>
#include <map>

#include "qplr/cocycle.hpp"
#include "qplr/duality.hpp"
#include "qplr/error.hpp"
#include "qplr/io.hpp"
#include "qplr/spectral.hpp"
#include "qplr/spinchain.hpp"
#include "qplr/transport.hpp"

namespace qplr {

namespace {

constexpr double kCovarianceTol = 1e-9;
constexpr double kDualSpectrumTol = 0.05;

namespace fs = std::filesystem;

// Runs one pipeline stage; foreign exceptions are re-raised tagged with it.
template <class F>
auto stage(const char* name, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw Error(name, e.what());
  }
}

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

// results[i] = f(inputs[i]) in parallel; the first failure by index is rethrown.
template <class T>
std::vector<T> parallel_map(std::size_t n, const std::function<T(std::size_t)>& f) {
  std::vector<T> out(n);
  std::vector<std::exception_ptr> errors(n);
  const long count = static_cast<long>(n);
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < count; ++i) {
    try {
      out[i] = f(static_cast<std::size_t>(i));
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

struct Model {
  Potential potential;
  FrequencyVector alpha;
  Window window;
};

Model model_of(const ExperimentConfig& c) {
  return stage("model", [&] { return Model{c.potential.build(), c.frequency(), Window::centered(c.window)}; });
}

std::vector<double> chain_field(const ExperimentConfig& c, const Model& m) {
  std::vector<double> nu(c.chain.n);
  for (int j = 1; j <= c.chain.n; ++j) nu[j - 1] = m.potential.along_orbit(c.x, m.alpha, j);
  return nu;
}

struct ChainSummary {
  double car = 0.0;
  double covariance = 0.0;
  int checks = 0;
  int passed = 0;
};

ChainSummary chain_checks(const ExperimentConfig& c, const Model& m) {
  return stage("spinchain", [&] {
    const auto chain = build_chain(chain_field(c, m), c.chain.n);
    const auto frame = jordan_wigner(c.chain.n);
    const ChainEvolution evolution(chain);
    ChainSummary out;
    out.car = car_residual(frame);
    for (double t : c.chain.times) {
      out.covariance = std::max(out.covariance, covariance_check(chain, frame, t));
      for (int l = 1; l <= c.chain.n; ++l)
        for (int r = l; r <= c.chain.n; ++r) {
          const auto check = commutator_bound_check(evolution, chain, frame, l, r, t);
          ++out.checks;
          if (check.bound_holds && check.element_matches) ++out.passed;
        }
    }
    return out;
  });
}

IdsTable ids_table(const ExperimentConfig& c, const Model& m) {
  return stage("spectral", [&] { return ids(m.potential, m.alpha, c.ids_window, c.sampling, resolved_e_grid(c)); });
}

std::vector<io::Row> ids_rows(const IdsTable& t) {
  std::vector<io::Row> rows;
  for (std::size_t i = 0; i < t.grid.size(); ++i) rows.push_back({t.grid[i], t.n_values[i]});
  return rows;
}

std::vector<io::Row> qnorm_rows(const QNormCurve& q) {
  std::vector<io::Row> rows;
  for (std::size_t i = 0; i < q.T.size(); ++i) rows.push_back({q.T[i], q.central_norm[i], q.full_norm[i], q.min_singular[i]});
  return rows;
}

const std::vector<std::string> kQnormColumns{"T", "central_norm", "full_norm", "min_singular"};
const std::vector<std::string> kDualColumns{"theta", "k_center", "eigenvalue", "diagonal_entry", "bulk"};

void append_dual_rows(const DualDiagonal& d, std::vector<io::Row>& rows) {
  for (std::size_t k = 0; k < d.entries.size(); ++k)
    rows.push_back({d.theta, std::lround(d.centers[k][0]), d.eigenvalues[k], d.entries[k], static_cast<long>(d.bulk[k])});
}

std::vector<io::Row> front_rows(const VelocityFit& f) {
  std::vector<io::Row> rows;
  for (std::size_t i = 0; i < f.T.size(); ++i) rows.push_back({f.T[i], f.radius[i]});
  return rows;
}

SpectralData transport_spectrum(const ExperimentConfig& c, const Model& m) {
  return stage("transport", [&] { return eigensolve(build_effective(m.potential, m.alpha, c.x, m.window)); });
}

QNormCurve qnorm_curve(const ExperimentConfig& c, const Model& m, const SpectralData& s) {
  return stage("transport", [&] { return q_norm_curve(s, build_velocity(m.window), resolved_t_grid(c)); });
}

void require_one_frequency(const ExperimentConfig& c, const char* stage_name) {
  if (c.alpha.size() != 1) throw InvalidArgument(stage_name, "this command needs a one-frequency model");
}

}  // namespace

Json VerificationReport::to_json() const {
  Json j;
  j["q_norm"] = q_norm;
  j["q_norm_band_low"] = q_band_low;
  j["q_norm_band_high"] = q_band_high;
  j["q_norm_oscillation"] = q_oscillation;
  j["q_min_singular"] = q_min_singular;
  j["group_velocity_bound"] = group_velocity_bound;
  j["lr_velocity_bound"] = 2.0 * group_velocity_bound;
  j["dual_sup"] = dual_sup;
  j["dual_orbit_sup"] = dual_orbit_sup;
  j["d_theta"] = d_theta;
  j["d_theta_ambiguous"] = d_theta_ambiguous;
  j["v_emp"] = v_emp;
  j["v_emp_stderr"] = v_emp_stderr;
  j["v_emp_low_threshold"] = optional_number(v_emp_low_threshold);
  j["v_emp_high_threshold"] = optional_number(v_emp_high_threshold);
  j["v_lower_bound"] = 2.0 * q_norm;
  j["covariance_max_dev"] = covariance_max_dev;
  j["commutator_checks"] = commutator_checks;
  j["commutator_checks_passed"] = commutator_checks_passed;
  j["q_vs_groupvel"] = q_vs_groupvel;
  j["dual_vs_q"] = dual_vs_q;
  j["velocity_margin"] = velocity_margin;
  j["pass_q_vs_groupvel"] = pass_q_vs_groupvel;
  j["pass_velocity"] = pass_velocity;
  j["pass_dual_vs_q"] = pass_dual_vs_q;
  j["pass_chain"] = pass_chain;
  j["passed"] = passed();
  return j;
}

VerificationReport run_verify(const ExperimentConfig& c, const fs::path& out_dir) {
  require_one_frequency(c, "runner");
  const io::OutputMeta meta{"verify", config_hash(c)};
  const Model m = model_of(c);
  VerificationReport r;
  r.config_hash = meta.config_hash;

  const IdsTable table = ids_table(c, m);
  const GroupVelocity gv =
      stage("spectral", [&] { return group_velocity_bound(table, c.delta_n, c.gap_filter_factor); });
  r.group_velocity_bound = gv.q_norm_bound;
  io::write_csv(out_dir / "ids.csv", meta, {"E", "N"}, ids_rows(table));

  const SpectralData s = transport_spectrum(c, m);
  const QNormCurve q = qnorm_curve(c, m, s);
  r.q_norm = q.plateau;
  r.q_band_low = q.band_low;
  r.q_band_high = q.band_high;
  r.q_oscillation = q.oscillation;
  r.q_min_singular = q.min_singular.back();
  io::write_csv(out_dir / "qnorm.csv", meta, kQnormColumns, qnorm_rows(q));

  stage("duality", [&] {
    const Box box(m.window);
    const auto dual = dual_Q_diagonal(eigensolve(build_dual(m.potential, m.alpha, c.theta, box)), m.alpha, c.theta);
    r.dual_sup = dual.bulk_sup();
    r.dual_orbit_sup = orbit_sup(dual, box, c.dual.k_max);
    const auto d = d_theta(dual, box);
    r.d_theta = d.value;
    r.d_theta_ambiguous = d.ambiguous;
    std::vector<io::Row> rows;
    append_dual_rows(dual, rows);
    io::write_csv(out_dir / "dual.csv", meta, kDualColumns, rows);
    return 0;
  });

  const VelocityFit fit =
      stage("spinchain", [&] { return lr_velocity_fit(s, resolved_lr_t_grid(c), c.front_threshold); });
  r.v_emp = fit.v_emp;
  r.v_emp_stderr = fit.stderr_slope;
  r.v_emp_low_threshold = fit.v_low_threshold;
  r.v_emp_high_threshold = fit.v_high_threshold;
  io::write_csv(out_dir / "lrfit.csv", meta, {"T", "front_radius"}, front_rows(fit));
  const ChainSummary chain = chain_checks(c, m);
  r.covariance_max_dev = chain.covariance;
  r.commutator_checks = chain.checks;
  r.commutator_checks_passed = chain.passed;

  r.q_vs_groupvel = std::abs(r.q_norm - r.group_velocity_bound) / r.group_velocity_bound;
  r.dual_vs_q = r.q_norm > 0.0 ? std::abs(r.dual_sup - r.q_norm) / r.q_norm : INFINITY;
  r.velocity_margin = r.v_emp - (2.0 * r.q_norm - c.checks.velocity_margin);
  r.pass_q_vs_groupvel = r.q_vs_groupvel < c.checks.q_vs_groupvel;
  r.pass_dual_vs_q = r.dual_vs_q < c.checks.dual_vs_q;
  r.pass_velocity = r.velocity_margin >= 0.0;
  r.pass_chain = chain.covariance < kCovarianceTol && chain.passed == chain.checks && chain.car < 1e-12;
  io::write_json(out_dir / "report.json", meta, r.to_json());
  return r;
}

ExperimentConfig apply_sweep_value(const ExperimentConfig& config, const std::string& axis, double value) {
  ExperimentConfig c = config;
  c.sweep.reset();
  if (axis == "lambda") {
    c.potential.lambda = value;
  } else if (axis == "alpha") {
    c.alpha = {value};
  } else if (axis == "window") {
    if (!(value >= 2.0) || value != std::floor(value)) throw ConfigError("config", "window sweep values must be integers >= 2");
    c.window = static_cast<std::size_t>(value);
    c.ids_window = c.window;
  } else if (axis == "phase") {
    c.x = {value};
  } else {
    throw ConfigError("config", "unknown sweep axis " + axis);
  }
  validate(c);
  return c;
}

std::vector<SweepEntry> run_sweep(const ExperimentConfig& config, const fs::path& out_dir, int workers) {
  if (!config.sweep) throw ConfigError("config", "the sweep command needs a 'sweep' section");
  const auto& axis = config.sweep->axis;
  const auto& values = config.sweep->values;
  std::vector<ExperimentConfig> configs;
  for (double v : values) configs.push_back(apply_sweep_value(config, axis, v));
  std::vector<SweepEntry> out(values.size());
  auto run_one = [&](std::size_t i) {
    out[i].value = values[i];
    out[i].report = run_verify(configs[i], out_dir / ("sweep_" + std::to_string(i)));
  };
  if (workers <= 1) {
    // Serial over points so every stage keeps its own parallel loops.
    for (std::size_t i = 0; i < values.size(); ++i) run_one(i);
  } else {
    std::vector<std::exception_ptr> errors(values.size());
    const long count = static_cast<long>(values.size());
#pragma omp parallel for schedule(dynamic) num_threads(workers)
    for (long i = 0; i < count; ++i) {
      try {
        run_one(static_cast<std::size_t>(i));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
    for (const auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  std::vector<io::Row> rows;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto j = out[i].report.to_json();
    for (const char* metric : {"q_norm", "group_velocity_bound", "dual_sup", "v_emp", "q_vs_groupvel", "dual_vs_q"})
      rows.push_back({static_cast<long>(i), axis, out[i].value, std::string(metric), j[metric].get<double>()});
    rows.push_back({static_cast<long>(i), axis, out[i].value, std::string("passed"),
                    static_cast<double>(out[i].report.passed())});
  }
  io::write_csv(out_dir / "sweep.csv", {"sweep", config_hash(config)}, {"index", "axis", "value", "metric", "metric_value"},
                rows);
  return out;
}

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names{"ids",      "groupvel", "qnorm",        "lightcone", "moments",
                                              "lyapunov", "rotation", "kotani",       "dual",      "dualcheck",
                                              "chain-verify", "lrfit", "verify",      "sweep"};
  return names;
}

int run_command(const std::string& name, const ExperimentConfig& c, const CommandOptions& options) {
  const fs::path out = options.out_dir.empty() ? fs::path(c.output_dir) : options.out_dir;
  const io::OutputMeta meta{name, config_hash(c)};

  if (name == "verify") return run_verify(c, out).passed() ? 0 : 1;

  if (name == "sweep") {
    const auto entries = run_sweep(c, out, options.workers);
    for (const auto& e : entries)
      if (!e.report.passed()) return 1;
    return 0;
  }

  const Model m = model_of(c);

  if (name == "ids") {
    io::write_csv(out / "ids.csv", meta, {"E", "N"}, ids_rows(ids_table(c, m)));
    return 0;
  }
  if (name == "groupvel") {
    const auto table = ids_table(c, m);
    const auto gv = stage("spectral", [&] { return group_velocity_bound(table, c.delta_n, c.gap_filter_factor); });
    Json j;
    j["q_norm_bound"] = gv.q_norm_bound;
    j["lr_velocity_bound"] = gv.lr_velocity_bound;
    j["deltaN"] = gv.delta_n;
    j["window"] = gv.window;
    j["phases"] = gv.phases;
    j["gap_filter_factor"] = gv.gap_filter_factor;
    j["median_slope"] = gv.median_slope;
    j["excluded_slopes"] = gv.excluded;
    j["argmax_N"] = gv.argmax_n;
    io::write_json(out / "groupvel.json", meta, j);
    return 0;
  }
  if (name == "qnorm") {
    const auto q = qnorm_curve(c, m, transport_spectrum(c, m));
    io::write_csv(out / "qnorm.csv", meta, kQnormColumns, qnorm_rows(q));
    Json j;
    j["plateau"] = q.plateau;
    j["band_low"] = q.band_low;
    j["band_high"] = q.band_high;
    j["oscillation"] = q.oscillation;
    io::write_json(out / "qnorm.json", meta, j);
    return 0;
  }
  if (name == "lightcone") {
    const auto s = transport_spectrum(c, m);
    const long l = m.window.center();
    const auto grid = stage("transport", [&] { return light_cone(s, l, resolved_t_grid(c)); });
    std::vector<io::Row> rows;
    for (std::size_t k = 0; k < grid.times.size(); ++k)
      for (std::size_t i = 0; i < grid.sites.size(); ++i)
        rows.push_back({grid.times[k], grid.sites[i] - l,
                        grid.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k))});
    io::write_csv(out / "lightcone.csv", meta, {"t", "r", "value"}, rows);
    return 0;
  }
  if (name == "moments") {
    const auto s = transport_spectrum(c, m);
    const auto psi0 = site_vector(m.window, m.window.center());
    const auto times = resolved_moment_times(c);
    std::vector<io::Row> rows;
    stage("transport", [&] {
      for (double t : times)
        for (double p : c.moments.orders) rows.push_back({t, p, position_moment(s, psi0, t, p)});
      return 0;
    });
    io::write_csv(out / "moments.csv", meta, {"t", "p", "value"}, rows);
    return 0;
  }
  if (name == "lyapunov" || name == "rotation" || name == "kotani") {
    const bool kotani = name == "kotani";
    const auto energies = kotani ? resolved_kotani_energies(c) : resolved_cocycle_energies(c);
    const KotaniOptions ko{c.kotani.epsilon, c.kotani.phase_samples, c.kotani.depth};
    const auto values = stage("cocycle", [&] {
      if (kotani) {
        // kotani_density parallelizes over phases internally.
        std::vector<Estimate> v;
        for (double e : energies) v.push_back(kotani_density(m.potential, m.alpha, e, ko));
        return v;
      }
      return parallel_map<Estimate>(energies.size(), [&](std::size_t i) {
        return name == "lyapunov" ? lyapunov(m.potential, m.alpha, energies[i], c.x, c.cocycle.length)
                                  : rotation_number(m.potential, m.alpha, energies[i], c.x, c.cocycle.length);
      });
    });
    std::vector<io::Row> rows;
    for (std::size_t i = 0; i < energies.size(); ++i)
      rows.push_back({energies[i], values[i].value, values[i].stderr_estimate});
    io::write_csv(out / (name + ".csv"), meta, {"E", "value", "stderr"}, rows);
    return 0;
  }
  if (name == "dual") {
    require_one_frequency(c, "duality");
    const auto sweep = stage("duality", [&] { return dual_theta_sweep(m.potential, m.alpha, resolved_thetas(c), Box(m.window)); });
    std::vector<io::Row> rows;
    for (const auto& d : sweep) append_dual_rows(d, rows);
    io::write_csv(out / "dual.csv", meta, kDualColumns, rows);
    return 0;
  }
  if (name == "dualcheck") {
    require_one_frequency(c, "duality");
    const double h = stage("duality", [&] {
      return dual_spectrum_check(m.potential, m.alpha, c.theta, c.x[0], c.window);
    });
    Json j;
    j["hausdorff_distance"] = h;
    j["tolerance"] = kDualSpectrumTol;
    j["passed"] = h < kDualSpectrumTol;
    io::write_json(out / "dualcheck.json", meta, j);
    return h < kDualSpectrumTol ? 0 : 1;
  }
  if (name == "chain-verify") {
    const auto chain = chain_checks(c, m);
    const bool passed = chain.covariance < kCovarianceTol && chain.passed == chain.checks && chain.car < 1e-12;
    Json j;
    j["covariance_max_dev"] = chain.covariance;
    j["commutator_checks_passed"] = chain.passed;
    j["commutator_checks"] = chain.checks;
    j["car_residual"] = chain.car;
    j["n"] = c.chain.n;
    j["passed"] = passed;
    io::write_json(out / "chain_verify.json", meta, j);
    return passed ? 0 : 1;
  }
  if (name == "lrfit") {
    const auto s = transport_spectrum(c, m);
    const auto q = qnorm_curve(c, m, s);
    const auto fit =
        stage("spinchain", [&] { return lr_velocity_fit(s, resolved_lr_t_grid(c), c.front_threshold); });
    io::write_csv(out / "lrfit.csv", meta, {"T", "front_radius"}, front_rows(fit));
    const double bound = 2.0 * q.plateau;
    const bool passed = fit.v_emp >= bound - c.checks.velocity_margin;
    Json j;
    j["v_emp"] = fit.v_emp;
    j["v_emp_stderr"] = fit.stderr_slope;
    j["threshold"] = fit.threshold;
    j["v_lower_bound"] = bound;
    j["v_emp_low_threshold"] = optional_number(fit.v_low_threshold);
    j["v_emp_high_threshold"] = optional_number(fit.v_high_threshold);
    j["passed"] = passed;
    io::write_json(out / "lrfit.json", meta, j);
    return passed ? 0 : 1;
  }
  throw ConfigError("runner", "unknown subcommand " + name);
}

}  // namespace qplr
