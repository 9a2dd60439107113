#include "qplr/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>

#include "qplr/error.hpp"
#include "qplr/spectral.hpp"

namespace qplr {

namespace {

[[noreturn]] void fail(const std::string& what) { throw ConfigError("config", what); }

void expect_object(const Json& j, const std::string& where) {
  if (!j.is_object()) fail(where + " must be an object");
}

void expect_keys(const Json& j, const std::set<std::string>& allowed, const std::string& where) {
  expect_object(j, where);
  for (const auto& item : j.items())
    if (!allowed.count(item.key())) fail("unknown key '" + item.key() + "' in " + where);
}

double number(const Json& j, const std::string& where) {
  if (!j.is_number()) fail(where + " must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(where + " must be finite");
  return v;
}

long integer(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) fail(where + " must be an integer");
  return j.get<long>();
}

std::size_t count(const Json& j, const std::string& where, long min) {
  const long v = integer(j, where);
  if (v < min) fail(where + " must be at least " + std::to_string(min));
  return static_cast<std::size_t>(v);
}

std::vector<double> number_list(const Json& j, const std::string& where) {
  if (!j.is_array()) fail(where + " must be an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

// Either a list of numbers or {"start", "stop", "count"}.
std::vector<double> grid(const Json& j, const std::string& where) {
  if (j.is_array()) return number_list(j, where);
  expect_keys(j, {"start", "stop", "count"}, where);
  for (const char* k : {"start", "stop", "count"})
    if (!j.contains(k)) fail(where + " needs '" + k + "'");
  return linear_grid(number(j["start"], where + ".start"), number(j["stop"], where + ".stop"),
                     count(j["count"], where + ".count", 1));
}

PotentialSpec parse_potential(const Json& j) {
  expect_keys(j, {"type", "lambda", "value", "dimension", "coefficients"}, "potential");
  if (!j.contains("type") || !j["type"].is_string()) fail("potential.type must be a string");
  PotentialSpec p;
  p.type = j["type"].get<std::string>();
  auto forbid = [&](const char* key) {
    if (j.contains(key)) fail(std::string("potential.") + key + " is not used by type '" + p.type + "'");
  };
  if (p.type == "amo") {
    if (!j.contains("lambda")) fail("potential.lambda is required for type 'amo'");
    p.lambda = number(j["lambda"], "potential.lambda");
    forbid("value");
    forbid("dimension");
    forbid("coefficients");
  } else if (p.type == "zero" || p.type == "constant") {
    if (j.contains("dimension")) p.dimension = static_cast<int>(count(j["dimension"], "potential.dimension", 1));
    if (p.type == "constant") {
      if (!j.contains("value")) fail("potential.value is required for type 'constant'");
      p.value = number(j["value"], "potential.value");
    } else {
      forbid("value");
    }
    forbid("lambda");
    forbid("coefficients");
  } else if (p.type == "fourier") {
    forbid("lambda");
    forbid("value");
    if (j.contains("dimension")) p.dimension = static_cast<int>(count(j["dimension"], "potential.dimension", 1));
    if (!j.contains("coefficients") || !j["coefficients"].is_array())
      fail("potential.coefficients must be a list of [k, re, im] triples");
    for (const auto& t : j["coefficients"]) {
      if (!t.is_array() || t.size() != 3 || !t[0].is_array())
        fail("each potential coefficient must be [k-vector, re, im]");
      PotentialSpec::Term term;
      for (const auto& c : t[0]) term.k.push_back(static_cast<int>(integer(c, "potential wavevector component")));
      term.re = number(t[1], "potential coefficient real part");
      term.im = number(t[2], "potential coefficient imaginary part");
      p.terms.push_back(std::move(term));
    }
  } else {
    fail("potential.type must be one of amo, zero, constant, fourier");
  }
  return p;
}

Json potential_json(const PotentialSpec& p) {
  Json j;
  j["type"] = p.type;
  if (p.type == "amo") j["lambda"] = p.lambda;
  if (p.type == "constant") j["value"] = p.value;
  if (p.type != "amo") j["dimension"] = p.dimension;
  if (p.type == "fourier") {
    Json list = Json::array();
    for (const auto& t : p.terms) list.push_back(Json::array({t.k, t.re, t.im}));
    j["coefficients"] = list;
  }
  return j;
}

std::vector<double> default_times(std::size_t window, double lo_div, double hi_div) {
  const double w = static_cast<double>(window);
  return linear_grid(w / lo_div, w / hi_div, 8);
}

}  // namespace

Potential PotentialSpec::build() const {
  if (type == "amo") return Potential::almost_mathieu(lambda);
  if (type == "zero") return Potential::zero(dimension);
  if (type == "constant") return Potential::constant(value, dimension);
  std::map<Wavevector, Complex> coeffs;
  for (const auto& t : terms) {
    if (static_cast<int>(t.k.size()) != dimension) fail("potential wavevector length does not match dimension");
    if (coeffs.count(t.k)) fail("potential lists a wavevector twice");
    coeffs[t.k] = Complex(t.re, t.im);
  }
  try {
    return Potential(dimension, std::move(coeffs));
  } catch (const InvalidArgument& e) {
    fail(e.what());
  }
}

ExperimentConfig parse_config(const Json& j) {
  expect_keys(j,
              {"potential", "alpha", "trusted_irrational", "phase", "sampling", "window", "ids_window", "t_grid",
               "lr_t_grid", "e_grid", "delta_n", "gap_filter_factor", "gap_threshold", "front_threshold", "kotani",
               "cocycle", "chain", "moments", "dual", "sweep", "checks", "output_dir"},
              "config");
  ExperimentConfig c;
  if (j.contains("potential")) c.potential = parse_potential(j["potential"]);
  if (j.contains("alpha")) {
    const auto& a = j["alpha"];
    if (a.is_string()) {
      if (a.get<std::string>() != "golden") fail("alpha must be a list of numbers or \"golden\"");
    } else if (a.is_number()) {
      c.alpha = {number(a, "alpha")};
    } else {
      c.alpha = number_list(a, "alpha");
    }
  }
  if (j.contains("trusted_irrational")) {
    if (!j["trusted_irrational"].is_boolean()) fail("trusted_irrational must be a boolean");
    c.trusted_irrational = j["trusted_irrational"].get<bool>();
  }
  if (j.contains("phase")) {
    const auto& p = j["phase"];
    expect_keys(p, {"x", "theta"}, "phase");
    if (p.contains("x")) c.x = p["x"].is_number() ? std::vector<double>{number(p["x"], "phase.x")}
                                                   : number_list(p["x"], "phase.x");
    if (p.contains("theta")) c.theta = number(p["theta"], "phase.theta");
  }
  if (j.contains("sampling")) {
    const auto& s = j["sampling"];
    expect_keys(s, {"mode", "count", "seed"}, "sampling");
    if (s.contains("mode")) {
      if (!s["mode"].is_string()) fail("sampling.mode must be a string");
      const auto m = s["mode"].get<std::string>();
      if (m == "equidistributed")
        c.sampling.mode = PhaseMode::equidistributed;
      else if (m == "random")
        c.sampling.mode = PhaseMode::random;
      else
        fail("sampling.mode must be equidistributed or random");
    }
    if (s.contains("count")) c.sampling.count = count(s["count"], "sampling.count", 1);
    if (s.contains("seed")) c.sampling.seed = count(s["seed"], "sampling.seed", 0);
  }
  if (j.contains("window")) c.window = count(j["window"], "window", 2);
  if (j.contains("ids_window")) c.ids_window = count(j["ids_window"], "ids_window", 2);
  if (j.contains("t_grid")) c.t_grid = grid(j["t_grid"], "t_grid");
  if (j.contains("lr_t_grid")) c.lr_t_grid = grid(j["lr_t_grid"], "lr_t_grid");
  if (j.contains("e_grid")) c.e_grid = grid(j["e_grid"], "e_grid");
  if (j.contains("delta_n")) c.delta_n = number(j["delta_n"], "delta_n");
  if (j.contains("gap_filter_factor")) c.gap_filter_factor = number(j["gap_filter_factor"], "gap_filter_factor");
  if (j.contains("gap_threshold")) c.gap_threshold = number(j["gap_threshold"], "gap_threshold");
  if (j.contains("front_threshold")) c.front_threshold = number(j["front_threshold"], "front_threshold");
  if (j.contains("kotani")) {
    const auto& k = j["kotani"];
    expect_keys(k, {"epsilon", "phase_samples", "depth", "energies"}, "kotani");
    if (k.contains("epsilon")) c.kotani.epsilon = number(k["epsilon"], "kotani.epsilon");
    if (k.contains("phase_samples")) c.kotani.phase_samples = count(k["phase_samples"], "kotani.phase_samples", 1);
    if (k.contains("depth")) c.kotani.depth = static_cast<long>(count(k["depth"], "kotani.depth", 0));
    if (k.contains("energies")) c.kotani.energies = grid(k["energies"], "kotani.energies");
  }
  if (j.contains("cocycle")) {
    const auto& k = j["cocycle"];
    expect_keys(k, {"length", "energies"}, "cocycle");
    if (k.contains("length")) c.cocycle.length = static_cast<long>(count(k["length"], "cocycle.length", 1));
    if (k.contains("energies")) c.cocycle.energies = grid(k["energies"], "cocycle.energies");
  }
  if (j.contains("chain")) {
    const auto& k = j["chain"];
    expect_keys(k, {"n", "times"}, "chain");
    if (k.contains("n")) c.chain.n = static_cast<int>(count(k["n"], "chain.n", 0));
    if (k.contains("times")) c.chain.times = grid(k["times"], "chain.times");
  }
  if (j.contains("moments")) {
    const auto& k = j["moments"];
    expect_keys(k, {"times", "orders"}, "moments");
    if (k.contains("times")) c.moments.times = grid(k["times"], "moments.times");
    if (k.contains("orders")) c.moments.orders = number_list(k["orders"], "moments.orders");
  }
  if (j.contains("dual")) {
    const auto& k = j["dual"];
    expect_keys(k, {"k_max", "thetas"}, "dual");
    if (k.contains("k_max")) c.dual.k_max = static_cast<int>(count(k["k_max"], "dual.k_max", 0));
    if (k.contains("thetas")) c.dual.thetas = grid(k["thetas"], "dual.thetas");
  }
  if (j.contains("sweep")) {
    const auto& k = j["sweep"];
    expect_keys(k, {"axis", "values"}, "sweep");
    if (!k.contains("axis") || !k["axis"].is_string()) fail("sweep.axis must be a string");
    SweepConfig s;
    s.axis = k["axis"].get<std::string>();
    if (k.contains("values")) s.values = grid(k["values"], "sweep.values");
    c.sweep = s;
  }
  if (j.contains("checks")) {
    const auto& k = j["checks"];
    expect_keys(k, {"q_vs_groupvel", "velocity_margin", "dual_vs_q"}, "checks");
    if (k.contains("q_vs_groupvel")) c.checks.q_vs_groupvel = number(k["q_vs_groupvel"], "checks.q_vs_groupvel");
    if (k.contains("velocity_margin"))
      c.checks.velocity_margin = number(k["velocity_margin"], "checks.velocity_margin");
    if (k.contains("dual_vs_q")) c.checks.dual_vs_q = number(k["dual_vs_q"], "checks.dual_vs_q");
  }
  if (j.contains("output_dir")) {
    if (!j["output_dir"].is_string()) fail("output_dir must be a string");
    c.output_dir = j["output_dir"].get<std::string>();
  }
  validate(c);
  return c;
}

void validate(const ExperimentConfig& c) {
  Potential p = c.potential.build();
  if (c.alpha.size() != static_cast<std::size_t>(p.dimension()))
    fail("alpha has " + std::to_string(c.alpha.size()) + " components, potential dimension is " +
         std::to_string(p.dimension()));
  for (double a : c.alpha)
    if (!(a > 0.0 && a < 1.0)) fail("alpha components must lie in (0,1)");
  if (c.x.size() != c.alpha.size()) fail("phase.x must have one component per frequency");
  if (c.sampling.count < 1) fail("sampling.count must be at least 1");
  if (c.window < 2 || c.ids_window < 2) fail("windows must have at least 2 sites");
  if (c.window > 16384 || c.ids_window > 100000) fail("window too large (dense path limit 16384, IDS limit 100000)");
  for (double t : c.t_grid)
    if (!(t > 0.0)) fail("t_grid values must be positive");
  for (double t : c.lr_t_grid)
    if (!(t >= 0.0)) fail("lr_t_grid values must be nonnegative");
  if (!(c.delta_n >= 1e-4 && c.delta_n <= 1e-2)) fail("delta_n must lie in [1e-4, 1e-2]");
  if (!(c.gap_filter_factor > 1.0)) fail("gap_filter_factor must exceed 1");
  if (!(c.gap_threshold > 0.0)) fail("gap_threshold must be positive");
  if (!(c.front_threshold > 0.0 && c.front_threshold < 1.0)) fail("front_threshold must lie in (0,1)");
  if (!(c.kotani.epsilon >= 1e-6 && c.kotani.epsilon <= 1e-2)) fail("kotani.epsilon must lie in [1e-6, 1e-2]");
  if (c.kotani.phase_samples < 100) fail("kotani.phase_samples must be at least 100");
  if (c.kotani.depth != 0 && c.kotani.depth < 1000) fail("kotani.depth must be 0 (automatic) or at least 1000");
  if (c.cocycle.length < 1000) fail("cocycle.length must be at least 1000");
  if (c.chain.n < 2 || c.chain.n > 12) fail("chain.n must lie in [2, 12]");
  for (double o : c.moments.orders)
    if (!(o > 0.0)) fail("moments.orders must be positive");
  if (c.sweep) {
    static const std::set<std::string> axes{"lambda", "alpha", "window", "phase"};
    if (!axes.count(c.sweep->axis)) fail("sweep.axis must be one of lambda, alpha, window, phase");
    if (c.sweep->axis == "lambda" && c.potential.type != "amo") fail("a lambda sweep needs an amo potential");
    if (c.sweep->axis == "alpha" || c.sweep->axis == "phase")
      if (c.alpha.size() != 1) fail("alpha and phase sweeps need a one-frequency model");
  }
  if (!(c.checks.q_vs_groupvel > 0.0 && c.checks.dual_vs_q > 0.0 && c.checks.velocity_margin >= 0.0))
    fail("check tolerances must be positive");
  if (c.output_dir.empty()) fail("output_dir must not be empty");
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open config file " + path.string());
  Json j;
  try {
    j = Json::parse(in, nullptr, true, false);
  } catch (const nlohmann::json::exception& e) {
    fail("cannot parse " + path.string() + ": " + e.what());
  }
  return parse_config(j);
}

Json to_json(const ExperimentConfig& c) {
  Json j;
  j["potential"] = potential_json(c.potential);
  j["alpha"] = c.alpha;
  j["trusted_irrational"] = c.trusted_irrational;
  j["phase"] = {{"x", c.x}, {"theta", c.theta}};
  j["sampling"] = {{"mode", c.sampling.mode == PhaseMode::random ? "random" : "equidistributed"},
                   {"count", c.sampling.count},
                   {"seed", c.sampling.seed}};
  j["window"] = c.window;
  j["ids_window"] = c.ids_window;
  j["t_grid"] = c.t_grid;
  j["lr_t_grid"] = c.lr_t_grid;
  j["e_grid"] = c.e_grid;
  j["delta_n"] = c.delta_n;
  j["gap_filter_factor"] = c.gap_filter_factor;
  j["gap_threshold"] = c.gap_threshold;
  j["front_threshold"] = c.front_threshold;
  j["kotani"] = {{"epsilon", c.kotani.epsilon},
                 {"phase_samples", c.kotani.phase_samples},
                 {"depth", c.kotani.depth},
                 {"energies", c.kotani.energies}};
  j["cocycle"] = {{"length", c.cocycle.length}, {"energies", c.cocycle.energies}};
  j["chain"] = {{"n", c.chain.n}, {"times", c.chain.times}};
  j["moments"] = {{"times", c.moments.times}, {"orders", c.moments.orders}};
  j["dual"] = {{"k_max", c.dual.k_max}, {"thetas", c.dual.thetas}};
  if (c.sweep) j["sweep"] = {{"axis", c.sweep->axis}, {"values", c.sweep->values}};
  j["checks"] = {{"q_vs_groupvel", c.checks.q_vs_groupvel},
                 {"velocity_margin", c.checks.velocity_margin},
                 {"dual_vs_q", c.checks.dual_vs_q}};
  j["output_dir"] = c.output_dir;
  return j;
}

std::string config_hash(const ExperimentConfig& c) {
  // The output directory does not influence any result.
  Json j = to_json(c);
  j.erase("output_dir");
  const std::string text = j.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::vector<double> resolved_t_grid(const ExperimentConfig& c) {
  return c.t_grid.empty() ? default_times(c.window, 64.0, 8.0) : c.t_grid;
}

std::vector<double> resolved_lr_t_grid(const ExperimentConfig& c) {
  return c.lr_t_grid.empty() ? default_times(c.window, 128.0, 16.0) : c.lr_t_grid;
}

std::vector<double> resolved_e_grid(const ExperimentConfig& c) {
  if (!c.e_grid.empty()) return c.e_grid;
  const double b = 2.0 + c.potential.build().sup_bound() + 0.1;
  return linear_grid(-b, b, 601);
}

std::vector<double> resolved_kotani_energies(const ExperimentConfig& c) {
  if (!c.kotani.energies.empty()) return c.kotani.energies;
  const double b = 2.0 + c.potential.build().sup_bound();
  return linear_grid(-b, b, 21);
}

std::vector<double> resolved_cocycle_energies(const ExperimentConfig& c) {
  if (!c.cocycle.energies.empty()) return c.cocycle.energies;
  const double b = 2.0 + c.potential.build().sup_bound() + 0.1;
  return linear_grid(-b, b, 201);
}

std::vector<double> resolved_moment_times(const ExperimentConfig& c) {
  return c.moments.times.empty() ? default_times(c.window, 64.0, 8.0) : c.moments.times;
}

std::vector<double> resolved_thetas(const ExperimentConfig& c) {
  return c.dual.thetas.empty() ? std::vector<double>{c.theta} : c.dual.thetas;
}

}  // namespace qplr
