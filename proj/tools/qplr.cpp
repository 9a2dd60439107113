#include <omp.h>

#include <cstdio>
#include <exception>
#include <string>

#include "CLI11.hpp"
#include "qplr/config.hpp"
#include "qplr/error.hpp"
#include "qplr/linalg.hpp"
#include "qplr/runner.hpp"

namespace {

constexpr int kUsageError = 2;
constexpr int kNumericalError = 3;

}  // namespace

int main(int argc, char** argv) {
  if (!qplr::linalg::ensure_working_blas(argv)) {
    std::fprintf(stderr, "qplr: BLAS self-check failed; set OPENBLAS_CORETYPE to a supported core\n");
    return kNumericalError;
  }

  CLI::App app{"Quasiperiodic XY chain transport toolkit"};
  app.set_version_flag("--version", QPLR_VERSION);
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  int workers = 1;
  std::optional<std::uint64_t> seed;
  for (const auto& name : qplr::subcommands()) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "output directory (default: output_dir of the config)");
    sub->add_option("--workers", workers, "OpenMP threads")->check(CLI::PositiveNumber);
    sub->add_option("--seed", seed, "phase sampling seed");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    auto config = qplr::load_config(config_path);
    if (seed) config.sampling.seed = *seed;
    qplr::validate(config);
    omp_set_num_threads(workers);
    qplr::CommandOptions options;
    options.out_dir = out_dir;
    options.workers = workers;
    const int status = qplr::run_command(name, config, options);
    if (status != 0) std::fprintf(stderr, "qplr %s: check failed\n", name.c_str());
    return status;
  } catch (const qplr::ConfigError& e) {
    std::fprintf(stderr, "qplr: %s\n", e.what());
    return kUsageError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "qplr: %s\n", e.what());
    return kNumericalError;
  }
}
