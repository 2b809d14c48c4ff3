// hammerstein: simulate Hammerstein datasets, identify them with KOP or LS-OP,
// and run the Monte Carlo comparison.
//
// Exit codes: 0 success, 2 invalid configuration, 3 partial estimator failures.

#include <cmath>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "hammerstein/benchmark.hpp"
#include "hammerstein/errors.hpp"
#include "hammerstein/estimators.hpp"
#include "hammerstein/io.hpp"
#include "hammerstein/model.hpp"

namespace hs = hammerstein;

namespace {

constexpr int kExitInvalidConfig = 2;
constexpr int kExitPartialFailure = 3;

struct SimulateArgs {
  int n = 30, p = 5, N = 1000;
  double snr = 10.0;
  std::uint64_t seed = 1;
  std::string out = "dataset";
};

struct IdentifyArgs {
  std::string data;
  std::string method = "kop";
  int n = 30, p = 5;
  std::uint64_t seed = 1;
  int restarts = 1;
  std::string out;
};

int do_simulate(const SimulateArgs& a) {
  hs::Rng rng = hs::substream(a.seed, 0, 0);
  const hs::HammersteinSystem sys = hs::random_system(rng, a.n, a.p);
  const hs::Vector u = hs::gaussian_input(rng, a.N);
  const double sigma2 = hs::snr_to_sigma2(sys, u, a.snr);
  hs::Dataset data = hs::simulate(sys, u, std::sqrt(sigma2), rng);
  data.snr = a.snr;

  hs::write_dataset_csv(a.out + ".csv", data);
  hs::DatasetMeta meta{a.n, a.p, a.N, a.seed, a.snr, sigma2, sys.g, sys.c, sys.tail_energy};
  std::ofstream(a.out + ".json") << hs::to_json(meta).dump(2) << '\n';
  std::cerr << "wrote " << a.out << ".csv and " << a.out << ".json\n";
  return 0;
}

int do_identify(const IdentifyArgs& a) {
  const hs::Dataset data = hs::read_dataset_csv(a.data);
  hs::EstimateReport rep;
  if (a.method == "kop") {
    hs::FitOptions opts;
    opts.restarts = a.restarts;
    rep = hs::kop_estimate(data.y, data.u, hs::BasisSet{a.p}, a.n, a.seed, opts);
  } else {
    const hs::Matrix F = hs::basis_matrix(data.u, hs::BasisSet{a.p});
    rep = hs::ls_op(data.y, hs::toeplitz_mat(F, a.n), a.n, a.p);
  }
  const std::string text = hs::to_json(rep).dump(2);
  if (a.out.empty()) {
    std::cout << text << '\n';
  } else {
    std::ofstream(a.out) << text << '\n';
  }
  return 0;
}

int do_benchmark(hs::ExperimentConfig cfg) {
  const auto outcome = hs::run_benchmark(cfg);
  std::cout << hs::summary_csv(outcome.summary);
  std::cerr << "artifacts in " << cfg.out.string() << '\n';
  if (outcome.failures > 0) {
    std::cerr << outcome.failures << " estimator run(s) failed; see runs.csv\n";
    return kExitPartialFailure;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hammerstein system identification with KOP kernels and LS-OP"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Draw a random system and emit a dataset (CSV + JSON metadata)");
  simulate->add_option("--n", sim.n, "Impulse response length")->check(CLI::PositiveNumber);
  simulate->add_option("--p", sim.p, "Number of Legendre basis functions")->check(CLI::Range(1, 11));
  simulate->add_option("--N", sim.N, "Number of samples")->check(CLI::Range(2, 100000000));
  simulate->add_option("--snr", sim.snr, "Signal-to-noise ratio")->check(CLI::PositiveNumber);
  simulate->add_option("--seed", sim.seed, "Random seed");
  simulate->add_option("--out", sim.out, "Output prefix (writes PREFIX.csv and PREFIX.json)");

  IdentifyArgs id;
  auto* identify = app.add_subcommand("identify", "Estimate (g, c) from a dataset CSV, print report JSON");
  identify->add_option("data", id.data, "Dataset CSV with header t,u,y")->required()->check(CLI::ExistingFile);
  identify->add_option("--method", id.method, "kop or lsop")->check(CLI::IsMember({"kop", "lsop"}));
  identify->add_option("--n", id.n, "Impulse response length")->check(CLI::PositiveNumber);
  identify->add_option("--p", id.p, "Number of Legendre basis functions")->check(CLI::Range(1, 11));
  identify->add_option("--seed", id.seed, "Seed for the hyperparameter initialization");
  identify->add_option("--restarts", id.restarts, "Marginal-likelihood restarts")->check(CLI::PositiveNumber);
  identify->add_option("--out", id.out, "Write the report here instead of stdout");

  hs::ExperimentConfig cfg;
  std::string config_path;
  bool paper = false;
  std::vector<double> snrs;
  std::string out_dir;
  auto* bench = app.add_subcommand("benchmark", "Monte Carlo comparison of KOP and LS-OP");
  bench->add_option("--config", config_path, "JSON config file; flags override its values")->check(CLI::ExistingFile);
  bench->add_flag("--paper-scale", paper, "200 runs per SNR over {10, 20, 50, 100}");
  bench->add_option("--runs", cfg.runs, "Runs per SNR");
  bench->add_option("--snr", snrs, "SNR value (repeatable)");
  bench->add_option("--N", cfg.N, "Samples per run");
  bench->add_option("--n", cfg.n, "Impulse response length");
  bench->add_option("--p", cfg.p, "Number of Legendre basis functions");
  bench->add_option("--seed", cfg.seed, "Master seed");
  bench->add_option("--out", out_dir, "Output directory");
  bench->add_option("--workers", cfg.workers, "Concurrent runs");
  bench->add_option("--restarts", cfg.restarts, "Marginal-likelihood restarts for KOP");
  bench->add_option("--estimators", cfg.estimators, "Subset of {kop, lsop}");
  bench->add_flag("--timings", cfg.timings, "Add a wall-time column to runs.csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitInvalidConfig;
  }

  try {
    if (*simulate) return do_simulate(sim);
    if (*identify) return do_identify(id);

    hs::ExperimentConfig effective;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      effective = hs::config_from_json(nlohmann::json::parse(in));
    }
    if (paper) effective = hs::paper_scale(effective);
    // Command-line flags win over the file.
    auto given = [&](const char* flag) { return bench->count(flag) > 0; };
    if (given("--runs")) effective.runs = cfg.runs;
    if (!snrs.empty()) effective.snr = snrs;
    if (given("--N")) effective.N = cfg.N;
    if (given("--n")) effective.n = cfg.n;
    if (given("--p")) effective.p = cfg.p;
    if (given("--seed")) effective.seed = cfg.seed;
    if (!out_dir.empty()) effective.out = out_dir;
    if (given("--workers")) effective.workers = cfg.workers;
    if (given("--restarts")) effective.restarts = cfg.restarts;
    if (given("--estimators")) effective.estimators = cfg.estimators;
    if (cfg.timings) effective.timings = true;
    hs::validate(effective);
    return do_benchmark(effective);
  } catch (const hs::InvalidArgument& e) {
    std::cerr << "invalid configuration: " << e.what() << '\n';
    return kExitInvalidConfig;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "invalid configuration: " << e.what() << '\n';
    return kExitInvalidConfig;
  } catch (const hs::Error& e) {
    std::cerr << e.code() << ": " << e.what() << '\n';
    return 1;
  }
}
