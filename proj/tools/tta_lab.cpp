// tta_lab: batch front end for Gamma estimation, weight optimization,
// pruning, error/ambiguity decomposition and Monte Carlo verification.

#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "cli/run.hpp"
#include "ttalab/error.hpp"

int main(int argc, char** argv) {
  using namespace ttalab;

  CLI::App app{"tta_lab - test-time augmentation weighting and redundancy toolkit"};
  app.require_subcommand(1, 1);
  app.fallthrough();

  cli::RunConfig config;
  std::optional<std::string> input;
  std::optional<std::string> output;
  std::optional<std::string> format;
  std::optional<std::uint64_t> seed;
  std::optional<double> rho;
  std::string weights = "uniform";
  bool no_projection = false;

  app.add_option("--input", input, "Prediction file (CSV or JSON)");
  app.add_option("--output", output, "Report destination (default: stdout)");
  app.add_option("--format", format, "Input format for data commands; output format for simulate")
      ->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--ridge", config.solver.ridge_lambda,
                 "Relative ridge added to Gamma (times its mean diagonal)")
      ->capture_default_str();
  app.add_option("--condition-threshold", config.solver.conditioning_threshold,
                 "Condition number above which a solve is flagged")
      ->capture_default_str();
  app.add_flag("--no-projection", no_projection, "Report raw closed-form weights as the selection");
  app.add_option("--min-keep", config.min_keep, "Smallest number of strategies prune keeps")
      ->capture_default_str();
  app.add_option("--weights", weights, "Weights for decompose")
      ->check(CLI::IsMember({"uniform", "projected"}))
      ->capture_default_str();
  app.add_option("--rho", rho, "Pairwise residual correlation in [0, 1]");
  app.add_option("--rho-grid", config.sim.rho_grid, "Comma-separated correlations for simulate")
      ->delimiter(',');
  app.add_option("--m", config.sim.m, "Number of simulated strategies")->capture_default_str();
  app.add_option("--sigma", config.sim.sigma, "Residual scale")->capture_default_str();
  app.add_option("--n-samples", config.sim.n_samples, "Samples per trial")->capture_default_str();
  app.add_option("--n-trials", config.sim.n_trials, "Trials (repetitions for consistency)")
      ->capture_default_str();
  app.add_option("--n-grid", config.n_grid, "Comma-separated sample sizes for the consistency check")
      ->delimiter(',');
  app.add_option("--threads", config.sim.threads, "Worker threads (0 = all cores)");
  app.add_option("--seed", seed, std::string("RNG seed (fallback: $") + cli::kSeedEnvVar + ")");

  const std::map<std::string, std::string> commands{
      {"estimate-gamma", "Estimate the residual co-moment matrix"},
      {"optimize", "Closed-form and simplex-projected optimal weights"},
      {"prune", "Greedy removal of redundant augmentations"},
      {"decompose", "Error/ambiguity decomposition of the TTA risk"},
      {"simulate", "Redundancy-probability sweep over correlations"},
      {"verify", "Monte Carlo checks of the TTA risk results"},
  };
  for (const auto& [name, help] : commands) app.add_subcommand(name, help);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? cli::kOk : cli::kInputError;
  }

  try {
    config.command = *cli::parse_command(app.get_subcommands().front()->get_name());
    if (input) config.input_path = *input;
    if (output) config.output_path = *output;
    if (format) config.format = *format == "csv" ? io::Format::csv : io::Format::json;
    if (rho) {
      config.sim.rho = *rho;
      if (config.sim.rho_grid.empty()) config.sim.rho_grid = {*rho};
    }
    config.solver.projection = !no_projection;
    config.decompose_weights =
        weights == "projected" ? cli::DecomposeWeights::projected : cli::DecomposeWeights::uniform;
    config.sim.seed = cli::resolve_seed(seed);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kInputError;
  }
  return cli::run(config);
}
