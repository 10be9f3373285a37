#include "cli/run.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "ttalab/error.hpp"
#include "ttalab/gamma.hpp"
#include "ttalab/pruning.hpp"
#include "ttalab/risk.hpp"

namespace ttalab::cli {
namespace {

using io::ordered_json;

bool needs_input(Command c) {
  return c != Command::simulate && c != Command::verify;
}

ordered_json to_json(const Eigen::VectorXd& v) {
  return std::vector<double>(v.begin(), v.end());
}

ordered_json to_json(const Eigen::MatrixXd& m) {
  ordered_json rows = ordered_json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    const Eigen::VectorXd row = m.row(r).transpose();
    rows.push_back(to_json(row));
  }
  return rows;
}

ordered_json config_echo(const RunConfig& config) {
  ordered_json echo;
  echo["command"] = std::string(to_string(config.command));
  if (config.input_path) echo["input"] = config.input_path->string();
  if (config.format) echo["format"] = *config.format == io::Format::csv ? "csv" : "json";
  switch (config.command) {
    case Command::optimize:
      echo["ridge"] = config.solver.ridge_lambda;
      echo["conditioning_threshold"] = config.solver.conditioning_threshold;
      echo["projection"] = config.solver.projection;
      break;
    case Command::prune:
      echo["min_keep"] = config.min_keep;
      break;
    case Command::decompose:
      echo["weights"] = config.decompose_weights == DecomposeWeights::uniform ? "uniform" : "projected";
      if (config.decompose_weights == DecomposeWeights::projected) {
        echo["ridge"] = config.solver.ridge_lambda;
      }
      break;
    case Command::simulate:
    case Command::verify:
      echo["m"] = config.sim.m;
      echo["rho"] = config.sim.rho;
      echo["sigma"] = config.sim.sigma;
      echo["n_samples"] = config.sim.n_samples;
      echo["n_trials"] = config.sim.n_trials;
      if (config.command == Command::simulate) {
        echo["rho_grid"] = config.sim.rho_grid.empty() ? default_rho_grid() : config.sim.rho_grid;
      } else {
        echo["n_grid"] = config.n_grid;
      }
      break;
    case Command::estimate_gamma:
      break;
  }
  echo["seed"] = config.sim.seed;
  return echo;
}

ordered_json header(const RunConfig& config) {
  ordered_json doc;
  doc["tool"] = "tta_lab";
  doc["version"] = TTALAB_VERSION;
  doc["command"] = std::string(to_string(config.command));
  doc["seed"] = config.sim.seed;
  doc["config"] = config_echo(config);
  return doc;
}

PredictionSet load_input(const RunConfig& config) {
  const auto& path = *config.input_path;
  return io::load_predictions(path, config.format ? *config.format : io::format_from_path(path));
}

ordered_json solver_json(const SolverReport& s, const GammaMatrix& gamma) {
  ordered_json j;
  j["weights"] = to_json(s.weights.values());
  j["provenance"] = std::string(to_string(s.weights.provenance()));
  j["negative_weights_present"] = s.weights.negative_weights_present();
  j["achieved_risk"] = s.achieved_risk;
  j["risk_unregularized"] = weighted_risk(gamma, s.weights);
  j["lagrange_lambda"] = s.lagrange_lambda;
  j["condition_estimate"] = s.condition_estimate;
  j["ill_conditioned"] = s.ill_conditioned;
  j["iterations"] = s.iterations;
  return j;
}

ordered_json decision_json(const PruneDecision& d, const std::vector<std::string>& names) {
  ordered_json j;
  j["index"] = d.index_k;
  j["name"] = names[d.index_k];
  j["lhs"] = d.lhs;
  j["rhs"] = d.rhs;
  j["margin"] = d.margin();
  j["removable"] = d.removable;
  j["risk_before"] = d.risk_before;
  j["risk_after"] = d.risk_after;
  return j;
}

std::string cmd_estimate_gamma(const RunConfig& config) {
  const PredictionSet data = load_input(config);
  const GammaMatrix gamma = estimate_gamma(data);
  ordered_json doc = header(config);
  doc["augmentations"] = data.augmentation_names();
  doc["sample_count"] = gamma.sample_count();
  doc["gamma"] = to_json(gamma.entries());
  doc["min_eigenvalue"] = gamma.min_eigenvalue();
  doc["condition_number"] = condition_diagnostics(gamma);
  return io::dump_json(doc);
}

std::string cmd_optimize(const RunConfig& config) {
  const PredictionSet data = load_input(config);
  const GammaMatrix gamma = estimate_gamma(data);
  const SolverReport raw = solve_closed_form(gamma, config.solver);
  const SolverReport projected = solve_projected(gamma, config.solver);
  const WeightVector uniform = WeightVector::uniform(data.augmentation_count());

  ordered_json doc = header(config);
  doc["augmentations"] = data.augmentation_names();
  doc["sample_count"] = gamma.sample_count();
  doc["gamma"] = to_json(gamma.entries());
  doc["condition_number"] = condition_diagnostics(gamma);
  doc["uniform_risk"] = weighted_risk(gamma, uniform);
  doc["closed_form_raw"] = solver_json(raw, gamma);
  doc["closed_form_projected"] = solver_json(projected, gamma);
  const SolverReport& chosen = config.solver.projection ? projected : raw;
  doc["selected"] = std::string(to_string(chosen.weights.provenance()));
  doc["weights"] = to_json(chosen.weights.values());
  return io::dump_json(doc);
}

std::string cmd_prune(const RunConfig& config) {
  const PredictionSet data = load_input(config);
  const GammaMatrix gamma = estimate_gamma(data);
  const auto& names = data.augmentation_names();
  const auto steps = greedy_prune(gamma, config.min_keep);

  ordered_json doc = header(config);
  doc["augmentations"] = names;
  doc["initial_uniform_risk"] = uniform_risk(gamma);
  ordered_json single = ordered_json::array();
  if (gamma.size() >= 2) {
    for (std::size_t k = 0; k < gamma.size(); ++k) single.push_back(decision_json(prune_check(gamma, k), names));
  }
  doc["single_removal_checks"] = std::move(single);
  ordered_json seq = ordered_json::array();
  std::vector<bool> dropped(names.size(), false);
  for (const auto& d : steps) {
    seq.push_back(decision_json(d, names));
    dropped[d.index_k] = true;
  }
  doc["removals"] = std::move(seq);
  std::vector<std::string> kept;
  std::vector<std::size_t> kept_idx;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (!dropped[i]) {
      kept.push_back(names[i]);
      kept_idx.push_back(i);
    }
  }
  doc["kept"] = kept;
  doc["final_uniform_risk"] = uniform_risk(gamma.principal(kept_idx));
  return io::dump_json(doc);
}

std::string cmd_decompose(const RunConfig& config) {
  const PredictionSet data = load_input(config);
  const WeightVector w = config.decompose_weights == DecomposeWeights::uniform
                             ? WeightVector::uniform(data.augmentation_count())
                             : solve_projected(estimate_gamma(data), config.solver).weights;
  const DecompositionReport rep = decompose(data, w);

  ordered_json doc = header(config);
  doc["weights"] = to_json(w.values());
  doc["provenance"] = std::string(to_string(w.provenance()));
  ordered_json per = ordered_json::array();
  for (std::size_t i = 0; i < data.augmentation_count(); ++i) {
    ordered_json row;
    row["name"] = data.augmentation_names()[i];
    row["weight"] = w[i];
    row["error"] = rep.per_aug_error(static_cast<Eigen::Index>(i));
    row["ambiguity"] = rep.per_aug_ambiguity(static_cast<Eigen::Index>(i));
    per.push_back(std::move(row));
  }
  doc["per_augmentation"] = std::move(per);
  doc["weighted_error"] = rep.weighted_error;
  doc["weighted_ambiguity"] = rep.weighted_ambiguity;
  doc["total_risk"] = rep.total_risk;
  doc["direct_risk"] = direct_risk(data, w);
  return io::dump_json(doc);
}

std::string cmd_simulate(const RunConfig& config) {
  SimulationConfig sim = config.sim;
  if (sim.rho_grid.empty()) sim.rho_grid = default_rho_grid();
  const auto outcomes = removal_probability_sweep(sim);

  if (config.format == io::Format::csv) {
    std::ostringstream out;
    out << "rho,probability_holds,trials,seed\n";
    for (const auto& o : outcomes) {
      out << io::format_double(o.rho) << ',' << io::format_double(o.probability_holds) << ','
          << o.trials << ',' << sim.seed << '\n';
    }
    return out.str();
  }

  ordered_json doc = header(config);
  ordered_json rows = ordered_json::array();
  std::vector<double> curve;
  for (const auto& o : outcomes) {
    ordered_json row;
    row["rho"] = o.rho;
    row["probability_holds"] = o.probability_holds;
    row["trials"] = o.trials;
    std::string flags;
    flags.reserve(o.per_trial_flags.size());
    for (const bool f : o.per_trial_flags) flags.push_back(f ? '1' : '0');
    row["per_trial_flags"] = flags;
    rows.push_back(std::move(row));
    curve.push_back(o.probability_holds);
  }
  doc["prune_index"] = 0;
  doc["results"] = std::move(rows);
  doc["isotonic_residual"] = isotonic_residual(curve);
  return io::dump_json(doc);
}

std::string cmd_verify(const RunConfig& config, bool& all_passed) {
  const UniformBoundReport t1 = verify_uniform_bound(config.sim);
  SimulationConfig independent = config.sim;
  independent.rho = 0.0;
  // One pooled draw of n_samples * n_trials rows; a single 100-row draw is too
  // noisy for a 3-standard-error check.
  independent.n_samples = config.sim.n_samples * config.sim.n_trials;
  const IndependentRatioReport t2 = verify_independent_ratio(independent);
  const ConsistencyReport cons = verify_consistency(config.sim, config.n_grid);

  ordered_json doc = header(config);
  ordered_json j1;
  j1["trials"] = t1.trials;
  j1["violations"] = t1.violations;
  j1["max_excess"] = t1.max_excess;
  j1["mean_tta_risk"] = t1.mean_tta_risk;
  j1["mean_average_risk"] = t1.mean_average_risk;
  j1["ratio"] = t1.ratio;
  j1["passed"] = t1.passed;
  doc["uniform_bound"] = std::move(j1);

  ordered_json j2;
  j2["m"] = t2.m;
  j2["n_samples"] = t2.n_samples;
  j2["tta_risk"] = t2.tta_risk;
  j2["average_risk"] = t2.average_risk;
  j2["ratio"] = t2.ratio;
  j2["expected_ratio"] = t2.expected_ratio;
  j2["standard_error"] = t2.standard_error;
  j2["passed"] = t2.passed;
  doc["independent_ratio"] = std::move(j2);

  ordered_json j3;
  j3["n_grid"] = cons.n_grid;
  j3["expected_risk"] = cons.expected_risk;
  j3["mean_abs_deviation"] = cons.mean_abs_deviation;
  j3["steps_decreasing"] = cons.steps_decreasing;
  j3["repetitions"] = cons.deviations.size();
  j3["repetitions_passing"] = cons.repetitions_passing;
  j3["passed"] = cons.passed;
  doc["consistency"] = std::move(j3);

  all_passed = t1.passed && t2.passed && cons.passed;
  doc["passed"] = all_passed;
  return io::dump_json(doc);
}

}  // namespace

std::string_view to_string(Command c) noexcept {
  switch (c) {
    case Command::estimate_gamma: return "estimate-gamma";
    case Command::optimize: return "optimize";
    case Command::prune: return "prune";
    case Command::decompose: return "decompose";
    case Command::simulate: return "simulate";
    case Command::verify: return "verify";
  }
  return "unknown";
}

std::optional<Command> parse_command(std::string_view name) noexcept {
  for (const Command c : {Command::estimate_gamma, Command::optimize, Command::prune,
                          Command::decompose, Command::simulate, Command::verify}) {
    if (to_string(c) == name) return c;
  }
  return std::nullopt;
}

std::vector<double> default_rho_grid() {
  return {0.1, 0.2, 0.33, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.99};
}

std::uint64_t resolve_seed(std::optional<std::uint64_t> flag) {
  if (flag) return *flag;
  const char* env = std::getenv(kSeedEnvVar);
  if (env == nullptr || *env == '\0') return kDefaultSeed;
  const std::string_view text(env);
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw InvalidArgument(std::string(kSeedEnvVar) + "='" + std::string(text) +
                          "' is not an unsigned integer");
  }
  return value;
}

void RunConfig::validate() const {
  if (needs_input(command) && !input_path) {
    throw InvalidArgument(std::string(to_string(command)) + " requires --input");
  }
  solver.validate();
  sim.validate();
  if (min_keep < 1) throw InvalidArgument("--min-keep must be >= 1");
}

RunResult execute(const RunConfig& config) {
  RunResult result;
  try {
    config.validate();
    switch (config.command) {
      case Command::estimate_gamma: result.report = cmd_estimate_gamma(config); break;
      case Command::optimize: result.report = cmd_optimize(config); break;
      case Command::prune: result.report = cmd_prune(config); break;
      case Command::decompose: result.report = cmd_decompose(config); break;
      case Command::simulate: result.report = cmd_simulate(config); break;
      case Command::verify: {
        bool passed = false;
        result.report = cmd_verify(config, passed);
        if (!passed) {
          result.exit_code = kVerificationFailure;
          result.error = "verification failed; see report";
        }
        break;
      }
    }
  } catch (const ParseError& e) {
    result = {kInputError, {}, std::string(to_string(e.kind())) + ": " + e.what()};
  } catch (const SingularGamma& e) {
    result = {kNumericalFailure, {}, std::string("SingularGamma: ") + e.what()};
  } catch (const NonConvergence& e) {
    result = {kNumericalFailure, {}, std::string("NonConvergence: ") + e.what()};
  } catch (const Error& e) {
    result = {kInputError, {}, e.what()};
  }
  return result;
}

int run(const RunConfig& config) {
  const RunResult result = execute(config);
  if (!result.report.empty()) {
    if (config.output_path) {
      std::ofstream out(*config.output_path, std::ios::binary);
      if (!out) {
        std::cerr << "error: cannot write " << config.output_path->string() << '\n';
        return kInputError;
      }
      out << result.report;
    } else {
      std::cout << result.report;
    }
  }
  if (!result.error.empty()) std::cerr << "error: " << result.error << '\n';
  return result.exit_code;
}

}  // namespace ttalab::cli
