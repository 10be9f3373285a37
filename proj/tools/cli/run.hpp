#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ttalab/io.hpp"
#include "ttalab/json_writer.hpp"
#include "ttalab/optimizer.hpp"
#include "ttalab/simulator.hpp"

namespace ttalab::cli {

enum class Command { estimate_gamma, optimize, prune, decompose, simulate, verify };

std::string_view to_string(Command c) noexcept;
std::optional<Command> parse_command(std::string_view name) noexcept;

enum class DecomposeWeights { uniform, projected };

enum ExitCode : int {
  kOk = 0,
  kInputError = 1,
  kNumericalFailure = 2,
  kVerificationFailure = 3,
};

inline constexpr std::uint64_t kDefaultSeed = 20211;
inline constexpr const char* kSeedEnvVar = "TTA_LAB_SEED";

struct RunConfig {
  Command command = Command::verify;
  std::optional<std::filesystem::path> input_path;
  /// Report destination; stdout when empty.
  std::optional<std::filesystem::path> output_path;
  /// Input format for data commands (default: from the extension); output
  /// format for `simulate` (default json).
  std::optional<io::Format> format;
  SolverOptions solver;
  SimulationConfig sim;
  std::size_t min_keep = 1;
  DecomposeWeights decompose_weights = DecomposeWeights::uniform;
  std::vector<std::size_t> n_grid{100, 400, 1600, 6400};

  /// Throws InvalidArgument when a data command has no input path or a
  /// nested option block is invalid.
  void validate() const;
};

/// Sweep used by `simulate` when no --rho/--rho-grid is given.
std::vector<double> default_rho_grid();

/// Seed precedence: explicit flag, then $TTA_LAB_SEED, then kDefaultSeed.
/// Throws InvalidArgument when the environment value is not an integer.
std::uint64_t resolve_seed(std::optional<std::uint64_t> flag);

struct RunResult {
  int exit_code = kOk;
  /// Report body (JSON or CSV); empty when the command failed before
  /// producing one.
  std::string report;
  /// Human-readable error, empty on success.
  std::string error;
};

/// Executes a command without touching the output path.
RunResult execute(const RunConfig& config);

/// execute() plus writing the report to output_path (or stdout) and errors to stderr.
int run(const RunConfig& config);

}  // namespace ttalab::cli
