#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mop/baseline.hpp"
#include "mop/solver.hpp"

namespace mop {

enum class Command { solve, sweep, compare, validate };
enum class OutputFormat { json, csv };
enum class Verdict { certified, degraded, failed };

const char* to_string(Command c);
const char* to_string(Verdict v);
Command parse_command(const std::string& s);

struct RunConfig {
  Command command = Command::solve;
  /// File path, or builtin:depolarizing:d=2,p=0.5 / builtin:random:d=2,k=4 /
  /// builtin:identity:d=2.
  std::string channel;
  int q = 2;
  int n_max = 128;
  double eig_tol = 1e-12;
  int window = 8;
  std::uint64_t seed = 1;
  std::string output_path;  // empty: stdout
  OutputFormat format = OutputFormat::json;
  int restarts = 50;
  int grid_resolution = 1000;

  /// Throws std::invalid_argument on an inconsistent configuration.
  void check() const;
};

struct LevelRow {
  int n = 0;
  std::size_t dim = 0;
  double mu = 0.0;
  std::size_t iters = 0;
  double residual = 0.0;
  double wall_ms = 0.0;
};

struct Report {
  RunConfig config;
  int d = 0;
  std::size_t kraus_count = 0;

  std::vector<LevelRow> rows;
  std::optional<ExtrapolationFit> fit;
  std::optional<double> nu_q;
  std::optional<ComplexMatrix> rho_opt;
  std::optional<double> rho_opt_value;
  std::optional<ComplexVector> input_state;
  std::optional<double> input_state_value;
  std::optional<double> local_search;
  std::optional<GridBracket> grid;
  std::optional<double> tp_deviation;  // validate only

  Verdict verdict = Verdict::failed;
  std::vector<std::string> diagnostics;
};

/// Resolves a builtin generator description or loads a channel file. `seed` feeds
/// builtin:random.
QuantumChannel resolve_channel(const std::string& source, std::uint64_t seed);

/// Executes one command. Channel and solver errors are caught and reported
/// with verdict failed; invalid configurations throw std::invalid_argument.
Report run(const RunConfig& config);

/// 0 certified, 2 degraded, 1 failed.
int exit_status(Verdict v);

std::string to_json(const Report& r);
/// Level table with header n,dim,mu,iters,residual,wall_ms followed by
/// '#'-prefixed summary lines.
std::string to_csv(const Report& r);
/// Inverse of to_json for every numeric field and the verdict.
Report report_from_json(const std::string& text);

}  // namespace mop
