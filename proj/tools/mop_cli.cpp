// mop: maximal output purity of a quantum channel.
//
//   mop solve    --channel builtin:depolarizing:d=2,p=0.5 --q 2
//   mop sweep    --channel chan.json --n-max 64 --format csv
//   mop compare  --channel builtin:random:d=2,k=4 --seed 7
//   mop validate --channel chan.json
//
// Exit status: 0 certified, 2 degraded (cross-checks disagree), 1 failure.

#include <fstream>
#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "mop/report.hpp"

int main(int argc, char** argv) {
  mop::RunConfig cfg;
  std::string command;

  CLI::App app{"Maximal output purity via symmetric-extension levels"};
  app.add_option("command", command, "solve | sweep | compare | validate")
      ->required()
      ->check(CLI::IsMember({"solve", "sweep", "compare", "validate"}));
  app.add_option("--channel", cfg.channel,
                 "Channel JSON file, or builtin:depolarizing:d=D,p=P | builtin:random:d=D,k=K | "
                 "builtin:identity:d=D")
      ->required();
  app.add_option("--q", cfg.q, "Purity order (2, 3 or 4)")->capture_default_str();
  app.add_option("--n-max", cfg.n_max, "Highest extension level")->capture_default_str();
  app.add_option("--eig-tol", cfg.eig_tol, "Eigensolver residual tolerance")
      ->capture_default_str();
  app.add_option("--window", cfg.window, "Levels used for extrapolation")->capture_default_str();
  app.add_option("--seed", cfg.seed, "RNG seed (random channels, restarts, start vectors)")
      ->capture_default_str();
  app.add_option("--out", cfg.output_path, "Output file (default stdout)");
  const std::map<std::string, mop::OutputFormat> formats{{"json", mop::OutputFormat::json},
                                                         {"csv", mop::OutputFormat::csv}};
  app.add_option("--format", cfg.format, "json | csv")
      ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
  app.add_option("--restarts", cfg.restarts, "Local-search restarts")->capture_default_str();
  app.add_option("--grid-resolution", cfg.grid_resolution, "Bloch grid points per angle (compare)")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  mop::Report report;
  try {
    cfg.command = mop::parse_command(command);
    report = mop::run(cfg);
  } catch (const std::exception& e) {
    std::cerr << "mop: " << e.what() << '\n';
    return 1;
  }

  const std::string text =
      cfg.format == mop::OutputFormat::json ? mop::to_json(report) : mop::to_csv(report);
  if (cfg.output_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(cfg.output_path);
    if (!out) {
      std::cerr << "mop: cannot write '" << cfg.output_path << "'\n";
      return 1;
    }
    out << text;
  }
  for (const auto& d : report.diagnostics) std::cerr << "mop: " << d << '\n';
  return mop::exit_status(report.verdict);
}
