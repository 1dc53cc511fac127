#include <string>

#include <CLI11.hpp>

#include "denf/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Decentralized runtime enforcement of LTL specifications"};

  denf::RunConfig config;
  std::string algorithm = "global";

  app.add_option("--formula", config.formula,
                 "LTL formula text, or @file to read it from a file")
      ->required();
  app.add_option("--partition", config.partition_path,
                 "partition file, one 'M<i>: a, b' line per component")
      ->required();
  app.add_option("--trace", config.trace_path, "trace file, one {a,b} event per line")
      ->required();
  app.add_option("--algorithm", algorithm, "global or local")
      ->check(CLI::IsMember({"global", "local"}));
  app.add_option("--out", config.out_path,
                 "corrected global trace file; local traces go to <out>.M<i>");
  app.add_option("--log", config.log_path, "round log file");
  app.add_option("--stats", config.stats_path, "machine-readable stats file");
  app.add_flag("--check-oracle", config.check_oracle,
               "verify the run against the brute-force oracle");
  app.add_option("--loop-bound", config.loop_bound, "oracle extension bound")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : denf::exit_code::usage;
  }

  config.algorithm =
      algorithm == "local" ? denf::Algorithm::Local : denf::Algorithm::Global;
  return denf::run(config);
}
