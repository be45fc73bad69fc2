#include "cli/commands.hpp"

#include "gfront/log.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  using namespace gfront;
  CLI::App app{"gfront: reachable sets and effective fronts of the G-equation"};
  app.require_subcommand(1);
  cli::RunOptions opts;
  std::string config_path;
  app.add_option("--config", config_path, "experiment config (key = value lines)")->required();
  app.add_option("--out", opts.out_dir, "run directory")->required();
  app.add_option("--parallelism", opts.parallelism, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--master-seed", opts.master_seed, "master seed (u64)");
  app.fallthrough();
  for (const auto& name : cli::command_names()) app.add_subcommand(name);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kExitUsage;
  }
  const std::string command = app.get_subcommands().front()->get_name();
  try {
    const auto file = cli::read_config_file(config_path);
    return cli::run_command(command, file, opts);
  } catch (const cli::ConfigError& e) {
    std::cerr << "gfront " << command << ": " << e.what() << '\n';
    return cli::kExitUsage;
  } catch (const std::exception& e) {
    log::error(command, ": ", e.what());
    std::cerr << "gfront " << command << ": " << e.what() << '\n';
    return cli::kExitCheckFailed;
  }
}
