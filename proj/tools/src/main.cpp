#include <CLI11.hpp>
#include <iostream>

#include "commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"bosepath: variational formulas and path measures for interacting Bose gases"};
  app.require_subcommand(1);
  bosepath::cli::RunRequest request;
  std::string config;
  std::string out;
  std::uint64_t seed = 0;
  int threads = 0;

  for (const char* name : {"scatter", "gp", "hartree", "simulate", "ldp"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config, "INI configuration file")->required();
    sub->add_option("--out", out, "output directory");
    sub->add_option("--seed", seed, "random seed");
    sub->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  request.command = app.get_subcommands().front()->get_name();
  request.config_path = config;
  const auto* sub = app.get_subcommands().front();
  if (sub->count("--out")) request.out_dir = out;
  if (sub->count("--seed")) request.seed = seed;
  if (sub->count("--threads")) request.threads = threads;
  return bosepath::cli::run_and_report(request);
}
