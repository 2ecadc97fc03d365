#include <CLI11.hpp>

#include <iostream>

#include "lieavg/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Averaging experiments for Euler equations on Lie algebras"};
  app.require_subcommand(1);

  lieavg::cli::Options opts;
  std::string config;
  std::string out = ".";
  std::uint64_t seed = 0;
  for (const auto& name : lieavg::cli::subcommands()) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config, "configuration file")->required();
    sub->add_option("--out", out, "output directory");
    sub->add_option("--seed", seed, "random seed (overrides [run] seed)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : lieavg::cli::kConfigError;
  }

  const CLI::App* sub = app.get_subcommands().front();
  opts.config = config;
  opts.out = out;
  if (sub->count("--seed") > 0) opts.seed = seed;
  return lieavg::cli::run(sub->get_name(), opts, std::cout, std::cerr);
}
