// Copyright 2026 The orbent Authors
// SPDX-License-Identifier: Apache-2.0

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "orbent/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"orbent: finite-N experiments for orbital free entropy"};
  app.require_subcommand(1);

  orbent::RunOptions run_opts;
  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;

  auto* run = app.add_subcommand("run", "execute a configured experiment");
  run->add_option("-c,--config", config_path, "experiment config (JSON)")
      ->required();
  run->add_option("--seed", seed, "override the config seed");
  run->add_option("--threads", threads,
                  "worker count (ORBENT_THREADS as fallback)");
  run->add_option("--out", out_dir, "output directory (default .)");

  std::string golden_dir;
  std::optional<int> verify_threads;
  auto* verify = app.add_subcommand("verify", "re-run golden cases and diff");
  verify->add_option("--golden", golden_dir, "directory of golden cases")
      ->required();
  verify->add_option("--threads", verify_threads, "worker count");

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) {
    run_opts.config_path = config_path;
    run_opts.seed_override = seed;
    run_opts.threads_override = threads;
    run_opts.out_dir = out_dir;
    return orbent::run_experiment(run_opts, std::cout);
  }
  int t = 1;
  if (verify_threads) {
    t = *verify_threads;
  } else if (const char* env = std::getenv("ORBENT_THREADS")) {
    t = std::atoi(env);
  }
  return orbent::verify_goldens(golden_dir, t, std::cout);
}
