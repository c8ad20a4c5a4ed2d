// Copyright 2026 The purestate authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "purestate/run.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  purestate::RunOverrides overrides;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool need_config = true) {
  if (need_config) {
    cmd->add_option("--config", args.config_path, "Run configuration file")
        ->required();
  }
  cmd->add_option("--alpha", args.overrides.alpha_file,
                  "Control coefficient CSV (q,s,n,re,im)");
  cmd->add_option("--out", args.overrides.output_dir,
                  "Output directory (overrides [output] directory)");
  cmd->add_option("--seed", args.overrides.seed, "Random seed override");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimal control of open quantum systems with ensemble "
               "initial states"};
  app.require_subcommand(1);

  CommonArgs sim_args, opt_args, grad_args, spec_args;
  int basis_max = 6;

  CLI::App* simulate = app.add_subcommand(
      "simulate", "Propagate under given (or zero) controls");
  add_common(simulate, sim_args);

  CLI::App* optimize =
      app.add_subcommand("optimize", "Run the bound-constrained optimizer");
  add_common(optimize, opt_args);

  CLI::App* gradcheck = app.add_subcommand(
      "gradcheck", "Compare the adjoint gradient against finite differences");
  add_common(gradcheck, grad_args);

  CLI::App* verify = app.add_subcommand(
      "verify-basis", "Check the density-matrix basis invariants");
  verify->add_option("--max-dim", basis_max, "Largest dimension to check")
      ->check(CLI::Range(2, 64));

  CLI::App* spectrum = app.add_subcommand(
      "spectrum", "Write the lab-frame control spectrum");
  add_common(spectrum, spec_args);

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) {
      const purestate::RunConfig cfg =
          purestate::parse_config(sim_args.config_path);
      purestate::run_simulate(cfg, sim_args.overrides, std::cout);
    } else if (optimize->parsed()) {
      const purestate::RunConfig cfg =
          purestate::parse_config(opt_args.config_path);
      purestate::run_optimize(cfg, opt_args.overrides, std::cout);
    } else if (gradcheck->parsed()) {
      const purestate::RunConfig cfg =
          purestate::parse_config(grad_args.config_path);
      purestate::run_gradcheck(cfg, grad_args.overrides, std::cout);
    } else if (verify->parsed()) {
      if (!purestate::run_verify_basis(basis_max, std::cout)) {
        std::cerr << "verify-basis: at least one check failed\n";
        return 2;
      }
    } else if (spectrum->parsed()) {
      const purestate::RunConfig cfg =
          purestate::parse_config(spec_args.config_path);
      purestate::run_spectrum(cfg, spec_args.overrides, std::cout);
    }
  } catch (const purestate::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const purestate::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
