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

#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "purestate/config.hpp"

namespace purestate {

/// Coefficient CSV with rows `q,s,n,re,im`. Order is free on read; write
/// emits the canonical layout order.
ControlVector read_alpha_csv(const std::string& path,
                             const ControlParameterization& param);
void write_alpha_csv(const std::string& path,
                     const ControlParameterization& param,
                     const ControlVector& alpha);

struct RunOverrides {
  std::string alpha_file;            // initial/simulated coefficients
  std::string output_dir;            // overrides [output] directory
  std::optional<unsigned> seed;      // overrides [optimizer] seed
};

/// Propagates under the configured (or zero, if no alpha file) controls and
/// writes trajectory.csv, controls_q*.csv, final_state.csv and summary.txt.
void run_simulate(const RunConfig& cfg, const RunOverrides& overrides,
                  std::ostream& log);

/// Full optimization: writes history.csv, alpha.csv, then the simulate
/// outputs for the optimized controls.
void run_optimize(const RunConfig& cfg, const RunOverrides& overrides,
                  std::ostream& log);

/// Adjoint-versus-finite-difference audit; writes gradcheck.csv and returns
/// the worst best-eps relative error.
double run_gradcheck(const RunConfig& cfg, const RunOverrides& overrides,
                     std::ostream& log);

/// Density-matrix basis verification for n = 2..max_n. Returns true when
/// every size passes.
bool run_verify_basis(int max_n, std::ostream& log);

/// Writes spectrum_q*.csv for the given coefficients.
void run_spectrum(const RunConfig& cfg, const RunOverrides& overrides,
                  std::ostream& log);

}  // namespace purestate
