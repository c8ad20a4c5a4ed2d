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

#include <string>
#include <vector>

#include "purestate/optimize.hpp"

namespace purestate {

enum class InitialStateMode { FullEnsemble, PartialEnsemble, ExplicitState };

/// Parsed and validated run configuration. The file format is sectioned
/// key=value text; see docs in the repository README. All unit conversions
/// (GHz/MHz/us to angular rad/us) happen when the derived objects are built,
/// not at parse time, so a parse/serialize round trip is lossless.
struct RunConfig {
  // [system] + [subsystem q]
  std::vector<SubsystemSpec> subsystems;
  std::vector<CrossKerr> crosskerr;

  // [control q]
  struct ControlSection {
    int num_splines = 10;
    std::vector<double> carrier_freqs_mhz;  // rotating frame, of Omega/2pi
    double lab_amp_bound_mhz = 0.0;         // of f/2pi; <= 0 means unbounded
  };
  std::vector<ControlSection> control;

  // [grid]
  double final_time_us = 1.0;
  int steps = 1000;

  // [target]
  int target_index = 0;
  std::string unitary_file;  // optional
  InitialStateMode initial_state = InitialStateMode::FullEnsemble;
  std::vector<int> basis_subsystems;  // for partial-ensemble
  std::string state_file;             // for explicit-state

  // [objective]
  double gamma1 = 1e-6;
  double gamma2 = 1e-2;
  double penalty_width_us = 0.1;

  // [optimizer]
  int max_iters = 100;
  int lbfgs_memory = 10;
  double grad_tol = 1e-2;
  double cost_tol = 1e-6;
  int max_line_search_trials = 30;
  double initial_amplitude_factor = 1e-2;  // times the per-coefficient bound
  unsigned seed = 1234;

  // [output]
  std::string output_dir = "out";
  int stride = 10;

  // Derived builders (unit conversion happens here).
  CompositeSystem build_system() const;
  ControlParameterization build_controls() const;
  PropagationGrid build_grid() const;
  ObjectiveSpec build_objective() const;
  OptimizerOptions build_optimizer_options(
      const ControlParameterization& param) const;
  std::vector<double> lab_amp_bounds() const;  // rad/us, per subsystem
  DenseOp build_initial_state() const;
  int dim() const;
};

RunConfig parse_config(const std::string& path);
RunConfig parse_config_text(const std::string& text, const std::string& origin);

/// Canonical text form; parse(serialize(cfg)) == cfg.
std::string serialize_config(const RunConfig& cfg);

bool operator==(const RunConfig& a, const RunConfig& b);

/// Reads a density matrix from CSV rows `re,im` in row-major order.
DenseOp read_state_csv(const std::string& path, int dim);
/// Reads a unitary from the same format.
DenseOp read_matrix_csv(const std::string& path, int dim);

}  // namespace purestate
