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

#include "purestate/objective.hpp"

namespace purestate {

/// Everything one cost/gradient evaluation needs. The referenced structures
/// are read-only during evaluation, so independent evaluations may run
/// concurrently.
struct ControlProblem {
  const LindbladGenerator* generator = nullptr;
  const ControlParameterization* controls = nullptr;
  DenseOp rho0;
  PropagationGrid grid;
  ObjectiveSpec objective;
};

/// Forward states for the backward sweep. Stores every step when the memory
/// budget allows, otherwise every stride-th state with segment recomputation
/// during the sweep.
class CheckpointStore {
 public:
  CheckpointStore(int superdim, int steps, size_t memory_budget_bytes);

  int stride() const { return stride_; }
  bool stores(int n) const { return n % stride_ == 0 || n == steps_; }
  void put(int n, const StateVector& x);
  const StateVector& get(int n) const;

 private:
  int steps_;
  int stride_;
  std::vector<StateVector> slots_;
};

using GradientVector = Eigen::VectorXd;

/// Exact gradient of the discrete total cost (final cost + trapezoidal
/// penalty + Tikhonov) with respect to every control coefficient, via the
/// discrete adjoint of the implicit midpoint scheme. The backward sweep is
/// again an IMR solve with the adjoint midpoint matrix, seeded by the final
/// observable and fed the per-step penalty weights; per-step contributions
/// contract the adjoint state with the control coupling operators at the
/// step midpoint.
std::pair<CostBreakdown, GradientVector> gradient(
    const ControlProblem& problem, const ControlVector& alpha,
    size_t memory_budget_bytes = size_t(4) << 30);

struct FdEntry {
  int coord = 0;
  double eps = 0.0;
  double adjoint = 0.0;
  double fd = 0.0;
  double rel_err = 0.0;
};

struct FdReport {
  std::vector<FdEntry> entries;         // full eps sweep, per coordinate
  std::vector<FdEntry> best_per_coord;  // minimum-error eps per coordinate
  double max_rel_err = 0.0;             // max over best_per_coord
};

/// Central-difference verification of the adjoint gradient over the sampled
/// coordinates, sweeping eps to separate truncation from roundoff.
FdReport fd_check(const ControlProblem& problem, const ControlVector& alpha,
                  const std::vector<int>& coords,
                  const std::vector<double>& eps_list);

}  // namespace purestate
