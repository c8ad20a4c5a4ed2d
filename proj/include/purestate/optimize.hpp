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

#include <functional>
#include <string>

#include "purestate/adjoint.hpp"

namespace purestate {

struct OptimizerOptions {
  int max_iters = 100;
  int lbfgs_memory = 10;
  /// Stop when ||g|| drops below grad_tol * ||g_0||.
  double grad_tol = 1e-2;
  /// Stop when an accepted step decreases the cost by less than this.
  double cost_tol = 1e-6;
  double armijo_c1 = 1e-4;
  double backtrack_factor = 0.5;
  int max_line_search_trials = 30;
  /// Coefficient box; empty vectors mean unbounded.
  Eigen::VectorXd lower_bounds;
  Eigen::VectorXd upper_bounds;
  unsigned seed = 1234;
};

struct IterationRecord {
  int iter = 0;
  CostBreakdown cost;
  double grad_norm = 0.0;
  double step_length = 0.0;
  std::vector<double> max_lab_amplitude;  // per subsystem
};

enum class Termination { GradTol, CostTol, MaxIters, LineSearchFailure };

std::string termination_name(Termination t);

struct MinimizeResult {
  ControlVector alpha;
  CostBreakdown cost;
  std::vector<IterationRecord> history;
  Termination reason = Termination::MaxIters;
};

/// Cost and gradient of the objective at alpha.
using CostGradFn =
    std::function<std::pair<CostBreakdown, GradientVector>(const ControlVector&)>;
/// Optional per-iterate amplitude reporter for the history records.
using AmplitudeFn = std::function<std::vector<double>(const ControlVector&)>;
/// Optional per-iteration observer (history logging).
using IterationCallback = std::function<void(const IterationRecord&)>;

/// Bound-constrained L-BFGS with a projected backtracking Armijo line
/// search. Curvature pairs with s.y <= 1e-12 ||s|| ||y|| are skipped.
/// Accepted iterates decrease the cost monotonically.
MinimizeResult minimize(const CostGradFn& cost_grad, const ControlVector& alpha0,
                        const OptimizerOptions& opts,
                        const AmplitudeFn& amplitudes = nullptr,
                        const IterationCallback& on_iteration = nullptr);

/// Uniform random coefficients in [-amplitude_scale, amplitude_scale],
/// deterministic for a fixed seed.
ControlVector initial_guess(const ControlParameterization& param,
                            double amplitude_scale, unsigned seed);

/// Per-coefficient box |alpha| <= bound_q/(2 sqrt(2) N_f), a sufficient
/// condition for max_t 2|d^q(t)| <= bound_q given partition-of-unity
/// envelopes. `lab_amp_bounds` holds the per-subsystem lab amplitude bound
/// in rad/us; a nonpositive entry leaves the subsystem unbounded.
std::pair<Eigen::VectorXd, Eigen::VectorXd> coefficient_bounds(
    const ControlParameterization& param,
    const std::vector<double>& lab_amp_bounds);

}  // namespace purestate
