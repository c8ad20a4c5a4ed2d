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

#include <optional>

#include "purestate/dynamics.hpp"

namespace purestate {

/// What the run optimizes towards: the target level index m (observable
/// N_m = diag|i - m|), optionally conjugated by a unitary for general pure
/// targets, plus the regularization weights.
struct ObjectiveSpec {
  int target_index = 0;
  std::optional<DenseOp> transform;  // unitary U; observable becomes U^dag N_m U
  double gamma1 = 0.0;               // Tikhonov weight
  double gamma2 = 0.0;               // integral penalty weight
  double penalty_width = 0.1;        // a in w(t) = exp(-((t-T)/a)^2)/a, us
};

struct CostBreakdown {
  double final_cost = 0.0;
  double tikhonov = 0.0;
  double penalty = 0.0;
  double total = 0.0;
};

/// N_m = diag(|i - m|). Zero expectation exactly at the pure target e_m.
DenseOp target_observable(int n, int m);

/// U^dag N_m U for a general pure target U^dag e_m.
DenseOp transformed_observable(const DenseOp& u, int m);

/// The observable an ObjectiveSpec describes, for dimension n.
DenseOp objective_observable(const ObjectiveSpec& spec, int n);

/// Tr(N_m rho(T)); real and nonnegative for a valid density matrix.
double final_cost(const DenseOp& observable, const DenseOp& rho_final);

/// gamma1 * ||alpha||^2.
double tikhonov(const ControlVector& alpha, double gamma1);

/// gamma2 * trapezoidal quadrature of w(t) J(rho(t)) over the propagation
/// grid, with w(t) = exp(-((t-T)/a)^2)/a. `objective_series` holds J at
/// every grid point, as recorded by propagate().
double integral_penalty(const std::vector<double>& objective_series,
                        const PropagationGrid& grid, double gamma2,
                        double width_a);

/// Trapezoidal weight gamma2 * dt * c_n * w(t_n) of grid point n in the
/// discrete penalty; exposed so the adjoint differentiates exactly the
/// quadrature evaluated above.
double penalty_weight(const PropagationGrid& grid, double gamma2,
                      double width_a, int n);

/// Propagates rho0 and evaluates the discrete total cost
/// J(rho(T)) + gamma1 ||alpha||^2 + penalty.
CostBreakdown total_cost(const LindbladGenerator& generator,
                         const ControlParameterization& controls,
                         const ControlVector& alpha, const DenseOp& rho0,
                         const PropagationGrid& grid,
                         const ObjectiveSpec& spec);

}  // namespace purestate
