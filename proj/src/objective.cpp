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

#include "purestate/objective.hpp"

#include <cmath>
#include <string>

namespace purestate {

DenseOp target_observable(int n, int m) {
  if (m < 0 || m >= n) {
    throw ValidationError("objective: target index " + std::to_string(m) +
                          " out of range for dimension " + std::to_string(n));
  }
  DenseOp obs = DenseOp::Zero(n, n);
  for (int i = 0; i < n; ++i) obs(i, i) = double(std::abs(i - m));
  return obs;
}

DenseOp transformed_observable(const DenseOp& u, int m) {
  const int n = static_cast<int>(u.rows());
  if (u.cols() != n) throw ValidationError("objective: transform must be square");
  const double unitarity =
      (DenseOp(u.adjoint() * u) - DenseOp::Identity(n, n)).cwiseAbs().maxCoeff();
  if (unitarity > 1e-10) {
    throw ValidationError("objective: transform is not unitary (residual " +
                          std::to_string(unitarity) + ")");
  }
  return u.adjoint() * target_observable(n, m) * u;
}

DenseOp objective_observable(const ObjectiveSpec& spec, int n) {
  if (spec.transform.has_value()) {
    if (spec.transform->rows() != n) {
      throw ValidationError("objective: transform dimension mismatch");
    }
    return transformed_observable(*spec.transform, spec.target_index);
  }
  return target_observable(n, spec.target_index);
}

double final_cost(const DenseOp& observable, const DenseOp& rho_final) {
  if (observable.rows() != rho_final.rows()) {
    throw ValidationError("objective: observable/state dimension mismatch");
  }
  return (observable * rho_final).trace().real();
}

double tikhonov(const ControlVector& alpha, double gamma1) {
  if (gamma1 < 0.0) throw ValidationError("objective: gamma1 must be >= 0");
  return gamma1 * alpha.squaredNorm();
}

double penalty_weight(const PropagationGrid& grid, double gamma2,
                      double width_a, int n) {
  if (!(width_a > 0.0)) throw ValidationError("objective: penalty width must be > 0");
  const double t = grid.time(n);
  const double arg = (t - grid.final_time) / width_a;
  const double w = std::exp(-arg * arg) / width_a;
  const double trap = (n == 0 || n == grid.steps) ? 0.5 : 1.0;
  return gamma2 * grid.dt() * trap * w;
}

double integral_penalty(const std::vector<double>& objective_series,
                        const PropagationGrid& grid, double gamma2,
                        double width_a) {
  if (gamma2 < 0.0) throw ValidationError("objective: gamma2 must be >= 0");
  if (gamma2 == 0.0) return 0.0;
  if (static_cast<int>(objective_series.size()) != grid.steps + 1) {
    throw ValidationError("objective: penalty series length mismatch");
  }
  double acc = 0.0;
  for (int n = 0; n <= grid.steps; ++n) {
    acc += penalty_weight(grid, gamma2, width_a, n) * objective_series[n];
  }
  return acc;
}

CostBreakdown total_cost(const LindbladGenerator& generator,
                         const ControlParameterization& controls,
                         const ControlVector& alpha, const DenseOp& rho0,
                         const PropagationGrid& grid,
                         const ObjectiveSpec& spec) {
  const DenseOp obs = objective_observable(spec, generator.dim());
  const Trajectory traj = propagate(generator, controls, alpha, rho0, grid,
                                    grid.steps, &obs);
  CostBreakdown cb;
  cb.final_cost = final_cost(obs, traj.final_state);
  cb.tikhonov = tikhonov(alpha, spec.gamma1);
  cb.penalty = spec.gamma2 > 0.0
                   ? integral_penalty(traj.objective_full, grid, spec.gamma2,
                                      spec.penalty_width)
                   : 0.0;
  cb.total = cb.final_cost + cb.tikhonov + cb.penalty;
  return cb;
}

}  // namespace purestate
