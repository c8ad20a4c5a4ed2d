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

#include "purestate/adjoint.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <string>

#include "purestate/threading.hpp"

namespace purestate {

CheckpointStore::CheckpointStore(int superdim, int steps,
                                 size_t memory_budget_bytes)
    : steps_(steps) {
  const size_t per_state = sizeof(Complex) * static_cast<size_t>(superdim);
  const size_t full = per_state * static_cast<size_t>(steps + 1);
  if (full <= memory_budget_bytes) {
    stride_ = 1;
  } else {
    const size_t headroom =
        memory_budget_bytes > 2 * per_state ? memory_budget_bytes - 2 * per_state
                                            : per_state;
    stride_ = static_cast<int>(
        (static_cast<size_t>(steps) * per_state + headroom - 1) / headroom);
    stride_ = std::clamp(stride_, 2, steps);
  }
  slots_.resize(static_cast<size_t>(steps / stride_) + 2);
}

void CheckpointStore::put(int n, const StateVector& x) {
  if (!stores(n)) return;
  if (n == steps_ && n % stride_ != 0) {
    slots_.back() = x;
  } else {
    slots_[n / stride_] = x;
  }
}

const StateVector& CheckpointStore::get(int n) const {
  if (!stores(n)) {
    throw NumericalError("adjoint: state " + std::to_string(n) +
                         " is not checkpointed");
  }
  if (n == steps_ && n % stride_ != 0) return slots_.back();
  return slots_[n / stride_];
}

std::pair<CostBreakdown, GradientVector> gradient(const ControlProblem& problem,
                                                  const ControlVector& alpha,
                                                  size_t memory_budget_bytes) {
  const LindbladGenerator& gen = *problem.generator;
  const ControlParameterization& controls = *problem.controls;
  const PropagationGrid& grid = problem.grid;
  const ObjectiveSpec& spec = problem.objective;
  const int steps = grid.steps;
  const double dt = grid.dt();

  const DenseOp obs = objective_observable(spec, gen.dim());
  const StateVector nu = vectorize(obs);

  ImrStepper stepper(gen, grid);
  CheckpointStore store(gen.superdim(), steps, memory_budget_bytes);

  // Forward sweep.
  std::vector<double> jseries(steps + 1);
  StateVector x = vectorize(problem.rho0);
  store.put(0, x);
  jseries[0] = nu.dot(x).real();
  for (int n = 0; n < steps; ++n) {
    x = stepper.step(x, n, controls, alpha);
    store.put(n + 1, x);
    jseries[n + 1] = nu.dot(x).real();
  }

  std::vector<double> w(steps + 1, 0.0);
  if (spec.gamma2 > 0.0) {
    for (int n = 0; n <= steps; ++n) {
      w[n] = penalty_weight(grid, spec.gamma2, spec.penalty_width, n);
    }
  }

  CostBreakdown cb;
  cb.final_cost = jseries[steps];
  cb.tikhonov = tikhonov(alpha, spec.gamma1);
  for (int n = 0; n <= steps; ++n) cb.penalty += w[n] * jseries[n];
  cb.total = cb.final_cost + cb.tikhonov + cb.penalty;

  GradientVector grad = 2.0 * spec.gamma1 * alpha;

  // Segment recomputation when the store is strided.
  const int stride = store.stride();
  std::vector<StateVector> segment;
  int segment_start = -1;
  auto state_at = [&](int n) -> StateVector {
    if (store.stores(n)) return store.get(n);
    const int j = (n / stride) * stride;
    if (segment_start != j) {
      const int seg_end = std::min(j + stride, steps);
      segment.assign(static_cast<size_t>(seg_end - j) + 1, StateVector());
      segment[0] = store.get(j);
      for (int i = j; i < seg_end; ++i) {
        segment[i - j + 1] = stepper.step(segment[i - j], i, controls, alpha);
      }
      segment_start = j;
    }
    return segment[n - j];
  };

  // Backward sweep: lambda_{N-1} = M^{-dag}((1 + w_N) nu), then
  // lambda_{n-1} = M_{n-1}^{-dag}(P_n^dag lambda_n + w_n nu).
  StateVector lambda =
      stepper.adjoint_solve(StateVector((1.0 + w[steps]) * nu), steps - 1,
                            controls, alpha);
  for (int n = steps - 1; n >= 0; --n) {
    const StateVector xsum = state_at(n) + state_at(n + 1);
    const double tmid = grid.midpoint(n);
    for (int q = 1; q <= gen.num_subsystems(); ++q) {
      const double mu_re =
          0.5 * dt * lambda.dot(gen.control_re_part(q) * xsum).real();
      const double mu_im =
          0.5 * dt * lambda.dot(gen.control_im_part(q) * xsum).real();
      controls.accumulate_gradient(q, tmid, mu_re, mu_im, grad);
    }
    if (n > 0) {
      const StateVector rhs =
          lambda +
          0.5 * dt * stepper.apply_generator_adjoint(lambda, n, controls, alpha) +
          w[n] * nu;
      lambda = stepper.adjoint_solve(rhs, n - 1, controls, alpha);
    }
  }
  return {cb, grad};
}

FdReport fd_check(const ControlProblem& problem, const ControlVector& alpha,
                  const std::vector<int>& coords,
                  const std::vector<double>& eps_list) {
  if (coords.empty()) throw ValidationError("adjoint: empty coordinate sample");
  if (eps_list.empty()) throw ValidationError("adjoint: empty eps list");

  const auto [cb, grad] = gradient(problem, alpha);
  (void)cb;

  const int ncoord = static_cast<int>(coords.size());
  const int neps = static_cast<int>(eps_list.size());
  FdReport report;
  report.entries.resize(static_cast<size_t>(ncoord) * neps);

  parallel_for(ncoord * neps, [&](int task) {
    const int ci = task / neps;
    const int ei = task % neps;
    const int coord = coords[ci];
    const double eps = eps_list[ei];
    ControlVector ap = alpha, am = alpha;
    ap(coord) += eps;
    am(coord) -= eps;
    const double fp = total_cost(*problem.generator, *problem.controls, ap,
                                 problem.rho0, problem.grid, problem.objective)
                          .total;
    const double fm = total_cost(*problem.generator, *problem.controls, am,
                                 problem.rho0, problem.grid, problem.objective)
                          .total;
    const double fd = (fp - fm) / (2.0 * eps);
    const double adj = grad(coord);
    const double denom = std::max(std::abs(adj), std::abs(fd));
    FdEntry e;
    e.coord = coord;
    e.eps = eps;
    e.adjoint = adj;
    e.fd = fd;
    e.rel_err = denom > 0.0 ? std::abs(adj - fd) / denom : std::abs(adj - fd);
    report.entries[static_cast<size_t>(task)] = e;
  });

  for (int ci = 0; ci < ncoord; ++ci) {
    const FdEntry* best = nullptr;
    for (int ei = 0; ei < neps; ++ei) {
      const FdEntry& e = report.entries[static_cast<size_t>(ci) * neps + ei];
      if (best == nullptr || e.rel_err < best->rel_err) best = &e;
    }
    report.best_per_coord.push_back(*best);
    report.max_rel_err = std::max(report.max_rel_err, best->rel_err);
  }
  return report;
}

}  // namespace purestate
