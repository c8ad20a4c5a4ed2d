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

#include "purestate/optimize.hpp"

#include <cmath>
#include <deque>
#include <random>

namespace purestate {

namespace {

Eigen::VectorXd project(const Eigen::VectorXd& x, const Eigen::VectorXd& lo,
                        const Eigen::VectorXd& hi) {
  if (lo.size() == 0) return x;
  return x.cwiseMax(lo).cwiseMin(hi);
}

struct CurvaturePair {
  Eigen::VectorXd s;
  Eigen::VectorXd y;
  double rho;
};

// Standard two-loop recursion; H0 = gamma I from the newest pair.
Eigen::VectorXd lbfgs_direction(const Eigen::VectorXd& grad,
                                const std::deque<CurvaturePair>& pairs) {
  Eigen::VectorXd q = grad;
  std::vector<double> a(pairs.size());
  for (int i = static_cast<int>(pairs.size()) - 1; i >= 0; --i) {
    a[i] = pairs[i].rho * pairs[i].s.dot(q);
    q -= a[i] * pairs[i].y;
  }
  if (!pairs.empty()) {
    const CurvaturePair& last = pairs.back();
    q *= last.s.dot(last.y) / last.y.squaredNorm();
  }
  for (size_t i = 0; i < pairs.size(); ++i) {
    const double b = pairs[i].rho * pairs[i].y.dot(q);
    q += (a[i] - b) * pairs[i].s;
  }
  return -q;
}

}  // namespace

std::string termination_name(Termination t) {
  switch (t) {
    case Termination::GradTol: return "grad_tol";
    case Termination::CostTol: return "cost_tol";
    case Termination::MaxIters: return "max_iters";
    case Termination::LineSearchFailure: return "line_search_failure";
  }
  return "unknown";
}

MinimizeResult minimize(const CostGradFn& cost_grad, const ControlVector& alpha0,
                        const OptimizerOptions& opts,
                        const AmplitudeFn& amplitudes,
                        const IterationCallback& on_iteration) {
  if (opts.lbfgs_memory < 1) {
    throw ValidationError("optimize: L-BFGS memory must be >= 1");
  }
  if (!(opts.grad_tol > 0.0) || !(opts.cost_tol > 0.0)) {
    throw ValidationError("optimize: tolerances must be positive");
  }
  const Eigen::VectorXd& lo = opts.lower_bounds;
  const Eigen::VectorXd& hi = opts.upper_bounds;

  ControlVector x = project(alpha0, lo, hi);
  auto [cost, grad] = cost_grad(x);
  const double grad_norm0 = grad.norm();

  MinimizeResult result;
  std::deque<CurvaturePair> pairs;

  auto record = [&](int iter, double step) {
    IterationRecord rec;
    rec.iter = iter;
    rec.cost = cost;
    rec.grad_norm = grad.norm();
    rec.step_length = step;
    if (amplitudes) rec.max_lab_amplitude = amplitudes(x);
    result.history.push_back(rec);
    if (on_iteration) on_iteration(rec);
  };

  record(0, 0.0);
  result.reason = Termination::MaxIters;

  for (int iter = 1; iter <= opts.max_iters; ++iter) {
    if (grad.norm() <= opts.grad_tol * grad_norm0) {
      result.reason = Termination::GradTol;
      break;
    }

    Eigen::VectorXd dir = lbfgs_direction(grad, pairs);
    if (grad.dot(dir) >= 0.0) dir = -grad;  // safeguard: fall back to descent

    // Projected backtracking line search with the Armijo test along the
    // projected path. If the quasi-Newton direction fails (projection onto
    // an active face can spoil descent), drop the curvature memory and
    // retry once with projected steepest descent before giving up.
    double step = 1.0;
    ControlVector trial;
    CostBreakdown trial_cost;
    GradientVector trial_grad;
    bool accepted = false;
    for (int attempt = 0; attempt < 2 && !accepted; ++attempt) {
      step = 1.0;
      for (int ls = 0; ls < opts.max_line_search_trials; ++ls) {
        trial = project(x + step * dir, lo, hi);
        std::tie(trial_cost, trial_grad) = cost_grad(trial);
        const double decrease = opts.armijo_c1 * grad.dot(trial - x);
        if (trial_cost.total <= cost.total + decrease) {
          accepted = true;
          break;
        }
        step *= opts.backtrack_factor;
      }
      if (!accepted) {
        if (pairs.empty()) break;
        pairs.clear();
        dir = -grad;
      }
    }
    if (!accepted) {
      result.reason = Termination::LineSearchFailure;
      break;
    }

    const Eigen::VectorXd s = trial - x;
    const Eigen::VectorXd y = trial_grad - grad;
    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      pairs.push_back({s, y, 1.0 / sy});
      if (static_cast<int>(pairs.size()) > opts.lbfgs_memory) pairs.pop_front();
    }

    const double decrease = cost.total - trial_cost.total;
    x = trial;
    cost = trial_cost;
    grad = trial_grad;
    record(iter, step);

    if (decrease < opts.cost_tol) {
      result.reason = Termination::CostTol;
      break;
    }
    if (grad.norm() <= opts.grad_tol * grad_norm0) {
      result.reason = Termination::GradTol;
      break;
    }
  }

  result.alpha = x;
  result.cost = cost;
  return result;
}

ControlVector initial_guess(const ControlParameterization& param,
                            double amplitude_scale, unsigned seed) {
  if (amplitude_scale < 0.0) {
    throw ValidationError("optimize: amplitude scale must be >= 0");
  }
  ControlVector alpha(param.num_coefficients());
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> uni(-amplitude_scale, amplitude_scale);
  for (int i = 0; i < alpha.size(); ++i) alpha(i) = uni(rng);
  return alpha;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> coefficient_bounds(
    const ControlParameterization& param,
    const std::vector<double>& lab_amp_bounds) {
  if (static_cast<int>(lab_amp_bounds.size()) != param.num_subsystems()) {
    throw ValidationError("optimize: one amplitude bound per subsystem required");
  }
  const double unbounded = std::numeric_limits<double>::infinity();
  Eigen::VectorXd lo(param.num_coefficients()), hi(param.num_coefficients());
  for (int q = 1; q <= param.num_subsystems(); ++q) {
    const SubsystemControls& c = param.subsystem(q);
    const int nf = static_cast<int>(c.carrier_freqs.size());
    const double bound = lab_amp_bounds[q - 1];
    const double box =
        bound > 0.0 ? bound / (2.0 * std::sqrt(2.0) * nf) : unbounded;
    for (int s = 1; s <= c.num_splines; ++s) {
      for (int n = 1; n <= nf; ++n) {
        for (bool imag : {false, true}) {
          const int idx = param.coefficient_index(q, s, n, imag);
          lo(idx) = -box;
          hi(idx) = box;
        }
      }
    }
  }
  return {lo, hi};
}

}  // namespace purestate
