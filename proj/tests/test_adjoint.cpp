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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "purestate/adjoint.hpp"
#include "purestate/basis.hpp"

using namespace purestate;

namespace {

struct Fixture {
  CompositeSystem sys;
  LindbladGenerator gen;
  ControlParameterization param;
  PropagationGrid grid;
  ObjectiveSpec spec;
  DenseOp rho0;

  Fixture()
      : sys({{2, 0.3, 0.0, 2.0, 4.0}}),
        gen(sys),
        param({SubsystemControls{5, {0.0, 2.0}}}, 0.3),
        grid{0.3, 150},
        rho0(ensemble_state(2)) {
    spec.target_index = 0;
    spec.gamma1 = 1e-6;
    spec.gamma2 = 1e-2;
    spec.penalty_width = 0.05;
  }

  ControlProblem problem() const {
    return {&gen, &param, rho0, grid, spec};
  }
};

ControlVector random_alpha(int n, unsigned seed, double scale) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> uni(-scale, scale);
  ControlVector alpha(n);
  for (int i = 0; i < n; ++i) alpha(i) = uni(rng);
  return alpha;
}

}  // namespace

TEST_CASE("checkpoint store keeps every state under a generous budget") {
  CheckpointStore store(16, 10, size_t(1) << 30);
  CHECK(store.stride() == 1);
  for (int n = 0; n <= 10; ++n) {
    StateVector x = StateVector::Constant(16, Complex(n, 0));
    store.put(n, x);
  }
  for (int n = 0; n <= 10; ++n) CHECK(store.get(n)(0).real() == double(n));
}

TEST_CASE("checkpoint store strides under a tight budget") {
  const int superdim = 16, steps = 100;
  const size_t budget = sizeof(Complex) * superdim * 12;  // ~12 states
  CheckpointStore store(superdim, steps, budget);
  CHECK(store.stride() > 1);
  for (int n = 0; n <= steps; ++n) {
    if (store.stores(n)) {
      store.put(n, StateVector::Constant(superdim, Complex(n, 0)));
    }
  }
  CHECK(store.stores(0));
  CHECK(store.stores(steps));  // final state always kept
  for (int n = 0; n <= steps; ++n) {
    if (store.stores(n)) {
      CHECK(store.get(n)(0).real() == double(n));
    } else {
      CHECK_THROWS_AS(store.get(n), NumericalError);
    }
  }
}

TEST_CASE("gradient cost matches total_cost") {
  Fixture f;
  const ControlVector alpha = random_alpha(f.param.num_coefficients(), 5, 0.5);
  const auto [cb, grad] = gradient(f.problem(), alpha);
  const CostBreakdown direct =
      total_cost(f.gen, f.param, alpha, f.rho0, f.grid, f.spec);
  CHECK(cb.total == doctest::Approx(direct.total).epsilon(1e-12));
  CHECK(cb.final_cost == doctest::Approx(direct.final_cost).epsilon(1e-12));
  CHECK(cb.penalty == doctest::Approx(direct.penalty).epsilon(1e-12));
  CHECK(grad.size() == alpha.size());
}

TEST_CASE("adjoint gradient matches central finite differences") {
  Fixture f;
  const ControlVector alpha = random_alpha(f.param.num_coefficients(), 17, 0.4);
  std::vector<int> coords;
  for (int i = 0; i < f.param.num_coefficients(); ++i) coords.push_back(i);
  const FdReport report =
      fd_check(f.problem(), alpha, coords, {1e-3, 1e-4, 1e-5});
  CHECK(report.max_rel_err < 1e-7);
  CHECK(report.best_per_coord.size() == coords.size());
  CHECK(report.entries.size() == coords.size() * 3);
}

TEST_CASE("gradient with decoupled controls reduces to the Tikhonov term") {
  Fixture f;
  LindbladGenerator decoupled(f.sys);
  decoupled.zero_control_coupling();
  ControlProblem p = f.problem();
  p.generator = &decoupled;
  const ControlVector alpha = random_alpha(f.param.num_coefficients(), 3, 1.0);
  const auto [cb, grad] = gradient(p, alpha);
  (void)cb;
  const GradientVector expected = 2.0 * f.spec.gamma1 * alpha;
  CHECK((grad - expected).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("strided checkpointing reproduces the full-storage gradient") {
  Fixture f;
  const ControlVector alpha = random_alpha(f.param.num_coefficients(), 23, 0.6);
  const auto [cb_full, grad_full] = gradient(f.problem(), alpha);
  // Budget for roughly a dozen of the 151 states.
  const size_t tight = sizeof(Complex) * f.gen.superdim() * 12;
  const auto [cb_tight, grad_tight] = gradient(f.problem(), alpha, tight);
  CHECK(cb_full.total == doctest::Approx(cb_tight.total).epsilon(1e-13));
  CHECK((grad_full - grad_tight).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("gradient without penalty matches finite differences too") {
  Fixture f;
  f.spec.gamma2 = 0.0;
  const ControlVector alpha = random_alpha(f.param.num_coefficients(), 31, 0.4);
  std::vector<int> coords{0, 3, 7, 11, 15, 19};
  const FdReport report =
      fd_check(f.problem(), alpha, coords, {1e-3, 1e-4, 1e-5});
  CHECK(report.max_rel_err < 1e-7);
}

TEST_CASE("fd_check validation") {
  Fixture f;
  const ControlVector alpha = ControlVector::Zero(f.param.num_coefficients());
  CHECK_THROWS_AS(fd_check(f.problem(), alpha, {}, {1e-4}), ValidationError);
  CHECK_THROWS_AS(fd_check(f.problem(), alpha, {0}, {}), ValidationError);
}
