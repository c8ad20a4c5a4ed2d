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

#include <memory>
#include <optional>
#include <vector>

#include "purestate/control.hpp"
#include "purestate/system.hpp"

namespace purestate {

struct PropagationGrid {
  double final_time = 1.0;  // us
  int steps = 1;

  double dt() const { return final_time / steps; }
  double time(int n) const { return n * dt(); }
  double midpoint(int n) const { return (n + 0.5) * dt(); }
};

using StateVector = Eigen::VectorXcd;  // column-stacked vec(rho)

StateVector vectorize(const DenseOp& rho);
DenseOp unvectorize(const StateVector& x, int dim);

/// Vectorized Lindblad generator in the rotating frame,
///   L(t) = L0 + sum_q (Re d^q(t) Lre_q + Im d^q(t) Lim_q),
/// with column-stacking so that -i[H,.] maps to -i(I (x) H - H^T (x) I).
/// The constant part carries the rotating drift and the dissipators; the
/// control parts couple through a_q + a_q^dag and i(a_q^dag - a_q).
class LindbladGenerator {
 public:
  explicit LindbladGenerator(const CompositeSystem& system,
                             bool include_dissipation = true);

  int dim() const { return dim_; }
  int superdim() const { return dim_ * dim_; }
  int num_subsystems() const { return static_cast<int>(control_re_.size()); }

  const SparseOp& constant_part() const { return constant_; }
  const SparseOp& control_re_part(int q) const { return control_re_.at(q - 1); }
  const SparseOp& control_im_part(int q) const { return control_im_.at(q - 1); }

  /// Diagonal of a_q^dag a_q, for trajectory energy recording.
  const Eigen::VectorXd& number_diag(int q) const { return number_diag_.at(q - 1); }

  /// Control coefficients (Re d^q, Im d^q) at time t.
  std::vector<Complex> control_values(const ControlParameterization& controls,
                                      const ControlVector& alpha,
                                      double t) const;

  /// L given the per-subsystem control values. The sparsity pattern is
  /// independent of the values, so downstream factorizations can reuse
  /// their symbolic analysis.
  SparseOp assemble(const std::vector<Complex>& d) const;
  SparseOp assemble(const ControlParameterization& controls,
                    const ControlVector& alpha, double t) const;

  StateVector apply(const ControlParameterization& controls,
                    const ControlVector& alpha, double t,
                    const StateVector& x) const;

  /// Zeroes the control coupling operators (used by gradient edge-case
  /// tests and the Tikhonov-only surrogate).
  void zero_control_coupling();

 private:
  int dim_ = 0;
  SparseOp constant_;
  std::vector<SparseOp> control_re_;
  std::vector<SparseOp> control_im_;
  std::vector<Eigen::VectorXd> number_diag_;
};

/// One implicit-midpoint linear solve per step:
///   (I - dt/2 L_mid) x_{n+1} = (I + dt/2 L_mid) x_n.
/// Direct sparse LU up to superdim 4096 (with one-time symbolic analysis),
/// BiCGSTAB above.
class ImrStepper {
 public:
  ImrStepper(const LindbladGenerator& generator, const PropagationGrid& grid);

  /// Advances x across step n (from t_n to t_{n+1}) with the generator
  /// evaluated at the midpoint.
  StateVector step(const StateVector& x, int n,
                   const ControlParameterization& controls,
                   const ControlVector& alpha);

  /// Adjoint solve (I - dt/2 L_mid)^dag y = rhs at step n; used by the
  /// backward sweep of the discrete adjoint.
  StateVector adjoint_solve(const StateVector& rhs, int n,
                            const ControlParameterization& controls,
                            const ControlVector& alpha);

  /// L_mid(n)^dag v, assembling the midpoint generator of step n if needed.
  StateVector apply_generator_adjoint(const StateVector& v, int n,
                                      const ControlParameterization& controls,
                                      const ControlVector& alpha);

  const LindbladGenerator& generator() const { return *generator_; }
  const PropagationGrid& grid() const { return grid_; }

 private:
  void assemble_midpoint(int n, const ControlParameterization& controls,
                         const ControlVector& alpha);
  void factorize(int n, const ControlParameterization& controls,
                 const ControlVector& alpha);

  const LindbladGenerator* generator_;
  PropagationGrid grid_;
  SparseOp identity_;
  SparseOp midpoint_l_;       // L at the current midpoint
  SparseOp midpoint_matrix_;  // I - dt/2 L, kept for the iterative path
  Eigen::SparseLU<SparseOp> lu_;
  bool pattern_analyzed_ = false;
  bool use_iterative_ = false;
  int assembled_step_ = -1;
  int factorized_step_ = -1;
};

struct Trajectory {
  std::vector<double> times;                  // strided sample times
  std::vector<std::vector<double>> energy;    // [sample][subsystem]
  std::vector<double> entropy;
  std::vector<double> objective;              // strided J(rho(t)) samples
  std::vector<double> objective_full;         // J at every grid point (when an
                                              // observable is supplied)
  DenseOp final_state;
};

/// Propagates rho0 across the grid, recording observables every
/// `record_stride` steps (and always at t = 0 and t = T). When `observable`
/// is given, Tr(observable rho) is additionally recorded at every grid point
/// for the penalty quadrature.
Trajectory propagate(const LindbladGenerator& generator,
                     const ControlParameterization& controls,
                     const ControlVector& alpha, const DenseOp& rho0,
                     const PropagationGrid& grid, int record_stride = 10,
                     const DenseOp* observable = nullptr);

/// Tr(n_q rho), the expected occupation of subsystem q.
double expected_energy(const CompositeSystem& system, int q, const DenseOp& rho);

/// Normalized von Neumann entropy -Tr(rho log rho)/log N in [0, 1].
/// Eigenvalues in (-tol, 0] are clipped to zero; below that is an error.
/// Trajectory recording passes a tolerance matched to the integrator's
/// truncation error; direct callers get the strict default.
double entropy(const DenseOp& rho, double tol = 1e-10);

/// Partial trace onto subsystem q.
DenseOp reduced_density(const CompositeSystem& system, const DenseOp& rho, int q);

/// Average fidelity against target e_m: the m-th diagonal entry of the
/// propagated ensemble state.
double average_fidelity(const DenseOp& ensemble_final, int m);

/// Oracle route: mean of [B^kj(T)]_mm over explicitly propagated basis
/// states.
double average_fidelity(const std::vector<DenseOp>& final_basis_states, int m);

}  // namespace purestate
