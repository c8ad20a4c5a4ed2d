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

#include "purestate/dynamics.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/IterativeLinearSolvers>
#include <cmath>
#include <limits>
#include <string>

namespace purestate {

namespace {

constexpr int kDirectSolveLimit = 4096;  // superoperator dimension

SparseOp sparse_identity(int n) {
  SparseOp id(n, n);
  id.setIdentity();
  return id;
}

// vec(A rho B) = (B^T (x) A) vec(rho) for column stacking.
SparseOp left_mult(const SparseOp& a, int dim) {
  // I (x) A
  std::vector<Eigen::Triplet<Complex>> t;
  t.reserve(static_cast<size_t>(a.nonZeros()) * dim);
  for (int block = 0; block < dim; ++block) {
    for (int k = 0; k < a.outerSize(); ++k) {
      for (SparseOp::InnerIterator it(a, k); it; ++it) {
        t.emplace_back(block * dim + it.row(), block * dim + it.col(), it.value());
      }
    }
  }
  SparseOp out(dim * dim, dim * dim);
  out.setFromTriplets(t.begin(), t.end());
  return out;
}

SparseOp right_mult(const SparseOp& b, int dim) {
  // B^T (x) I
  std::vector<Eigen::Triplet<Complex>> t;
  t.reserve(static_cast<size_t>(b.nonZeros()) * dim);
  for (int k = 0; k < b.outerSize(); ++k) {
    for (SparseOp::InnerIterator it(b, k); it; ++it) {
      // (B^T)_{ij} = B_{ji}: block (i, j) = (col, row) of B.
      for (int d = 0; d < dim; ++d) {
        t.emplace_back(it.col() * dim + d, it.row() * dim + d, it.value());
      }
    }
  }
  SparseOp out(dim * dim, dim * dim);
  out.setFromTriplets(t.begin(), t.end());
  return out;
}

// vec(rho) -> vec(-i[H, rho])
SparseOp commutator_superop(const SparseOp& h, int dim) {
  const Complex mi(0.0, -1.0);
  return SparseOp(mi * (left_mult(h, dim) - right_mult(h, dim)));
}

// vec(rho) -> vec(L rho L^dag - 1/2 {L^dag L, rho})
SparseOp dissipator_superop(const SparseOp& l, int dim) {
  const SparseOp ldag = l.adjoint();
  const SparseOp ldl = SparseOp(ldag * l);
  // L rho L^dag = (conj(L) (x) L) vec(rho): A = L, B = L^dag.
  SparseOp sandwich(dim * dim, dim * dim);
  {
    std::vector<Eigen::Triplet<Complex>> t;
    for (int k1 = 0; k1 < l.outerSize(); ++k1) {
      for (SparseOp::InnerIterator it1(l, k1); it1; ++it1) {
        for (int k2 = 0; k2 < l.outerSize(); ++k2) {
          for (SparseOp::InnerIterator it2(l, k2); it2; ++it2) {
            // (conj(L))_{ab} (x) L_{cd} at row a*dim+c, col b*dim+d
            t.emplace_back(it2.row() * dim + it1.row(),
                           it2.col() * dim + it1.col(),
                           std::conj(it2.value()) * it1.value());
          }
        }
      }
    }
    sandwich.setFromTriplets(t.begin(), t.end());
  }
  return SparseOp(sandwich - 0.5 * left_mult(ldl, dim) - 0.5 * right_mult(ldl, dim));
}

}  // namespace

StateVector vectorize(const DenseOp& rho) {
  return Eigen::Map<const StateVector>(rho.data(), rho.size());
}

DenseOp unvectorize(const StateVector& x, int dim) {
  return Eigen::Map<const DenseOp>(x.data(), dim, dim);
}

LindbladGenerator::LindbladGenerator(const CompositeSystem& system,
                                     bool include_dissipation)
    : dim_(system.dim()) {
  SparseOp l0 = commutator_superop(system.drift_hamiltonian(Frame::Rotating), dim_);
  if (include_dissipation) {
    for (const SparseOp& c : system.collapse_operators()) {
      l0 += dissipator_superop(c, dim_);
    }
  }
  constant_ = l0;
  for (int q = 1; q <= system.num_subsystems(); ++q) {
    const SparseOp a = system.lowering_operator(q);
    const SparseOp adag = a.adjoint();
    const SparseOp sym = SparseOp(a + adag);
    // H_c^rot = d a + conj(d) a^dag, the rotating-wave reduction of the lab
    // coupling f(t)(a + a^dag) with f = 2 Re(d e^{i w t}). The conjugate
    // placement matters: it puts the carrier Omega = -(n-1) xi on resonance
    // with the n-1 <-> n transition.
    const SparseOp antisym = SparseOp(Complex(0.0, 1.0) * (a - adag));
    control_re_.push_back(commutator_superop(sym, dim_));
    control_im_.push_back(commutator_superop(antisym, dim_));
    number_diag_.push_back(DenseOp(system.number_operator(q)).diagonal().real());
  }
}

std::vector<Complex> LindbladGenerator::control_values(
    const ControlParameterization& controls, const ControlVector& alpha,
    double t) const {
  std::vector<Complex> d(num_subsystems());
  for (int q = 1; q <= num_subsystems(); ++q) {
    d[q - 1] = controls.rotating_control(q, alpha, t);
  }
  return d;
}

SparseOp LindbladGenerator::assemble(const std::vector<Complex>& d) const {
  SparseOp l = constant_;
  for (size_t q = 0; q < control_re_.size(); ++q) {
    // Scalar products keep the sparsity structure even for zero values.
    l += d[q].real() * control_re_[q] + d[q].imag() * control_im_[q];
  }
  return l;
}

SparseOp LindbladGenerator::assemble(const ControlParameterization& controls,
                                     const ControlVector& alpha,
                                     double t) const {
  return assemble(control_values(controls, alpha, t));
}

StateVector LindbladGenerator::apply(const ControlParameterization& controls,
                                     const ControlVector& alpha, double t,
                                     const StateVector& x) const {
  return assemble(controls, alpha, t) * x;
}

void LindbladGenerator::zero_control_coupling() {
  for (auto& m : control_re_) m = SparseOp(m.rows(), m.cols());
  for (auto& m : control_im_) m = SparseOp(m.rows(), m.cols());
}

ImrStepper::ImrStepper(const LindbladGenerator& generator,
                       const PropagationGrid& grid)
    : generator_(&generator),
      grid_(grid),
      identity_(sparse_identity(generator.superdim())) {
  if (grid.steps < 1 || !(grid.final_time > 0.0)) {
    throw ValidationError("dynamics: grid needs positive final time and steps");
  }
  use_iterative_ = generator.superdim() > kDirectSolveLimit;
}

void ImrStepper::assemble_midpoint(int n,
                                   const ControlParameterization& controls,
                                   const ControlVector& alpha) {
  if (assembled_step_ == n) return;
  midpoint_l_ = generator_->assemble(controls, alpha, grid_.midpoint(n));
  assembled_step_ = n;
}

StateVector ImrStepper::apply_generator_adjoint(
    const StateVector& v, int n, const ControlParameterization& controls,
    const ControlVector& alpha) {
  assemble_midpoint(n, controls, alpha);
  return midpoint_l_.adjoint() * v;
}

void ImrStepper::factorize(int n, const ControlParameterization& controls,
                           const ControlVector& alpha) {
  if (factorized_step_ == n) return;
  const double half_dt = 0.5 * grid_.dt();
  assemble_midpoint(n, controls, alpha);
  SparseOp m = SparseOp(identity_ - half_dt * midpoint_l_);
  m.makeCompressed();
  if (!use_iterative_) {
    if (!pattern_analyzed_) {
      lu_.analyzePattern(m);
      pattern_analyzed_ = true;
    }
    lu_.factorize(m);
    if (lu_.info() != Eigen::Success) {
      throw NumericalError("dynamics: midpoint factorization failed at step " +
                           std::to_string(n));
    }
  } else {
    midpoint_matrix_ = std::move(m);
  }
  factorized_step_ = n;
}

StateVector ImrStepper::step(const StateVector& x, int n,
                             const ControlParameterization& controls,
                             const ControlVector& alpha) {
  factorize(n, controls, alpha);
  const double half_dt = 0.5 * grid_.dt();
  const StateVector rhs = x + half_dt * (midpoint_l_ * x);
  StateVector out;
  if (!use_iterative_) {
    out = lu_.solve(rhs);
  } else {
    Eigen::BiCGSTAB<SparseOp, Eigen::IncompleteLUT<Complex>> solver;
    solver.setTolerance(1e-13);
    solver.compute(midpoint_matrix_);
    out = solver.solveWithGuess(rhs, x);
    if (solver.info() != Eigen::Success) {
      throw NumericalError("dynamics: iterative solve failed at step " +
                           std::to_string(n));
    }
  }
  return out;
}

StateVector ImrStepper::adjoint_solve(const StateVector& rhs, int n,
                                      const ControlParameterization& controls,
                                      const ControlVector& alpha) {
  factorize(n, controls, alpha);
  if (!use_iterative_) {
    return lu_.adjoint().solve(rhs);
  }
  const SparseOp madj = midpoint_matrix_.adjoint();
  Eigen::BiCGSTAB<SparseOp, Eigen::IncompleteLUT<Complex>> solver;
  solver.setTolerance(1e-13);
  solver.compute(madj);
  StateVector out = solver.solve(rhs);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("dynamics: adjoint iterative solve failed at step " +
                         std::to_string(n));
  }
  return out;
}

Trajectory propagate(const LindbladGenerator& generator,
                     const ControlParameterization& controls,
                     const ControlVector& alpha, const DenseOp& rho0,
                     const PropagationGrid& grid, int record_stride,
                     const DenseOp* observable) {
  if (rho0.rows() != generator.dim() || rho0.cols() != generator.dim()) {
    throw ValidationError("dynamics: initial state dimension mismatch");
  }
  if (record_stride < 1) record_stride = 1;
  ImrStepper stepper(generator, grid);
  StateVector x = vectorize(rho0);

  Trajectory traj;
  StateVector obs_vec;
  if (observable != nullptr) {
    obs_vec = vectorize(*observable);
    traj.objective_full.reserve(grid.steps + 1);
  }
  const int dim = generator.dim();

  auto record = [&](int n) {
    const DenseOp rho = unvectorize(x, dim);
    traj.times.push_back(grid.time(n));
    std::vector<double> e(generator.num_subsystems());
    for (int q = 1; q <= generator.num_subsystems(); ++q) {
      e[q - 1] = generator.number_diag(q).dot(rho.diagonal().real());
    }
    traj.energy.push_back(std::move(e));
    // Recording clips negative eigenvalues unconditionally: integrator
    // truncation error at coarse steps produces them and a diagnostic trace
    // should not abort the run. Direct entropy() callers keep the strict
    // tolerance.
    traj.entropy.push_back(
        entropy(rho, std::numeric_limits<double>::infinity()));
    traj.objective.push_back(observable != nullptr ? obs_vec.dot(x).real() : 0.0);
  };

  auto record_full = [&](void) {
    if (observable != nullptr) {
      traj.objective_full.push_back(obs_vec.dot(x).real());
    }
  };

  record(0);
  record_full();
  for (int n = 0; n < grid.steps; ++n) {
    x = stepper.step(x, n, controls, alpha);
    record_full();
    if ((n + 1) % record_stride == 0 || n + 1 == grid.steps) record(n + 1);
  }
  traj.final_state = unvectorize(x, generator.dim());
  return traj;
}

double expected_energy(const CompositeSystem& system, int q, const DenseOp& rho) {
  const SparseOp nop = system.number_operator(q);
  const Complex tr = (DenseOp(nop) * rho).trace();
  if (std::abs(tr.imag()) > 1e-12) {
    throw NumericalError("dynamics: expected energy has imaginary residue");
  }
  return tr.real();
}

double entropy(const DenseOp& rho, double tol) {
  const int n = static_cast<int>(rho.rows());
  Eigen::SelfAdjointEigenSolver<DenseOp> es(rho, Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    double lam = es.eigenvalues()(i);
    if (lam <= 0.0) {
      if (lam < -tol) {
        throw NumericalError("dynamics: entropy of a non-PSD matrix");
      }
      continue;  // 0 log 0 := 0
    }
    s -= lam * std::log(lam);
  }
  return s / std::log(double(n));
}

DenseOp reduced_density(const CompositeSystem& system, const DenseOp& rho, int q) {
  const std::vector<int> dims = system.level_counts();
  const int nsub = static_cast<int>(dims.size());
  if (q < 1 || q > nsub) {
    throw ValidationError("dynamics: reduce onto invalid subsystem");
  }
  std::vector<int> strides(nsub, 1);
  for (int p = nsub - 2; p >= 0; --p) strides[p] = strides[p + 1] * dims[p + 1];
  const int nq = dims[q - 1];
  const int stride = strides[q - 1];
  const int total = system.dim();
  DenseOp out = DenseOp::Zero(nq, nq);
  for (int i = 0; i < total; ++i) {
    const int ki = (i / stride) % nq;
    const int rest = i - ki * stride;
    for (int kj = 0; kj < nq; ++kj) {
      out(ki, kj) += rho(i, rest + kj * stride);
    }
  }
  return out;
}

double average_fidelity(const DenseOp& ensemble_final, int m) {
  if (m < 0 || m >= ensemble_final.rows()) {
    throw ValidationError("dynamics: target index out of range");
  }
  return ensemble_final(m, m).real();
}

double average_fidelity(const std::vector<DenseOp>& final_basis_states, int m) {
  if (final_basis_states.empty()) {
    throw ValidationError("dynamics: no basis states supplied");
  }
  double acc = 0.0;
  for (const DenseOp& rho : final_basis_states) {
    if (m < 0 || m >= rho.rows()) {
      throw ValidationError("dynamics: target index out of range");
    }
    acc += rho(m, m).real();
  }
  return acc / double(final_basis_states.size());
}

}  // namespace purestate
