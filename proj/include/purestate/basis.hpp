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

#include <vector>

#include "purestate/system.hpp"

namespace purestate {

/// Basis density matrix B^kj: e_k e_k^dag on the diagonal (k = j), the
/// symmetric combination for k < j and the antisymmetric one for k > j.
/// Every element is a pure-state density matrix; together the n^2 of them
/// span all Hermitian n x n matrices over the reals.
DenseOp basis_matrix(int n, int k, int j);

/// Uniform ensemble of all n^2 basis matrices, (1/n^2) sum_kj B^kj.
DenseOp ensemble_state(int n);

/// Ensemble over the joint space of the listed basis subsystems, with every
/// remaining subsystem pinned to its ground state, in system order.
/// `basis_subsystems` holds 1-based indices into `dims`.
DenseOp ensemble_state_partial(const std::vector<int>& dims,
                               const std::vector<int>& basis_subsystems);

/// Expansion coefficients z with rho = sum_kj z(k,j) B^kj, obtained by
/// solving the dense n^2 x n^2 real system in Hermitian coordinates.
Eigen::MatrixXd expand_in_basis(const DenseOp& rho);

/// sum_kj z(k,j) B^kj.
DenseOp from_coefficients(const Eigen::MatrixXd& z);

/// Membership in the admissible ellipsoid Q_2: coefficients (z00, z11, z10)
/// with z01 = 1 - z00 - z11 - z10 yield a positive semi-definite matrix iff
/// 2(z00 + (z10-1)/2)^2 + 2(z11 + (z10-1)/2)^2 + z10^2 <= 1.
bool q2_admissible(double z00, double z11, double z10);

struct BasisReport {
  bool hermitian = false;
  bool unit_trace = false;
  bool psd = false;
  bool rank_one = false;
  bool independent = false;

  bool all_ok() const {
    return hermitian && unit_trace && psd && rank_one && independent;
  }
};

/// Checks every B^kj for the density-matrix invariants and the full set for
/// linear independence (smallest singular value of the real coordinate
/// matrix > 1e-10).
BasisReport verify_basis(int n, int dimension_cap = 16);

}  // namespace purestate
