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

#include "purestate/basis.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <string>

namespace purestate {

namespace {

// Real coordinates of a Hermitian matrix: the diagonal, then the real and
// imaginary parts of the strict upper triangle. n^2 numbers in total.
Eigen::VectorXd hermitian_coordinates(const DenseOp& m) {
  const int n = static_cast<int>(m.rows());
  Eigen::VectorXd c(n * n);
  int idx = 0;
  for (int k = 0; k < n; ++k) c(idx++) = m(k, k).real();
  for (int k = 0; k < n; ++k)
    for (int j = k + 1; j < n; ++j) c(idx++) = m(k, j).real();
  for (int k = 0; k < n; ++k)
    for (int j = k + 1; j < n; ++j) c(idx++) = m(k, j).imag();
  return c;
}

Eigen::MatrixXd basis_coordinate_matrix(int n) {
  Eigen::MatrixXd a(n * n, n * n);
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < n; ++j) {
      a.col(k * n + j) = hermitian_coordinates(basis_matrix(n, k, j));
    }
  }
  return a;
}

}  // namespace

DenseOp basis_matrix(int n, int k, int j) {
  if (n < 1 || k < 0 || k >= n || j < 0 || j >= n) {
    throw ValidationError("basis: index (" + std::to_string(k) + "," +
                          std::to_string(j) + ") out of range for dimension " +
                          std::to_string(n));
  }
  DenseOp b = DenseOp::Zero(n, n);
  b(k, k) += 0.5;
  b(j, j) += 0.5;
  if (k == j) {
    b(k, k) = 1.0;
  } else if (k < j) {
    b(k, j) += 0.5;
    b(j, k) += 0.5;
  } else {
    b(j, k) += Complex(0.0, 0.5);
    b(k, j) += Complex(0.0, -0.5);
  }
  return b;
}

DenseOp ensemble_state(int n) {
  if (n < 2) throw ValidationError("basis: ensemble requires dimension >= 2");
  DenseOp sum = DenseOp::Zero(n, n);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j) sum += basis_matrix(n, k, j);
  return sum / double(n * n);
}

DenseOp ensemble_state_partial(const std::vector<int>& dims,
                               const std::vector<int>& basis_subsystems) {
  const int nsub = static_cast<int>(dims.size());
  std::vector<bool> in_basis(nsub, false);
  for (int q : basis_subsystems) {
    if (q < 1 || q > nsub) {
      throw ValidationError("basis: basis subsystem index " +
                            std::to_string(q) + " out of range");
    }
    if (in_basis[q - 1]) {
      throw ValidationError("basis: duplicate basis subsystem " +
                            std::to_string(q));
    }
    in_basis[q - 1] = true;
  }
  if (basis_subsystems.empty()) {
    throw ValidationError("basis: at least one basis subsystem is required");
  }

  int full_dim = 1;
  std::vector<int> strides(nsub, 1);
  for (int q = nsub - 2; q >= 0; --q) strides[q] = strides[q + 1] * dims[q + 1];
  for (int q = 0; q < nsub; ++q) full_dim *= dims[q];

  int basis_dim = 1;
  for (int q = 0; q < nsub; ++q)
    if (in_basis[q]) basis_dim *= dims[q];

  // Map a joint basis-space index to the full composite index (ground
  // subsystems keep digit 0).
  std::vector<int> embed(basis_dim);
  for (int b = 0; b < basis_dim; ++b) {
    int rem = b;
    int full = 0;
    for (int q = nsub - 1; q >= 0; --q) {
      if (!in_basis[q]) continue;
      full += (rem % dims[q]) * strides[q];
      rem /= dims[q];
    }
    embed[b] = full;
  }

  const DenseOp ens = ensemble_state(basis_dim);
  DenseOp out = DenseOp::Zero(full_dim, full_dim);
  for (int b = 0; b < basis_dim; ++b)
    for (int c = 0; c < basis_dim; ++c) out(embed[b], embed[c]) = ens(b, c);
  return out;
}

Eigen::MatrixXd expand_in_basis(const DenseOp& rho) {
  const int n = static_cast<int>(rho.rows());
  if (rho.cols() != n) throw ValidationError("basis: expansion needs a square matrix");
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-10) {
    throw ValidationError("basis: expansion input is not Hermitian");
  }
  const Eigen::MatrixXd a = basis_coordinate_matrix(n);
  const Eigen::VectorXd rhs = hermitian_coordinates(rho);
  const Eigen::VectorXd z = a.partialPivLu().solve(rhs);
  Eigen::MatrixXd out(n, n);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j) out(k, j) = z(k * n + j);
  return out;
}

DenseOp from_coefficients(const Eigen::MatrixXd& z) {
  const int n = static_cast<int>(z.rows());
  DenseOp rho = DenseOp::Zero(n, n);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j) rho += z(k, j) * basis_matrix(n, k, j);
  return rho;
}

bool q2_admissible(double z00, double z11, double z10) {
  const double xi = z00 + 0.5 * (z10 - 1.0);
  const double eta = z11 + 0.5 * (z10 - 1.0);
  return 2.0 * xi * xi + 2.0 * eta * eta + z10 * z10 <= 1.0;
}

BasisReport verify_basis(int n, int dimension_cap) {
  if (n < 2) throw ValidationError("basis: dimension must be >= 2");
  if (n > dimension_cap) {
    throw ValidationError("basis: dimension " + std::to_string(n) +
                          " above verification cap " +
                          std::to_string(dimension_cap));
  }
  BasisReport report;
  report.hermitian = report.unit_trace = report.psd = report.rank_one = true;
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < n; ++j) {
      const DenseOp b = basis_matrix(n, k, j);
      if ((b - b.adjoint()).cwiseAbs().maxCoeff() >= 1e-12) report.hermitian = false;
      if (std::abs(b.trace().real() - 1.0) >= 1e-12 ||
          std::abs(b.trace().imag()) >= 1e-12) {
        report.unit_trace = false;
      }
      Eigen::SelfAdjointEigenSolver<DenseOp> es(b, Eigen::EigenvaluesOnly);
      if (es.eigenvalues().minCoeff() < -1e-10) report.psd = false;
      // Pure state: one unit eigenvalue, the rest zero.
      if (std::abs(es.eigenvalues().maxCoeff() - 1.0) > 1e-10 ||
          (n > 1 && std::abs(es.eigenvalues()(n - 2)) > 1e-10)) {
        report.rank_one = false;
      }
    }
  }
  const Eigen::MatrixXd a = basis_coordinate_matrix(n);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  report.independent = svd.singularValues().minCoeff() > 1e-10;
  return report;
}

}  // namespace purestate
