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

#include <complex>
#include <limits>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "purestate/errors.hpp"

namespace purestate {

using Complex = std::complex<double>;
using SparseOp = Eigen::SparseMatrix<Complex>;
using DenseOp = Eigen::MatrixXcd;

inline constexpr double kTwoPi = 6.283185307179586476925286766559;
inline constexpr double kInfiniteTime = std::numeric_limits<double>::infinity();

/// One qudit or cavity mode. Frequencies are quoted as omega/2pi in GHz and
/// Kerr coefficients as xi/2pi in MHz; decoherence times in microseconds.
/// An infinite (or omitted) T1/T2 disables the corresponding collapse channel.
struct SubsystemSpec {
  int levels = 2;
  double freq_ghz = 0.0;
  double selfkerr_mhz = 0.0;
  double t1_us = kInfiniteTime;
  double t2_us = kInfiniteTime;

  bool has_decay() const { return std::isfinite(t1_us); }
  bool has_dephasing() const { return std::isfinite(t2_us); }

  // Angular frequencies in rad/us. GHz = 1000 cycles/us, MHz = 1 cycle/us,
  // so the 2pi multiplication happens exactly here and nowhere else.
  double omega() const { return kTwoPi * 1000.0 * freq_ghz; }
  double selfkerr() const { return kTwoPi * selfkerr_mhz; }
};

/// Cross-Kerr coupling between subsystems p and q (1-based, p != q).
struct CrossKerr {
  int p = 0;
  int q = 0;
  double mhz = 0.0;

  double value() const { return kTwoPi * mhz; }  // rad/us
};

enum class Frame { Lab, Rotating };

/// Composite qudit-cavity Hilbert space. Subsystem 1 is the slowest-varying
/// Kronecker factor. All operator construction lives here; constructed
/// operators are immutable and shareable.
class CompositeSystem {
 public:
  CompositeSystem(std::vector<SubsystemSpec> subsystems,
                  std::vector<CrossKerr> crosskerr = {});

  int num_subsystems() const { return static_cast<int>(subsystems_.size()); }
  int dim() const { return dim_; }

  /// Subsystem q, 1-based as in the configuration file.
  const SubsystemSpec& subsystem(int q) const;

  /// Cross-Kerr coefficient xi_pq in rad/us; 0 if the pair is uncoupled.
  double crosskerr(int p, int q) const;

  /// Level counts of all subsystems in order.
  std::vector<int> level_counts() const;

  /// I (x) ... (x) A_{n_q} (x) ... (x) I with superdiagonal sqrt(1..n_q-1).
  SparseOp lowering_operator(int q) const;

  /// a_q^dag a_q.
  SparseOp number_operator(int q) const;

  /// Sum_q (w_q n_q - xi_q/2 a^dag a^dag a a - sum_{p>q} xi_pq n_p n_q);
  /// the rotating frame drops the w_q n_q term. Diagonal in the Fock basis.
  SparseOp drift_hamiltonian(Frame frame) const;

  /// Decay operators a_q/sqrt(T1) and dephasing operators n_q/sqrt(T2) for
  /// every subsystem with a finite decoherence time.
  std::vector<SparseOp> collapse_operators() const;

 private:
  void check_subsystem_index(int q) const;

  std::vector<SubsystemSpec> subsystems_;
  std::vector<CrossKerr> crosskerr_;
  std::vector<int> strides_;  // stride of subsystem q in the composite index
  int dim_ = 0;
};

}  // namespace purestate
