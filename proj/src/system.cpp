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

#include "purestate/system.hpp"

#include <cmath>
#include <string>

namespace purestate {

namespace {

// Digit of the composite index i belonging to subsystem with the given
// stride and level count (subsystem 1 is the slowest-varying factor).
inline int digit(int i, int stride, int levels) { return (i / stride) % levels; }

}  // namespace

CompositeSystem::CompositeSystem(std::vector<SubsystemSpec> subsystems,
                                 std::vector<CrossKerr> crosskerr)
    : subsystems_(std::move(subsystems)), crosskerr_(std::move(crosskerr)) {
  if (subsystems_.empty()) {
    throw ValidationError("system: at least one subsystem is required");
  }
  dim_ = 1;
  for (size_t q = 0; q < subsystems_.size(); ++q) {
    const SubsystemSpec& s = subsystems_[q];
    if (s.levels < 2) {
      throw ValidationError("system: subsystem " + std::to_string(q + 1) +
                            " must have at least 2 levels");
    }
    if (s.t1_us <= 0.0 || s.t2_us <= 0.0) {
      throw ValidationError("system: subsystem " + std::to_string(q + 1) +
                            " has a nonpositive decoherence time");
    }
    dim_ *= s.levels;
  }
  strides_.assign(subsystems_.size(), 1);
  for (int q = static_cast<int>(subsystems_.size()) - 2; q >= 0; --q) {
    strides_[q] = strides_[q + 1] * subsystems_[q + 1].levels;
  }
  const int nsub = num_subsystems();
  for (CrossKerr& ck : crosskerr_) {
    if (ck.p < 1 || ck.p > nsub || ck.q < 1 || ck.q > nsub || ck.p == ck.q) {
      throw ValidationError("system: crosskerr pair (" + std::to_string(ck.p) +
                            "," + std::to_string(ck.q) +
                            ") does not name two distinct subsystems");
    }
    if (ck.p < ck.q) std::swap(ck.p, ck.q);  // store once per unordered pair
  }
  for (size_t a = 0; a < crosskerr_.size(); ++a) {
    for (size_t b = a + 1; b < crosskerr_.size(); ++b) {
      if (crosskerr_[a].p == crosskerr_[b].p &&
          crosskerr_[a].q == crosskerr_[b].q) {
        throw ValidationError("system: duplicate crosskerr pair (" +
                              std::to_string(crosskerr_[a].p) + "," +
                              std::to_string(crosskerr_[a].q) + ")");
      }
    }
  }
}

void CompositeSystem::check_subsystem_index(int q) const {
  if (q < 1 || q > num_subsystems()) {
    throw ValidationError("system: subsystem index " + std::to_string(q) +
                          " out of range 1.." +
                          std::to_string(num_subsystems()));
  }
}

const SubsystemSpec& CompositeSystem::subsystem(int q) const {
  check_subsystem_index(q);
  return subsystems_[q - 1];
}

double CompositeSystem::crosskerr(int p, int q) const {
  check_subsystem_index(p);
  check_subsystem_index(q);
  if (p < q) std::swap(p, q);
  for (const CrossKerr& ck : crosskerr_) {
    if (ck.p == p && ck.q == q) return ck.value();
  }
  return 0.0;
}

std::vector<int> CompositeSystem::level_counts() const {
  std::vector<int> out;
  out.reserve(subsystems_.size());
  for (const SubsystemSpec& s : subsystems_) out.push_back(s.levels);
  return out;
}

SparseOp CompositeSystem::lowering_operator(int q) const {
  check_subsystem_index(q);
  const int stride = strides_[q - 1];
  const int levels = subsystems_[q - 1].levels;
  std::vector<Eigen::Triplet<Complex>> entries;
  entries.reserve(static_cast<size_t>(dim_));
  for (int i = 0; i < dim_; ++i) {
    const int k = digit(i, stride, levels);
    if (k >= 1) {
      entries.emplace_back(i - stride, i, Complex(std::sqrt(double(k)), 0.0));
    }
  }
  SparseOp op(dim_, dim_);
  op.setFromTriplets(entries.begin(), entries.end());
  return op;
}

SparseOp CompositeSystem::number_operator(int q) const {
  check_subsystem_index(q);
  const int stride = strides_[q - 1];
  const int levels = subsystems_[q - 1].levels;
  std::vector<Eigen::Triplet<Complex>> entries;
  entries.reserve(static_cast<size_t>(dim_));
  for (int i = 0; i < dim_; ++i) {
    const int k = digit(i, stride, levels);
    if (k != 0) entries.emplace_back(i, i, Complex(double(k), 0.0));
  }
  SparseOp op(dim_, dim_);
  op.setFromTriplets(entries.begin(), entries.end());
  return op;
}

SparseOp CompositeSystem::drift_hamiltonian(Frame frame) const {
  const int nsub = num_subsystems();
  std::vector<Eigen::Triplet<Complex>> entries;
  entries.reserve(static_cast<size_t>(dim_));
  for (int i = 0; i < dim_; ++i) {
    double h = 0.0;
    for (int q = 0; q < nsub; ++q) {
      const SubsystemSpec& s = subsystems_[q];
      const double kq = digit(i, strides_[q], s.levels);
      if (frame == Frame::Lab) h += s.omega() * kq;
      h -= 0.5 * s.selfkerr() * kq * (kq - 1.0);  // a^dag a^dag a a = n(n-1)
      for (int p = q + 1; p < nsub; ++p) {
        const double kp = digit(i, strides_[p], subsystems_[p].levels);
        h -= crosskerr(p + 1, q + 1) * kp * kq;
      }
    }
    if (h != 0.0) entries.emplace_back(i, i, Complex(h, 0.0));
  }
  SparseOp op(dim_, dim_);
  op.setFromTriplets(entries.begin(), entries.end());
  return op;
}

std::vector<SparseOp> CompositeSystem::collapse_operators() const {
  std::vector<SparseOp> out;
  for (int q = 1; q <= num_subsystems(); ++q) {
    const SubsystemSpec& s = subsystems_[q - 1];
    if (s.has_decay()) {
      out.push_back(SparseOp(lowering_operator(q) / std::sqrt(s.t1_us)));
    }
    if (s.has_dephasing()) {
      out.push_back(SparseOp(number_operator(q) / std::sqrt(s.t2_us)));
    }
  }
  return out;
}

}  // namespace purestate
