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

#include <utility>
#include <vector>

#include "purestate/system.hpp"

namespace purestate {

/// Real coefficient vector alpha. Layout: for each subsystem q, for each
/// spline s, for each carrier n: [real part, imaginary part].
using ControlVector = Eigen::VectorXd;

struct SubsystemControls {
  int num_splines = 3;
  std::vector<double> carrier_freqs;  // rotating frame, rad/us
};

/// Quadratic B-spline envelopes modulating carrier waves. The splines sit on
/// a uniform knot grid with spacing dtau = T/(N_s - 2) and centers
/// tau_s = dtau*(s - 3/2) for s = 1..N_s, so their support covers [0, T].
class ControlParameterization {
 public:
  ControlParameterization(std::vector<SubsystemControls> per_subsystem,
                          double final_time);

  int num_subsystems() const { return static_cast<int>(controls_.size()); }
  double final_time() const { return final_time_; }
  const SubsystemControls& subsystem(int q) const;

  double knot_spacing(int q) const;
  /// Center tau_s of spline s (1-based, as in the envelope formula).
  double center(int q, int s) const;

  int num_coefficients() const { return total_coeffs_; }
  /// Offset of subsystem q's coefficient block in the control vector.
  int offset(int q) const;
  /// Flat index of the (re/im) coefficient of spline s, carrier n.
  int coefficient_index(int q, int s, int n, bool imag_part) const;

  /// Envelope S_s(t): the cardinal quadratic B-spline on [0,3] evaluated at
  /// u = (t - tau_s)/dtau + 3/2. C^1, compact support, partition of unity on
  /// the interior of [0, T].
  double bspline_value(int q, int s, double t) const;

  /// Range [s_lo, s_hi] (1-based, inclusive) of splines whose support
  /// contains t. At most three.
  std::pair<int, int> active_splines(int q, double t) const;

  /// Rotating-frame control d^q(t) = sum_s S_s(t) sum_n alpha_{s,n} e^{it W_n}.
  Complex rotating_control(int q, const ControlVector& alpha, double t) const;

  /// Lab-frame control f^q(t) = 2 Re(d^q(t) e^{i w_q t}).
  double lab_control(int q, const ControlVector& alpha, double t,
                     double omega_q) const;

  /// max_i |f^q(t_i)| over the given sample times.
  double max_lab_amplitude(int q, const ControlVector& alpha, double omega_q,
                           const std::vector<double>& times) const;

  /// Accumulate into grad the chain-rule contribution at time t from the
  /// sensitivities (mu_re, mu_im) of a cost with respect to
  /// (Re d^q(t), Im d^q(t)).
  void accumulate_gradient(int q, double t, double mu_re, double mu_im,
                           Eigen::VectorXd& grad) const;

 private:
  std::vector<SubsystemControls> controls_;
  std::vector<int> offsets_;
  double final_time_ = 0.0;
  int total_coeffs_ = 0;
};

/// Magnitude of the discrete Fourier transform of the lab-frame control,
/// sampled at `sample_rate` samples per microsecond over [0, T]. Returns
/// (frequency in GHz, magnitude) pairs up to the Nyquist frequency.
std::vector<std::pair<double, double>> control_spectrum(
    const ControlParameterization& param, const ControlVector& alpha, int q,
    double omega_q, double sample_rate);

}  // namespace purestate
