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

#include "purestate/control.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace purestate {

namespace {

// Cardinal quadratic B-spline on [0, 3].
double cardinal_bspline(double u) {
  if (u < 0.0 || u > 3.0) return 0.0;
  if (u < 1.0) return 0.5 * u * u;
  if (u < 2.0) return -u * u + 3.0 * u - 1.5;
  return 0.5 * (3.0 - u) * (3.0 - u);
}

}  // namespace

ControlParameterization::ControlParameterization(
    std::vector<SubsystemControls> per_subsystem, double final_time)
    : controls_(std::move(per_subsystem)), final_time_(final_time) {
  if (controls_.empty()) {
    throw ValidationError("control: at least one subsystem is required");
  }
  if (!(final_time_ > 0.0)) {
    throw ValidationError("control: final time must be positive");
  }
  offsets_.reserve(controls_.size());
  for (size_t q = 0; q < controls_.size(); ++q) {
    const SubsystemControls& c = controls_[q];
    if (c.num_splines < 3) {
      throw ValidationError("control: subsystem " + std::to_string(q + 1) +
                            " needs at least 3 splines");
    }
    if (c.carrier_freqs.empty()) {
      throw ValidationError("control: subsystem " + std::to_string(q + 1) +
                            " needs at least 1 carrier frequency");
    }
    offsets_.push_back(total_coeffs_);
    total_coeffs_ += 2 * c.num_splines * static_cast<int>(c.carrier_freqs.size());
  }
}

const SubsystemControls& ControlParameterization::subsystem(int q) const {
  if (q < 1 || q > num_subsystems()) {
    throw ValidationError("control: subsystem index " + std::to_string(q) +
                          " out of range");
  }
  return controls_[q - 1];
}

double ControlParameterization::knot_spacing(int q) const {
  return final_time_ / (subsystem(q).num_splines - 2);
}

double ControlParameterization::center(int q, int s) const {
  if (s < 1 || s > subsystem(q).num_splines) {
    throw ValidationError("control: spline index " + std::to_string(s) +
                          " out of range");
  }
  return knot_spacing(q) * (s - 1.5);
}

int ControlParameterization::offset(int q) const {
  subsystem(q);
  return offsets_[q - 1];
}

int ControlParameterization::coefficient_index(int q, int s, int n,
                                               bool imag_part) const {
  const SubsystemControls& c = subsystem(q);
  const int nf = static_cast<int>(c.carrier_freqs.size());
  return offsets_[q - 1] + 2 * ((s - 1) * nf + (n - 1)) + (imag_part ? 1 : 0);
}

double ControlParameterization::bspline_value(int q, int s, double t) const {
  const double dtau = knot_spacing(q);
  const double u = (t - center(q, s)) / dtau + 1.5;
  return cardinal_bspline(u);
}

std::pair<int, int> ControlParameterization::active_splines(int q,
                                                            double t) const {
  const SubsystemControls& c = subsystem(q);
  const double dtau = knot_spacing(q);
  // Support of spline s is tau_s +- 3 dtau/2, i.e. (s-3)dtau < t < s dtau.
  const int lo = std::max(1, static_cast<int>(std::floor(t / dtau)) + 1);
  const int hi = std::min(c.num_splines, static_cast<int>(std::ceil(t / dtau)) + 2);
  return {lo, hi};
}

Complex ControlParameterization::rotating_control(int q,
                                                  const ControlVector& alpha,
                                                  double t) const {
  const SubsystemControls& c = subsystem(q);
  if (alpha.size() != total_coeffs_) {
    throw ValidationError("control: coefficient vector length mismatch");
  }
  const int nf = static_cast<int>(c.carrier_freqs.size());
  const auto [slo, shi] = active_splines(q, t);
  Complex d(0.0, 0.0);
  for (int s = slo; s <= shi; ++s) {
    const double env = bspline_value(q, s, t);
    if (env == 0.0) continue;
    for (int n = 1; n <= nf; ++n) {
      const Complex coeff(alpha(coefficient_index(q, s, n, false)),
                          alpha(coefficient_index(q, s, n, true)));
      const double phase = t * c.carrier_freqs[n - 1];
      d += env * coeff * Complex(std::cos(phase), std::sin(phase));
    }
  }
  return d;
}

double ControlParameterization::lab_control(int q, const ControlVector& alpha,
                                            double t, double omega_q) const {
  const Complex d = rotating_control(q, alpha, t);
  return 2.0 * (d * Complex(std::cos(omega_q * t), std::sin(omega_q * t))).real();
}

double ControlParameterization::max_lab_amplitude(
    int q, const ControlVector& alpha, double omega_q,
    const std::vector<double>& times) const {
  double m = 0.0;
  for (double t : times) m = std::max(m, std::abs(lab_control(q, alpha, t, omega_q)));
  return m;
}

void ControlParameterization::accumulate_gradient(int q, double t, double mu_re,
                                                  double mu_im,
                                                  Eigen::VectorXd& grad) const {
  const SubsystemControls& c = subsystem(q);
  const int nf = static_cast<int>(c.carrier_freqs.size());
  const auto [slo, shi] = active_splines(q, t);
  for (int s = slo; s <= shi; ++s) {
    const double env = bspline_value(q, s, t);
    if (env == 0.0) continue;
    for (int n = 1; n <= nf; ++n) {
      const double phase = t * c.carrier_freqs[n - 1];
      const double cs = std::cos(phase), sn = std::sin(phase);
      // Re d = sum env (a1 cos - a2 sin), Im d = sum env (a1 sin + a2 cos).
      grad(coefficient_index(q, s, n, false)) += env * (mu_re * cs + mu_im * sn);
      grad(coefficient_index(q, s, n, true)) += env * (-mu_re * sn + mu_im * cs);
    }
  }
}

std::vector<std::pair<double, double>> control_spectrum(
    const ControlParameterization& param, const ControlVector& alpha, int q,
    double omega_q, double sample_rate) {
  double max_carrier_hz = 0.0;  // cycles per us
  for (double w : param.subsystem(q).carrier_freqs) {
    max_carrier_hz = std::max(max_carrier_hz, std::abs(omega_q + w) / kTwoPi);
  }
  if (sample_rate < 2.0 * max_carrier_hz) {
    throw ValidationError(
        "control: spectrum sample rate undersamples the lab carriers");
  }
  const double dt = 1.0 / sample_rate;
  const int samples = static_cast<int>(std::floor(param.final_time() / dt)) + 1;
  std::vector<double> f(samples);
  for (int i = 0; i < samples; ++i) {
    f[i] = param.lab_control(q, alpha, i * dt, omega_q);
  }
  std::vector<std::pair<double, double>> out;
  const int nfreq = samples / 2 + 1;
  out.reserve(nfreq);
  for (int k = 0; k < nfreq; ++k) {
    Complex acc(0.0, 0.0);
    const double w = -kTwoPi * k / samples;
    for (int i = 0; i < samples; ++i) {
      acc += f[i] * Complex(std::cos(w * i), std::sin(w * i));
    }
    const double freq_ghz = (k * sample_rate / samples) / 1000.0;
    out.emplace_back(freq_ghz, std::abs(acc) / samples);
  }
  return out;
}

}  // namespace purestate
