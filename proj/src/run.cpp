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

#include "purestate/run.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>

#include "purestate/basis.hpp"

namespace purestate {

namespace {

std::ofstream open_output(const std::string& dir, const std::string& name) {
  std::filesystem::create_directories(dir);
  const std::string path = dir + "/" + name;
  std::ofstream out(path);
  if (!out) throw ValidationError("output: cannot write " + path);
  out.precision(12);
  return out;
}

struct BuiltRun {
  CompositeSystem system;
  LindbladGenerator generator;
  ControlParameterization controls;
  PropagationGrid grid;
  ObjectiveSpec objective;
  DenseOp rho0;

  explicit BuiltRun(const RunConfig& cfg)
      : system(cfg.build_system()),
        generator(system),
        controls(cfg.build_controls()),
        grid(cfg.build_grid()),
        objective(cfg.build_objective()),
        rho0(cfg.build_initial_state()) {}
};

std::string effective_dir(const RunConfig& cfg, const RunOverrides& ov) {
  return ov.output_dir.empty() ? cfg.output_dir : ov.output_dir;
}

ControlVector load_or_zero_alpha(const RunOverrides& ov,
                                 const ControlParameterization& param) {
  if (!ov.alpha_file.empty()) return read_alpha_csv(ov.alpha_file, param);
  return ControlVector::Zero(param.num_coefficients());
}

/// Digits of the composite target index m, subsystem 1 first.
std::vector<int> target_digits(const CompositeSystem& system, int m) {
  const std::vector<int> dims = system.level_counts();
  std::vector<int> digits(dims.size());
  for (int q = static_cast<int>(dims.size()); q >= 1; --q) {
    digits[q - 1] = m % dims[q - 1];
    m /= dims[q - 1];
  }
  return digits;
}

std::vector<double> sample_times(const PropagationGrid& grid, int stride) {
  std::vector<double> times;
  for (int n = 0; n <= grid.steps; n += stride) times.push_back(grid.time(n));
  if (grid.steps % stride != 0) times.push_back(grid.final_time);
  return times;
}

void write_controls_csv(const RunConfig& cfg, const BuiltRun& run,
                        const ControlVector& alpha, const std::string& dir) {
  const std::vector<double> times = sample_times(run.grid, cfg.stride);
  for (int q = 1; q <= run.system.num_subsystems(); ++q) {
    std::ofstream out =
        open_output(dir, "controls_q" + std::to_string(q) + ".csv");
    out << "t_us,re_d,im_d,f_lab\n";
    const double omega_q = run.system.subsystem(q).omega();
    for (double t : times) {
      const Complex d = run.controls.rotating_control(q, alpha, t);
      out << t << "," << d.real() << "," << d.imag() << ","
          << run.controls.lab_control(q, alpha, t, omega_q) << "\n";
    }
  }
}

void write_trajectory_csv(const RunConfig& cfg, const BuiltRun& run,
                          const Trajectory& traj, const std::string& dir) {
  std::ofstream out = open_output(dir, "trajectory.csv");
  out << "t_us";
  for (int q = 1; q <= run.system.num_subsystems(); ++q) out << ",energy_q" << q;
  out << ",entropy,objective_integrand\n";
  for (size_t i = 0; i < traj.times.size(); ++i) {
    out << traj.times[i];
    for (double e : traj.energy[i]) out << "," << e;
    out << "," << traj.entropy[i] << "," << traj.objective[i] << "\n";
  }
  (void)cfg;
}

void write_final_state_csv(const DenseOp& rho, const std::string& dir) {
  std::ofstream out = open_output(dir, "final_state.csv");
  out << "re,im\n";
  for (int i = 0; i < rho.rows(); ++i) {
    for (int j = 0; j < rho.cols(); ++j) {
      out << rho(i, j).real() << "," << rho(i, j).imag() << "\n";
    }
  }
}

void write_summary(const RunConfig& cfg, const BuiltRun& run,
                   const DenseOp& rho_final, const CostBreakdown& cost,
                   const std::string& termination, const std::string& dir,
                   std::ostream& log) {
  std::ostringstream body;
  body.precision(10);
  body << "total_cost = " << cost.total << "\n";
  body << "final_cost = " << cost.final_cost << "\n";
  body << "tikhonov = " << cost.tikhonov << "\n";
  body << "penalty = " << cost.penalty << "\n";
  if (!termination.empty()) body << "termination = " << termination << "\n";
  if (cfg.initial_state != InitialStateMode::ExplicitState) {
    body << "average_fidelity = "
         << average_fidelity(rho_final, cfg.target_index) << "\n";
  }
  const std::vector<int> digits = target_digits(run.system, cfg.target_index);
  for (int q = 1; q <= run.system.num_subsystems(); ++q) {
    const DenseOp red = reduced_density(run.system, rho_final, q);
    body << "fidelity_q" << q << " = " << red(digits[q - 1], digits[q - 1]).real()
         << "\n";
  }
  std::ofstream out = open_output(dir, "summary.txt");
  out << body.str();
  log << body.str();
}

void simulate_outputs(const RunConfig& cfg, const BuiltRun& run,
                      const ControlVector& alpha, const CostBreakdown& cost,
                      const std::string& termination, const std::string& dir,
                      std::ostream& log) {
  const DenseOp obs = objective_observable(run.objective, run.system.dim());
  const Trajectory traj = propagate(run.generator, run.controls, alpha, run.rho0,
                                    run.grid, cfg.stride, &obs);
  write_trajectory_csv(cfg, run, traj, dir);
  write_controls_csv(cfg, run, alpha, dir);
  write_final_state_csv(traj.final_state, dir);
  write_summary(cfg, run, traj.final_state, cost, termination, dir, log);
}

double spectrum_sample_rate(const BuiltRun& run, int q) {
  const double omega_q = std::abs(run.system.subsystem(q).omega());
  double peak = 0.0;
  for (double w : run.controls.subsystem(q).carrier_freqs) {
    peak = std::max(peak, std::abs(omega_q + w));
  }
  const double nyquist_needed = 2.0 * peak / kTwoPi;
  const double floor_rate = 16.0 / run.grid.final_time;
  return std::max(4.0 * nyquist_needed, floor_rate);
}

}  // namespace

ControlVector read_alpha_csv(const std::string& path,
                             const ControlParameterization& param) {
  std::ifstream in(path);
  if (!in) throw ValidationError("alpha: cannot open " + path);
  ControlVector alpha = ControlVector::Zero(param.num_coefficients());
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (!std::isdigit(static_cast<unsigned char>(line[0]))) continue;  // header
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    int q = 0, s = 0, n = 0;
    double re = 0.0, im = 0.0;
    if (!(row >> q >> s >> n >> re >> im)) {
      throw ValidationError("alpha: malformed row " + std::to_string(lineno) +
                            " in " + path);
    }
    if (q < 1 || q > param.num_subsystems() || s < 1 ||
        s > param.subsystem(q).num_splines || n < 1 ||
        n > static_cast<int>(param.subsystem(q).carrier_freqs.size())) {
      throw ValidationError("alpha: indices out of range at row " +
                            std::to_string(lineno) + " in " + path);
    }
    alpha(param.coefficient_index(q, s, n, false)) = re;
    alpha(param.coefficient_index(q, s, n, true)) = im;
  }
  return alpha;
}

void write_alpha_csv(const std::string& path,
                     const ControlParameterization& param,
                     const ControlVector& alpha) {
  std::ofstream out(path);
  if (!out) throw ValidationError("alpha: cannot write " + path);
  out.precision(17);
  out << "q,s,n,re,im\n";
  for (int q = 1; q <= param.num_subsystems(); ++q) {
    const SubsystemControls& c = param.subsystem(q);
    for (int s = 1; s <= c.num_splines; ++s) {
      for (int n = 1; n <= static_cast<int>(c.carrier_freqs.size()); ++n) {
        out << q << "," << s << "," << n << ","
            << alpha(param.coefficient_index(q, s, n, false)) << ","
            << alpha(param.coefficient_index(q, s, n, true)) << "\n";
      }
    }
  }
}

void run_simulate(const RunConfig& cfg, const RunOverrides& overrides,
                  std::ostream& log) {
  BuiltRun run(cfg);
  const ControlVector alpha = load_or_zero_alpha(overrides, run.controls);
  const CostBreakdown cost = total_cost(run.generator, run.controls, alpha,
                                        run.rho0, run.grid, run.objective);
  simulate_outputs(cfg, run, alpha, cost, "", effective_dir(cfg, overrides), log);
}

void run_optimize(const RunConfig& cfg, const RunOverrides& overrides,
                  std::ostream& log) {
  BuiltRun run(cfg);
  const std::string dir = effective_dir(cfg, overrides);
  const unsigned seed = overrides.seed.value_or(cfg.seed);

  OptimizerOptions opts = cfg.build_optimizer_options(run.controls);
  opts.seed = seed;

  ControlVector alpha0;
  if (!overrides.alpha_file.empty()) {
    alpha0 = read_alpha_csv(overrides.alpha_file, run.controls);
  } else {
    const double box = opts.lower_bounds.size() > 0
                           ? opts.upper_bounds.cwiseAbs().minCoeff()
                           : 1.0;
    const double scale = std::isfinite(box)
                             ? cfg.initial_amplitude_factor * box
                             : cfg.initial_amplitude_factor;
    alpha0 = initial_guess(run.controls, scale, seed);
  }

  ControlProblem problem{&run.generator, &run.controls, run.rho0, run.grid,
                         run.objective};
  CostGradFn cost_grad = [&](const ControlVector& a) {
    return gradient(problem, a);
  };

  const std::vector<double> amp_times = sample_times(run.grid, cfg.stride);
  AmplitudeFn amplitudes = [&](const ControlVector& a) {
    std::vector<double> amps;
    for (int q = 1; q <= run.system.num_subsystems(); ++q) {
      amps.push_back(run.controls.max_lab_amplitude(
          q, a, run.system.subsystem(q).omega(), amp_times));
    }
    return amps;
  };

  std::ofstream history = open_output(dir, "history.csv");
  history << "iter,total,final_cost,tikhonov,penalty,grad_norm,step";
  for (int q = 1; q <= run.system.num_subsystems(); ++q) {
    history << ",max_amp_q" << q;
  }
  history << "\n";
  IterationCallback on_iter = [&](const IterationRecord& rec) {
    history << rec.iter << "," << rec.cost.total << "," << rec.cost.final_cost
            << "," << rec.cost.tikhonov << "," << rec.cost.penalty << ","
            << rec.grad_norm << "," << rec.step_length;
    for (double a : rec.max_lab_amplitude) history << "," << a;
    history << "\n";
    history.flush();
    log << "iter " << rec.iter << " total " << rec.cost.total << " grad "
        << rec.grad_norm << "\n";
  };

  const MinimizeResult result =
      minimize(cost_grad, alpha0, opts, amplitudes, on_iter);
  write_alpha_csv(dir + "/alpha.csv", run.controls, result.alpha);
  simulate_outputs(cfg, run, result.alpha, result.cost,
                   termination_name(result.reason), dir, log);
}

double run_gradcheck(const RunConfig& cfg, const RunOverrides& overrides,
                     std::ostream& log) {
  BuiltRun run(cfg);
  const std::string dir = effective_dir(cfg, overrides);
  const unsigned seed = overrides.seed.value_or(cfg.seed);

  ControlVector alpha;
  if (!overrides.alpha_file.empty()) {
    alpha = read_alpha_csv(overrides.alpha_file, run.controls);
  } else {
    alpha = initial_guess(run.controls, cfg.initial_amplitude_factor, seed);
  }

  const int total = run.controls.num_coefficients();
  const int nsample = std::min(20, total);
  std::vector<int> coords(total);
  for (int i = 0; i < total; ++i) coords[i] = i;
  std::mt19937 rng(seed);
  std::shuffle(coords.begin(), coords.end(), rng);
  coords.resize(nsample);
  std::sort(coords.begin(), coords.end());

  const std::vector<double> eps_list{1e-3, 1e-4, 1e-5};
  ControlProblem problem{&run.generator, &run.controls, run.rho0, run.grid,
                         run.objective};
  const FdReport report = fd_check(problem, alpha, coords, eps_list);

  std::ofstream out = open_output(dir, "gradcheck.csv");
  out << "coord,eps,adjoint,fd,rel_err\n";
  for (const FdEntry& e : report.entries) {
    out << e.coord << "," << e.eps << "," << e.adjoint << "," << e.fd << ","
        << e.rel_err << "\n";
  }
  for (const FdEntry& e : report.best_per_coord) {
    log << "coord " << e.coord << " adjoint " << e.adjoint << " fd " << e.fd
        << " rel_err " << e.rel_err << "\n";
  }
  log << "max_rel_err = " << report.max_rel_err << "\n";
  return report.max_rel_err;
}

bool run_verify_basis(int max_n, std::ostream& log) {
  if (max_n < 2) throw ValidationError("verify-basis: max dimension must be >= 2");
  bool all_ok = true;
  for (int n = 2; n <= max_n; ++n) {
    const BasisReport report = verify_basis(n);
    log << "n = " << std::setw(2) << n
        << "  hermitian " << (report.hermitian ? "ok" : "FAIL")
        << "  trace " << (report.unit_trace ? "ok" : "FAIL")
        << "  psd " << (report.psd ? "ok" : "FAIL")
        << "  rank1 " << (report.rank_one ? "ok" : "FAIL")
        << "  independent " << (report.independent ? "ok" : "FAIL") << "\n";
    all_ok = all_ok && report.all_ok();
  }
  return all_ok;
}

void run_spectrum(const RunConfig& cfg, const RunOverrides& overrides,
                  std::ostream& log) {
  BuiltRun run(cfg);
  const std::string dir = effective_dir(cfg, overrides);
  const ControlVector alpha = load_or_zero_alpha(overrides, run.controls);
  for (int q = 1; q <= run.system.num_subsystems(); ++q) {
    const double rate = spectrum_sample_rate(run, q);
    const auto spectrum = control_spectrum(
        run.controls, alpha, q, run.system.subsystem(q).omega(), rate);
    std::ofstream out =
        open_output(dir, "spectrum_q" + std::to_string(q) + ".csv");
    out << "freq_ghz,magnitude\n";
    for (const auto& [freq, mag] : spectrum) {
      out << freq << "," << mag << "\n";
    }
    log << "spectrum_q" << q << ".csv: " << spectrum.size()
        << " bins at " << rate << " samples/us\n";
  }
}

}  // namespace purestate
