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

#include "purestate/config.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "purestate/basis.hpp"

namespace purestate {

namespace {

struct Entry {
  std::string key;
  std::string value;
  int line = 0;
  mutable bool used = false;
};

struct Section {
  std::string name;
  int line = 0;
  std::vector<Entry> entries;
  mutable bool used = false;
};

struct ParsedFile {
  std::string origin;
  std::vector<Section> sections;

  [[noreturn]] void fail(const std::string& msg, int line = 0) const {
    std::string where = origin;
    if (line > 0) where += ":" + std::to_string(line);
    throw ValidationError(where + ": " + msg);
  }

  const Section* find(const std::string& name) const {
    for (const Section& s : sections) {
      if (s.name == name) {
        s.used = true;
        return &s;
      }
    }
    return nullptr;
  }

  const Section& require(const std::string& name) const {
    const Section* s = find(name);
    if (s == nullptr) fail("missing section [" + name + "]");
    return *s;
  }

  void check_all_used() const {
    for (const Section& s : sections) {
      if (!s.used) fail("unknown section [" + s.name + "]", s.line);
      for (const Entry& e : s.entries) {
        if (!e.used) {
          fail("unknown key '" + e.key + "' in section [" + s.name + "]",
               e.line);
        }
      }
    }
  }
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

ParsedFile tokenize(const std::string& text, const std::string& origin) {
  ParsedFile file;
  file.origin = origin;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  Section* current = nullptr;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw;
    const auto comment = line.find_first_of("#;");
    if (comment != std::string::npos) line = line.substr(0, comment);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') file.fail("malformed section header", lineno);
      file.sections.push_back({trim(line.substr(1, line.size() - 2)), lineno, {}});
      current = &file.sections.back();
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) file.fail("expected key = value", lineno);
    if (current == nullptr) file.fail("key outside any section", lineno);
    current->entries.push_back(
        {trim(line.substr(0, eq)), trim(line.substr(eq + 1)), lineno});
  }
  return file;
}

class SectionReader {
 public:
  SectionReader(const ParsedFile& file, const Section& section)
      : file_(&file), section_(&section) {}

  const Entry* find(const std::string& key) const {
    for (const Entry& e : section_->entries) {
      if (e.key == key) {
        e.used = true;
        return &e;
      }
    }
    return nullptr;
  }

  bool has(const std::string& key) const { return find(key) != nullptr; }

  std::string get_string(const std::string& key, const std::string& fallback) const {
    const Entry* e = find(key);
    return e != nullptr ? e->value : fallback;
  }

  std::string require_string(const std::string& key) const {
    const Entry* e = find(key);
    if (e == nullptr) {
      file_->fail("missing key '" + key + "' in section [" + section_->name + "]",
                  section_->line);
    }
    return e->value;
  }

  double parse_number(const std::string& value, int line) const {
    if (value == "inf" || value == "--") {
      return std::numeric_limits<double>::infinity();
    }
    try {
      size_t pos = 0;
      const double v = std::stod(value, &pos);
      if (pos != value.size()) throw std::invalid_argument(value);
      return v;
    } catch (const std::exception&) {
      file_->fail("malformed number '" + value + "' in section [" +
                      section_->name + "]",
                  line);
    }
  }

  double get_double(const std::string& key, double fallback) const {
    const Entry* e = find(key);
    return e != nullptr ? parse_number(e->value, e->line) : fallback;
  }

  double require_double(const std::string& key) const {
    const Entry* e = find(key);
    if (e == nullptr) {
      file_->fail("missing key '" + key + "' in section [" + section_->name + "]",
                  section_->line);
    }
    return parse_number(e->value, e->line);
  }

  int get_int(const std::string& key, int fallback) const {
    const double v = get_double(key, fallback);
    if (v != std::floor(v)) {
      file_->fail("key '" + key + "' must be an integer", section_->line);
    }
    return static_cast<int>(v);
  }

  std::vector<double> get_double_list(const std::string& key) const {
    const Entry* e = find(key);
    std::vector<double> out;
    if (e == nullptr) return out;
    std::istringstream in(e->value);
    std::string tok;
    while (in >> tok) {
      if (!tok.empty() && tok.back() == ',') tok.pop_back();
      if (tok.empty()) continue;
      out.push_back(parse_number(tok, e->line));
    }
    return out;
  }

  const Section& section() const { return *section_; }
  const ParsedFile& file() const { return *file_; }

 private:
  const ParsedFile* file_;
  const Section* section_;
};

std::string initial_state_name(InitialStateMode m) {
  switch (m) {
    case InitialStateMode::FullEnsemble: return "full-ensemble";
    case InitialStateMode::PartialEnsemble: return "partial-ensemble";
    case InitialStateMode::ExplicitState: return "explicit-state";
  }
  return "full-ensemble";
}

void check_file_exists(const ParsedFile& file, const std::string& path) {
  if (!std::filesystem::exists(path)) {
    file.fail("referenced file does not exist: " + path);
  }
}

}  // namespace

RunConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("config: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path);
}

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
  const ParsedFile file = tokenize(text, origin);
  RunConfig cfg;

  SectionReader system(file, file.require("system"));
  const int nsub = system.get_int("subsystems", -1);
  if (nsub < 1) file.fail("[system] subsystems must be >= 1");

  for (int q = 1; q <= nsub; ++q) {
    SectionReader sub(file, file.require("subsystem " + std::to_string(q)));
    SubsystemSpec spec;
    spec.levels = sub.get_int("levels", -1);
    if (spec.levels < 2) {
      file.fail("[subsystem " + std::to_string(q) + "] needs levels >= 2",
                sub.section().line);
    }
    spec.freq_ghz = sub.require_double("freq_ghz");
    spec.selfkerr_mhz = sub.get_double("selfkerr_mhz", 0.0);
    spec.t1_us = sub.get_double("t1_us", kInfiniteTime);
    spec.t2_us = sub.get_double("t2_us", kInfiniteTime);
    if (spec.t1_us <= 0.0 || spec.t2_us <= 0.0) {
      file.fail("[subsystem " + std::to_string(q) +
                    "] decoherence times must be positive (omit or 'inf' to "
                    "disable)",
                sub.section().line);
    }
    cfg.subsystems.push_back(spec);
  }

  for (const Entry& e : system.section().entries) {
    if (e.key != "crosskerr") continue;
    e.used = true;
    std::istringstream in(e.value);
    int p = 0, q = 0;
    double mhz = 0.0;
    if (!(in >> p >> q >> mhz)) {
      file.fail("crosskerr expects 'p q value_mhz'", e.line);
    }
    if (p < 1 || p > nsub || q < 1 || q > nsub || p == q) {
      file.fail("crosskerr pair (" + std::to_string(p) + "," +
                    std::to_string(q) + ") does not name two distinct subsystems",
                e.line);
    }
    cfg.crosskerr.push_back({p, q, mhz});
  }

  for (int q = 1; q <= nsub; ++q) {
    SectionReader ctl(file, file.require("control " + std::to_string(q)));
    RunConfig::ControlSection c;
    c.num_splines = ctl.get_int("num_splines", -1);
    if (c.num_splines < 3) {
      file.fail("[control " + std::to_string(q) + "] needs num_splines >= 3",
                ctl.section().line);
    }
    c.carrier_freqs_mhz = ctl.get_double_list("carrier_freqs_mhz");
    if (c.carrier_freqs_mhz.empty()) {
      file.fail("[control " + std::to_string(q) +
                    "] needs at least one carrier frequency",
                ctl.section().line);
    }
    c.lab_amp_bound_mhz = ctl.get_double("lab_amp_bound_mhz", 0.0);
    cfg.control.push_back(c);
  }

  SectionReader grid(file, file.require("grid"));
  cfg.final_time_us = grid.require_double("T_us");
  cfg.steps = grid.get_int("steps", -1);
  if (!(cfg.final_time_us > 0.0) || cfg.steps < 1) {
    file.fail("[grid] needs positive T_us and steps");
  }

  SectionReader target(file, file.require("target"));
  cfg.target_index = target.get_int("index", 0);
  cfg.unitary_file = target.get_string("unitary_file", "");
  const std::string mode = target.get_string("initial_state", "full-ensemble");
  if (mode == "full-ensemble") {
    cfg.initial_state = InitialStateMode::FullEnsemble;
  } else if (mode == "partial-ensemble") {
    cfg.initial_state = InitialStateMode::PartialEnsemble;
  } else if (mode == "explicit-state") {
    cfg.initial_state = InitialStateMode::ExplicitState;
  } else {
    file.fail("[target] unknown initial_state mode '" + mode + "'");
  }
  {
    const std::vector<double> subs = target.get_double_list("basis_subsystems");
    for (double v : subs) {
      const int q = static_cast<int>(v);
      if (q < 1 || q > nsub) file.fail("[target] basis subsystem out of range");
      cfg.basis_subsystems.push_back(q);
    }
  }
  cfg.state_file = target.get_string("state_file", "");
  if (cfg.initial_state == InitialStateMode::PartialEnsemble &&
      cfg.basis_subsystems.empty()) {
    file.fail("[target] partial-ensemble needs basis_subsystems");
  }
  if (cfg.initial_state == InitialStateMode::ExplicitState) {
    if (cfg.state_file.empty()) file.fail("[target] explicit-state needs state_file");
    check_file_exists(file, cfg.state_file);
  }
  if (!cfg.unitary_file.empty()) check_file_exists(file, cfg.unitary_file);

  int dim = 1;
  for (const SubsystemSpec& s : cfg.subsystems) dim *= s.levels;
  if (cfg.target_index < 0 || cfg.target_index >= dim) {
    file.fail("[target] index " + std::to_string(cfg.target_index) +
              " out of range for dimension " + std::to_string(dim));
  }

  if (const Section* s = file.find("objective")) {
    SectionReader obj(file, *s);
    cfg.gamma1 = obj.get_double("gamma1", cfg.gamma1);
    cfg.gamma2 = obj.get_double("gamma2", cfg.gamma2);
    cfg.penalty_width_us = obj.get_double("penalty_width_us", cfg.penalty_width_us);
    if (cfg.gamma1 < 0.0 || cfg.gamma2 < 0.0 || !(cfg.penalty_width_us > 0.0)) {
      file.fail("[objective] weights must be >= 0 and width > 0");
    }
  }

  if (const Section* s = file.find("optimizer")) {
    SectionReader opt(file, *s);
    cfg.max_iters = opt.get_int("max_iters", cfg.max_iters);
    cfg.lbfgs_memory = opt.get_int("lbfgs_memory", cfg.lbfgs_memory);
    cfg.grad_tol = opt.get_double("grad_tol", cfg.grad_tol);
    cfg.cost_tol = opt.get_double("cost_tol", cfg.cost_tol);
    cfg.max_line_search_trials =
        opt.get_int("max_line_search_trials", cfg.max_line_search_trials);
    cfg.initial_amplitude_factor =
        opt.get_double("initial_amplitude_factor", cfg.initial_amplitude_factor);
    cfg.seed = static_cast<unsigned>(opt.get_int("seed", static_cast<int>(cfg.seed)));
  }

  if (const Section* s = file.find("output")) {
    SectionReader out(file, *s);
    cfg.output_dir = out.get_string("directory", cfg.output_dir);
    cfg.stride = out.get_int("stride", cfg.stride);
    if (cfg.stride < 1) file.fail("[output] stride must be >= 1");
  }

  file.check_all_used();
  return cfg;
}

std::string serialize_config(const RunConfig& cfg) {
  std::ostringstream out;
  out.precision(17);
  out << "[system]\n";
  out << "subsystems = " << cfg.subsystems.size() << "\n";
  for (const CrossKerr& ck : cfg.crosskerr) {
    out << "crosskerr = " << ck.p << " " << ck.q << " " << ck.mhz << "\n";
  }
  for (size_t q = 1; q <= cfg.subsystems.size(); ++q) {
    const SubsystemSpec& s = cfg.subsystems[q - 1];
    out << "\n[subsystem " << q << "]\n";
    out << "levels = " << s.levels << "\n";
    out << "freq_ghz = " << s.freq_ghz << "\n";
    out << "selfkerr_mhz = " << s.selfkerr_mhz << "\n";
    out << "t1_us = " << (std::isfinite(s.t1_us) ? std::to_string(s.t1_us) : "inf")
        << "\n";
    out << "t2_us = " << (std::isfinite(s.t2_us) ? std::to_string(s.t2_us) : "inf")
        << "\n";
  }
  for (size_t q = 1; q <= cfg.control.size(); ++q) {
    const RunConfig::ControlSection& c = cfg.control[q - 1];
    out << "\n[control " << q << "]\n";
    out << "num_splines = " << c.num_splines << "\n";
    out << "carrier_freqs_mhz =";
    for (double f : c.carrier_freqs_mhz) out << " " << f;
    out << "\n";
    out << "lab_amp_bound_mhz = " << c.lab_amp_bound_mhz << "\n";
  }
  out << "\n[grid]\n";
  out << "T_us = " << cfg.final_time_us << "\n";
  out << "steps = " << cfg.steps << "\n";
  out << "\n[target]\n";
  out << "index = " << cfg.target_index << "\n";
  out << "initial_state = " << initial_state_name(cfg.initial_state) << "\n";
  if (!cfg.basis_subsystems.empty()) {
    out << "basis_subsystems =";
    for (int q : cfg.basis_subsystems) out << " " << q;
    out << "\n";
  }
  if (!cfg.unitary_file.empty()) out << "unitary_file = " << cfg.unitary_file << "\n";
  if (!cfg.state_file.empty()) out << "state_file = " << cfg.state_file << "\n";
  out << "\n[objective]\n";
  out << "gamma1 = " << cfg.gamma1 << "\n";
  out << "gamma2 = " << cfg.gamma2 << "\n";
  out << "penalty_width_us = " << cfg.penalty_width_us << "\n";
  out << "\n[optimizer]\n";
  out << "max_iters = " << cfg.max_iters << "\n";
  out << "lbfgs_memory = " << cfg.lbfgs_memory << "\n";
  out << "grad_tol = " << cfg.grad_tol << "\n";
  out << "cost_tol = " << cfg.cost_tol << "\n";
  out << "max_line_search_trials = " << cfg.max_line_search_trials << "\n";
  out << "initial_amplitude_factor = " << cfg.initial_amplitude_factor << "\n";
  out << "seed = " << cfg.seed << "\n";
  out << "\n[output]\n";
  out << "directory = " << cfg.output_dir << "\n";
  out << "stride = " << cfg.stride << "\n";
  return out.str();
}

bool operator==(const RunConfig& a, const RunConfig& b) {
  auto spec_eq = [](const SubsystemSpec& x, const SubsystemSpec& y) {
    auto time_eq = [](double u, double v) {
      return (std::isinf(u) && std::isinf(v)) || u == v;
    };
    return x.levels == y.levels && x.freq_ghz == y.freq_ghz &&
           x.selfkerr_mhz == y.selfkerr_mhz && time_eq(x.t1_us, y.t1_us) &&
           time_eq(x.t2_us, y.t2_us);
  };
  if (a.subsystems.size() != b.subsystems.size()) return false;
  for (size_t i = 0; i < a.subsystems.size(); ++i) {
    if (!spec_eq(a.subsystems[i], b.subsystems[i])) return false;
  }
  if (a.crosskerr.size() != b.crosskerr.size()) return false;
  for (size_t i = 0; i < a.crosskerr.size(); ++i) {
    if (a.crosskerr[i].p != b.crosskerr[i].p ||
        a.crosskerr[i].q != b.crosskerr[i].q ||
        a.crosskerr[i].mhz != b.crosskerr[i].mhz) {
      return false;
    }
  }
  if (a.control.size() != b.control.size()) return false;
  for (size_t i = 0; i < a.control.size(); ++i) {
    if (a.control[i].num_splines != b.control[i].num_splines ||
        a.control[i].carrier_freqs_mhz != b.control[i].carrier_freqs_mhz ||
        a.control[i].lab_amp_bound_mhz != b.control[i].lab_amp_bound_mhz) {
      return false;
    }
  }
  return a.final_time_us == b.final_time_us && a.steps == b.steps &&
         a.target_index == b.target_index && a.unitary_file == b.unitary_file &&
         a.initial_state == b.initial_state &&
         a.basis_subsystems == b.basis_subsystems &&
         a.state_file == b.state_file && a.gamma1 == b.gamma1 &&
         a.gamma2 == b.gamma2 && a.penalty_width_us == b.penalty_width_us &&
         a.max_iters == b.max_iters && a.lbfgs_memory == b.lbfgs_memory &&
         a.grad_tol == b.grad_tol && a.cost_tol == b.cost_tol &&
         a.max_line_search_trials == b.max_line_search_trials &&
         a.initial_amplitude_factor == b.initial_amplitude_factor &&
         a.seed == b.seed && a.output_dir == b.output_dir &&
         a.stride == b.stride;
}

CompositeSystem RunConfig::build_system() const {
  return CompositeSystem(subsystems, crosskerr);
}

ControlParameterization RunConfig::build_controls() const {
  std::vector<SubsystemControls> per;
  for (const ControlSection& c : control) {
    SubsystemControls sc;
    sc.num_splines = c.num_splines;
    for (double mhz : c.carrier_freqs_mhz) sc.carrier_freqs.push_back(kTwoPi * mhz);
    per.push_back(sc);
  }
  return ControlParameterization(per, final_time_us);
}

PropagationGrid RunConfig::build_grid() const { return {final_time_us, steps}; }

ObjectiveSpec RunConfig::build_objective() const {
  ObjectiveSpec spec;
  spec.target_index = target_index;
  spec.gamma1 = gamma1;
  spec.gamma2 = gamma2;
  spec.penalty_width = penalty_width_us;
  if (!unitary_file.empty()) {
    spec.transform = read_matrix_csv(unitary_file, dim());
  }
  return spec;
}

std::vector<double> RunConfig::lab_amp_bounds() const {
  std::vector<double> out;
  for (const ControlSection& c : control) {
    out.push_back(c.lab_amp_bound_mhz > 0.0 ? kTwoPi * c.lab_amp_bound_mhz : 0.0);
  }
  return out;
}

OptimizerOptions RunConfig::build_optimizer_options(
    const ControlParameterization& param) const {
  OptimizerOptions opts;
  opts.max_iters = max_iters;
  opts.lbfgs_memory = lbfgs_memory;
  opts.grad_tol = grad_tol;
  opts.cost_tol = cost_tol;
  opts.max_line_search_trials = max_line_search_trials;
  opts.seed = seed;
  std::tie(opts.lower_bounds, opts.upper_bounds) =
      coefficient_bounds(param, lab_amp_bounds());
  return opts;
}

DenseOp RunConfig::build_initial_state() const {
  switch (initial_state) {
    case InitialStateMode::FullEnsemble:
      return ensemble_state(dim());
    case InitialStateMode::PartialEnsemble: {
      std::vector<int> dims;
      for (const SubsystemSpec& s : subsystems) dims.push_back(s.levels);
      return ensemble_state_partial(dims, basis_subsystems);
    }
    case InitialStateMode::ExplicitState:
      return read_state_csv(state_file, dim());
  }
  throw ValidationError("config: unknown initial state mode");
}

int RunConfig::dim() const {
  int d = 1;
  for (const SubsystemSpec& s : subsystems) d *= s.levels;
  return d;
}

namespace {

DenseOp read_complex_csv(const std::string& path, int dim, const char* what) {
  std::ifstream in(path);
  if (!in) throw ValidationError(std::string(what) + ": cannot open " + path);
  std::vector<Complex> values;
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty()) continue;
    if (!line.empty() && !(std::isdigit(line[0]) || line[0] == '-' ||
                           line[0] == '+' || line[0] == '.')) {
      continue;  // header
    }
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    double re = 0.0, im = 0.0;
    if (!(row >> re >> im)) {
      throw ValidationError(std::string(what) + ": malformed row in " + path);
    }
    values.emplace_back(re, im);
  }
  if (static_cast<int>(values.size()) != dim * dim) {
    throw ValidationError(std::string(what) + ": expected " +
                          std::to_string(dim * dim) + " rows in " + path +
                          ", found " + std::to_string(values.size()));
  }
  DenseOp m(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) m(i, j) = values[i * dim + j];  // row-major
  }
  return m;
}

}  // namespace

DenseOp read_state_csv(const std::string& path, int dim) {
  const DenseOp rho = read_complex_csv(path, dim, "state");
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-10) {
    throw ValidationError("state: matrix in " + path + " is not Hermitian");
  }
  if (std::abs(rho.trace().real() - 1.0) > 1e-8) {
    throw ValidationError("state: matrix in " + path + " is not unit trace");
  }
  return rho;
}

DenseOp read_matrix_csv(const std::string& path, int dim) {
  return read_complex_csv(path, dim, "matrix");
}

}  // namespace purestate
