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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <fstream>
#include <string>

#include "purestate/basis.hpp"
#include "purestate/config.hpp"

using namespace purestate;

namespace {

// Qudit-cavity configuration with the published hardware rates.
const char* kQuditCavity = R"(
# qudit-cavity reset configuration
[system]
subsystems = 2
crosskerr = 1 2 1.176

[subsystem 1]
levels = 3
freq_ghz = 4.41666
selfkerr_mhz = 230.56
t1_us = 80
t2_us = 26

[subsystem 2]
levels = 20
freq_ghz = 6.84081
selfkerr_mhz = 0
t1_us = 0.3892

[control 1]
num_splines = 20
carrier_freqs_mhz = 0 -230.56
lab_amp_bound_mhz = 5.7296

[control 2]
num_splines = 20
carrier_freqs_mhz = 0
lab_amp_bound_mhz = 5.7296

[grid]
T_us = 0.5
steps = 5000

[target]
index = 0
initial_state = partial-ensemble
basis_subsystems = 1

[objective]
gamma1 = 1e-6
gamma2 = 1e-2
penalty_width_us = 0.1

[optimizer]
max_iters = 50
seed = 7
)";

}  // namespace

TEST_CASE("hardware-rate configuration parses with the right dimensions") {
  const RunConfig cfg = parse_config_text(kQuditCavity, "inline");
  CHECK(cfg.dim() == 60);  // 3 x 20 composite levels
  REQUIRE(cfg.subsystems.size() == 2);
  CHECK(cfg.subsystems[0].levels == 3);
  CHECK(cfg.subsystems[0].freq_ghz == 4.41666);
  CHECK(cfg.subsystems[0].selfkerr_mhz == 230.56);
  CHECK(cfg.subsystems[0].t1_us == 80.0);
  CHECK(cfg.subsystems[0].t2_us == 26.0);
  CHECK(cfg.subsystems[1].t1_us == 0.3892);
  // Omitted t2 disables the dephasing channel.
  CHECK(!cfg.subsystems[1].has_dephasing());
  REQUIRE(cfg.crosskerr.size() == 1);
  CHECK(cfg.crosskerr[0].mhz == 1.176);
  CHECK(cfg.initial_state == InitialStateMode::PartialEnsemble);
  CHECK(cfg.basis_subsystems == std::vector<int>{1});
  CHECK(cfg.max_iters == 50);
  CHECK(cfg.seed == 7);

  const CompositeSystem sys = cfg.build_system();
  CHECK(sys.dim() == 60);
  CHECK(sys.collapse_operators().size() == 3);  // decay+dephase, decay

  const ControlParameterization param = cfg.build_controls();
  CHECK(param.num_coefficients() == 2 * 20 * 2 + 2 * 20 * 1);
  CHECK(param.subsystem(1).carrier_freqs[1] ==
        doctest::Approx(-kTwoPi * 230.56).epsilon(1e-14));

  const std::vector<double> bounds = cfg.lab_amp_bounds();
  CHECK(bounds[0] == doctest::Approx(kTwoPi * 5.7296).epsilon(1e-12));

  const DenseOp rho0 = cfg.build_initial_state();
  CHECK(rho0.rows() == 60);
  CHECK(std::abs(rho0.trace().real() - 1.0) < 1e-12);
}

TEST_CASE("serialize/parse round trip is lossless") {
  const RunConfig cfg = parse_config_text(kQuditCavity, "inline");
  const std::string text = serialize_config(cfg);
  const RunConfig again = parse_config_text(text, "roundtrip");
  CHECK(again == cfg);
  CHECK(serialize_config(again) == text);
}

TEST_CASE("defaults for omitted sections") {
  const char* minimal = R"(
[system]
subsystems = 1
[subsystem 1]
levels = 2
freq_ghz = 1.0
[control 1]
num_splines = 5
carrier_freqs_mhz = 0
[grid]
T_us = 1.0
steps = 100
[target]
index = 0
)";
  const RunConfig cfg = parse_config_text(minimal, "inline");
  CHECK(cfg.gamma1 == 1e-6);
  CHECK(cfg.gamma2 == 1e-2);
  CHECK(cfg.penalty_width_us == 0.1);
  CHECK(cfg.max_iters == 100);
  CHECK(cfg.lbfgs_memory == 10);
  CHECK(cfg.seed == 1234);
  CHECK(cfg.output_dir == "out");
  CHECK(cfg.stride == 10);
  CHECK(cfg.initial_state == InitialStateMode::FullEnsemble);
  CHECK(!cfg.subsystems[0].has_decay());
  CHECK(cfg.control[0].lab_amp_bound_mhz == 0.0);
}

TEST_CASE("parse errors carry section and line context") {
  auto expect_error = [](const std::string& text, const std::string& fragment) {
    try {
      parse_config_text(text, "test.cfg");
      FAIL("expected ValidationError for: " << fragment);
    } catch (const ValidationError& e) {
      const std::string msg = e.what();
      INFO(msg);
      CHECK(msg.find(fragment) != std::string::npos);
      CHECK(msg.find("test.cfg") != std::string::npos);
    }
  };

  expect_error("[grid]\nT_us = 1\n", "missing section [system]");
  expect_error("key = 1\n", "outside any section");
  expect_error("[system\n", "malformed section header");
  expect_error("[system]\nsubsystems\n", "expected key = value");
  const std::string base = R"(
[system]
subsystems = 1
[subsystem 1]
levels = 2
freq_ghz = abc
[control 1]
num_splines = 5
carrier_freqs_mhz = 0
[grid]
T_us = 1.0
steps = 100
[target]
index = 0
)";
  expect_error(base, "malformed number 'abc'");
  expect_error("[system]\nsubsystems = 1\nbogus = 2\n[subsystem 1]\n"
               "levels = 2\nfreq_ghz = 1\n[control 1]\nnum_splines = 5\n"
               "carrier_freqs_mhz = 0\n[grid]\nT_us = 1\nsteps = 10\n"
               "[target]\nindex = 0\n",
               "unknown key 'bogus'");
  expect_error("[system]\nsubsystems = 2\ncrosskerr = 1 3 0.5\n"
               "[subsystem 1]\nlevels = 2\nfreq_ghz = 1\n"
               "[subsystem 2]\nlevels = 2\nfreq_ghz = 2\n"
               "[control 1]\nnum_splines = 5\ncarrier_freqs_mhz = 0\n"
               "[control 2]\nnum_splines = 5\ncarrier_freqs_mhz = 0\n"
               "[grid]\nT_us = 1\nsteps = 10\n[target]\nindex = 0\n",
               "(1,3)");
}

TEST_CASE("target validation") {
  const char* tmpl = R"(
[system]
subsystems = 1
[subsystem 1]
levels = 3
freq_ghz = 1.0
[control 1]
num_splines = 5
carrier_freqs_mhz = 0
[grid]
T_us = 1.0
steps = 10
[target]
)";
  CHECK_THROWS_AS(
      parse_config_text(std::string(tmpl) + "index = 3\n", "inline"),
      ValidationError);
  CHECK_THROWS_AS(parse_config_text(
                      std::string(tmpl) +
                          "index = 0\ninitial_state = partial-ensemble\n",
                      "inline"),
                  ValidationError);
  CHECK_THROWS_AS(parse_config_text(
                      std::string(tmpl) +
                          "index = 0\ninitial_state = explicit-state\n",
                      "inline"),
                  ValidationError);
  CHECK_THROWS_AS(
      parse_config_text(std::string(tmpl) + "index = 0\ninitial_state = bad\n",
                        "inline"),
      ValidationError);
  CHECK_THROWS_AS(parse_config_text(std::string(tmpl) +
                                        "index = 0\ninitial_state = "
                                        "explicit-state\nstate_file = "
                                        "/nonexistent/rho.csv\n",
                                    "inline"),
                  ValidationError);
}

TEST_CASE("state CSV reading") {
  const std::string path = "test_state_tmp.csv";
  {
    std::ofstream out(path);
    out << "re,im\n";
    const DenseOp rho = ensemble_state(2);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        out << rho(i, j).real() << "," << rho(i, j).imag() << "\n";
  }
  const DenseOp rho = read_state_csv(path, 2);
  CHECK((rho - ensemble_state(2)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK_THROWS_AS(read_state_csv(path, 3), ValidationError);
  {
    std::ofstream out(path);
    out << "re,im\n1,0\n0,0.5\n0,0.5\n0,0\n";  // not Hermitian
  }
  CHECK_THROWS_AS(read_state_csv(path, 2), ValidationError);
  std::remove(path.c_str());
  CHECK_THROWS_AS(read_state_csv(path, 2), ValidationError);
}

TEST_CASE("explicit initial state flows through build_initial_state") {
  const std::string path = "test_state_tmp2.csv";
  {
    std::ofstream out(path);
    out << "re,im\n0,0\n0,0\n0,0\n1,0\n";  // |1><1| of a qubit
  }
  const std::string text = std::string(R"(
[system]
subsystems = 1
[subsystem 1]
levels = 2
freq_ghz = 1.0
[control 1]
num_splines = 5
carrier_freqs_mhz = 0
[grid]
T_us = 1.0
steps = 10
[target]
index = 0
initial_state = explicit-state
state_file = )") + path + "\n";
  const RunConfig cfg = parse_config_text(text, "inline");
  const DenseOp rho = cfg.build_initial_state();
  CHECK(rho(1, 1).real() == doctest::Approx(1.0));
  CHECK(std::abs(rho(0, 0)) < 1e-15);
  std::remove(path.c_str());
}
