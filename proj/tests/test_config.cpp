#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "groenewold/config.hpp"
#include "groenewold/error.hpp"
#include "groenewold/presets.hpp"
#include "groenewold/run.hpp"

using namespace groenewold;
namespace fs = std::filesystem;

namespace {

const char* kMinimal = R"({
  "model": {"b": [0, 0, 1], "mu": 0.5},
  "state": {"kappa": 2, "alpha0_re": 0.5},
  "truncation": {"N": 32, "guard": 4},
  "dynamics": ["quantum", "classical"],
  "times": {"t1": "pi", "steps": 2}
})";

std::string error_of(std::string_view text, std::string_view preset = {}) {
  try {
    parse_config(text, "cfg.json", preset);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

std::string read(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("expressions") {
  CHECK(evaluate_expression("pi") == doctest::Approx(kPi));
  CHECK(evaluate_expression("3*pi/4") == doctest::Approx(0.75 * kPi));
  CHECK(evaluate_expression("1/sqrt(2)") == doctest::Approx(std::sqrt(0.5)));
  CHECK(evaluate_expression("-2^2") == doctest::Approx(-4.0));
  CHECK(evaluate_expression(" (1 + 2) * 3 ") == doctest::Approx(9.0));
  CHECK_THROWS_AS(evaluate_expression("pi +"), ConfigError);
  CHECK_THROWS_AS(evaluate_expression("tau"), ConfigError);
  CHECK_THROWS_AS(evaluate_expression("sqrt(-1)"), ConfigError);
}

TEST_CASE("minimal configuration") {
  const auto c = parse_config(kMinimal, "cfg.json");
  CHECK(c.model.K == 2);
  CHECK(c.model.hbar == doctest::Approx(0.5));
  CHECK(c.state.kappa == 2.0);
  CHECK(c.dynamics.size() == 2);
  CHECK(c.times().size() == 3);
  CHECK(c.times().back() == doctest::Approx(kPi));
  CHECK(c.hash.size() == 16);
  CHECK(parse_config(kMinimal, "other.json").hash == c.hash);
  CHECK(c.validate);
  CHECK(c.moments);
}

TEST_CASE("schema errors carry the line") {
  const std::string unknown = R"({
  "model": {"b": [0, 0, 1], "mu": 0.5},
  "state": {"kappa": 2, "alpha0_re": 0.5},
  "dynamics": ["quantum"],
  "times": {"t1": 1, "steps": 2,
            "dt": 0.1}
})";
  CHECK(error_of(unknown) == "cfg.json:6: unknown key 'dt' in 'times'");

  const std::string empty = R"({
  "model": {"b": [0, 0, 1], "mu": 0.5},
  "state": {"kappa": 2, "alpha0_re": 0.5},
  "dynamics": [],
  "times": {"t1": 1, "steps": 2}
})";
  CHECK(error_of(empty) == "cfg.json:4: 'dynamics' must name at least one dynamics");

  const std::string bad_dyn = R"({
  "model": {"b": [0, 0, 1], "mu": 0.5},
  "state": {"kappa": 2, "alpha0_re": 0.5},
  "dynamics": ["quantum",
               "semi"],
  "times": {"t1": 1, "steps": 2}
})";
  CHECK(error_of(bad_dyn).rfind("cfg.json:5:", 0) == 0);

  CHECK(error_of("{\n  \"model\": [1,\n}").rfind("cfg.json:3:", 0) == 0);
  CHECK(error_of(R"({"model": {"b": [0, 1], "mu": 1, "hbar": 1}, "state": {"kappa": 1},
                    "dynamics": ["quantum"], "times": {"t1": 1, "steps": 1}})")
            .find("exactly one of") != std::string::npos);
  CHECK(error_of(R"({"model": {"b": [0, 1], "mu": 1}, "state": {"kappa": 1},
                    "dynamics": ["quantum"]})")
            .find("missing required key 'times'") != std::string::npos);
}

TEST_CASE("physical model and state") {
  const auto c = parse_config(R"({
    "model": {"b": [0, 0, 1], "hbar": 0.5, "m": 1, "omega": 1, "E": 1},
    "state": {"gamma": 0.5, "q0": 0.5, "p0": 0},
    "dynamics": ["quantum"],
    "times": {"t1": 1, "steps": 1}
  })", "cfg.json");
  CHECK(c.model.mu == doctest::Approx(0.5));
  CHECK(c.state.kappa == doctest::Approx(2.0));
  CHECK(c.state.alpha0.real() == doctest::Approx(0.5));
}

TEST_CASE("presets") {
  std::vector<std::string> names;
  for (const auto& p : bundled_presets()) {
    names.emplace_back(p.name);
    const auto c = parse_config({}, "", p.name);
    CHECK(c.name == std::string(p.name));
  }
  for (const char* n : {"fig1", "fig2", "fig3", "fig4", "fig5", "fig6"}) {
    CHECK(std::find(names.begin(), names.end(), n) != names.end());
  }
  const auto fig3 = parse_config({}, "", "fig3");
  CHECK(fig3.dynamics.size() == 4);
  CHECK(fig3.steps == 64);
  CHECK(fig3.t1 == doctest::Approx(kPi));
  // a config file patches the preset
  const auto reduced = parse_config(R"({"times": {"steps": 4}})", "cfg.json", "fig3");
  CHECK(reduced.steps == 4);
  CHECK(reduced.dynamics.size() == 4);
  CHECK(reduced.hash != fig3.hash);
  CHECK(error_of(R"({"times": {"step": 4}})", "fig3") == "cfg.json:1: unknown key 'step' in 'times'");
  CHECK(error_of("", "nosuch").find("unknown preset") != std::string::npos);
  const auto fig1 = parse_config({}, "", "fig1");
  REQUIRE(fig1.field);
  CHECK(fig1.field->times.size() == 4);
  CHECK(fig1.field->whorl);
}

TEST_CASE("run writes deterministic artifacts") {
  const auto dir = fs::temp_directory_path() / "groenewold_run_test";
  fs::remove_all(dir);
  const auto c = parse_config(R"({
    "model": {"b": [0, 0, 0, 1], "mu": 0.5},
    "state": {"kappa": 2, "alpha0_re": 0.5},
    "truncation": {"N": 32, "guard": 4, "tail_tol": 1e-8},
    "dynamics": ["quantum", "semiquantum1", "classical", "semiclassical1"],
    "times": {"t1": 1, "steps": 3},
    "outputs": {"spectrum": {"k": 2}, "negativity": true, "validate": {"nu_max": 2},
                "field": {"grid": {"nq": 8, "np": 8}, "times": [0.5], "kinds": ["whorl", "wigner"]}}
  })", "cfg.json");
  RunOptions opt;
  opt.out_dir = (dir / "a").string();
  const auto a = run_experiment(c, opt);
  REQUIRE(a.exit_code == kExitOk);
  opt.out_dir = (dir / "b").string();
  const auto b = run_experiment(c, opt);
  REQUIRE(b.exit_code == kExitOk);
  CHECK(a.files.size() == b.files.size());
  for (const auto& name : {"moments.csv", "spectrum.csv", "negativity.csv", "validate.csv",
                           "field_whorl_0.5000.pgm", "field_classical_0.5000_mask.pgm",
                           "field_quantum_0.5000.csv"}) {
    CHECK_MESSAGE(fs::exists(dir / "a" / name), name);
    CHECK(read(dir / "a" / name) == read(dir / "b" / name));
  }
  const std::string moments = read(dir / "a" / "moments.csv");
  CHECK(moments.rfind("# groenewold-lab", 0) == 0);
  CHECK(moments.find("\nt,dynamics,re_alpha,im_alpha,re_alpha2,im_alpha2,abs2,q,p,dq,dp,dq_paper,"
                     "dp_paper,trace_err,purity\n") != std::string::npos);
  CHECK(moments.find(c.hash) != std::string::npos);
  // 4 dynamics x 4 times
  CHECK(std::count(moments.begin(), moments.end(), '\n') == 6 + 1 + 16);
  fs::remove_all(dir);
}

TEST_CASE("run exit codes") {
  const auto dir = fs::temp_directory_path() / "groenewold_exit_test";
  RunOptions opt;
  opt.out_dir = dir.string();
  const auto tail = parse_config(R"({
    "model": {"b": [0, 0, 1], "mu": 0.5},
    "state": {"kappa": 1, "alpha0_re": 2},
    "truncation": {"N": 16, "guard": 4},
    "dynamics": ["quantum"],
    "times": {"t1": 1, "steps": 1},
    "outputs": {"validate": false}
  })", "cfg.json");
  CHECK(run_experiment(tail, opt).exit_code == kExitNumerics);
  auto valid = parse_config(kMinimal, "cfg.json");
  opt.validate_only = true;
  const auto r = run_experiment(valid, opt);
  CHECK(r.exit_code == kExitOk);
  CHECK(r.files.size() == 1);
  fs::remove_all(dir);
}
