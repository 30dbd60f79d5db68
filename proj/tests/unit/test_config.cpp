#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "twinwell/closed_forms.hpp"
#include "twinwell/config.hpp"
#include "twinwell/scenarios.hpp"

using namespace twinwell;

namespace {

std::string run_csv(const ScenarioConfig& cfg) {
  std::ostringstream os;
  run_to_stream(cfg, os);
  return os.str();
}

std::size_t lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

std::string error_of(const std::string& text) {
  try {
    parse_config(text, "t.ini");
  } catch (const ValidationError& e) {
    return e.what();
  }
  return "";
}

int cli(const std::string& args) {
  const std::string cmd = std::string(TWINWELL_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WEXITSTATUS(rc);
}

}  // namespace

TEST_CASE("sweep axis spacings") {
  SweepAxis lin{"beta", 0.0, 4.0, 5, Spacing::Linear};
  CHECK(lin.values() == std::vector<double>{0.0, 1.0, 2.0, 3.0, 4.0});
  SweepAxis lg{"gamma", 0.1, 10.0, 3, Spacing::Log};
  CHECK(lg.values()[1] == doctest::Approx(1.0));
  SweepAxis mid{"alpha", 0.0, 1.0, 4, Spacing::Midpoint};
  CHECK(mid.values().front() == doctest::Approx(0.125));
  CHECK(mid.values().back() == doctest::Approx(0.875));
}

TEST_CASE("parse and defaults") {
  const ScenarioConfig c = parse_config("scenario = rates\n[params]\nbeta = 2.5\neta = 0.1\n");
  CHECK(c.scenario == Scenario::Rates);
  CHECK(c.params.beta == 2.5);
  CHECK(c.params.eta == 0.1);
  CHECK(c.params.delta == 0.005);
  const ScenarioConfig t = parse_config("[scenario]\nname = fig-ztau\nthreads = 2\n");
  CHECK(t.scenario == Scenario::FigZtau);
  CHECK(t.threads == 2);
  REQUIRE(t.sweeps.size() == 2);
  CHECK(t.sweeps[0].name == "ln_gamma");
  CHECK(t.sweeps[1].name == "tau");
  for (const auto& n : scenario_names()) CHECK(to_string(scenario_from_string(n)) == n);
}

TEST_CASE("configured axes go outermost") {
  const ScenarioConfig c = parse_config(
      "scenario = fig-ztau\n[sweep.1]\naxis = tau\nmin = 0\nmax = 1\ncount = 3\n"
      "[sweep.2]\naxis = beta\nmin = 1\nmax = 3\ncount = 2\n");
  REQUIRE(c.sweeps.size() == 3);
  CHECK(c.sweeps[0].name == "beta");
  CHECK(c.sweeps[1].name == "ln_gamma");
  CHECK(c.sweeps[2].name == "tau");
  CHECK(c.sweeps[2].count == 3);
}

TEST_CASE("errors name the source line") {
  CHECK(error_of("scenario = rates\n[params]\nbetta = 1\n").find("t.ini:3: unknown key 'params.betta'") !=
        std::string::npos);
  CHECK(error_of("scenario = nope\n").find("t.ini:1") != std::string::npos);
  CHECK(error_of("scenario = fig-amplitude\n[sweep.1]\naxis=beta\nmin=0\nmax=4\ncount=8\nspacing=log\n")
            .find("t.ini:2: sweep.1: log axis requires positive min") != std::string::npos);
  CHECK(error_of("scenario = rates\n[sweep.1]\naxis=alpha\nmin=0\nmax=1\ncount=3\n").find("not a parameter") !=
        std::string::npos);
  CHECK(error_of("scenario = rates\n[bogus]\nx=1\n") != "");
  CHECK(error_of("scenario = rates\n[params]\nbeta = abc\n") != "");
  CHECK(error_of("scenario = rates\n[sweep.1]\naxis=gamma\nmin=1\nmax=2\ncount=2\n"
                 "[sweep.2]\naxis=ln_gamma\nmin=0\nmax=1\ncount=2\n")
            .find("both gamma and ln_gamma") != std::string::npos);
}

TEST_CASE("command-line overrides") {
  RawConfig raw = parse_ini("scenario = rates\n[params]\nbeta = 1\n", "t.ini");
  apply_override(raw, "params.beta", "2");
  apply_override(raw, "params.eta", "0.5");
  const ScenarioConfig c = materialize(raw);
  CHECK(c.params.beta == 2.0);
  CHECK(c.params.eta == 0.5);
  RawConfig bad = parse_ini("scenario = rates\n", "t.ini");
  apply_override(bad, "params.nope", "1");
  try {
    materialize(bad);
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("command line") != std::string::npos);
  }
  RawConfig stray = parse_ini("scenario = rates\n", "t.ini");
  apply_override(stray, "nodot", "1");
  CHECK_THROWS_AS(materialize(stray), ValidationError);
}

TEST_CASE("row counts follow the product grid") {
  ScenarioConfig c = parse_config(
      "scenario = fig-amplitude\n[sweep.1]\naxis=beta\nmin=0\nmax=3\ncount=4\n"
      "[sweep.2]\naxis=ln_gamma\nmin=-1\nmax=1\ncount=5\n");
  const std::string s = run_csv(c);
  CHECK(lines(s) == 1 + 20);
  const RunSummary v = validate_scenario(c);
  CHECK(v.rows == 20);
  CHECK(output_columns(c).front() == "beta");
}

TEST_CASE("fig-amplitude rows reproduce amp_A") {
  ScenarioConfig c = parse_config("scenario = fig-amplitude\n");
  c.threads = 3;
  std::istringstream is(run_csv(c));
  std::string line;
  std::getline(is, line);
  CHECK(line == "beta,ln_gamma,gamma,a,amplitude_A,phase_phi");
  int n = 0;
  while (std::getline(is, line)) {
    double beta, lg, g, a, A, ph;
    REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%lf,%lf", &beta, &lg, &g, &a, &A, &ph) == 6);
    const TunnelingTrajectoryParams tp = amp_A(0.0, beta, std::exp(lg));
    CHECK(A == doctest::Approx(tp.amplitude_A).epsilon(1e-13));
    ++n;
  }
  CHECK(n == 41 * 41);
}

TEST_CASE("thread count does not change the output") {
  ScenarioConfig c = parse_config("scenario = fig-ztau\n");
  c.threads = 1;
  const std::string a = run_csv(c);
  c.threads = 4;
  CHECK(run_csv(c) == a);
}

TEST_CASE("invalid grid points surface with their coordinates") {
  ScenarioConfig c = parse_config("scenario = rates\n[sweep.1]\naxis=beta\nmin=3\nmax=5\ncount=3\n");
  try {
    validate_scenario(c);
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("beta=5") != std::string::npos);
  }
}

TEST_CASE("failed runs leave no output file") {
  const auto dir = std::filesystem::temp_directory_path() / "twinwell_cfg_test";
  std::filesystem::create_directories(dir);
  const auto out = dir / "out.csv";
  std::filesystem::remove(out);
  ScenarioConfig c = parse_config("scenario = rates\n[sweep.1]\naxis=beta\nmin=3\nmax=5\ncount=3\n");
  c.output = out.string();
  CHECK_THROWS(run(c));
  CHECK(!std::filesystem::exists(out));
}

TEST_CASE("CLI exit codes") {
  const auto dir = std::filesystem::temp_directory_path() / "twinwell_cli_test";
  std::filesystem::create_directories(dir);
  auto write = [&](const std::string& name, const std::string& text) {
    std::ofstream(dir / name) << text;
    return (dir / name).string();
  };
  const std::string ok = write("ok.ini", "scenario = rates\n");
  const std::string bad_key = write("bad.ini", "scenario = rates\n[params]\nfoo = 1\n");
  const std::string bad_beta = write("beta.ini", "scenario = rates\n[params]\nbeta = 5\n");
  CHECK(cli("run " + ok) == 0);
  CHECK(cli("validate " + ok) == 0);
  CHECK(cli("presets") == 0);
  CHECK(cli("run " + bad_key) == 1);
  CHECK(cli("run " + bad_beta) == 1);
  CHECK(cli("run " + ok + " --params.beta=5") == 1);
  CHECK(cli("run " + (dir / "missing.ini").string()) != 0);
  CHECK(cli("frobnicate") != 0);
}

TEST_CASE("shipped configs validate") {
  int n = 0;
  for (const auto& e : std::filesystem::directory_iterator(TWINWELL_CONFIG_DIR)) {
    if (e.path().extension() != ".ini") continue;
    CAPTURE(e.path().string());
    CHECK_NOTHROW(validate_scenario(load_config(e.path().string())));
    ++n;
  }
  CHECK(n > 0);
}
