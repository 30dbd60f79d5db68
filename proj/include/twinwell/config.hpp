#pragma once
// INI-style scenario configuration: [scenario], [params], [sweep.N], [oracle],
// [output]. Unknown sections and keys are rejected.

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "twinwell/core_types.hpp"
#include "twinwell/mode_bath.hpp"
#include "twinwell/wellcheck.hpp"

namespace twinwell {

enum class Scenario {
  Rates,
  Tunneling,
  TunnelingOracle,
  FieldPattern,
  FieldOracle,
  Wellcheck,
  FigAmplitude,
  FigZtau,
  FigPolar,
};

const char* to_string(Scenario s);
Scenario scenario_from_string(const std::string& s);
std::vector<std::string> scenario_names();

enum class Spacing { Linear, Log, Midpoint };

struct SweepAxis {
  std::string name;
  double min = 0.0;
  double max = 0.0;
  int count = 0;
  Spacing spacing = Spacing::Linear;

  std::vector<double> values() const;
};

// Raw key = value entries with their source line (0 for command-line overrides).
struct RawEntry {
  std::string value;
  int line = 0;
};
struct RawConfig {
  std::string source = "config";
  std::map<std::string, std::map<std::string, RawEntry>> sections;
  std::map<std::string, int> section_lines;
};

RawConfig parse_ini(const std::string& text, const std::string& source = "config");
// "section.key" = value, e.g. from --params.beta=2.
void apply_override(RawConfig& raw, const std::string& dotted_key, const std::string& value);

struct ParamsBlock {
  double omega0 = 1.0;
  double delta = 0.005;  // Delta / omega0
  double gamma = 1.0;    // Gamma / Delta
  double beta = 3.0;
  double eta = 0.0;
  std::string init = "default";  // right | left | plus | minus | custom; default is per scenario
  double c_plus = 1.0;
  double c_minus = 0.0;
  // field scenarios
  double r = 1000.0;        // c / omega0 units
  double t_ret = -1.0;      // t - r/c; negative selects 1/Gamma
  bool time_average = true;
  int average_samples = 64;
  // wellcheck
  std::string preset = "cs";  // cs | custom
  FrequencyConvention convention = FrequencyConvention::Hbar;
  double v0_freq = 0.23e6;
  double a_well = 852.4e-9 / 4.0;
  double mass = 2.2069469e-25;
  double lambda0 = 852.4e-9;
  double omega0_scale = 1.0;
  int n_grid = 3000;
  double domain = 2.5;  // units of a_well
};

struct OracleBlock {
  // mode bath
  int n_omega = 0;  // 0: smallest grid passing the bath gates, at least 4000
  double omega_max = 4.0;
  int n_mu = 24;
  SpectralDensity density = SpectralDensity::Resonant;
  bool renormalize = true;
  double dt = 0.0;          // 0: grid maximum
  double t_end = 5.0;       // units of 1/Gamma
  int samples = 201;        // trajectory rows
  // field quadrature
  int n_theta = 0;
  int n_phi = 0;
  int field_n_omega = 4096;
  double window = 400.0;
  double tau_step = 0.05;
};

struct ScenarioConfig {
  Scenario scenario = Scenario::Rates;
  int threads = 0;  // 0: hardware concurrency
  ParamsBlock params;
  std::vector<SweepAxis> sweeps;  // in [sweep.N] order
  OracleBlock oracle;
  std::string output = "-";  // "-" is stdout
};

ScenarioConfig materialize(const RawConfig& raw);
ScenarioConfig parse_config(const std::string& text, const std::string& source = "config");
ScenarioConfig load_config(const std::string& path, const std::vector<std::string>& overrides = {});

// Axes a scenario accepts, and the axes it uses when none are configured.
std::vector<std::string> allowed_axes(Scenario s);
std::vector<SweepAxis> default_axes(Scenario s);

}  // namespace twinwell
