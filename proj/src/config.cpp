#include "twinwell/config.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <numbers>
#include <set>
#include <sstream>

namespace twinwell {

namespace {

constexpr double kPi = std::numbers::pi;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string where(const RawConfig& raw, int line) {
  if (line <= 0) return "command line";
  return raw.source + ":" + std::to_string(line);
}

[[noreturn]] void fail(const RawConfig& raw, int line, const std::string& what) {
  throw ValidationError(where(raw, line) + ": " + what);
}

bool is_sweep_section(const std::string& s, int* index = nullptr) {
  if (s.rfind("sweep.", 0) != 0 || s.size() == 6) return false;
  const std::string n = s.substr(6);
  if (!std::all_of(n.begin(), n.end(), [](unsigned char c) { return std::isdigit(c); })) return false;
  if (n.size() > 6) return false;
  if (index) *index = std::stoi(n);
  return true;
}

bool known_section(const std::string& s) {
  return s.empty() || s == "scenario" || s == "params" || s == "oracle" || s == "output" ||
         is_sweep_section(s);
}

double to_double(const RawConfig& raw, const std::string& path, const RawEntry& e) {
  const char* b = e.value.c_str();
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(b, &end);
  if (e.value.empty() || end != b + e.value.size() || errno == ERANGE || !std::isfinite(v)) {
    fail(raw, e.line, path + ": expected a finite number, got '" + e.value + "'");
  }
  return v;
}

int to_int(const RawConfig& raw, const std::string& path, const RawEntry& e) {
  const char* b = e.value.c_str();
  char* end = nullptr;
  errno = 0;
  const long v = std::strtol(b, &end, 10);
  if (e.value.empty() || end != b + e.value.size() || errno == ERANGE || v < -1000000000L || v > 1000000000L) {
    fail(raw, e.line, path + ": expected an integer, got '" + e.value + "'");
  }
  return static_cast<int>(v);
}

bool to_bool(const RawConfig& raw, const std::string& path, const RawEntry& e) {
  const std::string& v = e.value;
  if (v == "true" || v == "yes" || v == "1" || v == "on") return true;
  if (v == "false" || v == "no" || v == "0" || v == "off") return false;
  fail(raw, e.line, path + ": expected true or false, got '" + v + "'");
}

template <class F>
auto enum_value(const RawConfig& raw, const std::string& path, const RawEntry& e, F&& parse) {
  try {
    return parse(e.value);
  } catch (const ValidationError& err) {
    fail(raw, e.line, path + ": " + err.what());
  }
}

SpectralDensity density_from_string(const std::string& s) {
  if (s == "resonant") return SpectralDensity::Resonant;
  if (s == "cubic") return SpectralDensity::Cubic;
  throw ValidationError("expected 'resonant' or 'cubic', got '" + s + "'");
}

Spacing spacing_from_string(const std::string& s) {
  if (s == "linear") return Spacing::Linear;
  if (s == "log") return Spacing::Log;
  if (s == "midpoint") return Spacing::Midpoint;
  throw ValidationError("expected 'linear', 'log' or 'midpoint', got '" + s + "'");
}

std::string init_from_string(const std::string& s) {
  if (s == "default" || s == "right" || s == "left" || s == "plus" || s == "minus" || s == "custom") return s;
  throw ValidationError("expected one of default, right, left, plus, minus, custom; got '" + s + "'");
}

std::string preset_from_string(const std::string& s) {
  if (s == "cs" || s == "custom") return s;
  throw ValidationError("expected 'cs' or 'custom', got '" + s + "'");
}

using Setter = std::function<void(const RawConfig&, const std::string&, const RawEntry&)>;

void apply_section(const RawConfig& raw, const std::string& name,
                   const std::map<std::string, Setter>& setters) {
  const auto it = raw.sections.find(name);
  if (it == raw.sections.end()) return;
  for (const auto& [key, entry] : it->second) {
    const auto s = setters.find(key);
    const std::string path = name.empty() ? key : name + "." + key;
    if (s == setters.end()) {
      std::string known;
      for (const auto& [k, _] : setters) known += (known.empty() ? "" : ", ") + k;
      fail(raw, entry.line, "unknown key '" + path + "' (known: " + known + ")");
    }
    s->second(raw, path, entry);
  }
}

Setter dbl(double& d) {
  return [&d](const RawConfig& r, const std::string& p, const RawEntry& e) { d = to_double(r, p, e); };
}
Setter integer(int& i) {
  return [&i](const RawConfig& r, const std::string& p, const RawEntry& e) { i = to_int(r, p, e); };
}
Setter boolean(bool& b) {
  return [&b](const RawConfig& r, const std::string& p, const RawEntry& e) { b = to_bool(r, p, e); };
}

const std::vector<std::string> kModelAxes = {"omega0", "delta", "gamma", "ln_gamma", "beta", "eta"};

}  // namespace

const char* to_string(Scenario s) {
  switch (s) {
    case Scenario::Rates: return "rates";
    case Scenario::Tunneling: return "tunneling";
    case Scenario::TunnelingOracle: return "tunneling-oracle";
    case Scenario::FieldPattern: return "field-pattern";
    case Scenario::FieldOracle: return "field-oracle";
    case Scenario::Wellcheck: return "wellcheck";
    case Scenario::FigAmplitude: return "fig-amplitude";
    case Scenario::FigZtau: return "fig-ztau";
    case Scenario::FigPolar: return "fig-polar";
  }
  return "?";
}

std::vector<std::string> scenario_names() {
  return {"rates", "tunneling", "tunneling-oracle", "field-pattern", "field-oracle",
          "wellcheck", "fig-amplitude", "fig-ztau", "fig-polar"};
}

Scenario scenario_from_string(const std::string& s) {
  for (Scenario sc : {Scenario::Rates, Scenario::Tunneling, Scenario::TunnelingOracle, Scenario::FieldPattern,
                      Scenario::FieldOracle, Scenario::Wellcheck, Scenario::FigAmplitude, Scenario::FigZtau,
                      Scenario::FigPolar}) {
    if (s == to_string(sc)) return sc;
  }
  std::string known;
  for (const auto& n : scenario_names()) known += (known.empty() ? "" : ", ") + n;
  throw ValidationError("unknown scenario '" + s + "' (expected one of " + known + ")");
}

std::vector<double> SweepAxis::values() const {
  std::vector<double> v(count);
  for (int i = 0; i < count; ++i) {
    switch (spacing) {
      case Spacing::Linear:
        v[i] = i == count - 1 ? max : min + (max - min) * i / (count - 1);
        break;
      case Spacing::Log:
        v[i] = i == count - 1 ? max : min * std::pow(max / min, static_cast<double>(i) / (count - 1));
        break;
      case Spacing::Midpoint:
        v[i] = min + (max - min) * (i + 0.5) / count;
        break;
    }
  }
  return v;
}

RawConfig parse_ini(const std::string& text, const std::string& source) {
  RawConfig raw;
  raw.source = source;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    // comments: '#' or ';' at the start or after whitespace
    for (std::size_t i = 0; i < line.size(); ++i) {
      if ((line[i] == '#' || line[i] == ';') && (i == 0 || std::isspace(static_cast<unsigned char>(line[i - 1])))) {
        line.resize(i);
        break;
      }
    }
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (t.front() == '[') {
      if (t.back() != ']') fail(raw, lineno, "malformed section header '" + t + "'");
      section = trim(t.substr(1, t.size() - 2));
      if (section.empty() || !known_section(section)) {
        fail(raw, lineno, "unknown section [" + section + "] (expected scenario, params, sweep.N, oracle, output)");
      }
      if (raw.section_lines.count(section)) fail(raw, lineno, "duplicate section [" + section + "]");
      raw.section_lines[section] = lineno;
      raw.sections[section];
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos) fail(raw, lineno, "expected key = value, got '" + t + "'");
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (key.empty()) fail(raw, lineno, "empty key");
    auto& sec = raw.sections[section];
    if (sec.count(key)) {
      fail(raw, lineno, "duplicate key '" + (section.empty() ? key : section + "." + key) + "' (first set on line " +
                            std::to_string(sec[key].line) + ")");
    }
    sec[key] = {value, lineno};
  }
  return raw;
}

void apply_override(RawConfig& raw, const std::string& dotted, const std::string& value) {
  const auto dot = dotted.rfind('.');
  std::string section = dot == std::string::npos ? std::string() : dotted.substr(0, dot);
  const std::string key = dot == std::string::npos ? dotted : dotted.substr(dot + 1);
  if (key.empty()) fail(raw, 0, "override '" + dotted + "' has no key");
  if (!known_section(section)) fail(raw, 0, "override '" + dotted + "': unknown section [" + section + "]");
  // a bare --scenario=name and [scenario] name=... are the same setting
  if (section.empty() && key == "scenario" && raw.sections.count("scenario")) {
    section = "scenario";
    raw.sections[section]["name"] = {value, 0};
    return;
  }
  if (section == "scenario" && key == "name" && raw.sections.count("") && raw.sections[""].count("scenario")) {
    raw.sections[""]["scenario"] = {value, 0};
    return;
  }
  raw.sections[section][key] = {value, 0};
}

std::vector<std::string> allowed_axes(Scenario s) {
  std::vector<std::string> a;
  auto add = [&](std::initializer_list<const char*> names) { a.insert(a.end(), names.begin(), names.end()); };
  switch (s) {
    case Scenario::Rates:
    case Scenario::TunnelingOracle:
      a = kModelAxes;
      break;
    case Scenario::Tunneling:
      a = kModelAxes;
      add({"t", "tau"});
      break;
    case Scenario::FieldPattern:
    case Scenario::FieldOracle:
      a = kModelAxes;
      add({"alpha", "r", "t_ret"});
      break;
    case Scenario::Wellcheck:
      add({"v0_freq", "a_well", "mass", "lambda0", "omega0_scale"});
      break;
    case Scenario::FigAmplitude:
      add({"beta", "ln_gamma", "eta"});
      break;
    case Scenario::FigZtau:
      add({"ln_gamma", "tau", "beta", "eta"});
      break;
    case Scenario::FigPolar:
      add({"alpha", "beta", "eta"});
      break;
  }
  return a;
}

std::vector<SweepAxis> default_axes(Scenario s) {
  switch (s) {
    case Scenario::Tunneling: return {{"tau", 0.0, 20.0, 201, Spacing::Linear}};
    case Scenario::FieldPattern: return {{"alpha", 0.0, kPi, 181, Spacing::Linear}};
    case Scenario::FieldOracle: return {{"alpha", 0.0, kPi, 17, Spacing::Midpoint}};
    case Scenario::FigAmplitude:
      return {{"beta", 0.0, 4.0, 41, Spacing::Linear}, {"ln_gamma", -4.0, 4.0, 41, Spacing::Linear}};
    case Scenario::FigZtau:
      return {{"ln_gamma", -4.0, 4.0, 17, Spacing::Linear}, {"tau", 0.0, 20.0, 201, Spacing::Linear}};
    case Scenario::FigPolar: return {{"alpha", 0.0, 2.0 * kPi, 361, Spacing::Linear}};
    default: return {};
  }
}

ScenarioConfig materialize(const RawConfig& raw) {
  ScenarioConfig cfg;

  // scenario name: top-level shorthand or [scenario] name
  const RawEntry* name = nullptr;
  std::string name_path;
  if (auto it = raw.sections.find(""); it != raw.sections.end()) {
    for (const auto& [key, e] : it->second) {
      if (key != "scenario") fail(raw, e.line, "key '" + key + "' outside a section (only 'scenario' is allowed)");
      name = &e;
      name_path = "scenario";
    }
  }
  if (auto it = raw.sections.find("scenario"); it != raw.sections.end()) {
    for (const auto& [key, e] : it->second) {
      if (key == "name") {
        if (name) fail(raw, e.line, "scenario given both at top level and in [scenario]");
        name = &e;
        name_path = "scenario.name";
      } else if (key == "threads") {
        cfg.threads = to_int(raw, "scenario.threads", e);
        if (cfg.threads < 0) fail(raw, e.line, "scenario.threads must be >= 0");
      } else {
        fail(raw, e.line, "unknown key 'scenario." + key + "' (known: name, threads)");
      }
    }
  }
  if (!name) fail(raw, 0, "missing scenario (set 'scenario = <name>' or [scenario] name = <name>)");
  cfg.scenario = enum_value(raw, name_path, *name, scenario_from_string);

  ParamsBlock& p = cfg.params;
  bool custom_amps = false;
  apply_section(raw, "params",
                {{"omega0", dbl(p.omega0)},
                 {"delta", dbl(p.delta)},
                 {"gamma", dbl(p.gamma)},
                 {"beta", dbl(p.beta)},
                 {"eta", dbl(p.eta)},
                 {"init", [&](const RawConfig& r, const std::string& k, const RawEntry& e) {
                    p.init = enum_value(r, k, e, init_from_string);
                  }},
                 {"c_plus", [&](const RawConfig& r, const std::string& k, const RawEntry& e) {
                    p.c_plus = to_double(r, k, e);
                    custom_amps = true;
                  }},
                 {"c_minus", [&](const RawConfig& r, const std::string& k, const RawEntry& e) {
                    p.c_minus = to_double(r, k, e);
                    custom_amps = true;
                  }},
                 {"r", dbl(p.r)},
                 {"t_ret", dbl(p.t_ret)},
                 {"time_average", boolean(p.time_average)},
                 {"average_samples", integer(p.average_samples)},
                 {"preset", [&](const RawConfig& r, const std::string& k, const RawEntry& e) {
                    p.preset = enum_value(r, k, e, preset_from_string);
                  }},
                 {"convention", [&](const RawConfig& r, const std::string& k, const RawEntry& e) {
                    p.convention = enum_value(r, k, e, frequency_convention_from_string);
                  }},
                 {"v0_freq", dbl(p.v0_freq)},
                 {"a_well", dbl(p.a_well)},
                 {"mass", dbl(p.mass)},
                 {"lambda0", dbl(p.lambda0)},
                 {"omega0_scale", dbl(p.omega0_scale)},
                 {"n_grid", integer(p.n_grid)},
                 {"domain", dbl(p.domain)}});
  if (custom_amps) {
    const auto& sec = raw.sections.at("params");
    if (sec.count("init") && p.init != "custom") {
      fail(raw, sec.at("init").line, "params.c_plus/c_minus require params.init = custom");
    }
    p.init = "custom";
  }
  if (p.average_samples < 2) fail(raw, 0, "params.average_samples must be >= 2");

  OracleBlock& o = cfg.oracle;
  apply_section(raw, "oracle",
                {{"n_omega", integer(o.n_omega)},
                 {"omega_max", dbl(o.omega_max)},
                 {"n_mu", integer(o.n_mu)},
                 {"density", [&](const RawConfig& r, const std::string& k, const RawEntry& e) {
                    o.density = enum_value(r, k, e, density_from_string);
                  }},
                 {"renormalize", boolean(o.renormalize)},
                 {"dt", dbl(o.dt)},
                 {"t_end", dbl(o.t_end)},
                 {"samples", integer(o.samples)},
                 {"n_theta", integer(o.n_theta)},
                 {"n_phi", integer(o.n_phi)},
                 {"field_n_omega", integer(o.field_n_omega)},
                 {"window", dbl(o.window)},
                 {"tau_step", dbl(o.tau_step)}});
  if (!(o.t_end > 0.0)) fail(raw, 0, "oracle.t_end must be positive");
  if (o.samples < 2) fail(raw, 0, "oracle.samples must be >= 2");

  apply_section(raw, "output", {{"path", [&](const RawConfig&, const std::string&, const RawEntry& e) {
                                   cfg.output = e.value;
                                 }}});
  if (cfg.output.empty()) fail(raw, 0, "output.path must not be empty");

  // sweeps, ordered by N
  std::vector<std::pair<int, std::string>> sweep_sections;
  for (const auto& [sec, _] : raw.sections) {
    int idx = 0;
    if (is_sweep_section(sec, &idx)) sweep_sections.emplace_back(idx, sec);
  }
  std::sort(sweep_sections.begin(), sweep_sections.end());
  const std::vector<std::string> allowed = allowed_axes(cfg.scenario);
  std::vector<SweepAxis> configured;
  std::set<std::string> seen;
  for (const auto& [idx, sec] : sweep_sections) {
    SweepAxis ax;
    bool has_axis = false, has_min = false, has_max = false, has_count = false;
    const int line = raw.section_lines.count(sec) ? raw.section_lines.at(sec) : 0;
    apply_section(raw, sec,
                  {{"axis", [&](const RawConfig&, const std::string&, const RawEntry& e) {
                      ax.name = e.value;
                      has_axis = true;
                    }},
                   {"min", [&](const RawConfig& r, const std::string& k, const RawEntry& e) {
                      ax.min = to_double(r, k, e);
                      has_min = true;
                    }},
                   {"max", [&](const RawConfig& r, const std::string& k, const RawEntry& e) {
                      ax.max = to_double(r, k, e);
                      has_max = true;
                    }},
                   {"count", [&](const RawConfig& r, const std::string& k, const RawEntry& e) {
                      ax.count = to_int(r, k, e);
                      has_count = true;
                    }},
                   {"spacing", [&](const RawConfig& r, const std::string& k, const RawEntry& e) {
                      ax.spacing = enum_value(r, k, e, spacing_from_string);
                    }}});
    if (!has_axis || !has_min || !has_max || !has_count) {
      fail(raw, line, "[" + sec + "] needs axis, min, max and count");
    }
    if (std::find(allowed.begin(), allowed.end(), ax.name) == allowed.end()) {
      std::string known;
      for (const auto& n : allowed) known += (known.empty() ? "" : ", ") + n;
      fail(raw, line, sec + ".axis: '" + ax.name + "' is not a parameter of scenario " + to_string(cfg.scenario) +
                          " (allowed: " + known + ")");
    }
    if (ax.count < 2) fail(raw, line, sec + ".count must be >= 2");
    if (!(ax.max > ax.min)) fail(raw, line, sec + ": max must exceed min");
    if (ax.spacing == Spacing::Log && !(ax.min > 0.0)) fail(raw, line, sec + ": log axis requires positive min");
    if (!seen.insert(ax.name).second) fail(raw, line, sec + ": axis '" + ax.name + "' swept twice");
    configured.push_back(ax);
  }
  if (seen.count("gamma") && seen.count("ln_gamma")) fail(raw, 0, "sweeps over both gamma and ln_gamma");
  if (seen.count("t") && seen.count("tau")) fail(raw, 0, "sweeps over both t and tau");

  // configured non-default axes outermost, then the scenario's own axes
  const std::vector<SweepAxis> defaults = default_axes(cfg.scenario);
  auto is_default_name = [&](const std::string& n) {
    return std::any_of(defaults.begin(), defaults.end(), [&](const SweepAxis& d) { return d.name == n; });
  };
  for (const SweepAxis& ax : configured) {
    if (!is_default_name(ax.name)) cfg.sweeps.push_back(ax);
  }
  for (const SweepAxis& d : defaults) {
    auto it = std::find_if(configured.begin(), configured.end(), [&](const SweepAxis& a) { return a.name == d.name; });
    if (it != configured.end()) {
      cfg.sweeps.push_back(*it);
    } else if (!(d.name == "ln_gamma" && seen.count("gamma")) && !(d.name == "tau" && seen.count("t"))) {
      cfg.sweeps.push_back(d);
    }
  }
  return cfg;
}

ScenarioConfig parse_config(const std::string& text, const std::string& source) {
  return materialize(parse_ini(text, source));
}

ScenarioConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  RawConfig raw = parse_ini(ss.str(), path);
  for (const std::string& o : overrides) {
    std::string s = o;
    if (s.rfind("--", 0) == 0) s = s.substr(2);
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw ValidationError("command line: override '" + o + "' must look like --section.key=value");
    }
    apply_override(raw, s.substr(0, eq), s.substr(eq + 1));
  }
  return materialize(raw);
}

}  // namespace twinwell
