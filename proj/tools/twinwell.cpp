// twinwell: scenario runner for the double-well emission model.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "twinwell/config.hpp"
#include "twinwell/csv.hpp"
#include "twinwell/scenarios.hpp"
#include "twinwell/wellcheck.hpp"

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

// CLI11 hands back "--a.b=v" either whole or as "--a.b" "v".
std::vector<std::string> collect_overrides(const std::vector<std::string>& extras) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < extras.size(); ++i) {
    const std::string& s = extras[i];
    if (s.rfind("--", 0) != 0) throw twinwell::ValidationError("command line: unexpected argument '" + s + "'");
    if (s.find('=') != std::string::npos) {
      out.push_back(s);
    } else if (i + 1 < extras.size() && extras[i + 1].rfind("--", 0) != 0) {
      out.push_back(s + "=" + extras[i + 1]);
      ++i;
    } else {
      throw twinwell::ValidationError("command line: override '" + s + "' needs a value (--section.key=value)");
    }
  }
  return out;
}

void print_presets() {
  using namespace twinwell;
  std::cout << "name,convention,V0_J,a_m,mass_kg,lambda0_m\n";
  for (FrequencyConvention c : {FrequencyConvention::Hbar, FrequencyConvention::H}) {
    const QuarticWell w = cs_preset(c);
    std::cout << w.name << "," << to_string(c) << "," << format_number(w.v0) << "," << format_number(w.a_well)
              << "," << format_number(w.mass) << "," << format_number(w.lambda0) << "\n";
  }
  std::cout << "# default convention: hbar (V0 = hbar * 0.23e6 s^-1); select with params.convention\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spontaneous emission from a two-level atom tunneling in a double well"};
  app.require_subcommand(1);

  std::string config_path;
  auto* run = app.add_subcommand("run", "Run a scenario and write its CSV");
  run->add_option("config", config_path, "INI scenario file")->required();
  run->allow_extras();
  run->footer("Overrides: --section.key=value, e.g. --params.beta=2 --output.path=out.csv");

  auto* validate = app.add_subcommand("validate", "Parse and check a scenario without running it");
  validate->add_option("config", config_path, "INI scenario file")->required();
  validate->allow_extras();

  app.add_subcommand("presets", "List the built-in wellcheck presets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (app.got_subcommand("presets")) {
      print_presets();
      return 0;
    }
    CLI::App* sub = app.got_subcommand("run") ? run : validate;
    const twinwell::ScenarioConfig cfg = twinwell::load_config(config_path, collect_overrides(sub->remaining()));
    if (sub == validate) {
      const twinwell::RunSummary s = twinwell::validate_scenario(cfg);
      std::cout << "ok: scenario " << twinwell::to_string(cfg.scenario) << ", " << s.tasks << " task(s), columns";
      for (const std::string& c : s.columns) std::cout << " " << c;
      std::cout << "\n";
      return 0;
    }
    const twinwell::RunSummary s = twinwell::run(cfg);
    if (cfg.output != "-") {
      std::cerr << "wrote " << s.rows << " rows to " << cfg.output << "\n";
    }
    return 0;
  } catch (const twinwell::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const twinwell::RuntimeError& e) {
    std::cerr << "runtime error: " << e.what() << "\n";
    return kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << "\n";
    return kExitRuntime;
  }
}
