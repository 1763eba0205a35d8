#include "qfel/cli/experiments.hpp"
#include "qfel/cli/scenario.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitUsage = 2;

struct Flags {
  std::map<std::string, std::string> values;
  std::string config;
};

void add_scenario_flags(CLI::App* cmd, Flags& flags, std::initializer_list<const char*> keys) {
  for (const char* key : keys) {
    std::string name = std::string("--") + key;
    for (char& c : name) {
      if (c == '_') c = '-';
    }
    cmd->add_option_function<std::string>(
        name, [&flags, key](const std::string& v) { flags.values[key] = v; }, std::string("set ") + key);
  }
  cmd->add_option("--config", flags.config, "key=value scenario file; flags override it");
}

qfel::cli::Scenario build_scenario(qfel::cli::Command command, const Flags& flags) {
  std::vector<std::pair<std::string, std::string>> config;
  if (!flags.config.empty()) {
    std::ifstream in(flags.config);
    if (!in) throw std::invalid_argument("cannot open config file " + flags.config);
    config = qfel::cli::parse_config(in);
  }
  return qfel::cli::compose_scenario(command, config, flags.values);
}

template <typename Table>
void emit(const Table& table, const qfel::cli::Scenario& s) {
  if (s.out.empty()) {
    qfel::cli::write_csv(std::cout, table, s);
    return;
  }
  std::ofstream file(s.out);
  if (!file) throw std::runtime_error("cannot open output file " + s.out);
  qfel::cli::write_csv(file, table, s);
}

}  // namespace

int main(int argc, char** argv) {
  using qfel::cli::Command;
  CLI::App app{"Quantum FEL ladder and Dicke-model simulations"};
  app.require_subcommand(1);

  Flags flags;
  auto* fig2 = app.add_subcommand("fig2", "low-gain gain curves for nu = 1, 2, 3");
  add_scenario_flags(fig2, flags, {"alpha", "truncation", "variant", "end", "samples", "out"});
  auto* fig3 = app.add_subcommand("fig3", "high-gain photon number, first (top) or second (bottom) resonance");
  add_scenario_flags(fig3, flags, {"panel", "resonance", "alpha", "n0", "electrons", "end", "samples", "out"});
  auto* fig4 = app.add_subcommand("fig4", "closed-form photon number of both resonances");
  add_scenario_flags(fig4, flags, {"alpha", "n0", "electrons", "end", "samples", "out"});
  auto* validate = app.add_subcommand("validate", "run the acceptance suite");
  auto* sweep = app.add_subcommand("sweep", "parameter sweep over alpha, n0/N and nu");
  add_scenario_flags(sweep, flags, {"regime", "alphas", "seed_ratios", "resonances", "resonance", "electrons",
                                    "variant", "truncation", "threads", "out"});
  // The generic --alpha is accepted for sweeps as a one-point alpha grid.
  sweep->add_option_function<std::string>(
      "--alpha", [&flags](const std::string& v) { flags.values["alphas"] = v; }, "single alpha value");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (validate->parsed()) return qfel::cli::run_validate(std::cout) == 0 ? 0 : kExitValidation;

    const Command command = fig2->parsed()   ? Command::fig2
                            : fig3->parsed() ? Command::fig3
                            : fig4->parsed() ? Command::fig4
                                             : Command::sweep;
    qfel::cli::Scenario scenario;
    try {
      scenario = build_scenario(command, flags);
    } catch (const std::invalid_argument& e) {
      std::cerr << "qfel: " << e.what() << '\n';
      return kExitUsage;
    }
    switch (command) {
      case Command::fig2: emit(qfel::cli::run_fig2(scenario), scenario); break;
      case Command::fig3: emit(qfel::cli::run_fig3(scenario), scenario); break;
      case Command::fig4: emit(qfel::cli::run_fig4(scenario), scenario); break;
      default: emit(qfel::cli::run_sweep(scenario), scenario); break;
    }
  } catch (const std::exception& e) {
    std::cerr << "qfel: " << e.what() << '\n';
    return kExitValidation;
  }
  return 0;
}
