#pragma once

#include "qfel/ladder.hpp"

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qfel::cli {

enum class Command { fig2, fig3, fig4, validate, sweep };

[[nodiscard]] std::string_view command_name(Command c);

/// Everything one CLI invocation needs. Unset optionals fall back to the
/// per-command defaults in `resolved()`.
struct Scenario {
  Command command = Command::fig2;
  std::string panel;  ///< fig3 only: "top" or "bottom"
  std::optional<Regime> regime;
  std::optional<int> resonance;
  std::string variant;
  std::optional<double> alpha;
  std::optional<long> n0;
  std::optional<long> electrons;
  std::optional<int> truncation;
  std::optional<double> end;
  std::optional<std::size_t> samples;
  std::string out;  ///< empty writes to stdout

  // Sweep grid. Empty lists after resolution mean an empty grid.
  std::optional<std::vector<double>> alphas;
  std::optional<std::vector<double>> seed_ratios;
  std::optional<std::vector<int>> resonances;
  std::optional<unsigned> threads;

  /// Applies one key=value setting; throws std::invalid_argument on an
  /// unknown key, a malformed value or a key the command does not use.
  void set(std::string_view key, std::string_view value);

  /// Copy with every default filled in and cross-field rules checked.
  [[nodiscard]] Scenario resolved() const;

  /// Single-line `key=value` record of the resolved scenario.
  [[nodiscard]] std::string describe() const;
};

/// Reads `key = value` lines; blank lines and lines starting with '#' are skipped.
/// Throws std::invalid_argument with the line number on malformed input.
[[nodiscard]] std::vector<std::pair<std::string, std::string>> parse_config(std::istream& in);

/// Applies the config settings, then the flag settings (flags win), and resolves.
[[nodiscard]] Scenario compose_scenario(Command command,
                                        const std::vector<std::pair<std::string, std::string>>& config,
                                        const std::map<std::string, std::string>& flags);

/// Parses "0.1,0.2,0.3"; an empty string gives an empty list.
[[nodiscard]] std::vector<double> parse_number_list(std::string_view text);

}  // namespace qfel::cli
