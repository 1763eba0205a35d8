#include "qfel/cli/scenario.hpp"

#include "qfel/trace.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace qfel::cli {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(std::string_view key, std::string_view text) {
  text = trim(text);
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw std::invalid_argument("invalid value '" + std::string(text) + "' for " + std::string(key));
  }
  return value;
}

const std::set<std::string_view>& keys_for(Command c) {
  static const std::set<std::string_view> fig2{"alpha", "truncation", "end", "samples", "out", "variant"};
  static const std::set<std::string_view> fig3{"panel", "resonance", "alpha", "n0", "electrons", "end", "samples", "out"};
  static const std::set<std::string_view> fig4{"alpha", "n0", "electrons", "end", "samples", "out"};
  static const std::set<std::string_view> validate{};
  static const std::set<std::string_view> sweep{"regime",      "alphas",  "seed_ratios", "resonances", "resonance",
                                                "electrons",   "variant", "threads",     "out",        "truncation"};
  switch (c) {
    case Command::fig2: return fig2;
    case Command::fig3: return fig3;
    case Command::fig4: return fig4;
    case Command::validate: return validate;
    case Command::sweep: return sweep;
  }
  return validate;
}

std::string join(const std::vector<double>& values) {
  std::string s;
  for (std::size_t i = 0; i < values.size(); ++i) s += (i ? ";" : "") + format_number(values[i]);
  return s;
}

}  // namespace

std::string_view command_name(Command c) {
  switch (c) {
    case Command::fig2: return "fig2";
    case Command::fig3: return "fig3";
    case Command::fig4: return "fig4";
    case Command::validate: return "validate";
    case Command::sweep: return "sweep";
  }
  return "?";
}

std::vector<double> parse_number_list(std::string_view text) {
  std::vector<double> out;
  text = trim(text);
  while (!text.empty()) {
    const auto comma = text.find(',');
    out.push_back(parse_number<double>("list entry", text.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    text = text.substr(comma + 1);
  }
  return out;
}

void Scenario::set(std::string_view key, std::string_view value) {
  key = trim(key);
  value = trim(value);
  if (!keys_for(command).contains(key)) {
    throw std::invalid_argument("'" + std::string(key) + "' is not a setting of the " +
                                std::string(command_name(command)) + " command");
  }
  if (key == "panel") {
    if (value != "top" && value != "bottom") throw std::invalid_argument("panel must be 'top' or 'bottom'");
    panel = value;
  } else if (key == "regime") {
    if (value == "low") {
      regime = Regime::low_gain;
    } else if (value == "high") {
      regime = Regime::high_gain;
    } else {
      throw std::invalid_argument("regime must be 'low' or 'high'");
    }
  } else if (key == "resonance") {
    resonance = parse_number<int>(key, value);
  } else if (key == "variant") {
    variant = value;
  } else if (key == "alpha") {
    alpha = parse_number<double>(key, value);
  } else if (key == "n0") {
    n0 = parse_number<long>(key, value);
  } else if (key == "electrons") {
    electrons = parse_number<long>(key, value);
  } else if (key == "truncation") {
    truncation = parse_number<int>(key, value);
  } else if (key == "end") {
    end = parse_number<double>(key, value);
  } else if (key == "samples") {
    samples = parse_number<std::size_t>(key, value);
  } else if (key == "out") {
    out = value;
  } else if (key == "alphas") {
    alphas = parse_number_list(value);
  } else if (key == "seed_ratios") {
    seed_ratios = parse_number_list(value);
  } else if (key == "resonances") {
    std::vector<int> list;
    for (double v : parse_number_list(value)) {
      if (v != static_cast<int>(v)) throw std::invalid_argument("resonances must be integers");
      list.push_back(static_cast<int>(v));
    }
    resonances = std::move(list);
  } else if (key == "threads") {
    threads = parse_number<unsigned>(key, value);
  }
}

Scenario Scenario::resolved() const {
  Scenario s = *this;
  const auto positive = [](double v, const char* what) {
    if (!(v > 0.0)) throw std::invalid_argument(std::string(what) + " must be positive");
  };
  switch (command) {
    case Command::fig2:
      s.regime = Regime::low_gain;
      if (s.variant.empty()) s.variant = "full";
      if (s.variant != "full" && s.variant != "effective") {
        throw std::invalid_argument("fig2 variant must be 'full' or 'effective'");
      }
      if (!s.alpha) s.alpha = 0.25;
      if (!s.truncation) s.truncation = 0;
      if (!s.end) s.end = 120.0;
      if (!s.samples) s.samples = 1201;
      break;
    case Command::fig3: {
      s.regime = Regime::high_gain;
      if (s.panel.empty() && s.resonance) s.panel = *s.resonance == 1 ? "top" : "bottom";
      if (s.panel.empty()) throw std::invalid_argument("fig3 needs --panel top|bottom");
      const bool top = s.panel == "top";
      if (s.resonance && *s.resonance != (top ? 1 : 2)) {
        throw std::invalid_argument("the " + s.panel + " panel shows resonance " + (top ? "1" : "2"));
      }
      s.resonance = top ? 1 : 2;
      if (!s.alpha) s.alpha = top ? 0.5 : 0.25;
      if (!s.electrons) s.electrons = 10'000;
      if (!s.n0) s.n0 = *s.electrons / 10;
      if (!s.end) s.end = top ? 12.0 : 60.0;
      if (!s.samples) s.samples = 601;
      break;
    }
    case Command::fig4:
      s.regime = Regime::high_gain;
      if (!s.alpha) s.alpha = 0.25;
      if (!s.electrons) s.electrons = 10'000;
      if (!s.n0) s.n0 = *s.electrons / 10;
      if (!s.end) s.end = 60.0;
      if (!s.samples) s.samples = 1201;
      break;
    case Command::validate:
      return s;
    case Command::sweep: {
      if (!s.regime) s.regime = Regime::low_gain;
      const bool low = *s.regime == Regime::low_gain;
      if (s.resonance && s.resonances) throw std::invalid_argument("give either resonance or resonances");
      if (s.resonance) {
        s.resonances = std::vector<int>{*s.resonance};
        s.resonance.reset();
      }
      if (!s.resonances) s.resonances = low ? std::vector<int>{1, 2, 3} : std::vector<int>{1, 2};
      if (!s.alphas) s.alphas = low ? std::vector<double>{0.1, 0.2, 0.3} : std::vector<double>{0.1, 0.2, 0.3, 0.4, 0.5};
      if (!s.seed_ratios) s.seed_ratios = low ? std::vector<double>{} : std::vector<double>{0.1};
      if (low && !s.seed_ratios->empty()) throw std::invalid_argument("seed_ratios apply to the high-gain sweep only");
      if (!low && s.truncation) throw std::invalid_argument("truncation applies to the low-gain sweep only");
      if (s.variant.empty()) s.variant = "full";
      if (low && s.variant != "full" && s.variant != "effective") {
        throw std::invalid_argument("low-gain sweep variant must be 'full' or 'effective'");
      }
      if (!low && s.variant != "full") throw std::invalid_argument("the high-gain sweep uses closed forms only");
      for (int nu : *s.resonances) {
        if (low ? (nu < 1 || nu > 3) : (nu < 1 || nu > 2)) {
          throw std::invalid_argument("resonance " + std::to_string(nu) + " is not available in the " +
                                      (low ? "low" : "high") + "-gain sweep");
        }
      }
      for (double a : *s.alphas) positive(a, "every alpha");
      for (double r : *s.seed_ratios) positive(r, "every seed ratio");
      if (!s.electrons) s.electrons = 10'000;
      if (low && !s.truncation) s.truncation = 0;
      if (!s.threads) s.threads = std::max(1u, std::thread::hardware_concurrency());
      return s;
    }
  }
  positive(*s.alpha, "alpha");
  positive(*s.end, "end");
  if (*s.samples < 2) throw std::invalid_argument("samples must be at least 2");
  if (s.electrons && *s.electrons < 1) throw std::invalid_argument("electrons must be at least 1");
  if (s.n0 && *s.n0 < 1 && s.command != Command::fig2) {
    throw std::invalid_argument("the high-gain figures need a seeded start, n0 >= 1");
  }
  return s;
}

std::string Scenario::describe() const {
  std::ostringstream o;
  o << "command=" << command_name(command);
  if (!panel.empty()) o << " panel=" << panel;
  if (regime) o << " regime=" << (*regime == Regime::low_gain ? "low" : "high");
  if (resonance) o << " resonance=" << *resonance;
  if (!variant.empty()) o << " variant=" << variant;
  if (alpha) o << " alpha=" << format_number(*alpha);
  if (n0) o << " n0=" << *n0;
  if (electrons) o << " electrons=" << *electrons;
  if (truncation) o << " truncation=" << *truncation;
  if (end) o << " end=" << format_number(*end);
  if (samples) o << " samples=" << *samples;
  if (alphas) o << " alphas=" << join(*alphas);
  if (seed_ratios) o << " seed_ratios=" << join(*seed_ratios);
  if (resonances) o << " resonances=" << join(std::vector<double>(resonances->begin(), resonances->end()));
  return o.str();
}

Scenario compose_scenario(Command command, const std::vector<std::pair<std::string, std::string>>& config,
                          const std::map<std::string, std::string>& flags) {
  Scenario s;
  s.command = command;
  for (const auto& [key, value] : config) s.set(key, value);
  for (const auto& [key, value] : flags) s.set(key, value);
  return s.resolved();
}

std::vector<std::pair<std::string, std::string>> parse_config(std::istream& in) {
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string_view view = trim(line);
    if (view.empty() || view.front() == '#') continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos || trim(view.substr(0, eq)).empty()) {
      throw std::invalid_argument("config line " + std::to_string(number) + ": expected key=value");
    }
    out.emplace_back(std::string(trim(view.substr(0, eq))), std::string(trim(view.substr(eq + 1))));
  }
  return out;
}

}  // namespace qfel::cli
