#include "qfel/cli/experiments.hpp"

#include "qfel/highgain.hpp"
#include "qfel/lowgain.hpp"
#include "qfel/validation/acceptance.hpp"

#include <atomic>
#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace qfel::cli {
namespace {

std::string nu_suffix(int nu) { return "_nu" + std::to_string(nu); }

/// Closed-form oscillation frequency of dn/N per unit tau.
double expected_frequency(int nu, double alpha) {
  const double a2 = alpha * alpha;
  switch (nu) {
    case 1: return alpha * (1.0 - a2 / 4.0);
    case 2: return a2 * (1.0 - 16.0 * a2 / 9.0);
    default: return alpha * a2 / 4.0;
  }
}

LowGainRun low_gain_run(int nu, double alpha, int truncation, const std::string& variant,
                        std::span<const double> taus) {
  const bool full = variant == "full";
  const FelParams p = FelParams::low_gain(alpha, nu, full ? 1 : max_effective_order(nu), truncation);
  const LowGainModel model(p, full ? LowGainVariant::full_hamiltonian : LowGainVariant::effective);
  return propagate(model, LadderState::momentum_eigenstate(nu, p.truncation), taus);
}

std::vector<double> scaled(std::vector<double> values, double factor) {
  for (double& v : values) v *= factor;
  return values;
}

std::string cell(double v) { return format_number(v); }

std::string sanitize(std::string text) {
  for (char& c : text) {
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  }
  return text;
}

struct LowGainPoint {
  double frequency;  // per unit Omega t
  Maximum peak;      // abscissa Omega t
};

LowGainPoint measure_low_gain(int nu, double alpha, int truncation, const std::string& variant) {
  const double tau_end = 1.6 * std::numbers::pi / expected_frequency(nu, alpha);
  const Trace grid = Trace::uniform("tau", tau_end, 4001);
  const LowGainRun run = low_gain_run(nu, alpha, truncation, variant, grid.abscissae());
  const RabiFit fit = fit_rabi_frequency(run.trace, "dn_per_N");
  Maximum peak = first_maximum(run.trace, "dn_per_N");
  peak.position *= alpha;
  return {fit.frequency / alpha, peak};
}

std::vector<std::string> sweep_point(const Scenario& s, double alpha, std::optional<double> seed_ratio, int nu) {
  const bool low = *s.regime == Regime::low_gain;
  // index, regime, resonance, alpha, seed_ratio, fitted_frequency, scaling_coefficient,
  // max_value, max_position, lmax_ratio_approx, lmax_ratio_exact, error
  std::vector<std::string> row(12);
  row[1] = low ? "low" : "high";
  row[2] = std::to_string(nu);
  row[3] = cell(alpha);
  if (seed_ratio) row[4] = cell(*seed_ratio);
  std::string errors;
  const auto attempt = [&](auto&& fn) {
    try {
      fn();
    } catch (const std::exception& e) {
      errors += (errors.empty() ? "" : "; ") + sanitize(e.what());
    }
  };

  if (low) {
    attempt([&] {
      const LowGainPoint point = measure_low_gain(nu, alpha, *s.truncation, s.variant);
      row[5] = cell(point.frequency);
      row[7] = cell(point.peak.value);
      row[8] = cell(point.peak.position);
      const double base = nu == 1 ? point.frequency : measure_low_gain(1, alpha, *s.truncation, s.variant).frequency;
      row[6] = cell(point.frequency / base / std::pow(alpha, nu - 1));
    });
  } else {
    const long electrons = *s.electrons;
    const long n0 = std::lround(*seed_ratio * static_cast<double>(electrons));
    attempt([&] {
      const FelParams p = FelParams::high_gain(alpha, nu, n0, electrons);
      const double position = lmax_exact(p, nu);
      const double n = nu == 1 ? analytic_n_first(position, p, 3) : analytic_n_second(position, p);
      row[7] = cell(n / static_cast<double>(electrons));
      row[8] = cell(position);
    });
    attempt([&] { row[9] = cell(lmax_ratio(alpha, static_cast<double>(n0) / static_cast<double>(electrons))); });
    attempt([&] {
      const FelParams p = FelParams::high_gain(alpha, 2, n0, electrons);
      row[10] = cell(lmax_exact(p, 2) / lmax_exact(p, 1));
    });
  }
  row[11] = errors;
  return row;
}

}  // namespace

Trace run_fig2(const Scenario& scenario) {
  const Scenario s = scenario.resolved();
  const double alpha = *s.alpha;
  Trace trace = Trace::uniform("Omega_t", *s.end, *s.samples);
  const std::vector<double> taus = scaled(trace.abscissae(), 1.0 / alpha);
  for (int nu = 1; nu <= 3; ++nu) {
    std::vector<double> column;
    for (double phase : trace.abscissae()) column.push_back(analytic_dn(nu, alpha, phase));
    trace.add_column("dn_per_N_analytic" + nu_suffix(nu), std::move(column));
  }
  for (int nu = 1; nu <= 3; ++nu) {
    LowGainRun run = low_gain_run(nu, alpha, *s.truncation, s.variant, taus);
    trace.add_column("dn_per_N_numeric" + nu_suffix(nu), run.trace.column("dn_per_N"));
  }
  return trace;
}

Trace run_fig3(const Scenario& scenario) {
  const Scenario s = scenario.resolved();
  const double n = static_cast<double>(*s.electrons);
  Trace trace = Trace::uniform("L/L_g", *s.end, *s.samples);
  const auto& lengths = trace.abscissae();
  if (s.panel == "top") {
    const FelParams p = FelParams::high_gain(*s.alpha, 1, *s.n0, *s.electrons);
    std::vector<double> order3, order1;
    for (double l : lengths) {
      order3.push_back(analytic_n_first(l, p, 3) / n);
      order1.push_back(analytic_n_first(l, p, 1) / n);
    }
    const DickeRun run = propagate_dicke(HighGainModel(p, HighGainVariant::third_order), lengths);
    trace.add_column("n_over_N_closed_order3", std::move(order3));
    trace.add_column("n_over_N_closed_order1", std::move(order1));
    trace.add_column("n_over_N_numeric_third_order", run.trace.column("n_over_N"));
  } else {
    const FelParams p = FelParams::high_gain(*s.alpha, 2, *s.n0, *s.electrons);
    std::vector<double> closed;
    for (double l : lengths) closed.push_back(analytic_n_second(l, p) / n);
    const DickeRun dicke = propagate_dicke(HighGainModel(p, HighGainVariant::dicke_only), lengths);
    const DickeRun full = propagate_dicke(HighGainModel(p, HighGainVariant::full_second_order), lengths);
    trace.add_column("n_over_N_closed", std::move(closed));
    trace.add_column("n_over_N_numeric_dicke_only", dicke.trace.column("n_over_N"));
    trace.add_column("n_over_N_numeric_full_second_order", full.trace.column("n_over_N"));
  }
  return trace;
}

Trace run_fig4(const Scenario& scenario) {
  const Scenario s = scenario.resolved();
  const double n = static_cast<double>(*s.electrons);
  const FelParams first = FelParams::high_gain(*s.alpha, 1, *s.n0, *s.electrons);
  const FelParams second = FelParams::high_gain(*s.alpha, 2, *s.n0, *s.electrons);
  Trace trace = Trace::uniform("L/L_g", *s.end, *s.samples);
  std::vector<double> one, two;
  for (double l : trace.abscissae()) {
    one.push_back(analytic_n_first(l, first, 3) / n);
    two.push_back(analytic_n_second(l, second) / n);
  }
  trace.add_column("n_over_N_first_resonance", std::move(one));
  trace.add_column("n_over_N_second_resonance", std::move(two));
  return trace;
}

SweepTable run_sweep(const Scenario& scenario) {
  const Scenario s = scenario.resolved();
  SweepTable table;
  table.header = {"index",         "regime",    "resonance",         "alpha",
                  "seed_ratio",    "fitted_frequency", "scaling_coefficient", "max_value",
                  "max_position",  "lmax_ratio_approx", "lmax_ratio_exact",   "error"};

  struct Point {
    double alpha;
    std::optional<double> seed_ratio;
    int resonance;
  };
  std::vector<Point> grid;
  const bool low = *s.regime == Regime::low_gain;
  for (double alpha : *s.alphas) {
    if (low) {
      for (int nu : *s.resonances) grid.push_back({alpha, std::nullopt, nu});
    } else {
      for (double r : *s.seed_ratios) {
        for (int nu : *s.resonances) grid.push_back({alpha, r, nu});
      }
    }
  }

  table.rows.resize(grid.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < grid.size(); i = next++) {
      table.rows[i] = sweep_point(s, grid[i].alpha, grid[i].seed_ratio, grid[i].resonance);
      table.rows[i][0] = std::to_string(i);
    }
  };
  const unsigned count = std::min<unsigned>(*s.threads, static_cast<unsigned>(std::max<std::size_t>(grid.size(), 1)));
  std::vector<std::jthread> pool;
  for (unsigned t = 1; t < count; ++t) pool.emplace_back(worker);
  worker();
  pool.clear();
  return table;
}

void write_csv(std::ostream& out, const Trace& trace, const Scenario& scenario) {
  trace.write_csv(out, scenario.resolved().describe());
  if (!out) throw std::runtime_error("failed to write CSV output");
}

void write_csv(std::ostream& out, const SweepTable& table, const Scenario& scenario) {
  out << "# " << scenario.resolved().describe() << '\n';
  for (std::size_t i = 0; i < table.header.size(); ++i) out << (i ? "," : "") << table.header[i];
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << '\n';
  }
  if (!out) throw std::runtime_error("failed to write CSV output");
}

int run_validate(std::ostream& out) {
  acceptance::Suite suite;
  out << "acceptance suite: each check reads 'measured relation limit'\n";
  int failed = 0;
  for (int id = 1; id <= acceptance::kCriterionCount; ++id) {
    const acceptance::CriterionResult result = suite.run(id);
    acceptance::print_summary(out, result);
    acceptance::print_details(out, result);
    out.flush();
    if (!result.passed()) ++failed;
  }
  out << (acceptance::kCriterionCount - failed) << '/' << acceptance::kCriterionCount << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}

}  // namespace qfel::cli
