#pragma once

#include "qfel/cli/scenario.hpp"
#include "qfel/trace.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace qfel::cli {

/// Low-gain gain curves against Omega t: closed forms and propagation for nu = 1, 2, 3.
[[nodiscard]] Trace run_fig2(const Scenario& scenario);

/// High-gain n/N against L/L_g. Top panel: first resonance, closed forms at
/// both orders and the third-order simulation. Bottom panel: second
/// resonance closed form and both Dicke simulations.
[[nodiscard]] Trace run_fig3(const Scenario& scenario);

/// Closed-form n/N of the first and second resonance on one length axis.
[[nodiscard]] Trace run_fig4(const Scenario& scenario);

struct SweepTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;  ///< ordered by grid index
};

/// One row per grid point; a failing point fills the `error` column and the
/// remaining points still run. Row content does not depend on the thread count.
[[nodiscard]] SweepTable run_sweep(const Scenario& scenario);

/// Leading `# key=value ...` comment, header, rows.
void write_csv(std::ostream& out, const Trace& trace, const Scenario& scenario);
void write_csv(std::ostream& out, const SweepTable& table, const Scenario& scenario);

/// Runs the acceptance suite, prints the report and returns 0 iff every criterion passed.
int run_validate(std::ostream& out);

}  // namespace qfel::cli
