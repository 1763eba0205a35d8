#pragma once

#include "qfel/ladder.hpp"
#include "qfel/trace.hpp"

#include <cstddef>
#include <span>

namespace qfel {

/// Two ways of integrating the mean-field second-resonance dynamics.
enum class SemiclassicalRoute {
  intensity,  ///< closed second-order equation for n(L), with N0 and N2 eliminated
  three_mode, ///< coupled complex amplitudes of the field and both momentum modes
};

struct SemiclassicalRun {
  Trace trace;  ///< axis L/L_g; columns n, ndot, N0, N2, A, B
  double invariant_drift = 0.0;  ///< max relative drift of A = N0 + N2 and B = 2 N0 + n
};

/// Integrates the semiclassical second-resonance (nu = 2) dynamics from
/// n = n0, dn/dL = 0 and samples it at `lengths`.
///
/// Occupations are carried as fractions of N, so the integration does not
/// depend on the electron count. `tolerance` is used as both the absolute and
/// the relative error target of the adaptive stepper.
/// Throws PropagationError if N0 or N2 turns negative beyond 1e-9 N.
[[nodiscard]] SemiclassicalRun integrate_semiclassical(const FelParams& params, std::span<const double> lengths,
                                                       SemiclassicalRoute route = SemiclassicalRoute::intensity,
                                                       double tolerance = 1e-12);

/// Same on an even grid of `samples` points over [0, length_end].
[[nodiscard]] SemiclassicalRun integrate_semiclassical(const FelParams& params, double length_end,
                                                       std::size_t samples,
                                                       SemiclassicalRoute route = SemiclassicalRoute::intensity,
                                                       double tolerance = 1e-12);

}  // namespace qfel
