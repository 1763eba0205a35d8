#pragma once

#include "qfel/banded_operator.hpp"
#include "qfel/ladder.hpp"
#include "qfel/trace.hpp"

#include <array>
#include <cstddef>
#include <span>
#include <string_view>
#include <utility>

namespace qfel {

enum class LowGainVariant {
  full_hamiltonian,  ///< time-dependent single-electron Hamiltonian, classical field
  effective,         ///< static averaged Hamiltonian truncated at params.order
};

/// Lowest and highest expansion order available for resonance nu (1, 2 or 3).
[[nodiscard]] int min_effective_order(int resonance);
[[nodiscard]] int max_effective_order(int resonance);

struct LowGainModel {
  FelParams params;
  LowGainVariant variant = LowGainVariant::full_hamiltonian;

  /// Validates the low-gain context and, for the effective variant, the order.
  LowGainModel(FelParams p, LowGainVariant v);
};

/// Interaction-picture Hamiltonian in units of the recoil frequency:
/// entry (mu, mu+1) = alpha_n exp(2 i tau [nu/2 - (mu + 1/2)]).
[[nodiscard]] BandedHermitianOperator build_full_hamiltonian(const FelParams& params);

/// Static effective Hamiltonian for resonance nu with every term up to
/// alpha_n^order. Diagonal sums are cut at the ladder bounds.
/// Unsupported (nu, order) combinations throw std::invalid_argument.
[[nodiscard]] BandedHermitianOperator build_effective_hamiltonian(const FelParams& params, int order);

enum class LowGainEngine {
  exact,   ///< eigen-decomposition (rotating frame for the full Hamiltonian)
  magnus,  ///< fourth-order Magnus stepping in the interaction picture
};

struct LowGainRun {
  Trace trace;              ///< axis tau; columns P[mu] (interior levels), dn_per_N, norm
  LadderState final_state;  ///< interaction-picture amplitudes at the last sample
  double norm_drift = 0.0;    ///< max |<psi|psi> - 1| over the samples
  double energy_drift = 0.0;  ///< max drift of the conserved (frame) energy
};

/// Number of ladder levels at each edge left out of reported observables.
inline constexpr int kTruncationBuffer = 2;

/// Propagates `initial` and samples populations and dn/N at `times` (tau).
/// Throws PropagationError if probability leaks into the buffer levels.
[[nodiscard]] LowGainRun propagate(const LowGainModel& model, const LadderState& initial,
                                   std::span<const double> times, LowGainEngine engine = LowGainEngine::exact);

/// Same on an even grid of `samples` points over [0, tau_end].
[[nodiscard]] LowGainRun propagate(const LowGainModel& model, const LadderState& initial, double tau_end,
                                   std::size_t samples, LowGainEngine engine = LowGainEngine::exact);

/// Closed-form gain dn/N for nu in {1, 2, 3} at Rabi phase Omega t = alpha_n tau.
[[nodiscard]] double analytic_dn(int resonance, double alpha, double rabi_phase);

/// Second-resonance populations {P_2q, P_q, P_0, P_-q, P_-2q}, i.e. mu = -1..3.
[[nodiscard]] std::array<double, 5> analytic_populations_second(double alpha, double tau);

/// Third-resonance populations {P_3q/2, P_-3q/2} without amplitude corrections.
[[nodiscard]] std::pair<double, double> analytic_populations_third(double alpha, double tau);

struct RabiFit {
  double frequency = 0.0;           ///< in inverse abscissa units
  double first_max_position = 0.0;  ///< pi / (2 frequency)
  double first_max_value = 0.0;     ///< largest sample in the first lobe
};

/// Effective Rabi frequency from the first maximum of `column`.
///
/// The first lobe is located with hysteresis (enter above half the excursion,
/// leave below a quarter) so fast ripple does not split it; the position is
/// then refined by a least-squares fit of c + A sin^2(f x) over the lobe.
/// Throws std::runtime_error if the trace holds no complete maximum.
[[nodiscard]] RabiFit fit_rabi_frequency(const Trace& trace, std::string_view column);

}  // namespace qfel
