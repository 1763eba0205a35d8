#pragma once

#include "qfel/banded_operator.hpp"
#include "qfel/ladder.hpp"
#include "qfel/trace.hpp"

#include <cstddef>
#include <span>

namespace qfel {

enum class HighGainVariant {
  first_order,        ///< nu = 1, leading-order coupling, no diagonal
  third_order,        ///< nu = 1, alpha_N^2 corrected coupling and diagonal shift
  dicke_only,         ///< nu = 2, two-photon Dicke coupling alone
  full_second_order,  ///< nu = 2, Dicke coupling plus the diagonal contributions
};

/// Seeded collective model for the first (nu = 1) or second (nu = 2) resonance.
struct HighGainModel {
  FelParams params;
  HighGainVariant variant;

  /// Throws std::invalid_argument for low-gain parameters, nu outside {1, 2}
  /// or a variant that belongs to the other resonance.
  HighGainModel(FelParams p, HighGainVariant v);

  /// Photons emitted per collective step: 1 for nu = 1, 2 for nu = 2.
  [[nodiscard]] int photon_step() const { return params.resonance; }
  [[nodiscard]] long electrons() const { return params.electrons; }
};

/// Coupling a(mu) between basis states mu - 1 and mu; defined for mu in [0, N + 1].
[[nodiscard]] double dicke_coupling(const HighGainModel& model, long mu);

/// Diagonal entry d(mu); defined for mu in [0, N].
[[nodiscard]] double dicke_shift(const HighGainModel& model, long mu);

struct DickeCoefficients {
  double a = 0.0;
  double d = 0.0;
};

/// Both coefficients at mu in [0, N]; std::out_of_range otherwise.
[[nodiscard]] DickeCoefficients dicke_coefficients(const HighGainModel& model, long mu);

/// (N+1) x (N+1) real symmetric tridiagonal generator of d/dL (L in units of L_g).
[[nodiscard]] BandedHermitianOperator build_dicke_tridiagonal(const HighGainModel& model);

enum class DickeMethod {
  automatic,  ///< eigen-decomposition up to kDickeEigenLimit, Chebyshev above
  eigen,      ///< full symmetric tridiagonal eigen-decomposition
  chebyshev,  ///< polynomial propagator, O(N) memory
};

/// Largest dimension for which `automatic` picks the eigen-decomposition.
inline constexpr std::size_t kDickeEigenLimit = 1024;

struct DickeRun {
  Trace trace;  ///< axis L/L_g; columns n, n_over_N, norm
  DickeState final_state;
  double norm_drift = 0.0;
  double energy_drift = 0.0;  ///< max |<H>(L) - <H>(0)|
};

/// Evolves the Fock seed c_0 = 1 and samples the mean photon number at `lengths`.
[[nodiscard]] DickeRun propagate_dicke(const HighGainModel& model, std::span<const double> lengths,
                                       DickeMethod method = DickeMethod::automatic);

/// Evolves `initial` under any static real tridiagonal generator on the same basis.
[[nodiscard]] DickeRun propagate_dicke(const BandedHermitianOperator& generator, DickeState initial,
                                       std::span<const double> lengths, DickeMethod method = DickeMethod::automatic);

/// Same on an even grid of `samples` points over [0, length_end].
[[nodiscard]] DickeRun propagate_dicke(const HighGainModel& model, double length_end, std::size_t samples,
                                       DickeMethod method = DickeMethod::automatic);

/// First-resonance photon number from the Jacobi cn solution at length L (L_g).
/// `order` 1 omits the alpha_N^2 phase correction, 3 keeps it.
/// Throws std::invalid_argument for n0 = 0, where the modulus reaches 1.
[[nodiscard]] double analytic_n_first(double length, const FelParams& params, int order);

/// Second-resonance photon number of the two-photon Dicke model, semiclassical form.
[[nodiscard]] double analytic_n_second(double length, const FelParams& params);

/// Quadratic start-up n0 [1 + n0 (alpha_N L)^2 / (2N)] of the second resonance.
[[nodiscard]] double short_time_n_second(double length, const FelParams& params);

/// Approximate ratio of the second- to first-resonance maximum length, with
/// the elliptic integral replaced by its logarithmic leading term.
/// Throws std::invalid_argument when n0/N = 1 (vanishing logarithm) or either
/// argument is not positive.
[[nodiscard]] double lmax_ratio(double alpha, double seed_ratio);

/// Length of the first photon-number maximum (units of L_g) from the closed
/// forms. For nu = 1 `order` selects the phase correction as in analytic_n_first.
[[nodiscard]] double lmax_exact(const FelParams& params, int resonance, int order = 3);

}  // namespace qfel
