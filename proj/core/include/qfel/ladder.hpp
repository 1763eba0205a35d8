#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace qfel {

using cplx = std::complex<double>;

/// Which quantum parameter `alpha` refers to. Never inferred from the values.
enum class Regime {
  low_gain,   ///< alpha = epsilon * sqrt(n), fixed classical field
  high_gain,  ///< alpha = epsilon * sqrt(N), quantized collective dynamics
};

/// Dimensionless parameters of one scenario.
///
/// All times are in units of the inverse recoil frequency (tau), all lengths
/// in gain lengths L_g. For the high-gain regime alpha * tau = L / (2 L_g).
struct FelParams {
  Regime regime = Regime::low_gain;
  double alpha = 0.25;
  double epsilon = 0.0;  ///< coupling over recoil frequency, derived from alpha
  long n0 = 0;           ///< seed / classical photon number
  long electrons = 1;    ///< N
  int resonance = 1;     ///< nu, initial momentum p = nu q / 2
  int truncation = 9;    ///< ladder half-width M
  int order = 1;         ///< effective-Hamiltonian expansion order

  /// Low-gain parameters. `truncation` <= 0 selects the default M = |nu| + 8.
  static FelParams low_gain(double alpha_n, int resonance, int order = 1, int truncation = 0,
                            long n0 = 1'000'000, long electrons = 1);

  /// High-gain parameters; the ladder truncation is unused there.
  static FelParams high_gain(double alpha_N, int resonance, long n0, long electrons, int order = 1);

  /// Throws std::invalid_argument on any violated invariant.
  void validate() const;

  /// Non-fatal diagnostics, e.g. alpha outside the quantum regime.
  [[nodiscard]] std::vector<std::string> warnings() const;

  [[nodiscard]] double seed_ratio() const { return static_cast<double>(n0) / static_cast<double>(electrons); }

  /// tau corresponding to an undulator length L (units of L_g); high gain only.
  [[nodiscard]] double tau_from_length(double length) const { return length / (2.0 * alpha); }
  /// Rabi phase Omega t for a dimensionless time tau; low gain only.
  [[nodiscard]] double rabi_phase(double tau) const { return alpha * tau; }
};

/// Single-electron state on the momentum ladder p - mu q, mu in [-M, M].
class LadderState {
 public:
  LadderState(int resonance, int truncation);

  /// Momentum eigenstate |p> (mu = 0).
  static LadderState momentum_eigenstate(int resonance, int truncation);

  [[nodiscard]] int resonance() const { return resonance_; }
  [[nodiscard]] int truncation() const { return truncation_; }
  [[nodiscard]] int mu_min() const { return -truncation_; }
  [[nodiscard]] int mu_max() const { return truncation_; }
  [[nodiscard]] std::size_t size() const { return amplitudes_.size(); }

  [[nodiscard]] cplx amplitude(int mu) const;
  void set_amplitude(int mu, cplx value);

  [[nodiscard]] std::span<const cplx> amplitudes() const { return amplitudes_; }
  [[nodiscard]] std::span<cplx> amplitudes() { return amplitudes_; }

  [[nodiscard]] double norm_squared() const;

 private:
  [[nodiscard]] std::size_t index(int mu) const;

  int resonance_;
  int truncation_;
  std::vector<cplx> amplitudes_;
};

/// Collective state over |mu> = |n0 + s mu>|N/2, N/2 - mu>, mu in [0, N].
class DickeState {
 public:
  DickeState(long electrons, long n0, int photon_step);

  /// All electrons at the initial momentum, field in the Fock state |n0>.
  static DickeState fock_seed(long electrons, long n0, int photon_step);

  [[nodiscard]] long electrons() const { return static_cast<long>(c_.size()) - 1; }
  [[nodiscard]] long n0() const { return n0_; }
  [[nodiscard]] int photon_step() const { return step_; }

  [[nodiscard]] std::span<const cplx> amplitudes() const { return c_; }
  [[nodiscard]] std::span<cplx> amplitudes() { return c_; }

  [[nodiscard]] double photons_in(long mu) const { return static_cast<double>(n0_ + step_ * mu); }
  [[nodiscard]] double norm_squared() const;

 private:
  long n0_;
  int step_;
  std::vector<cplx> c_;
};

/// Occupation probabilities of consecutive ladder levels starting at `mu_min`.
struct LevelPopulations {
  int mu_min = 0;
  std::vector<double> values;

  [[nodiscard]] int mu_max() const { return mu_min + static_cast<int>(values.size()) - 1; }
  /// Zero outside the stored range.
  [[nodiscard]] double at(int mu) const;
  [[nodiscard]] double total() const;
};

[[nodiscard]] LevelPopulations level_populations(const LadderState& state);

/// Mean photon change N * sum_mu mu P_mu; positive means net emission.
/// Throws std::invalid_argument when the populations are not normalized to 1e-6.
[[nodiscard]] double photon_change(const LevelPopulations& populations, long electrons);

/// Mean photon number sum_mu |c_mu|^2 (n0 + s mu).
[[nodiscard]] double dicke_photon_number(const DickeState& state);

}  // namespace qfel
