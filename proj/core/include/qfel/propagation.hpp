#pragma once

#include "qfel/banded_operator.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace qfel {

/// Raised when a propagation cannot continue; `reached` is the last time
/// (tau or L/L_g) up to which the state is valid.
class PropagationError : public std::runtime_error {
 public:
  PropagationError(const std::string& what, double reached)
      : std::runtime_error(what + " (reached " + std::to_string(reached) + ")"), reached_(reached) {}
  [[nodiscard]] double reached() const { return reached_; }

 private:
  double reached_;
};

/// Exact evolution of one initial state under a static Hermitian matrix,
/// psi(t) = V exp(-i Lambda t) V^dagger psi(0), from a full eigen-decomposition.
class SpectralEvolution {
 public:
  SpectralEvolution(const Eigen::MatrixXcd& hamiltonian, std::span<const std::complex<double>> initial);

  /// Real symmetric tridiagonal matrix given by its diagonal and off-diagonal.
  static SpectralEvolution tridiagonal(std::span<const double> diagonal, std::span<const double> offdiagonal,
                                       std::span<const std::complex<double>> initial);

  [[nodiscard]] std::size_t dim() const { return static_cast<std::size_t>(eigenvalues_.size()); }
  [[nodiscard]] const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }

  /// State at time t, written into `out`; t = 0 returns the initial state exactly.
  void state_at(double t, std::span<std::complex<double>> out) const;

 private:
  SpectralEvolution() = default;

  Eigen::VectorXd eigenvalues_;
  Eigen::MatrixXcd eigenvectors_;
  Eigen::VectorXcd weights_;  // V^dagger psi(0)
  Eigen::VectorXcd initial_;
};

/// Chebyshev-polynomial expansion of exp(-i H dt) for a static banded operator.
///
/// Only matrix-vector products are needed, so memory stays O(dim * bandwidth).
/// Expansion coefficients are cached for the last step length.
class ChebyshevPropagator {
 public:
  explicit ChebyshevPropagator(const BandedHermitianOperator& op, double tolerance = 1e-15);

  /// psi <- exp(-i H dt) psi.
  void advance(std::span<std::complex<double>> psi, double dt);

  [[nodiscard]] std::size_t last_term_count() const { return coeffs_.size(); }

 private:
  void prepare(double dt);

  const BandedHermitianOperator& op_;
  double tolerance_;
  double center_ = 0.0;
  double half_width_ = 1.0;
  double cached_dt_ = -1.0;
  std::vector<double> bessel_;  // J_k(half_width * dt)
  std::vector<std::complex<double>> coeffs_;
  std::vector<std::complex<double>> t_prev_;
  std::vector<std::complex<double>> t_curr_;
  std::vector<std::complex<double>> t_next_;
  std::vector<std::complex<double>> acc_;
};

/// Bessel functions J_0..J_kmax(x) by Miller's backward recurrence, trimmed
/// where |J_k| drops below `cutoff` past k > x.
[[nodiscard]] std::vector<double> bessel_j_sequence(double x, double cutoff = 1e-18);

/// Fourth-order Magnus integrator with exact Hermitian exponentials per step,
/// for time-dependent band operators. Advances `psi` from t0 to t1 in `steps`
/// equal steps.
void magnus4_evolve(const BandedHermitianOperator& op, std::span<std::complex<double>> psi, double t0, double t1,
                    std::size_t steps);

/// Number of Magnus steps over [t0, t1] resolving the fastest entry
/// oscillation by at least `steps_per_period` steps.
[[nodiscard]] std::size_t magnus_step_count(const BandedHermitianOperator& op, double t0, double t1,
                                            int steps_per_period = 40);

}  // namespace qfel
