#pragma once

#include "qfel/ladder.hpp"

#include <Eigen/Dense>

#include <span>

/// Reference computations that share no code path with the library routes
/// they are compared against.
namespace qfel::oracle {

/// K(k) = pi / (2 AGM(1, k')), iterated until the two means coincide.
[[nodiscard]] double agm_elliptic_K(double k);

/// cn(u, k) = cos(phi) where phi solves F(phi, k) = u, with the incomplete
/// integral F evaluated by adaptive Gauss-Kronrod quadrature.
[[nodiscard]] double quadrature_cn(double u, double k);

/// exp(-i H t) psi0 through a dense matrix exponential.
[[nodiscard]] Eigen::VectorXcd expm_evolve(const Eigen::MatrixXcd& hamiltonian, const Eigen::VectorXcd& psi0, double t);

/// Interaction-picture ladder state under the single-electron classical-field
/// Hamiltonian, using the level energies (nu/2 - mu)^2 and a dense exponential.
[[nodiscard]] Eigen::VectorXcd classical_field_state(double alpha, int resonance, int truncation,
                                                     const Eigen::VectorXcd& psi0, double tau);

/// Dense (N+1) x (N+1) tridiagonal assembled entry by entry from the coefficient functions.
[[nodiscard]] Eigen::MatrixXcd dense_dicke_matrix(std::span<const double> diagonal, std::span<const double> coupling);

/// Mean photon number by an explicit loop over basis states.
[[nodiscard]] double brute_force_photon_number(const DickeState& state);

}  // namespace qfel::oracle
