#include "qfel/propagation.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qfel {

using cplx = std::complex<double>;

SpectralEvolution::SpectralEvolution(const Eigen::MatrixXcd& hamiltonian, std::span<const cplx> initial) {
  if (hamiltonian.rows() != hamiltonian.cols() || static_cast<std::size_t>(hamiltonian.rows()) != initial.size()) {
    throw std::invalid_argument("hamiltonian and initial state dimensions differ");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(hamiltonian);
  if (solver.info() != Eigen::Success) throw PropagationError("Hermitian eigensolver did not converge", 0.0);
  eigenvalues_ = solver.eigenvalues();
  eigenvectors_ = solver.eigenvectors();
  const Eigen::Map<const Eigen::VectorXcd> psi0(initial.data(), static_cast<Eigen::Index>(initial.size()));
  weights_ = eigenvectors_.adjoint() * psi0;
  initial_ = psi0;
}

SpectralEvolution SpectralEvolution::tridiagonal(std::span<const double> diagonal, std::span<const double> offdiagonal,
                                                 std::span<const cplx> initial) {
  const auto n = static_cast<Eigen::Index>(diagonal.size());
  if (offdiagonal.size() + 1 != diagonal.size() || initial.size() != diagonal.size()) {
    throw std::invalid_argument("tridiagonal dimensions inconsistent");
  }
  Eigen::VectorXd diag = Eigen::Map<const Eigen::VectorXd>(diagonal.data(), n);
  Eigen::VectorXd sub = Eigen::Map<const Eigen::VectorXd>(offdiagonal.data(), n - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) throw PropagationError("tridiagonal eigensolver did not converge", 0.0);

  SpectralEvolution out;
  out.eigenvalues_ = solver.eigenvalues();
  out.eigenvectors_ = solver.eigenvectors().cast<cplx>();
  const Eigen::Map<const Eigen::VectorXcd> psi0(initial.data(), n);
  out.weights_ = out.eigenvectors_.adjoint() * psi0;
  out.initial_ = psi0;
  return out;
}

void SpectralEvolution::state_at(double t, std::span<cplx> out) const {
  if (out.size() != dim()) throw std::invalid_argument("output size mismatch");
  if (t == 0.0) {
    // Exact, instead of V V^dagger psi0 with its rounding.
    std::copy(initial_.begin(), initial_.end(), out.begin());
    return;
  }
  Eigen::VectorXcd phased(weights_.size());
  for (Eigen::Index j = 0; j < weights_.size(); ++j) phased[j] = weights_[j] * std::polar(1.0, -eigenvalues_[j] * t);
  Eigen::Map<Eigen::VectorXcd>(out.data(), static_cast<Eigen::Index>(out.size())) = eigenvectors_ * phased;
}

std::vector<double> bessel_j_sequence(double x, double cutoff) {
  if (x < 0.0) throw std::invalid_argument("bessel_j_sequence needs x >= 0");
  if (x == 0.0) return {1.0};
  // Start well inside the super-exponential tail beyond the turning point k = x.
  auto start = static_cast<std::size_t>(x + 40.0 + 12.0 * std::cbrt(x));
  if (start % 2 == 1) ++start;
  std::vector<double> j(start + 2, 0.0);
  j[start] = 1e-300;
  for (std::size_t k = start; k >= 1; --k) {
    j[k - 1] = 2.0 * static_cast<double>(k) / x * j[k] - j[k + 1];
    if (std::abs(j[k - 1]) > 1e250) {
      for (std::size_t m = k - 1; m <= start; ++m) j[m] *= 1e-250;
    }
  }
  double norm = j[0];
  for (std::size_t k = 2; k <= start; k += 2) norm += 2.0 * j[k];
  for (double& v : j) v /= norm;

  std::size_t keep = j.size();
  while (keep > 1 && static_cast<double>(keep - 1) > x && std::abs(j[keep - 1]) < cutoff) --keep;
  j.resize(keep);
  return j;
}

ChebyshevPropagator::ChebyshevPropagator(const BandedHermitianOperator& op, double tolerance)
    : op_(op), tolerance_(tolerance) {
  if (op.time_dependent()) throw std::invalid_argument("Chebyshev propagation needs a static operator");
  const auto [lo, hi] = op.spectral_bounds();
  center_ = 0.5 * (lo + hi);
  // A small margin keeps the scaled spectrum strictly inside [-1, 1].
  half_width_ = std::max(0.5 * (hi - lo) * (1.0 + 1e-9), 1e-300);
  const std::size_t n = op.dim();
  t_prev_.resize(n);
  t_curr_.resize(n);
  t_next_.resize(n);
  acc_.resize(n);
}

void ChebyshevPropagator::prepare(double dt) {
  if (dt == cached_dt_) return;
  bessel_ = bessel_j_sequence(half_width_ * dt, tolerance_ * 1e-3);
  coeffs_.resize(bessel_.size());
  // exp(-i x cos theta) = sum_k (2 - delta_k0) (-i)^k J_k(x) T_k(cos theta)
  const cplx global = std::polar(1.0, -center_ * dt);
  cplx phase = 1.0;
  for (std::size_t k = 0; k < bessel_.size(); ++k) {
    coeffs_[k] = (k == 0 ? 1.0 : 2.0) * phase * bessel_[k] * global;
    phase *= cplx(0.0, -1.0);
  }
  cached_dt_ = dt;
}

void ChebyshevPropagator::advance(std::span<cplx> psi, double dt) {
  if (psi.size() != op_.dim()) throw std::invalid_argument("state size mismatch");
  if (dt == 0.0) return;
  prepare(dt);
  const std::size_t n = psi.size();
  const double inv_w = 1.0 / half_width_;

  // T_0 psi and T_1 psi = Hs psi, Hs = (H - center) / half_width.
  std::copy(psi.begin(), psi.end(), t_prev_.begin());
  op_.apply(t_prev_, t_curr_);
  for (std::size_t i = 0; i < n; ++i) {
    t_curr_[i] = (t_curr_[i] - center_ * t_prev_[i]) * inv_w;
    acc_[i] = coeffs_[0] * t_prev_[i];
  }
  if (coeffs_.size() > 1) {
    for (std::size_t i = 0; i < n; ++i) acc_[i] += coeffs_[1] * t_curr_[i];
  }
  for (std::size_t k = 2; k < coeffs_.size(); ++k) {
    op_.apply(t_curr_, t_next_);
    const double cr = coeffs_[k].real();
    const double ci = coeffs_[k].imag();
    for (std::size_t i = 0; i < n; ++i) {
      const cplx t = 2.0 * (t_next_[i] - center_ * t_curr_[i]) * inv_w - t_prev_[i];
      t_next_[i] = t;
      acc_[i] += cplx(cr * t.real() - ci * t.imag(), cr * t.imag() + ci * t.real());
    }
    std::swap(t_prev_, t_curr_);
    std::swap(t_curr_, t_next_);
  }
  std::copy(acc_.begin(), acc_.end(), psi.begin());
}

std::size_t magnus_step_count(const BandedHermitianOperator& op, double t0, double t1, int steps_per_period) {
  double fastest = 0.0;
  for (std::size_t d = 0; d <= op.half_bandwidth(); ++d) {
    for (long r = op.first_label(); r + static_cast<long>(d) <= op.last_label(); ++r) {
      fastest = std::max(fastest, std::abs(op.frequency(r, d)));
    }
  }
  // Resolve the coupling scale as well as the phase oscillations.
  double coupling = 0.0;
  for (long r = op.first_label(); r <= op.last_label(); ++r) {
    double row = 0.0;
    for (long c = std::max(op.first_label(), r - static_cast<long>(op.half_bandwidth()));
         c <= std::min(op.last_label(), r + static_cast<long>(op.half_bandwidth())); ++c) {
      row += std::abs(op.at(r, c));
    }
    coupling = std::max(coupling, row);
  }
  const double rate = std::max({fastest, coupling, 1e-12});
  const double h = 2.0 * std::numbers::pi / (static_cast<double>(steps_per_period) * rate);
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(std::abs(t1 - t0) / h)));
}

void magnus4_evolve(const BandedHermitianOperator& op, std::span<cplx> psi, double t0, double t1, std::size_t steps) {
  if (psi.size() != op.dim()) throw std::invalid_argument("state size mismatch");
  if (steps == 0) throw std::invalid_argument("magnus4_evolve needs at least one step");
  const double h = (t1 - t0) / static_cast<double>(steps);
  const double c1 = 0.5 - std::sqrt(3.0) / 6.0;
  const double c2 = 0.5 + std::sqrt(3.0) / 6.0;
  const cplx comm_scale(0.0, -std::sqrt(3.0) * h * h / 12.0);
  const auto n = static_cast<Eigen::Index>(psi.size());
  Eigen::Map<Eigen::VectorXcd> state(psi.data(), n);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(n);
  for (std::size_t s = 0; s < steps; ++s) {
    const double t = t0 + static_cast<double>(s) * h;
    const Eigen::MatrixXcd h1 = op.dense(t + c1 * h);
    const Eigen::MatrixXcd h2 = op.dense(t + c2 * h);
    // exp(Omega) = exp(-i K), K = h/2 (H1 + H2) - i sqrt(3) h^2 / 12 [H2, H1], Hermitian.
    Eigen::MatrixXcd k = 0.5 * h * (h1 + h2) + comm_scale * (h2 * h1 - h1 * h2);
    k = 0.5 * (k + k.adjoint()).eval();
    solver.compute(k);
    if (solver.info() != Eigen::Success) throw PropagationError("Magnus step eigensolver failed", t);
    const Eigen::VectorXcd phases =
        solver.eigenvalues().unaryExpr([](double e) { return std::polar(1.0, -e); }).eval();
    state = solver.eigenvectors() * (phases.asDiagonal() * (solver.eigenvectors().adjoint() * state));
  }
}

}  // namespace qfel
