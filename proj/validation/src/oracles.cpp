#include "qfel/validation/oracles.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qfel::oracle {

double agm_elliptic_K(double k) {
  if (!(k >= 0.0 && k < 1.0)) throw std::domain_error("agm_elliptic_K needs 0 <= k < 1");
  long double a = 1.0L;
  long double b = std::sqrt(1.0L - static_cast<long double>(k) * k);
  for (int i = 0; i < 64 && std::abs(a - b) > 1e-19L * a; ++i) {
    const long double next = 0.5L * (a + b);
    b = std::sqrt(a * b);
    a = next;
  }
  return static_cast<double>(std::numbers::pi_v<long double> / (2.0L * a));
}

double quadrature_cn(double u, double k) {
  const auto integrand = [k](double t) {
    const double s = std::sin(t);
    return 1.0 / std::sqrt(1.0 - k * k * s * s);
  };
  const auto incomplete = [&](double phi) {
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, 0.0, phi, 6, 1e-14);
  };
  // The amplitude grows by pi for every 2K of argument.
  const double half_period = 2.0 * agm_elliptic_K(k);
  const double turns = std::floor(u / half_period);
  const double rest = u - turns * half_period;
  double phi = rest / half_period * std::numbers::pi;
  for (int i = 0; i < 40; ++i) {
    const double step = (incomplete(phi) - rest) / integrand(phi);
    phi -= step;
    if (std::abs(step) <= 4e-16 * (1.0 + std::abs(phi))) break;
  }
  return std::cos(phi + turns * std::numbers::pi);
}

Eigen::VectorXcd expm_evolve(const Eigen::MatrixXcd& hamiltonian, const Eigen::VectorXcd& psi0, double t) {
  const Eigen::MatrixXcd generator = std::complex<double>(0.0, -t) * hamiltonian;
  return generator.exp() * psi0;
}

Eigen::VectorXcd classical_field_state(double alpha, int resonance, int truncation, const Eigen::VectorXcd& psi0,
                                       double tau) {
  const int dim = 2 * truncation + 1;
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
  Eigen::VectorXd energy(dim);
  for (int i = 0; i < dim; ++i) {
    const double mu = i - truncation;
    energy[i] = (0.5 * resonance - mu) * (0.5 * resonance - mu);
    h(i, i) = energy[i];
    if (i + 1 < dim) {
      h(i, i + 1) = alpha;
      h(i + 1, i) = alpha;
    }
  }
  const Eigen::VectorXcd schrodinger = expm_evolve(h, psi0, tau);
  Eigen::VectorXcd out(dim);
  for (int i = 0; i < dim; ++i) out[i] = std::polar(1.0, energy[i] * tau) * schrodinger[i];
  return out;
}

Eigen::MatrixXcd dense_dicke_matrix(std::span<const double> diagonal, std::span<const double> coupling) {
  if (coupling.size() + 1 != diagonal.size()) throw std::invalid_argument("coupling needs one entry fewer");
  const auto n = static_cast<Eigen::Index>(diagonal.size());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    m(i, i) = diagonal[static_cast<std::size_t>(i)];
    if (i + 1 < n) {
      m(i, i + 1) = coupling[static_cast<std::size_t>(i)];
      m(i + 1, i) = coupling[static_cast<std::size_t>(i)];
    }
  }
  return m;
}

double brute_force_photon_number(const DickeState& state) {
  double total = 0.0;
  const auto amps = state.amplitudes();
  for (std::size_t mu = 0; mu < amps.size(); ++mu) {
    const double photons = static_cast<double>(state.n0()) + state.photon_step() * static_cast<double>(mu);
    total += (amps[mu].real() * amps[mu].real() + amps[mu].imag() * amps[mu].imag()) * photons;
  }
  return total;
}

}  // namespace qfel::oracle
