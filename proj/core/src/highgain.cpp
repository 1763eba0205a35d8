#include "qfel/highgain.hpp"

#include "qfel/propagation.hpp"
#include "qfel/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qfel {
namespace {

using cplx = std::complex<double>;

bool variant_matches(int resonance, HighGainVariant v) {
  const bool first = v == HighGainVariant::first_order || v == HighGainVariant::third_order;
  return resonance == 1 ? first : !first;
}

void require_seed(const FelParams& params) {
  if (params.regime != Regime::high_gain) throw std::invalid_argument("high-gain parameters required");
  if (params.n0 < 1) throw std::invalid_argument("the closed-form solutions need a seeded start (n0 >= 1)");
}

// Phase-speed factor 1 - (alpha^2/8)(1 + 2 n0/N) of the corrected first-resonance solution.
double corrected_speed(double alpha, double r) {
  const double factor = 1.0 - alpha * alpha / 8.0 * (1.0 + 2.0 * r);
  if (!(factor > 0.0)) {
    throw std::invalid_argument("alpha_N = " + std::to_string(alpha) +
                                " is too large for the corrected first-resonance solution");
  }
  return factor;
}

// Top-of-ladder factor sqrt(1 - (mu - 1)/N); exactly zero at mu = N + 1.
double depletion(long mu, double n) { return std::sqrt(std::max(0.0, 1.0 - (static_cast<double>(mu) - 1.0) / n)); }

}  // namespace

HighGainModel::HighGainModel(FelParams p, HighGainVariant v) : params(std::move(p)), variant(v) {
  if (params.regime != Regime::high_gain) throw std::invalid_argument("HighGainModel needs high-gain parameters");
  params.validate();
  if (params.resonance != 1 && params.resonance != 2) {
    throw std::invalid_argument("high-gain dynamics are modelled for nu = 1 and nu = 2 only, got " +
                                std::to_string(params.resonance));
  }
  if (!variant_matches(params.resonance, variant)) {
    throw std::invalid_argument(params.resonance == 1 ? "nu = 1 supports the first_order and third_order variants"
                                                      : "nu = 2 supports the dicke_only and full_second_order variants");
  }
}

double dicke_coupling(const HighGainModel& model, long mu) {
  const long n_el = model.electrons();
  if (mu < 0 || mu > n_el + 1) {
    throw std::out_of_range("coupling index " + std::to_string(mu) + " outside [0, N + 1]");
  }
  if (mu == 0) return 0.0;
  const double n = static_cast<double>(n_el);
  const double n0 = static_cast<double>(model.params.n0);
  const double alpha = model.params.alpha;
  const auto m = static_cast<double>(mu);

  if (model.params.resonance == 2) {
    return 0.5 * alpha * std::sqrt((n0 + 2.0 * m - 1.0) * (n0 + 2.0 * m)) * std::sqrt(m / n) * depletion(mu, n);
  }
  double prefactor = 0.5;
  if (model.variant == HighGainVariant::third_order) {
    prefactor *= 1.0 - alpha * alpha / 8.0 * (1.0 + 2.0 * (n0 + 1.0) / n);
  }
  return prefactor * std::sqrt(m * (n0 + m)) * depletion(mu, n);
}

double dicke_shift(const HighGainModel& model, long mu) {
  const long n_el = model.electrons();
  if (mu < 0 || mu > n_el) throw std::out_of_range("diagonal index " + std::to_string(mu) + " outside [0, N]");
  const double n = static_cast<double>(n_el);
  const double n0 = static_cast<double>(model.params.n0);
  const double alpha = model.params.alpha;
  const auto m = static_cast<double>(mu);
  switch (model.variant) {
    case HighGainVariant::full_second_order:
      return alpha * (2.0 / 3.0 * m * (1.0 - 1.0 / n) + n0 / 3.0 + 0.5);
    case HighGainVariant::third_order:
      return -0.25 * alpha * (n0 + m * (1.0 + 1.0 / n));
    default:
      return 0.0;
  }
}

DickeCoefficients dicke_coefficients(const HighGainModel& model, long mu) {
  return {dicke_coupling(model, mu), dicke_shift(model, mu)};
}

BandedHermitianOperator build_dicke_tridiagonal(const HighGainModel& model) {
  const long n_el = model.electrons();
  BandedHermitianOperator h(static_cast<std::size_t>(n_el + 1), 1, 0);
  for (long mu = 0; mu <= n_el; ++mu) {
    h.set(mu, 0, dicke_shift(model, mu));
    if (mu < n_el) h.set(mu, 1, dicke_coupling(model, mu + 1));
  }
  return h;
}

DickeRun propagate_dicke(const BandedHermitianOperator& h, DickeState state, std::span<const double> lengths,
                         DickeMethod method) {
  if (lengths.empty()) throw std::invalid_argument("no sample lengths");
  if (lengths.front() < 0.0) throw std::invalid_argument("sample lengths must be non-negative");
  const std::size_t dim = h.dim();
  if (h.half_bandwidth() != 1 || h.time_dependent() || dim != state.amplitudes().size() || h.first_label() != 0) {
    throw std::invalid_argument("generator must be a static tridiagonal over the Dicke basis of the state");
  }
  if (std::abs(state.norm_squared() - 1.0) > 1e-10) throw std::invalid_argument("initial state is not normalized");
  if (method == DickeMethod::automatic) {
    method = dim <= kDickeEigenLimit ? DickeMethod::eigen : DickeMethod::chebyshev;
  }
  auto amps = state.amplitudes();

  std::optional<SpectralEvolution> spectral;
  std::optional<ChebyshevPropagator> chebyshev;
  if (method == DickeMethod::eigen) {
    std::vector<double> diag(dim);
    std::vector<double> off(dim - 1);
    for (std::size_t i = 0; i < dim; ++i) {
      const auto mu = static_cast<long>(i);
      diag[i] = h.value(mu, 0).real();
      if (i + 1 < dim) {
        if (h.value(mu, 1).imag() != 0.0) throw std::invalid_argument("eigen route needs a real tridiagonal");
        off[i] = h.value(mu, 1).real();
      }
    }
    spectral.emplace(SpectralEvolution::tridiagonal(diag, off, amps));
  } else {
    chebyshev.emplace(h);
  }

  std::vector<double> photons(lengths.size());
  std::vector<double> scaled(lengths.size());
  std::vector<double> norms(lengths.size());
  const double n_el = static_cast<double>(state.electrons());
  const double energy0 = h.expectation(amps);
  double norm_drift = 0.0;
  double energy_drift = 0.0;
  double previous = 0.0;

  for (std::size_t s = 0; s < lengths.size(); ++s) {
    const double length = lengths[s];
    if (s > 0 && !(length > lengths[s - 1])) throw std::invalid_argument("sample lengths must increase");
    if (spectral) {
      spectral->state_at(length, amps);
    } else {
      chebyshev->advance(amps, length - previous);
    }
    previous = length;

    const double norm = state.norm_squared();
    norm_drift = std::max(norm_drift, std::abs(norm - 1.0));
    energy_drift = std::max(energy_drift, std::abs(h.expectation(amps) - energy0));
    if (!std::isfinite(norm) || std::abs(norm - 1.0) > 1e-6) {
      throw PropagationError("Dicke propagation lost normalization (|c|^2 = " + std::to_string(norm) + ")",
                             s > 0 ? lengths[s - 1] : 0.0);
    }
    norms[s] = norm;
    photons[s] = dicke_photon_number(state);
    scaled[s] = photons[s] / n_el;
  }

  Trace trace("L/L_g", std::vector<double>(lengths.begin(), lengths.end()));
  trace.add_column("n", std::move(photons));
  trace.add_column("n_over_N", std::move(scaled));
  trace.add_column("norm", std::move(norms));
  return DickeRun{std::move(trace), std::move(state), norm_drift, energy_drift};
}

DickeRun propagate_dicke(const HighGainModel& model, std::span<const double> lengths, DickeMethod method) {
  return propagate_dicke(build_dicke_tridiagonal(model),
                         DickeState::fock_seed(model.electrons(), model.params.n0, model.photon_step()), lengths, method);
}

DickeRun propagate_dicke(const HighGainModel& model, double length_end, std::size_t samples, DickeMethod method) {
  const Trace grid = Trace::uniform("L/L_g", length_end, samples);
  return propagate_dicke(model, grid.abscissae(), method);
}

double analytic_n_first(double length, const FelParams& params, int order) {
  require_seed(params);
  if (order != 1 && order != 3) throw std::invalid_argument("first-resonance solution exists at order 1 or 3");
  const double n = static_cast<double>(params.electrons);
  const double n0 = static_cast<double>(params.n0);
  const double r = n0 / n;
  const EllipticModulus k(modulus_from_seed(n0, n));
  double phase = std::sqrt(1.0 + r) * 0.5 * length;
  if (order == 3) phase *= corrected_speed(params.alpha, r);
  const double cn = jacobi_cn(phase - elliptic_K(k), k);
  return n0 + n * cn * cn;
}

double analytic_n_second(double length, const FelParams& params) {
  require_seed(params);
  const double n0 = static_cast<double>(params.n0);
  const double r = n0 / static_cast<double>(params.electrons);
  const double c = std::cos(std::sqrt(r * (r + 2.0)) * params.alpha * length / 2.0);
  return n0 * (1.0 + r / 2.0) / (c * c + r / 2.0);
}

double short_time_n_second(double length, const FelParams& params) {
  require_seed(params);
  const double n0 = static_cast<double>(params.n0);
  const double x = params.alpha * length;
  return n0 * (1.0 + n0 * x * x / (2.0 * static_cast<double>(params.electrons)));
}

double lmax_ratio(double alpha, double seed_ratio) {
  if (!(alpha > 0.0) || !(seed_ratio > 0.0)) throw std::invalid_argument("lmax_ratio needs alpha > 0 and n0/N > 0");
  const double log_term = 2.0 * std::log(std::sqrt(1.0 / seed_ratio));
  if (log_term == 0.0) throw std::invalid_argument("lmax_ratio is singular at n0 = N");
  return std::numbers::pi / (alpha * log_term * std::sqrt(seed_ratio * (seed_ratio + 2.0)));
}

double lmax_exact(const FelParams& params, int resonance, int order) {
  require_seed(params);
  const double n0 = static_cast<double>(params.n0);
  const double n = static_cast<double>(params.electrons);
  const double r = n0 / n;
  switch (resonance) {
    case 1: {
      if (order != 1 && order != 3) throw std::invalid_argument("first-resonance maximum exists at order 1 or 3");
      double speed = std::sqrt(1.0 + r);
      if (order == 3) speed *= corrected_speed(params.alpha, r);
      return 2.0 * elliptic_K(modulus_from_seed(n0, n)) / speed;
    }
    case 2:
      return std::numbers::pi / (params.alpha * std::sqrt(r * (r + 2.0)));
    default:
      throw std::invalid_argument("maximum length is defined for nu = 1 and nu = 2 only");
  }
}

}  // namespace qfel
