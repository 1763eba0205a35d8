#include "qfel/lowgain.hpp"

#include "qfel/propagation.hpp"

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace qfel {
namespace {

using cplx = std::complex<double>;

void require_resonance(int nu) {
  if (nu < 1 || nu > 3) {
    throw std::invalid_argument("effective Hamiltonians exist for nu = 1, 2, 3 only, got " + std::to_string(nu));
  }
}

// Upper-triangle coupling between ladder levels a and b (either order).
void couple(BandedHermitianOperator& h, long a, long b, double value) {
  h.add(std::min(a, b), static_cast<std::size_t>(std::abs(a - b)), value);
}

double fourth_order_diagonal_nu2(long mu) {
  const auto shifted_cube = [](double m) {
    const double x = m - 0.5;
    const double y = x * x - 1.0;
    return 8.0 * x * x * x * y * y;
  };
  const auto stark = [](double m) {
    const double y = m * m - 0.25;
    return 64.0 * m * y * y;
  };
  const auto m = static_cast<double>(mu);
  // -sum_m (s_{m+1,m+1} - s_{m,m}) / D(m): level mu appears as m+1 = mu and m = mu.
  double value = -1.0 / shifted_cube(m - 1.0) + 1.0 / shifted_cube(m);
  // +sum_{m != 0} (s_{m+1,m+1} + s_{m,m}) / E(m)
  if (mu - 1 != 0) value += 1.0 / stark(m - 1.0);
  if (mu != 0) value += 1.0 / stark(m);
  return value;
}

std::string population_column(int mu) { return "P[" + std::to_string(mu) + "]"; }

}  // namespace

int min_effective_order(int resonance) {
  require_resonance(resonance);
  return resonance == 2 ? 2 : 1;
}

int max_effective_order(int resonance) {
  require_resonance(resonance);
  return resonance == 2 ? 4 : 3;
}

LowGainModel::LowGainModel(FelParams p, LowGainVariant v) : params(std::move(p)), variant(v) {
  if (params.regime != Regime::low_gain) throw std::invalid_argument("LowGainModel needs low-gain parameters");
  params.validate();
  if (variant == LowGainVariant::effective) {
    if (params.order < min_effective_order(params.resonance) || params.order > max_effective_order(params.resonance)) {
      throw std::invalid_argument("effective Hamiltonian for nu = " + std::to_string(params.resonance) +
                                  " is tabulated for orders " + std::to_string(min_effective_order(params.resonance)) +
                                  ".." + std::to_string(max_effective_order(params.resonance)) + ", got " +
                                  std::to_string(params.order));
    }
  }
}

BandedHermitianOperator build_full_hamiltonian(const FelParams& params) {
  const int m = params.truncation;
  BandedHermitianOperator h(static_cast<std::size_t>(2 * m + 1), 1, -m);
  const double half_nu = 0.5 * params.resonance;
  for (long mu = -m; mu < m; ++mu) {
    const double freq = 2.0 * (half_nu - (static_cast<double>(mu) + 0.5));
    h.set(mu, 1, params.alpha, freq);
  }
  return h;
}

BandedHermitianOperator build_effective_hamiltonian(const FelParams& params, int order) {
  const int nu = params.resonance;
  require_resonance(nu);
  if (order < min_effective_order(nu) || order > max_effective_order(nu)) {
    throw std::invalid_argument("no tabulated effective Hamiltonian for nu = " + std::to_string(nu) +
                                " at order " + std::to_string(order));
  }
  const int m = params.truncation;
  const double a = params.alpha;
  const double a2 = a * a;
  const double a3 = a2 * a;
  const double a4 = a2 * a2;
  BandedHermitianOperator h(static_cast<std::size_t>(2 * m + 1), 4, -m);

  switch (nu) {
    case 1:
      couple(h, 0, 1, a);
      if (order >= 2) {
        for (long mu = -m; mu <= m; ++mu) {
          const auto x = static_cast<double>(mu);
          const double d = (mu == 0 || mu == 1) ? -0.5 : 1.0 / (2.0 * x * (x - 1.0));
          h.add(mu, 0, a2 * d);
        }
      }
      if (order >= 3) {
        couple(h, 0, 1, -a3 / 4.0);
        couple(h, -1, 2, a3 / 4.0);
      }
      break;
    case 2:
      couple(h, 0, 2, a2);
      for (long mu = -m; mu <= m; ++mu) {
        const auto x = static_cast<double>(mu);
        h.add(mu, 0, a2 * 2.0 / ((2.0 * x - 3.0) * (2.0 * x - 1.0)));
      }
      if (order >= 4) {
        couple(h, 0, 2, -16.0 * a4 / 9.0);
        couple(h, -1, 3, a4 / 36.0);
        for (long mu = -m; mu <= m; ++mu) h.add(mu, 0, a4 * fourth_order_diagonal_nu2(mu));
      }
      break;
    case 3:
      couple(h, 1, 2, a);
      if (order >= 2) {
        for (long mu = -m; mu <= m; ++mu) {
          const auto x = static_cast<double>(mu);
          const double d = (mu == 1 || mu == 2) ? -0.5 : 1.0 / (2.0 * (x - 1.0) * (x - 2.0));
          h.add(mu, 0, a2 * d);
        }
      }
      if (order >= 3) {
        couple(h, 0, 3, a3 / 4.0);
        couple(h, 1, 2, -a3 / 4.0);
      }
      break;
    default:
      break;
  }
  return h;
}

LowGainRun propagate(const LowGainModel& model, const LadderState& initial, std::span<const double> times,
                     LowGainEngine engine) {
  const FelParams& p = model.params;
  if (initial.truncation() != p.truncation) throw std::invalid_argument("state truncation differs from the model");
  if (std::abs(initial.norm_squared() - 1.0) > 1e-10) throw std::invalid_argument("initial state is not normalized");
  if (times.empty()) throw std::invalid_argument("no sample times");

  const bool full = model.variant == LowGainVariant::full_hamiltonian;
  const BandedHermitianOperator h = full ? build_full_hamiltonian(p) : build_effective_hamiltonian(p, p.order);

  // Frame energies turn the oscillating couplings into a static problem.
  std::vector<double> frame(h.dim(), 0.0);
  if (full) {
    auto e = h.frame_energies();
    if (!e) throw std::logic_error("full Hamiltonian has no rotating frame");
    frame = std::move(*e);
  }
  Eigen::MatrixXcd static_h = h.dense(0.0);
  for (std::size_t i = 0; i < frame.size(); ++i) static_h(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) += frame[i];

  const std::size_t dim = h.dim();
  const int m = p.truncation;
  const int lo = -m + kTruncationBuffer;
  const int hi = m - kTruncationBuffer;

  std::vector<std::vector<double>> pops(static_cast<std::size_t>(hi - lo + 1), std::vector<double>(times.size()));
  std::vector<double> dn(times.size());
  std::vector<double> norms(times.size());

  LadderState current = initial;
  std::vector<cplx> schrodinger(dim);
  double energy0 = 0.0;
  double norm_drift = 0.0;
  double energy_drift = 0.0;

  const auto frame_energy = [&](std::span<const cplx> psi_s) {
    const Eigen::Map<const Eigen::VectorXcd> v(psi_s.data(), static_cast<Eigen::Index>(dim));
    return (v.adjoint() * static_h * v)(0, 0).real();
  };
  const auto to_schrodinger = [&](std::span<const cplx> psi_i, double tau, std::span<cplx> out) {
    for (std::size_t i = 0; i < dim; ++i) out[i] = psi_i[i] * std::polar(1.0, -frame[i] * tau);
  };

  std::optional<SpectralEvolution> spectral;
  if (engine == LowGainEngine::exact) spectral.emplace(static_h, initial.amplitudes());

  double tau_prev = 0.0;
  for (std::size_t s = 0; s < times.size(); ++s) {
    const double tau = times[s];
    if (s > 0 && !(tau > times[s - 1])) throw std::invalid_argument("sample times must increase");
    auto amps = current.amplitudes();
    if (engine == LowGainEngine::exact) {
      spectral->state_at(tau, schrodinger);
      for (std::size_t i = 0; i < dim; ++i) amps[i] = schrodinger[i] * std::polar(1.0, frame[i] * tau);
    } else {
      if (tau != tau_prev) {
        magnus4_evolve(h, amps, tau_prev, tau, magnus_step_count(h, tau_prev, tau));
      }
      to_schrodinger(amps, tau, schrodinger);
    }
    tau_prev = tau;

    const double e = frame_energy(schrodinger);
    if (s == 0) energy0 = e;
    energy_drift = std::max(energy_drift, std::abs(e - energy0));
    const double norm = current.norm_squared();
    norm_drift = std::max(norm_drift, std::abs(norm - 1.0));
    norms[s] = norm;

    LevelPopulations interior;
    interior.mu_min = lo;
    double leaked = 0.0;
    for (int mu = -m; mu <= m; ++mu) {
      const double prob = std::norm(current.amplitude(mu));
      if (mu < lo || mu > hi) {
        leaked += prob;
      } else {
        interior.values.push_back(prob);
        pops[static_cast<std::size_t>(mu - lo)][s] = prob;
      }
    }
    if (leaked > 1e-6) {
      throw PropagationError("probability " + std::to_string(leaked) +
                                 " reached the truncation buffer; increase the ladder truncation",
                             s > 0 ? times[s - 1] : 0.0);
    }
    dn[s] = photon_change(interior, 1);
  }

  Trace trace("tau", std::vector<double>(times.begin(), times.end()));
  for (int mu = lo; mu <= hi; ++mu) trace.add_column(population_column(mu), std::move(pops[static_cast<std::size_t>(mu - lo)]));
  trace.add_column("dn_per_N", std::move(dn));
  trace.add_column("norm", std::move(norms));
  return LowGainRun{std::move(trace), std::move(current), norm_drift, energy_drift};
}

LowGainRun propagate(const LowGainModel& model, const LadderState& initial, double tau_end, std::size_t samples,
                     LowGainEngine engine) {
  const Trace grid = Trace::uniform("tau", tau_end, samples);
  return propagate(model, initial, grid.abscissae(), engine);
}

double analytic_dn(int resonance, double alpha, double rabi_phase) {
  const double a2 = alpha * alpha;
  switch (resonance) {
    case 1: {
      const double s = std::sin(rabi_phase * (1.0 - a2 / 4.0));
      return s * s;
    }
    case 2: {
      const double s = std::sin(alpha * rabi_phase * (1.0 - 16.0 * a2 / 9.0));
      return 2.0 * s * s;
    }
    case 3: {
      const double s = std::sin(a2 / 4.0 * rabi_phase);
      return 3.0 * s * s;
    }
    default:
      throw std::invalid_argument("closed-form gain known for nu = 1, 2, 3 only; use the numeric route");
  }
}

std::array<double, 5> analytic_populations_second(double alpha, double tau) {
  const double a2 = alpha * alpha;
  const double a4 = a2 * a2;
  const double xi1 = a2 * (1.0 - 16.0 * a2 / 9.0);
  const double xi2 = a4 / 36.0 * std::sqrt(1.0 + (124.0 / 125.0) * (124.0 / 125.0));
  const double xi3 = 3.0 - 8.0 * a2 / 15.0 * (1.0 - 16.0 * a2 / 5.0);
  const double r = 8.0 * alpha / 15.0;
  const double xi4 = 1.0 + 8.0 * a2 / 3.0 * (1.0 - 7.0 * r * r);

  const double c1 = std::cos(xi1 * tau);
  const double c2 = std::cos(xi2 * tau);
  const double c3 = std::cos(xi3 * tau);
  const double c4 = std::cos(xi4 * tau);
  const double s1 = std::sin(xi1 * tau);
  const double s2 = std::sin(xi2 * tau);
  const double s4 = std::sin(xi4 * tau);

  const double p_2q = a2 / 9.0 * (c1 * c1 + c2 * c2 - 2.0 * c1 * c2 * c3);
  const double p_q = c1 * c1 + 2.0 * a2 * c1 * (-10.0 / 9.0 * c1 + c4 + c2 * c3 / 9.0);
  const double p_0 = 2.0 * a2 * (1.0 - std::cos((xi1 + xi4) * tau));
  const double p_mq = s1 * s1 + 2.0 * a2 * s1 * (-10.0 / 9.0 * s1 - s4 + s2 * c3 / 9.0);
  const double p_m2q = a2 / 9.0 * (s1 * s1 + s2 * s2 - 2.0 * s1 * s2 * c3);
  return {p_2q, p_q, p_0, p_mq, p_m2q};
}

std::pair<double, double> analytic_populations_third(double alpha, double tau) {
  const double phase = alpha * alpha * alpha * tau / 4.0;
  const double c = std::cos(phase);
  return {c * c, 1.0 - c * c};
}

RabiFit fit_rabi_frequency(const Trace& trace, std::string_view column) {
  const auto& x = trace.abscissae();
  const auto& y = trace.column(column);
  const std::size_t n = y.size();
  const double base = y.front();
  const double peak = *std::max_element(y.begin(), y.end());
  const double excursion = peak - base;
  if (!(excursion > 0.0)) throw std::runtime_error("no maximum found: trace never rises above its start");

  const double enter = base + 0.5 * excursion;
  const double leave = base + 0.25 * excursion;
  std::size_t first = 0;
  while (first < n && y[first] < enter) ++first;
  std::size_t last = first;
  while (last < n && y[last] >= leave) ++last;
  if (last == n) throw std::runtime_error("no maximum found: the first lobe does not close within the trace");

  std::size_t arg = first;
  for (std::size_t i = first; i < last; ++i) {
    if (y[i] > y[arg]) arg = i;
  }

  // Half-level crossings give the starting estimate.
  const auto crossing = [&](std::size_t i) {
    return x[i - 1] + (enter - y[i - 1]) / (y[i] - y[i - 1]) * (x[i] - x[i - 1]);
  };
  const double up = first > 0 ? crossing(first) : x[first];
  std::size_t down = last - 1;
  while (down > first && y[down] < enter) --down;
  const double x_down =
      down + 1 < n ? x[down] + (enter - y[down]) / (y[down + 1] - y[down]) * (x[down + 1] - x[down]) : x[down];
  const double f0 = std::numbers::pi / (up + x_down);

  const auto residual = [&](double f) {
    // Linear least squares for y ~ c + A sin^2(f x) over [0, x_last].
    double s1 = 0.0, sv = 0.0, svv = 0.0, sy = 0.0, svy = 0.0;
    for (std::size_t i = 0; i < last; ++i) {
      const double s = std::sin(f * x[i]);
      const double v = s * s;
      s1 += 1.0;
      sv += v;
      svv += v * v;
      sy += y[i];
      svy += v * y[i];
    }
    const double det = s1 * svv - sv * sv;
    if (std::abs(det) < 1e-300) return 1e300;
    const double c = (svv * sy - sv * svy) / det;
    const double amp = (s1 * svy - sv * sy) / det;
    double r = 0.0;
    for (std::size_t i = 0; i < last; ++i) {
      const double s = std::sin(f * x[i]);
      const double e = c + amp * s * s - y[i];
      r += e * e;
    }
    return r;
  };
  const auto best = boost::math::tools::brent_find_minima(residual, 0.7 * f0, 1.3 * f0, 50);

  RabiFit fit;
  fit.frequency = best.first;
  fit.first_max_position = std::numbers::pi / (2.0 * best.first);
  fit.first_max_value = y[arg];
  return fit;
}

}  // namespace qfel
