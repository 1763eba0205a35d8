#include "qfel/ladder.hpp"

#include <cmath>
#include <cstdlib>
#include <numeric>
#include <stdexcept>

namespace qfel {

FelParams FelParams::low_gain(double alpha_n, int resonance, int order, int truncation, long n0,
                              long electrons) {
  FelParams p;
  p.regime = Regime::low_gain;
  p.alpha = alpha_n;
  p.n0 = n0;
  p.electrons = electrons;
  p.resonance = resonance;
  p.order = order;
  p.truncation = truncation > 0 ? truncation : std::abs(resonance) + 8;
  p.epsilon = n0 > 0 ? alpha_n / std::sqrt(static_cast<double>(n0)) : 0.0;
  p.validate();
  return p;
}

FelParams FelParams::high_gain(double alpha_N, int resonance, long n0, long electrons, int order) {
  FelParams p;
  p.regime = Regime::high_gain;
  p.alpha = alpha_N;
  p.n0 = n0;
  p.electrons = electrons;
  p.resonance = resonance;
  p.order = order;
  p.truncation = std::abs(resonance) + 8;
  p.epsilon = electrons > 0 ? alpha_N / std::sqrt(static_cast<double>(electrons)) : 0.0;
  p.validate();
  return p;
}

void FelParams::validate() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw std::invalid_argument("alpha must be positive and finite");
  }
  if (electrons < 1) throw std::invalid_argument("electron count N must be >= 1");
  if (n0 < 0) throw std::invalid_argument("photon number n0 must be >= 0");
  if (resonance == 0) throw std::invalid_argument("resonance index must be non-zero");
  if (order < 1) throw std::invalid_argument("expansion order must be >= 1");
  if (regime == Regime::low_gain) {
    if (n0 < 1) throw std::invalid_argument("low gain needs a classical field, n0 >= 1");
    if (truncation < std::abs(resonance) + 3) {
      throw std::invalid_argument("ladder truncation M must be at least |nu| + 3");
    }
  }
}

std::vector<std::string> FelParams::warnings() const {
  std::vector<std::string> out;
  if (alpha >= 1.0) {
    out.emplace_back("alpha = " + std::to_string(alpha) +
                     " is outside the quantum regime (alpha < 1); results are still computed");
  }
  if (regime == Regime::high_gain && n0 == 0) {
    out.emplace_back("n0 = 0: unseeded start, analytic high-gain solutions do not apply");
  }
  return out;
}

LadderState::LadderState(int resonance, int truncation)
    : resonance_(resonance), truncation_(truncation) {
  if (truncation < 1) throw std::invalid_argument("ladder truncation must be >= 1");
  amplitudes_.assign(static_cast<std::size_t>(2 * truncation + 1), cplx{});
}

LadderState LadderState::momentum_eigenstate(int resonance, int truncation) {
  LadderState s(resonance, truncation);
  s.set_amplitude(0, 1.0);
  return s;
}

std::size_t LadderState::index(int mu) const {
  if (mu < -truncation_ || mu > truncation_) {
    throw std::out_of_range("ladder index " + std::to_string(mu) + " outside [-M, M]");
  }
  return static_cast<std::size_t>(mu + truncation_);
}

cplx LadderState::amplitude(int mu) const { return amplitudes_[index(mu)]; }

void LadderState::set_amplitude(int mu, cplx value) { amplitudes_[index(mu)] = value; }

double LadderState::norm_squared() const {
  return std::accumulate(amplitudes_.begin(), amplitudes_.end(), 0.0,
                         [](double acc, cplx c) { return acc + std::norm(c); });
}

DickeState::DickeState(long electrons, long n0, int photon_step) : n0_(n0), step_(photon_step) {
  if (electrons < 1) throw std::invalid_argument("electron count N must be >= 1");
  if (n0 < 0) throw std::invalid_argument("photon number n0 must be >= 0");
  if (photon_step != 1 && photon_step != 2) throw std::invalid_argument("photon step must be 1 or 2");
  c_.assign(static_cast<std::size_t>(electrons + 1), cplx{});
}

DickeState DickeState::fock_seed(long electrons, long n0, int photon_step) {
  DickeState s(electrons, n0, photon_step);
  s.c_[0] = 1.0;
  return s;
}

double DickeState::norm_squared() const {
  return std::accumulate(c_.begin(), c_.end(), 0.0, [](double acc, cplx c) { return acc + std::norm(c); });
}

double LevelPopulations::at(int mu) const {
  if (mu < mu_min || mu > mu_max()) return 0.0;
  return values[static_cast<std::size_t>(mu - mu_min)];
}

double LevelPopulations::total() const { return std::accumulate(values.begin(), values.end(), 0.0); }

LevelPopulations level_populations(const LadderState& state) {
  LevelPopulations p;
  p.mu_min = state.mu_min();
  p.values.reserve(state.size());
  for (cplx c : state.amplitudes()) p.values.push_back(std::norm(c));
  return p;
}

double photon_change(const LevelPopulations& populations, long electrons) {
  if (std::abs(populations.total() - 1.0) > 1e-6) {
    throw std::invalid_argument("populations not normalized: sum = " + std::to_string(populations.total()));
  }
  double mean_step = 0.0;
  for (std::size_t i = 0; i < populations.values.size(); ++i) {
    mean_step += (populations.mu_min + static_cast<double>(i)) * populations.values[i];
  }
  return static_cast<double>(electrons) * mean_step;
}

double dicke_photon_number(const DickeState& state) {
  const auto c = state.amplitudes();
  double n = 0.0;
  for (std::size_t mu = 0; mu < c.size(); ++mu) n += std::norm(c[mu]) * state.photons_in(static_cast<long>(mu));
  return n;
}

}  // namespace qfel
