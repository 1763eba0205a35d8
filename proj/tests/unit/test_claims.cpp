// Whole-curve statements comparing models and routes. Each case is registered
// as its own test so a failing statement is reported by name.

#include "qfel/highgain.hpp"
#include "qfel/lowgain.hpp"
#include "qfel/specfun.hpp"
#include "support.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

using namespace qfel;
using qfel::test::rel_err;

namespace {

constexpr long kElectrons = 10'000;
constexpr long kSeed = 1'000;

Maximum peak(HighGainVariant v, double alpha, double length_end, std::size_t samples) {
  const int nu = (v == HighGainVariant::first_order || v == HighGainVariant::third_order) ? 1 : 2;
  const HighGainModel m(FelParams::high_gain(alpha, nu, kSeed, kElectrons), v);
  return first_maximum(propagate_dicke(m, length_end, samples).trace, "n");
}

struct LimitGap {
  double worst = 0.0;      ///< largest |high-gain - low-gain| over the half-period, per electron
  double amplitude = 0.0;  ///< low-gain peak per electron
};

// Strong seed n0 = 10 N with alpha_n = alpha_N sqrt(n0/N) = 0.1, compared on
// the shared axis Omega t = sqrt(n0/N) L / 2.
LimitGap strong_seed_gap(int nu) {
  const double r = 10.0;
  const long electrons = 1'000;
  const double alpha_n = 0.1;
  const FelParams p = FelParams::high_gain(alpha_n / std::sqrt(r), nu, static_cast<long>(r) * electrons, electrons);
  const double frequency = nu == 1 ? 1.0 - alpha_n * alpha_n / 4.0 : alpha_n * (1.0 - 16.0 * alpha_n * alpha_n / 9.0);
  const double half_period = std::numbers::pi / (2.0 * frequency);
  LimitGap gap;
  for (int i = 0; i <= 2000; ++i) {
    const double phase = half_period * i / 2000.0;
    const double length = 2.0 * phase / std::sqrt(r);
    const double n = nu == 1 ? analytic_n_first(length, p, 3) : analytic_n_second(length, p);
    const double high = (n - static_cast<double>(p.n0)) / static_cast<double>(electrons);
    const double low = analytic_dn(nu, alpha_n, phase);
    gap.worst = std::max(gap.worst, std::abs(high - low));
    gap.amplitude = std::max(gap.amplitude, low);
  }
  return gap;
}

// Largest pointwise population gap between the effective and the full
// Hamiltonian for the two resonant levels over one full transfer and back.
double route_gap(int nu, int order, int upper, double alpha) {
  const double rate = nu == 1 ? alpha : nu == 2 ? alpha * alpha : alpha * alpha * alpha / 4.0;
  const double tau_end = std::numbers::pi / rate;
  const FelParams full_p = FelParams::low_gain(alpha, nu);
  const FelParams eff_p = FelParams::low_gain(alpha, nu, order);
  const auto start = LadderState::momentum_eigenstate(nu, full_p.truncation);
  const auto full = propagate(LowGainModel(full_p, LowGainVariant::full_hamiltonian), start, tau_end, 801);
  const auto eff = propagate(LowGainModel(eff_p, LowGainVariant::effective), start, tau_end, 801);
  double worst = 0.0;
  for (int level : {0, upper}) {
    const std::string col = "P[" + std::to_string(level) + "]";
    worst = std::max(worst, qfel::test::max_abs_diff(full.trace.column(col), eff.trace.column(col)));
  }
  return worst;
}

}  // namespace

TEST_SUITE("claims") {
  TEST_CASE("second-resonance full Hamiltonian within 0.1 of the closed-form gain over one period") {
    const double a = 0.25;
    const double period_tau = std::numbers::pi / (a * a * (1.0 - 16.0 * a * a / 9.0));
    const FelParams p = FelParams::low_gain(a, 2);
    const auto run = propagate(LowGainModel(p, LowGainVariant::full_hamiltonian),
                               LadderState::momentum_eigenstate(2, p.truncation), period_tau, 801);
    std::vector<double> closed;
    for (double tau : run.trace.abscissae()) closed.push_back(analytic_dn(2, a, a * tau));
    const double gap = qfel::test::max_abs_diff(run.trace.column("dn_per_N"), closed);
    MESSAGE("largest gap ", gap);
    CHECK(gap <= 0.1);
  }

  TEST_CASE("first-resonance effective route within 3 alpha^2 of the full Hamiltonian") {
    for (double a : {0.1, 0.25}) {
      const double gap = route_gap(1, 3, 1, a);
      MESSAGE("alpha ", a, ": gap ", gap, " vs ", 3 * a * a);
      CHECK(gap <= 3.0 * a * a);
    }
  }

  TEST_CASE("second-resonance effective route within 3 alpha^2 of the full Hamiltonian") {
    for (double a : {0.1, 0.25}) {
      const double gap = route_gap(2, 4, 2, a);
      MESSAGE("alpha ", a, ": gap ", gap, " vs ", 3 * a * a);
      CHECK(gap <= 3.0 * a * a);
    }
  }

  TEST_CASE("third-resonance effective route within 3 alpha^2 of the full Hamiltonian") {
    for (double a : {0.1, 0.25}) {
      const double gap = route_gap(3, 3, 3, a);
      MESSAGE("alpha ", a, ": gap ", gap, " vs ", 3 * a * a);
      CHECK(gap <= 3.0 * a * a);
    }
  }

  TEST_CASE("second resonance full model peaks lower and later") {
    const Maximum dicke = peak(HighGainVariant::dicke_only, 0.25, 45.0, 451);
    const Maximum full = peak(HighGainVariant::full_second_order, 0.25, 45.0, 451);
    MESSAGE("dicke_only ", dicke.value, " at ", dicke.position, "; full ", full.value, " at ", full.position);
    CHECK(full.value < dicke.value);
    CHECK(full.position > dicke.position);
  }

  TEST_CASE("sign-flipped second-resonance diagonal fails the ordering check") {
    const HighGainModel full(FelParams::high_gain(0.25, 2, kSeed, kElectrons), HighGainVariant::full_second_order);
    auto mutant = build_dicke_tridiagonal(full);
    for (long mu = 0; mu <= kElectrons; ++mu) mutant.set(mu, 0, -mutant.value(mu, 0));
    const Trace grid = Trace::uniform("L/L_g", 45.0, 451);
    const Maximum broken =
        first_maximum(propagate_dicke(mutant, DickeState::fock_seed(kElectrons, kSeed, 2), grid.abscissae()).trace, "n");
    const Maximum dicke = peak(HighGainVariant::dicke_only, 0.25, 45.0, 451);
    MESSAGE("mutant ", broken.value, " at ", broken.position, "; dicke_only ", dicke.value, " at ", dicke.position);
    const bool ordering_holds = broken.value < dicke.value && broken.position > dicke.position;
    CHECK_FALSE(ordering_holds);
  }

  TEST_CASE("modulus-versus-parameter slip in K is caught by the first-resonance position check") {
    const FelParams p = FelParams::high_gain(0.5, 1, kSeed, kElectrons);
    const Maximum numeric = peak(HighGainVariant::third_order, 0.5, 8.0, 801);
    const double k = modulus_from_seed(kSeed, kElectrons);
    const double speed = std::sqrt(1.1) * (1.0 - 0.25 / 8.0 * 1.2);
    const double regressed = 2.0 * elliptic_K(k * k) / speed;
    CHECK(rel_err(numeric.position, lmax_exact(p, 1)) <= 0.02);
    CHECK(rel_err(numeric.position, regressed) > 0.02);
  }

  TEST_CASE("third-order maximum does not exceed the first-order maximum") {
    const Maximum first = peak(HighGainVariant::first_order, 0.5, 8.0, 801);
    const Maximum third = peak(HighGainVariant::third_order, 0.5, 8.0, 801);
    CHECK(third.value <= first.value);
  }

  TEST_CASE("third-order amplitude deficit below one percent of N") {
    const Maximum first = peak(HighGainVariant::first_order, 0.5, 8.0, 801);
    const Maximum third = peak(HighGainVariant::third_order, 0.5, 8.0, 801);
    const double deficit = (first.value - third.value) / static_cast<double>(kElectrons);
    MESSAGE("deficit ", deficit, " N");
    CHECK(deficit < 0.01);
  }

  TEST_CASE("strong seed first-resonance closed form approaches the low-gain gain") {
    const LimitGap gap = strong_seed_gap(1);
    MESSAGE("worst gap ", gap.worst, " of amplitude ", gap.amplitude);
    CHECK(gap.worst <= 0.05 * gap.amplitude);
  }

  TEST_CASE("strong seed second-resonance closed form approaches the low-gain gain") {
    const LimitGap gap = strong_seed_gap(2);
    MESSAGE("worst gap ", gap.worst, " of amplitude ", gap.amplitude);
    CHECK(gap.worst <= 0.05 * gap.amplitude);
  }
}
