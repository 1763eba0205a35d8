#include "qfel/lowgain.hpp"
#include "qfel/propagation.hpp"
#include "support.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

using namespace qfel;
using qfel::test::max_abs_diff;

namespace {

constexpr double kPi = std::numbers::pi;

LowGainRun run_full(double alpha, int nu, double tau_end, std::size_t samples, int truncation = 0) {
  const FelParams p = FelParams::low_gain(alpha, nu, 1, truncation);
  return propagate(LowGainModel(p, LowGainVariant::full_hamiltonian), LadderState::momentum_eigenstate(nu, p.truncation),
                   tau_end, samples);
}

LowGainRun run_effective(double alpha, int nu, int order, double tau_end, std::size_t samples) {
  const FelParams p = FelParams::low_gain(alpha, nu, order);
  return propagate(LowGainModel(p, LowGainVariant::effective), LadderState::momentum_eigenstate(nu, p.truncation),
                   tau_end, samples);
}

Trace analytic_trace(int nu, double alpha, double end, std::size_t samples) {
  Trace t = Trace::uniform("Omega_t", end, samples);
  std::vector<double> dn;
  for (double x : t.abscissae()) dn.push_back(analytic_dn(nu, alpha, x));
  t.add_column("dn", dn);
  return t;
}

}  // namespace

TEST_SUITE("lowgain") {
  TEST_CASE("full Hamiltonian resonances") {
    const auto h1 = build_full_hamiltonian(FelParams::low_gain(0.25, 1));
    CHECK(h1.half_bandwidth() == 1);
    CHECK(h1.frequency(0, 1) == 0.0);
    CHECK(h1.frequency(1, 1) == -2.0);
    CHECK(h1.frequency(-1, 1) == 2.0);
    for (long mu = h1.first_label(); mu < h1.last_label(); ++mu) CHECK(std::abs(h1.value(mu, 1)) == 0.25);

    const auto h2 = build_full_hamiltonian(FelParams::low_gain(0.25, 2));
    for (long mu = h2.first_label(); mu < h2.last_label(); ++mu) {
      CHECK(h2.frequency(mu, 1) != 0.0);
      CHECK(std::abs(h2.value(mu, 1)) == 0.25);
    }
    CHECK(h2.frame_energies().has_value());
  }

  TEST_CASE("effective Hamiltonian entries") {
    const double a = 0.3;
    const auto h11 = build_effective_hamiltonian(FelParams::low_gain(a, 1), 1);
    CHECK(h11.value(0, 1) == cplx(a));
    CHECK(h11.dense().cwiseAbs().sum() == doctest::Approx(2 * a));

    const auto h22 = build_effective_hamiltonian(FelParams::low_gain(a, 2, 2), 2);
    CHECK(h22.value(0, 2) == cplx(a * a));
    CHECK(h22.value(0, 0).real() == doctest::Approx(2.0 * a * a / 3.0).epsilon(1e-15));
    CHECK(h22.value(2, 0).real() == doctest::Approx(2.0 * a * a / 3.0).epsilon(1e-15));

    const auto h13 = build_effective_hamiltonian(FelParams::low_gain(a, 1, 3), 3);
    CHECK(h13.value(0, 1).real() == doctest::Approx(a - a * a * a / 4.0));
    CHECK(h13.value(-1, 3).real() == doctest::Approx(a * a * a / 4.0));

    const auto h33 = build_effective_hamiltonian(FelParams::low_gain(a, 3, 3), 3);
    CHECK(h33.value(1, 1).real() == doctest::Approx(a - a * a * a / 4.0));
    CHECK(h33.value(0, 3).real() == doctest::Approx(a * a * a / 4.0));
  }

  TEST_CASE("unsupported orders are rejected") {
    CHECK_THROWS_AS((void)build_effective_hamiltonian(FelParams::low_gain(0.2, 1), 4), std::invalid_argument);
    CHECK_THROWS_AS((void)build_effective_hamiltonian(FelParams::low_gain(0.2, 2), 1), std::invalid_argument);
    CHECK_THROWS_AS((void)build_effective_hamiltonian(FelParams::low_gain(0.2, 3), 4), std::invalid_argument);
    CHECK_THROWS_AS((void)build_effective_hamiltonian(FelParams::low_gain(0.2, 4), 1), std::invalid_argument);
    CHECK_THROWS_AS(LowGainModel(FelParams::low_gain(0.2, 2, 5), LowGainVariant::effective), std::invalid_argument);
    CHECK_THROWS_AS(LowGainModel(FelParams::high_gain(0.2, 1, 10, 100), LowGainVariant::full_hamiltonian),
                    std::invalid_argument);
    CHECK(min_effective_order(2) == 2);
    CHECK(max_effective_order(2) == 4);
  }

  TEST_CASE("every built operator is exactly Hermitian") {
    for (int nu = 1; nu <= 3; ++nu) {
      for (int order = min_effective_order(nu); order <= max_effective_order(nu); ++order) {
        const Eigen::MatrixXcd d = build_effective_hamiltonian(FelParams::low_gain(0.37, nu, order), order).dense();
        CHECK((d - d.adjoint()).cwiseAbs().maxCoeff() == 0.0);
      }
      const auto full = build_full_hamiltonian(FelParams::low_gain(0.37, nu));
      const Eigen::MatrixXcd d = full.dense(3.1);
      CHECK((d - d.adjoint()).cwiseAbs().maxCoeff() == 0.0);
    }
  }

  TEST_CASE("two-level effective dynamics is a pure Rabi oscillation") {
    const auto run = run_effective(0.25, 1, 1, 40.0, 401);
    const auto& tau = run.trace.abscissae();
    const auto& p1 = run.trace.column("P[1]");
    for (std::size_t i = 0; i < tau.size(); ++i) CHECK(std::abs(p1[i] - std::pow(std::sin(0.25 * tau[i]), 2)) <= 1e-10);
  }

  TEST_CASE("first resonance emits one photon per electron") {
    const auto run = run_full(0.25, 1, 2.0 * kPi / 0.25, 1201);
    const auto& dn = run.trace.column("dn_per_N");
    CHECK(std::abs(*std::max_element(dn.begin(), dn.end()) - 1.0) <= 0.05);
    CHECK(run.norm_drift <= 1e-8);
  }

  TEST_CASE("third resonance mid-period transfer") {
    const double a = 0.25;
    const double tau_mid = kPi / (a * a * a);
    const auto run = run_full(a, 3, tau_mid, 2001);
    const auto [upper, lower] = analytic_populations_third(a, tau_mid);
    CHECK(std::abs(run.trace.column("P[0]").back() - upper) <= 0.1);
    CHECK(std::abs(run.trace.column("P[3]").back() - lower) <= 0.1);
  }

  TEST_CASE("closed-form gain examples") {
    for (int nu = 1; nu <= 3; ++nu) CHECK(analytic_dn(nu, 0.3, 0.0) == 0.0);
    const double a = 0.3;
    CHECK(analytic_dn(1, a, kPi / 2 / (1 - a * a / 4)) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(analytic_dn(2, a, kPi / 2 / (a * (1 - 16 * a * a / 9))) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(analytic_dn(3, a, kPi / 2 / (a * a / 4)) == doctest::Approx(3.0).epsilon(1e-14));
    CHECK_THROWS_AS((void)analytic_dn(4, a, 1.0), std::invalid_argument);
    CHECK_THROWS_AS((void)analytic_dn(0, a, 1.0), std::invalid_argument);
  }

  TEST_CASE("second-resonance populations start in the initial level") {
    for (double a : {0.1, 0.25, 0.5}) {
      const auto p = analytic_populations_second(a, 0.0);
      CHECK(std::abs(p[1] - 1.0) <= 1e-15);
      for (std::size_t i : {0u, 2u, 3u, 4u}) CHECK(std::abs(p[i]) <= 1e-15);
    }
  }

  TEST_CASE("second-resonance populations sum to one at the stated order") {
    const double a = 0.25;
    for (double tau = 0.0; tau <= 300.0; tau += 0.25) {
      const auto p = analytic_populations_second(a, tau);
      CHECK(std::abs(p[0] + p[1] + p[2] + p[3] + p[4] - 1.0) <= 5.0 * std::pow(a, 4));
    }
  }

  TEST_CASE("third-resonance populations") {
    const double a = 0.25;
    const auto [p0, p1] = analytic_populations_third(a, 0.0);
    CHECK(p0 == 1.0);
    CHECK(p1 == 0.0);
    const auto [q0, q1] = analytic_populations_third(a, 2.0 * kPi / (a * a * a));
    CHECK(std::abs(q0) <= 1e-15);
    CHECK(std::abs(q1 - 1.0) <= 1e-15);
    for (double tau = 0.0; tau < 500.0; tau += 3.7) {
      const auto [u, v] = analytic_populations_third(a, tau);
      CHECK(std::abs(u + v - 1.0) <= 1e-15);
    }
  }

  TEST_CASE("Rabi fit recovers the closed-form frequencies") {
    const double a = 0.25;
    const RabiFit f1 = fit_rabi_frequency(analytic_trace(1, a, 6.0, 1201), "dn");
    CHECK(std::abs(f1.frequency - (1 - a * a / 4)) <= 1e-6);
    CHECK(f1.first_max_value == doctest::Approx(1.0).epsilon(1e-4));
    const double f2_expected = a * (1 - 16 * a * a / 9);
    const RabiFit f2 = fit_rabi_frequency(analytic_trace(2, a, 3.5 / f2_expected, 1201), "dn");
    CHECK(std::abs(f2.frequency / f2_expected - 1.0) <= 1e-6);
    CHECK(f2.first_max_position == doctest::Approx(kPi / (2 * f2.frequency)));
  }

  TEST_CASE("fitted frequencies scale as alpha^(nu-1)") {
    for (int nu = 1; nu <= 3; ++nu) {
      double lo = 1e300;
      double hi = 0.0;
      for (double a : {0.1, 0.2, 0.3}) {
        const double leading = nu == 3 ? a * a / 4.0 : std::pow(a, nu - 1);
        const RabiFit f = fit_rabi_frequency(analytic_trace(nu, a, 4.0 / leading, 2001), "dn");
        const double coefficient = f.frequency / std::pow(a, nu - 1);
        lo = std::min(lo, coefficient);
        hi = std::max(hi, coefficient);
      }
      CHECK((hi - lo) / hi <= 0.15);
    }
  }

  TEST_CASE("Rabi fit needs a maximum") {
    Trace t = Trace::uniform("x", 1.0, 50);
    t.add_column("flat", std::vector<double>(50, 0.5));
    std::vector<double> ramp(t.abscissae());
    t.add_column("ramp", ramp);
    CHECK_THROWS_AS((void)fit_rabi_frequency(t, "flat"), std::runtime_error);
    CHECK_THROWS_AS((void)fit_rabi_frequency(t, "ramp"), std::runtime_error);
  }

  TEST_CASE("effective propagation conserves norm and energy") {
    const auto run = run_effective(0.3, 2, 4, 400.0, 201);
    CHECK(run.norm_drift <= 1e-8);
    CHECK(run.energy_drift <= 1e-8);
  }

  TEST_CASE("mirror: starting at -nu reverses the gain") {
    for (int nu = 1; nu <= 3; ++nu) {
      const auto up = run_full(0.25, nu, 60.0, 121);
      const auto down = run_full(0.25, -nu, 60.0, 121);
      const auto& a = up.trace.column("dn_per_N");
      const auto& b = down.trace.column("dn_per_N");
      for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] + b[i]) <= 1e-8);
    }
  }

  TEST_CASE("doubling the truncation leaves observables unchanged") {
    const auto base = run_full(0.25, 2, 100.0, 101, 10);
    const auto doubled = run_full(0.25, 2, 100.0, 101, 20);
    CHECK(max_abs_diff(base.trace.column("dn_per_N"), doubled.trace.column("dn_per_N")) <= 1e-8);
    CHECK(max_abs_diff(base.trace.column("P[0]"), doubled.trace.column("P[0]")) <= 1e-8);
  }

  TEST_CASE("Magnus stepping agrees with the rotating-frame route") {
    const FelParams p = FelParams::low_gain(0.25, 1);
    const LowGainModel m(p, LowGainVariant::full_hamiltonian);
    const auto start = LadderState::momentum_eigenstate(1, p.truncation);
    const auto exact = propagate(m, start, 12.0, 13, LowGainEngine::exact);
    const auto magnus = propagate(m, start, 12.0, 13, LowGainEngine::magnus);
    CHECK(max_abs_diff(exact.trace.column("dn_per_N"), magnus.trace.column("dn_per_N")) <= 1e-8);
    CHECK(magnus.norm_drift <= 1e-10);
  }

  TEST_CASE("leakage into the truncation buffer is reported") {
    const FelParams p = FelParams::low_gain(3.0, 1, 1, 4);
    const LowGainModel m(p, LowGainVariant::full_hamiltonian);
    try {
      (void)propagate(m, LadderState::momentum_eigenstate(1, 4), 20.0, 201);
      FAIL("expected a PropagationError");
    } catch (const PropagationError& e) {
      CHECK(e.reached() >= 0.0);
      CHECK(e.reached() < 20.0);
    }
  }

  TEST_CASE("propagation rejects inconsistent input") {
    const FelParams p = FelParams::low_gain(0.25, 1);
    const LowGainModel m(p, LowGainVariant::full_hamiltonian);
    CHECK_THROWS_AS((void)propagate(m, LadderState::momentum_eigenstate(1, 5), 1.0, 3), std::invalid_argument);
    CHECK_THROWS_AS((void)propagate(m, LadderState(1, p.truncation), 1.0, 3), std::invalid_argument);
    const std::vector<double> backwards{0.0, 2.0, 1.0};
    CHECK_THROWS_AS((void)propagate(m, LadderState::momentum_eigenstate(1, p.truncation), backwards),
                    std::invalid_argument);
  }
}
