#include "qfel/semiclassical.hpp"

#include "qfel/propagation.hpp"

#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace qfel {
namespace {

namespace odeint = boost::numeric::odeint;

struct Sample {
  double x = 0.0;     // n / N
  double xdot = 0.0;  // d(n/N)/dL
  double y0 = 0.0;    // N0 / N
  double y2 = 0.0;    // N2 / N
};

// x'' = alpha^2 [4 x y0 y2 + x^2 (y0 - y2)] with y0 = 1 + (r - x)/2, y2 = (x - r)/2.
std::vector<Sample> integrate_intensity(double alpha, double r, std::span<const double> lengths, double tol) {
  using State = std::array<double, 2>;
  const double a2 = alpha * alpha;
  const auto rhs = [a2, r](const State& s, State& ds, double) {
    const double x = s[0];
    const double y0 = 1.0 + 0.5 * (r - x);
    const double y2 = 0.5 * (x - r);
    ds[0] = s[1];
    ds[1] = a2 * (4.0 * x * y0 * y2 + x * x * (y0 - y2));
  };
  std::vector<Sample> out;
  out.reserve(lengths.size());
  State state{r, 0.0};
  auto stepper = odeint::make_dense_output(tol, tol, odeint::runge_kutta_dopri5<State>());
  odeint::integrate_times(stepper, rhs, state, lengths.begin(), lengths.end(), 1e-3, [&](const State& s, double) {
    out.push_back({s[0], s[1], 1.0 + 0.5 * (r - s[0]), 0.5 * (s[0] - r)});
  });
  return out;
}

// Field amplitude a, momentum-mode amplitudes b0 (initial level) and b2 (two photons emitted):
//   i a'  = alpha conj(a) b0 conj(b2)
//   i b0' = alpha/2 a^2 b2
//   i b2' = alpha/2 conj(a)^2 b0
std::vector<Sample> integrate_three_mode(double alpha, double r, std::span<const double> lengths, double tol) {
  using cplx = std::complex<double>;
  using State = std::array<double, 6>;
  const cplx minus_i(0.0, -1.0);
  const auto rhs = [alpha, minus_i](const State& s, State& ds, double) {
    const cplx a(s[0], s[1]);
    const cplx b0(s[2], s[3]);
    const cplx b2(s[4], s[5]);
    const cplx da = minus_i * alpha * std::conj(a) * b0 * std::conj(b2);
    const cplx db0 = minus_i * 0.5 * alpha * a * a * b2;
    const cplx db2 = minus_i * 0.5 * alpha * std::conj(a) * std::conj(a) * b0;
    ds = {da.real(), da.imag(), db0.real(), db0.imag(), db2.real(), db2.imag()};
  };
  std::vector<Sample> out;
  out.reserve(lengths.size());
  State state{std::sqrt(r), 0.0, 1.0, 0.0, 0.0, 0.0};
  auto stepper = odeint::make_dense_output(tol, tol, odeint::runge_kutta_dopri5<State>());
  odeint::integrate_times(stepper, rhs, state, lengths.begin(), lengths.end(), 1e-3, [&](const State& s, double) {
    const cplx a(s[0], s[1]);
    const cplx b0(s[2], s[3]);
    const cplx b2(s[4], s[5]);
    // d|a|^2/dL = 2 Re(conj(a) a') = 2 alpha Im(conj(a)^2 b0 conj(b2)).
    const double xdot = 2.0 * alpha * std::imag(std::conj(a) * std::conj(a) * b0 * std::conj(b2));
    out.push_back({std::norm(a), xdot, std::norm(b0), std::norm(b2)});
  });
  return out;
}

}  // namespace

SemiclassicalRun integrate_semiclassical(const FelParams& params, std::span<const double> lengths,
                                         SemiclassicalRoute route, double tolerance) {
  if (params.regime != Regime::high_gain || params.resonance != 2) {
    throw std::invalid_argument("the semiclassical route describes the high-gain second resonance only");
  }
  if (params.n0 < 1) throw std::invalid_argument("the semiclassical route needs a seeded start (n0 >= 1)");
  if (lengths.empty()) throw std::invalid_argument("no sample lengths");
  if (lengths.front() < 0.0) throw std::invalid_argument("sample lengths must be non-negative");
  for (std::size_t i = 1; i < lengths.size(); ++i) {
    if (!(lengths[i] > lengths[i - 1])) throw std::invalid_argument("sample lengths must increase");
  }

  // The integrators start at L = 0; a leading zero is prepended when missing.
  std::vector<double> grid(lengths.begin(), lengths.end());
  const bool prepended = grid.front() > 0.0;
  if (prepended) grid.insert(grid.begin(), 0.0);

  const double r = params.seed_ratio();
  std::vector<Sample> samples = route == SemiclassicalRoute::intensity
                                    ? integrate_intensity(params.alpha, r, grid, tolerance)
                                    : integrate_three_mode(params.alpha, r, grid, tolerance);
  if (samples.size() != grid.size()) throw PropagationError("integrator returned an incomplete trace", grid.back());
  if (prepended) samples.erase(samples.begin());

  const double n = static_cast<double>(params.electrons);
  const double a_ref = 1.0;
  const double b_ref = 2.0 + r;
  std::vector<double> col_n, col_ndot, col_n0, col_n2, col_a, col_b;
  double drift = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const Sample& s = samples[i];
    constexpr double slack = 1e-9;
    if (s.y0 < -slack || s.y2 < -slack) {
      throw PropagationError("momentum occupation turned negative: N0/N = " + std::to_string(s.y0) +
                                 ", N2/N = " + std::to_string(s.y2) + ", n/N = " + std::to_string(s.x),
                             i > 0 ? lengths[i - 1] : 0.0);
    }
    const double inv_a = s.y0 + s.y2;
    const double inv_b = 2.0 * s.y0 + s.x;
    drift = std::max({drift, std::abs(inv_a - a_ref) / a_ref, std::abs(inv_b - b_ref) / b_ref});
    col_n.push_back(n * s.x);
    col_ndot.push_back(n * s.xdot);
    col_n0.push_back(n * s.y0);
    col_n2.push_back(n * s.y2);
    col_a.push_back(n * inv_a);
    col_b.push_back(n * inv_b);
  }

  Trace trace("L/L_g", std::vector<double>(lengths.begin(), lengths.end()));
  trace.add_column("n", std::move(col_n));
  trace.add_column("ndot", std::move(col_ndot));
  trace.add_column("N0", std::move(col_n0));
  trace.add_column("N2", std::move(col_n2));
  trace.add_column("A", std::move(col_a));
  trace.add_column("B", std::move(col_b));
  return SemiclassicalRun{std::move(trace), drift};
}

SemiclassicalRun integrate_semiclassical(const FelParams& params, double length_end, std::size_t samples,
                                         SemiclassicalRoute route, double tolerance) {
  const Trace grid = Trace::uniform("L/L_g", length_end, samples);
  return integrate_semiclassical(params, grid.abscissae(), route, tolerance);
}

}  // namespace qfel
