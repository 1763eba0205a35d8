#include "qfel/specfun.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace qfel {
namespace {

// Carlson's symmetric integral R_F(x, y, z) by duplication. The stopping
// tolerance bounds the truncation error of the fifth-order series by about
// tol^6, well below double precision.
double carlson_rf(double x, double y, double z) {
  constexpr double tol = 0.0025;
  for (int iter = 0; iter < 100; ++iter) {
    const double sx = std::sqrt(x);
    const double sy = std::sqrt(y);
    const double sz = std::sqrt(z);
    const double lambda = sx * (sy + sz) + sy * sz;
    x = 0.25 * (x + lambda);
    y = 0.25 * (y + lambda);
    z = 0.25 * (z + lambda);
    const double mean = (x + y + z) / 3.0;
    const double dx = (mean - x) / mean;
    const double dy = (mean - y) / mean;
    const double dz = (mean - z) / mean;
    if (std::max({std::abs(dx), std::abs(dy), std::abs(dz)}) < tol) {
      const double e2 = dx * dy - dz * dz;
      const double e3 = dx * dy * dz;
      return (1.0 + (e2 / 24.0 - 0.1 - 3.0 * e3 / 44.0) * e2 + e3 / 14.0) / std::sqrt(mean);
    }
  }
  throw std::runtime_error("carlson_rf did not converge");
}

}  // namespace

EllipticModulus::EllipticModulus(double k) : k_(k) {
  if (!(k >= 0.0 && k < 1.0)) {
    throw std::domain_error("elliptic modulus must satisfy 0 <= k < 1, got " + std::to_string(k));
  }
}

double EllipticModulus::complementary() const { return std::sqrt((1.0 - k_) * (1.0 + k_)); }

double elliptic_K(EllipticModulus k) {
  if (k.k() == 0.0) return std::numbers::pi / 2.0;
  const double kc = k.complementary();
  return carlson_rf(0.0, kc * kc, 1.0);
}

double elliptic_K(double k) { return elliptic_K(EllipticModulus(k)); }

JacobiTriple jacobi_elliptic(double u, EllipticModulus modulus) {
  const double k = modulus.k();
  if (k == 0.0) return {std::sin(u), std::cos(u), 1.0};

  // Reduce into one period so the phase doubling below stays accurate.
  const double period = 4.0 * elliptic_K(modulus);
  u -= period * std::nearbyint(u / period);

  constexpr int max_steps = 16;
  std::array<double, max_steps + 1> a{};
  std::array<double, max_steps + 1> c{};
  a[0] = 1.0;
  double b = modulus.complementary();
  c[0] = k;
  int n = 0;
  while (std::abs(c[n]) > 1e-17 * a[n] && n < max_steps) {
    a[n + 1] = 0.5 * (a[n] + b);
    c[n + 1] = 0.5 * (a[n] - b);
    b = std::sqrt(a[n] * b);
    ++n;
  }
  double phi = std::ldexp(a[n] * u, n);
  double phi_prev = phi;
  for (int j = n; j > 0; --j) {
    phi_prev = phi;
    phi = 0.5 * (phi + std::asin(c[j] / a[j] * std::sin(phi)));
  }
  const double sn = std::sin(phi);
  const double cn = std::cos(phi);
  const double dn = n > 0 ? cn / std::cos(phi_prev - phi) : 1.0;
  return {sn, cn, dn};
}

double jacobi_cn(double u, EllipticModulus k) { return jacobi_elliptic(u, k).cn; }

double jacobi_cn(double u, double k) { return jacobi_cn(u, EllipticModulus(k)); }

double modulus_from_seed(double n0, double electrons) {
  if (!(electrons > 0.0) || n0 < 0.0) {
    throw std::invalid_argument("modulus_from_seed needs N > 0 and n0 >= 0");
  }
  return 1.0 / std::sqrt(1.0 + n0 / electrons);
}

}  // namespace qfel
