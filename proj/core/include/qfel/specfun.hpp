#pragma once

namespace qfel {

/// Elliptic modulus k (not the parameter m = k^2), 0 <= k < 1.
class EllipticModulus {
 public:
  /// Throws std::domain_error unless 0 <= k < 1.
  explicit EllipticModulus(double k);
  [[nodiscard]] double k() const { return k_; }
  [[nodiscard]] double complementary() const;  ///< k' = sqrt(1 - k^2)

 private:
  double k_;
};

/// Complete elliptic integral of the first kind K(k), modulus convention.
[[nodiscard]] double elliptic_K(EllipticModulus k);
/// Same, validating a raw modulus; k >= 1 throws std::domain_error.
[[nodiscard]] double elliptic_K(double k);

struct JacobiTriple {
  double sn;
  double cn;
  double dn;
};

/// sn, cn and dn at (u, k) by descending Landen transformation.
[[nodiscard]] JacobiTriple jacobi_elliptic(double u, EllipticModulus k);

/// Jacobi cn(u, k), modulus convention; even in u with period 4K(k).
[[nodiscard]] double jacobi_cn(double u, EllipticModulus k);
[[nodiscard]] double jacobi_cn(double u, double k);

/// Modulus (1 + n0/N)^(-1/2) of the seeded first-resonance solution. Returns
/// exactly 1 for an unseeded start, which EllipticModulus rejects.
[[nodiscard]] double modulus_from_seed(double n0, double electrons);

}  // namespace qfel
