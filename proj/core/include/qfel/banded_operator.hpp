#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace qfel {

/// Hermitian band matrix addressed by ladder labels.
///
/// Only the diagonal and the upper bands are stored; entry (mu, mu + d) at time
/// tau is `value * exp(i * frequency * tau)` and the lower triangle is its
/// conjugate transpose, so every instantaneous matrix is Hermitian. Rows are
/// labelled `first_label() .. first_label() + dim() - 1` (mu in [-M, M] for the
/// ladder, [0, N] for the Dicke basis).
class BandedHermitianOperator {
 public:
  using cplx = std::complex<double>;

  BandedHermitianOperator(std::size_t dim, std::size_t half_bandwidth, long first_label = 0);

  [[nodiscard]] std::size_t dim() const { return dim_; }
  [[nodiscard]] std::size_t half_bandwidth() const { return bands_.size() - 1; }
  [[nodiscard]] long first_label() const { return first_; }
  [[nodiscard]] long last_label() const { return first_ + static_cast<long>(dim_) - 1; }
  [[nodiscard]] bool contains(long label) const { return label >= first_ && label <= last_label(); }

  /// Sets entry (row, row + offset). Diagonal entries must be real and static.
  /// Entries whose column falls outside the matrix are silently dropped, which
  /// is how truncated infinite sums are cut at the ladder bounds.
  void set(long row, std::size_t offset, cplx value, double frequency = 0.0);
  /// Adds to entry (row, row + offset); the frequency must match any existing one.
  void add(long row, std::size_t offset, cplx value, double frequency = 0.0);

  [[nodiscard]] cplx value(long row, std::size_t offset) const;
  [[nodiscard]] double frequency(long row, std::size_t offset) const;

  [[nodiscard]] bool time_dependent() const { return time_dependent_; }

  /// Instantaneous element (row, col) for any pair of labels.
  [[nodiscard]] cplx at(long row, long col, double tau = 0.0) const;

  /// out = H(tau) * in.
  void apply(std::span<const cplx> in, std::span<cplx> out, double tau = 0.0) const;

  [[nodiscard]] Eigen::MatrixXcd dense(double tau = 0.0) const;

  /// <psi| H(tau) |psi>, real by Hermiticity.
  [[nodiscard]] double expectation(std::span<const cplx> psi, double tau = 0.0) const;

  /// Diagonal energies E with frequency(i, d) == E_i - E_{i+d} for every
  /// non-zero entry, if such a rotating frame exists. Then
  /// H(tau) = exp(i E tau) (H(0)) exp(-i E tau).
  [[nodiscard]] std::optional<std::vector<double>> frame_energies(double tolerance = 1e-12) const;

  /// Gershgorin enclosure [lo, hi] of the spectrum; static operators only.
  [[nodiscard]] std::pair<double, double> spectral_bounds() const;

 private:
  [[nodiscard]] std::size_t row_index(long row) const;

  std::size_t dim_;
  long first_;
  // bands_[d][i] = value of entry (i, i + d); band d has dim_ - d entries.
  std::vector<std::vector<cplx>> bands_;
  std::vector<std::vector<double>> freqs_;
  bool time_dependent_ = false;
};

}  // namespace qfel
