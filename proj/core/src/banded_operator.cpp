#include "qfel/banded_operator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qfel {

BandedHermitianOperator::BandedHermitianOperator(std::size_t dim, std::size_t half_bandwidth, long first_label)
    : dim_(dim), first_(first_label) {
  if (dim == 0) throw std::invalid_argument("operator dimension must be positive");
  if (half_bandwidth >= dim && dim > 1) half_bandwidth = dim - 1;
  bands_.resize(half_bandwidth + 1);
  freqs_.resize(half_bandwidth + 1);
  for (std::size_t d = 0; d <= half_bandwidth; ++d) {
    const std::size_t len = d < dim ? dim - d : 0;
    bands_[d].assign(len, cplx{});
    freqs_[d].assign(len, 0.0);
  }
}

std::size_t BandedHermitianOperator::row_index(long row) const {
  if (!contains(row)) {
    throw std::out_of_range("row label " + std::to_string(row) + " outside operator range");
  }
  return static_cast<std::size_t>(row - first_);
}

void BandedHermitianOperator::set(long row, std::size_t offset, cplx value, double frequency) {
  if (offset > half_bandwidth()) throw std::out_of_range("band offset exceeds half bandwidth");
  if (!contains(row) || !contains(row + static_cast<long>(offset))) return;
  if (offset == 0 && (value.imag() != 0.0 || frequency != 0.0)) {
    throw std::invalid_argument("diagonal entries must be real and static");
  }
  const std::size_t i = row_index(row);
  bands_[offset][i] = value;
  freqs_[offset][i] = frequency;
  if (frequency != 0.0) time_dependent_ = true;
}

void BandedHermitianOperator::add(long row, std::size_t offset, cplx value, double frequency) {
  if (offset > half_bandwidth()) throw std::out_of_range("band offset exceeds half bandwidth");
  if (!contains(row) || !contains(row + static_cast<long>(offset))) return;
  const std::size_t i = row_index(row);
  if (bands_[offset][i] != cplx{} && freqs_[offset][i] != frequency) {
    throw std::invalid_argument("cannot add entries with different oscillation frequencies");
  }
  set(row, offset, bands_[offset][i] + value, frequency);
}

BandedHermitianOperator::cplx BandedHermitianOperator::value(long row, std::size_t offset) const {
  if (offset > half_bandwidth() || !contains(row) || !contains(row + static_cast<long>(offset))) return {};
  return bands_[offset][row_index(row)];
}

double BandedHermitianOperator::frequency(long row, std::size_t offset) const {
  if (offset > half_bandwidth() || !contains(row) || !contains(row + static_cast<long>(offset))) return 0.0;
  return freqs_[offset][row_index(row)];
}

BandedHermitianOperator::cplx BandedHermitianOperator::at(long row, long col, double tau) const {
  if (!contains(row) || !contains(col)) throw std::out_of_range("element outside operator range");
  const bool upper = col >= row;
  const long r = upper ? row : col;
  const auto d = static_cast<std::size_t>(upper ? col - row : row - col);
  if (d > half_bandwidth()) return {};
  const std::size_t i = row_index(r);
  cplx v = bands_[d][i];
  if (freqs_[d][i] != 0.0) v *= std::polar(1.0, freqs_[d][i] * tau);
  return upper ? v : std::conj(v);
}

void BandedHermitianOperator::apply(std::span<const cplx> in, std::span<cplx> out, double tau) const {
  if (in.size() != dim_ || out.size() != dim_) throw std::invalid_argument("vector size mismatch");
  for (std::size_t i = 0; i < dim_; ++i) out[i] = bands_[0][i].real() * in[i];
  for (std::size_t d = 1; d < bands_.size(); ++d) {
    const auto& band = bands_[d];
    const auto& freq = freqs_[d];
    for (std::size_t i = 0; i < band.size(); ++i) {
      cplx v = band[i];
      if (time_dependent_ && freq[i] != 0.0) v *= std::polar(1.0, freq[i] * tau);
      // Spelled out: the library operator* pays for inf/nan recovery.
      const double vr = v.real();
      const double vi = v.imag();
      const cplx a = in[i + d];
      const cplx b = in[i];
      out[i] += cplx(vr * a.real() - vi * a.imag(), vr * a.imag() + vi * a.real());
      out[i + d] += cplx(vr * b.real() + vi * b.imag(), vr * b.imag() - vi * b.real());
    }
  }
}

Eigen::MatrixXcd BandedHermitianOperator::dense(double tau) const {
  const auto n = static_cast<Eigen::Index>(dim_);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  for (std::size_t d = 0; d < bands_.size(); ++d) {
    for (std::size_t i = 0; i < bands_[d].size(); ++i) {
      cplx v = bands_[d][i];
      if (freqs_[d][i] != 0.0) v *= std::polar(1.0, freqs_[d][i] * tau);
      const auto r = static_cast<Eigen::Index>(i);
      const auto c = static_cast<Eigen::Index>(i + d);
      m(r, c) = v;
      if (d != 0) m(c, r) = std::conj(v);
    }
  }
  return m;
}

double BandedHermitianOperator::expectation(std::span<const cplx> psi, double tau) const {
  std::vector<cplx> h(dim_);
  apply(psi, h, tau);
  cplx acc{};
  for (std::size_t i = 0; i < dim_; ++i) acc += std::conj(psi[i]) * h[i];
  return acc.real();
}

std::optional<std::vector<double>> BandedHermitianOperator::frame_energies(double tolerance) const {
  // Walk the first band to fix E up to a constant, then verify the rest.
  std::vector<double> energy(dim_, 0.0);
  if (bands_.size() > 1) {
    for (std::size_t i = 0; i + 1 < dim_; ++i) energy[i + 1] = energy[i] - freqs_[1][i];
  }
  for (std::size_t d = 1; d < bands_.size(); ++d) {
    for (std::size_t i = 0; i < bands_[d].size(); ++i) {
      if (bands_[d][i] == cplx{}) continue;
      if (std::abs(freqs_[d][i] - (energy[i] - energy[i + d])) > tolerance) return std::nullopt;
    }
  }
  return energy;
}

std::pair<double, double> BandedHermitianOperator::spectral_bounds() const {
  if (time_dependent_) throw std::logic_error("spectral bounds requested for a time-dependent operator");
  std::vector<double> radius(dim_, 0.0);
  for (std::size_t d = 1; d < bands_.size(); ++d) {
    for (std::size_t i = 0; i < bands_[d].size(); ++i) {
      const double a = std::abs(bands_[d][i]);
      radius[i] += a;
      radius[i + d] += a;
    }
  }
  double lo = bands_[0][0].real() - radius[0];
  double hi = bands_[0][0].real() + radius[0];
  for (std::size_t i = 1; i < dim_; ++i) {
    lo = std::min(lo, bands_[0][i].real() - radius[i]);
    hi = std::max(hi, bands_[0][i].real() + radius[i]);
  }
  return {lo, hi};
}

}  // namespace qfel
