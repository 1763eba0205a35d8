#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace qfel::test {

/// Largest pointwise |a - b| over two equally long series.
inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

inline double rel_err(double measured, double reference) {
  return std::abs(measured - reference) / std::abs(reference);
}

}  // namespace qfel::test
