#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qfel {

/// Sampled observables against one abscissa (tau, Omega t or L/L_g).
class Trace {
 public:
  Trace(std::string axis_label, std::vector<double> abscissae);

  /// Evenly spaced samples on [0, end], both ends included.
  static Trace uniform(std::string axis_label, double end, std::size_t samples);

  [[nodiscard]] const std::string& axis_label() const { return axis_; }
  [[nodiscard]] const std::vector<double>& abscissae() const { return x_; }
  [[nodiscard]] std::size_t size() const { return x_.size(); }

  void add_column(std::string name, std::vector<double> values);
  [[nodiscard]] bool has_column(std::string_view name) const;
  [[nodiscard]] const std::vector<double>& column(std::string_view name) const;
  [[nodiscard]] const std::vector<std::pair<std::string, std::vector<double>>>& columns() const { return cols_; }

  /// Header line, then one row per sample. `comment`, when non-empty, is
  /// written first as a `# ...` line.
  void write_csv(std::ostream& out, std::string_view comment = {}) const;

 private:
  std::string axis_;
  std::vector<double> x_;
  std::vector<std::pair<std::string, std::vector<double>>> cols_;
};

struct Maximum {
  double position = 0.0;  ///< abscissa, refined by a parabola through the top three samples
  double value = 0.0;     ///< largest sample of the lobe
  std::size_t index = 0;
};

/// First pronounced maximum of `column`: the lobe starts where the column
/// first exceeds half its full excursion above the initial value and ends
/// where it drops below a quarter of it. Throws std::runtime_error when the
/// column never rises or its maximum sits on the last sample.
[[nodiscard]] Maximum first_maximum(const Trace& trace, std::string_view column);

/// 12 significant digits, locale independent; used for every CSV cell.
[[nodiscard]] std::string format_number(double value);

}  // namespace qfel
