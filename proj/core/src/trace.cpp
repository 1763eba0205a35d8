#include "qfel/trace.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>

namespace qfel {

Trace::Trace(std::string axis_label, std::vector<double> abscissae)
    : axis_(std::move(axis_label)), x_(std::move(abscissae)) {
  for (std::size_t i = 1; i < x_.size(); ++i) {
    if (!(x_[i] > x_[i - 1])) throw std::invalid_argument("trace abscissae must be strictly increasing");
  }
}

Trace Trace::uniform(std::string axis_label, double end, std::size_t samples) {
  if (samples < 2) throw std::invalid_argument("a trace needs at least two samples");
  if (!(end > 0.0)) throw std::invalid_argument("trace end must be positive");
  std::vector<double> x(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    x[i] = end * static_cast<double>(i) / static_cast<double>(samples - 1);
  }
  return Trace(std::move(axis_label), std::move(x));
}

void Trace::add_column(std::string name, std::vector<double> values) {
  if (values.size() != x_.size()) {
    throw std::invalid_argument("column '" + name + "' length differs from the abscissae");
  }
  if (has_column(name)) throw std::invalid_argument("duplicate column '" + name + "'");
  cols_.emplace_back(std::move(name), std::move(values));
}

bool Trace::has_column(std::string_view name) const {
  return std::any_of(cols_.begin(), cols_.end(), [&](const auto& c) { return c.first == name; });
}

const std::vector<double>& Trace::column(std::string_view name) const {
  for (const auto& c : cols_) {
    if (c.first == name) return c.second;
  }
  throw std::out_of_range("no column named '" + std::string(name) + "'");
}

std::string format_number(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

void Trace::write_csv(std::ostream& out, std::string_view comment) const {
  if (!comment.empty()) out << "# " << comment << '\n';
  out << axis_;
  for (const auto& c : cols_) out << ',' << c.first;
  out << '\n';
  for (std::size_t i = 0; i < x_.size(); ++i) {
    out << format_number(x_[i]);
    for (const auto& c : cols_) out << ',' << format_number(c.second[i]);
    out << '\n';
  }
}

Maximum first_maximum(const Trace& trace, std::string_view column) {
  const auto& y = trace.column(column);
  const auto& x = trace.abscissae();
  const std::size_t n = y.size();
  if (n < 3) throw std::runtime_error("too few samples to locate a maximum");
  const double base = y.front();
  const double excursion = *std::max_element(y.begin(), y.end()) - base;
  if (!(excursion > 0.0)) throw std::runtime_error("column '" + std::string(column) + "' never rises");

  std::size_t i = 0;
  while (y[i] < base + 0.5 * excursion) ++i;
  std::size_t best = i;
  for (; i < n && y[i] >= base + 0.25 * excursion; ++i) {
    if (y[i] > y[best]) best = i;
  }
  if (best == 0 || best + 1 == n) {
    throw std::runtime_error("first maximum of '" + std::string(column) + "' is not inside the trace");
  }

  Maximum m{x[best], y[best], best};
  const double y0 = y[best - 1];
  const double y1 = y[best];
  const double y2 = y[best + 1];
  const double h0 = x[best] - x[best - 1];
  const double h1 = x[best + 1] - x[best];
  // Vertex of the parabola through the three samples (uneven spacing allowed).
  const double s0 = (y1 - y0) / h0;
  const double s1 = (y2 - y1) / h1;
  const double curvature = (s1 - s0) / (0.5 * (h0 + h1));
  if (curvature < 0.0) {
    const double slope = (s0 * h1 + s1 * h0) / (h0 + h1);
    m.position = x[best] - slope / curvature;
    m.position = std::clamp(m.position, x[best - 1], x[best + 1]);
  }
  return m;
}

}  // namespace qfel
