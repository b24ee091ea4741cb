#pragma once

#include <algorithm>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "milne/core/error.hpp"
#include "milne/core/types.hpp"

namespace milne::models {

/// Natural cubic spline through (x_i, y_i), x strictly increasing.
class CubicSpline {
 public:
  CubicSpline() = default;
  CubicSpline(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y)) {
    const std::size_t n = x_.size();
    if (n < 3 || y_.size() != n) fail(ErrorKind::ParameterOutOfRange, "spline needs at least 3 samples");
    for (std::size_t i = 1; i < n; ++i) {
      if (!(x_[i] > x_[i - 1])) fail(ErrorKind::ParameterOutOfRange, "spline abscissae must increase strictly");
    }
    // Tridiagonal solve for second derivatives, natural end conditions.
    m_.assign(n, 0.0);
    std::vector<double> c(n, 0.0), d(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const double h0 = x_[i] - x_[i - 1], h1 = x_[i + 1] - x_[i];
      const double rhs = 6.0 * ((y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0);
      const double diag = 2.0 * (h0 + h1) - h0 * c[i - 1];
      c[i] = h1 / diag;
      d[i] = (rhs - h0 * d[i - 1]) / diag;
    }
    for (std::size_t i = n - 2; i >= 1; --i) {
      m_[i] = d[i] - c[i] * m_[i + 1];
      if (i == 1) break;
    }
  }

  double operator()(double t) const {
    auto it = std::upper_bound(x_.begin(), x_.end(), t);
    std::size_t i = it == x_.begin() ? 0 : static_cast<std::size_t>(it - x_.begin()) - 1;
    i = std::min(i, x_.size() - 2);
    const double h = x_[i + 1] - x_[i];
    const double A = (x_[i + 1] - t) / h, B = (t - x_[i]) / h;
    return A * y_[i] + B * y_[i + 1] + ((A * A * A - A) * m_[i] + (B * B * B - B) * m_[i + 1]) * h * h / 6.0;
  }

  const std::vector<double>& x() const { return x_; }

 private:
  std::vector<double> x_, y_, m_;
};

/// Potential sampled on a grid; Re and Im interpolated by separate splines.
struct TabulatedPotential {
  std::vector<double> x;
  std::vector<cplx> v;
  CubicSpline re, im;
  bool has_imaginary = false;

  TabulatedPotential(std::vector<double> xs, std::vector<cplx> vs) : x(std::move(xs)), v(std::move(vs)) {
    std::vector<double> r, i;
    for (auto z : v) {
      r.push_back(z.real());
      i.push_back(z.imag());
      if (z.imag() != 0.0) has_imaginary = true;
    }
    re = CubicSpline(x, r);
    im = CubicSpline(x, i);
  }

  cplx operator()(double t) const { return {re(t), has_imaginary ? im(t) : 0.0}; }
};

/// Reads "x ReV [ImV]" rows (whitespace or comma separated, '#' comments).
inline TabulatedPotential read_potential_table(std::istream& in) {
  std::vector<double> xs;
  std::vector<cplx> vs;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    std::vector<double> cols;
    double val;
    while (ss >> val) cols.push_back(val);
    if (!ss.eof()) fail(ErrorKind::ConfigError, "potential table line " + std::to_string(lineno) + ": not numeric");
    if (cols.empty()) continue;
    if (cols.size() < 2 || cols.size() > 3) {
      fail(ErrorKind::ConfigError, "potential table line " + std::to_string(lineno) + ": expected 2 or 3 columns");
    }
    xs.push_back(cols[0]);
    vs.emplace_back(cols[1], cols.size() == 3 ? cols[2] : 0.0);
  }
  return TabulatedPotential(std::move(xs), std::move(vs));
}

inline TabulatedPotential read_potential_table(const std::string& path) {
  std::ifstream f(path);
  if (!f) fail(ErrorKind::ConfigError, "cannot open potential table " + path);
  return read_potential_table(f);
}

}  // namespace milne::models
