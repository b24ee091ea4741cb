#pragma once

#include <complex>
#include <functional>
#include <numbers>

namespace milne {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;

/// Complex local wavevector k^2(x) = kappa(x) + i tau(x) of a model at a fixed energy.
using WaveNumberField = std::function<cplx(double)>;

/// Real scalar field on the line (kappa alone, b(x), a(x), ...).
using RealField = std::function<double(double)>;

/// Complex scalar field on the line (superpotential U, potential V, ...).
using ComplexField = std::function<cplx(double)>;

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  constexpr double width() const { return hi - lo; }
  constexpr bool contains(double x) const { return x >= lo && x <= hi; }
};

}  // namespace milne
