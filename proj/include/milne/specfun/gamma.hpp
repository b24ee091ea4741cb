#pragma once

// Complex Gamma function via the Lanczos approximation (g = 7, nine coefficients),
// with the reflection formula for Re(z) < 1/2.

#include <array>
#include <cmath>

#include "milne/core/types.hpp"

namespace milne::specfun {

namespace detail {

inline constexpr double lanczos_g = 7.0;
inline constexpr std::array<double, 9> lanczos_coef = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

// log Gamma(z) for Re(z) >= 1/2.
inline cplx log_gamma_right(cplx z) {
  z -= 1.0;
  cplx x = lanczos_coef[0];
  for (std::size_t i = 1; i < lanczos_coef.size(); ++i) {
    x += lanczos_coef[i] / (z + static_cast<double>(i));
  }
  const cplx t = z + lanczos_g + 0.5;
  return 0.5 * std::log(2.0 * pi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

}  // namespace detail

/// True when z is (to rounding) one of 0, -1, -2, ...
inline bool is_nonpositive_integer(cplx z, double tol = 1e-13) {
  if (std::abs(z.imag()) > tol) return false;
  const double r = std::round(z.real());
  return r <= 0.0 && std::abs(z.real() - r) <= tol * std::max(1.0, std::abs(r));
}

/// log Gamma(z), branch unspecified (only exp() of it is meaningful). Not defined at poles.
inline cplx log_gamma(cplx z) {
  if (z.real() < 0.5) {
    // Gamma(z) Gamma(1-z) = pi / sin(pi z)
    return std::log(pi) - std::log(std::sin(pi * z)) - detail::log_gamma_right(1.0 - z);
  }
  return detail::log_gamma_right(z);
}

inline cplx gamma(cplx z) {
  if (z.real() < 0.5) {
    return pi / (std::sin(pi * z) * std::exp(detail::log_gamma_right(1.0 - z)));
  }
  return std::exp(detail::log_gamma_right(z));
}

/// 1/Gamma(z); entire, exactly zero at the poles of Gamma.
inline cplx rgamma(cplx z) {
  if (is_nonpositive_integer(z, 0.0)) return 0.0;
  if (z.real() < 0.5) {
    return std::sin(pi * z) * std::exp(detail::log_gamma_right(1.0 - z)) / pi;
  }
  return std::exp(-detail::log_gamma_right(z));
}

}  // namespace milne::specfun
