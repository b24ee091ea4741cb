#pragma once

// Gauss hypergeometric 2F1 and Kummer confluent M in double precision.
//
// 2F1 is summed directly for |z| <= 1/2 and otherwise mapped into that disc by
// the Pfaff transformation or one of the 1-z, 1/z, 1/(1-z) connection formulas.
// When a connection formula is degenerate (the relevant parameter difference is
// an integer) the value is taken as the symmetric limit of two nearby
// non-degenerate evaluations.

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <optional>
#include <string>

#include "milne/core/error.hpp"
#include "milne/core/types.hpp"
#include "milne/specfun/gamma.hpp"
#include "milne/specfun/summation.hpp"

namespace milne::specfun {

struct HypergeometricParams {
  cplx a;
  cplx b;
  cplx c;
  cplx z;
};

inline constexpr int series_term_cap = 10'000;
inline constexpr double series_rel_cutoff = 1e-16;
inline constexpr int series_quiet_terms = 3;

namespace detail {

inline std::string fmt(cplx v) {
  return "(" + std::to_string(v.real()) + "," + std::to_string(v.imag()) + ")";
}

/// If z is a non-positive integer -n, returns n.
inline std::optional<int> nonpositive_integer_index(cplx z) {
  if (!is_nonpositive_integer(z)) return std::nullopt;
  return static_cast<int>(-std::round(z.real()));
}

inline bool near_integer(cplx z, double tol) {
  return std::abs(z.imag()) < tol && std::abs(z.real() - std::round(z.real())) < tol;
}

/// Gamma(n1) Gamma(n2) / (Gamma(d1) Gamma(d2)); zero when a denominator sits on a pole.
inline cplx gamma_ratio(std::initializer_list<cplx> num, std::initializer_list<cplx> den) {
  for (cplx d : den) {
    if (is_nonpositive_integer(d, 0.0)) return 0.0;
  }
  double biggest = 0.0;
  for (cplx v : num) biggest = std::max(biggest, std::abs(v));
  for (cplx v : den) biggest = std::max(biggest, std::abs(v));
  if (biggest < 40.0) {
    cplx r = 1.0;
    for (cplx v : num) r *= gamma(v);
    for (cplx v : den) r *= rgamma(v);
    return r;
  }
  cplx lg = 0.0;
  for (cplx v : num) lg += log_gamma(v);
  for (cplx v : den) {
    if (v.real() < 0.5) {
      // 1/Gamma may vanish to rounding here.
      const cplx rv = rgamma(v);
      if (rv == cplx(0.0)) return 0.0;
      lg += std::log(rv);
      continue;
    }
    lg -= log_gamma(v);
  }
  return std::exp(lg);
}

/// Direct power series; `terms` receives the number of terms used.
inline cplx series_2f1(cplx a, cplx b, cplx c, cplx z, int* terms = nullptr) {
  const auto na = nonpositive_integer_index(a);
  const auto nb = nonpositive_integer_index(b);
  std::optional<int> poly;
  if (na) poly = *na;
  if (nb) poly = poly ? std::min(*poly, *nb) : *nb;

  if (const auto nc = nonpositive_integer_index(c)) {
    if (!poly || *poly > *nc) {
      fail(ErrorKind::PoleError, "2F1: c = " + fmt(c) + " is a pole of the series");
    }
  }

  CompensatedSum sum;
  cplx term = 1.0;
  sum.add(term);
  int quiet = 0;
  int k = 0;
  const int cap = poly ? *poly : series_term_cap;
  for (; k < cap; ++k) {
    const double kk = static_cast<double>(k);
    term *= (a + kk) * (b + kk) / ((c + kk) * (kk + 1.0)) * z;
    sum.add(term);
    if (poly) continue;
    const double s = std::abs(sum.value());
    if (std::abs(term) <= series_rel_cutoff * s || term == cplx(0.0)) {
      if (++quiet >= series_quiet_terms) break;
    } else {
      quiet = 0;
    }
  }
  if (!poly && k >= series_term_cap) {
    fail(ErrorKind::NonConvergence, "2F1 series did not converge at z = " + fmt(z));
  }
  if (terms) *terms = k + 1;
  return sum.value();
}

inline cplx hyp2f1_dispatch(cplx a, cplx b, cplx c, cplx z, int depth);

// Limit for degenerate connection formulas: symmetric shifts of a by +-h and
// +-2h, Richardson-combined to cancel the O(h^2) term.
inline cplx hyp2f1_limit(cplx a, cplx b, cplx c, cplx z, int depth) {
  constexpr double h = 1e-4;
  if (depth > 1) fail(ErrorKind::NonConvergence, "2F1: nested degenerate connection");
  const cplx s1 = 0.5 * (hyp2f1_dispatch(a + h, b, c, z, depth + 1) +
                         hyp2f1_dispatch(a - h, b, c, z, depth + 1));
  const cplx s2 = 0.5 * (hyp2f1_dispatch(a + 2.0 * h, b, c, z, depth + 1) +
                         hyp2f1_dispatch(a - 2.0 * h, b, c, z, depth + 1));
  return (4.0 * s1 - s2) / 3.0;
}

inline constexpr double degenerate_tol = 1e-6;

// 2F1 at z = 1 - w, with w supplied directly so that z close to 1 keeps its digits.
inline cplx hyp2f1_complement(cplx a, cplx b, cplx c, cplx w, int depth) {
  const cplx d = c - a - b;
  if (near_integer(d, degenerate_tol)) {
    constexpr double h = 1e-4;
    if (depth > 1) fail(ErrorKind::NonConvergence, "2F1: nested degenerate connection");
    auto at = [&](double s) { return hyp2f1_complement(a + s, b, c, w, depth + 1); };
    const cplx s1 = 0.5 * (at(h) + at(-h));
    const cplx s2 = 0.5 * (at(2.0 * h) + at(-2.0 * h));
    return (4.0 * s1 - s2) / 3.0;
  }
  const cplx t1 = gamma_ratio({c, d}, {c - a, c - b});
  const cplx t2 = gamma_ratio({c, -d}, {a, b});
  cplx r = 0.0;
  if (t1 != cplx(0.0)) r += t1 * series_2f1(a, b, 1.0 - d, w);
  if (t2 != cplx(0.0)) r += t2 * std::pow(w, d) * series_2f1(c - a, c - b, d + 1.0, w);
  return r;
}

inline cplx hyp2f1_one_minus_z(cplx a, cplx b, cplx c, cplx z, int depth) {
  return hyp2f1_complement(a, b, c, 1.0 - z, depth);
}

inline cplx hyp2f1_inverse_z(cplx a, cplx b, cplx c, cplx z, int depth) {
  if (near_integer(b - a, degenerate_tol)) return hyp2f1_limit(a, b, c, z, depth);
  const cplx w = 1.0 / z;
  const cplx t1 = gamma_ratio({c, b - a}, {b, c - a});
  const cplx t2 = gamma_ratio({c, a - b}, {a, c - b});
  cplx r = 0.0;
  if (t1 != cplx(0.0)) r += t1 * std::pow(-z, -a) * series_2f1(a, a - c + 1.0, a - b + 1.0, w);
  if (t2 != cplx(0.0)) r += t2 * std::pow(-z, -b) * series_2f1(b, b - c + 1.0, b - a + 1.0, w);
  return r;
}

inline cplx hyp2f1_inverse_one_minus_z(cplx a, cplx b, cplx c, cplx z, int depth) {
  if (near_integer(b - a, degenerate_tol)) return hyp2f1_limit(a, b, c, z, depth);
  const cplx om = 1.0 - z;
  const cplx w = 1.0 / om;
  const cplx t1 = gamma_ratio({c, b - a}, {b, c - a});
  const cplx t2 = gamma_ratio({c, a - b}, {a, c - b});
  cplx r = 0.0;
  if (t1 != cplx(0.0)) r += t1 * std::exp(-a * std::log(om)) * series_2f1(a, c - b, a - b + 1.0, w);
  if (t2 != cplx(0.0)) r += t2 * std::exp(-b * std::log(om)) * series_2f1(b, c - a, b - a + 1.0, w);
  return r;
}

inline cplx hyp2f1_dispatch(cplx a, cplx b, cplx c, cplx z, int depth) {
  const bool poly = is_nonpositive_integer(a) || is_nonpositive_integer(b);
  if (z == cplx(0.0)) return 1.0;
  if (poly || std::abs(z) <= 0.5) return series_2f1(a, b, c, z);

  if (z == cplx(1.0)) {
    if ((c - a - b).real() <= 0.0) {
      fail(ErrorKind::NonConvergence, "2F1 diverges at z = 1 with Re(c-a-b) <= 0");
    }
    return gamma_ratio({c, c - a - b}, {c - a, c - b});
  }

  const cplx pfaff = z / (z - 1.0);
  if (std::abs(pfaff) <= 0.5) {
    // Pfaff: (1-z)^{-a} 2F1(a, c-b; c; z/(z-1))
    return std::exp(-a * std::log(1.0 - z)) * series_2f1(a, c - b, c, pfaff);
  }
  if (std::abs(1.0 - z) <= 0.5) return hyp2f1_one_minus_z(a, b, c, z, depth);
  if (std::abs(z) >= 2.0) return hyp2f1_inverse_z(a, b, c, z, depth);
  if (std::abs(1.0 - z) >= 2.0) return hyp2f1_inverse_one_minus_z(a, b, c, z, depth);

  // Remaining region hugs |z| = 1 away from the real axis. Euler transformation
  // when it improves convergence, else the plain series (slow but convergent for |z| < 1).
  if (std::abs(z) < 1.0) {
    if ((c - a - b).real() > 0.0) return series_2f1(a, b, c, z);
    return std::pow(1.0 - z, c - a - b) * series_2f1(c - a, c - b, c, z);
  }
  fail(ErrorKind::NonConvergence, "2F1: no convergent representation for z = " + fmt(z));
}

}  // namespace detail

/// Gauss hypergeometric function 2F1(a, b; c; z) (principal branch, cut along z > 1).
inline cplx gauss_2f1(const HypergeometricParams& p) {
  return detail::hyp2f1_dispatch(p.a, p.b, p.c, p.z, 0);
}

inline cplx gauss_2f1(cplx a, cplx b, cplx c, cplx z) { return gauss_2f1({a, b, c, z}); }

/// 2F1(a, b; c; 1 - w) for |w| <= 1/2, with w passed exactly.
inline cplx gauss_2f1_complement(cplx a, cplx b, cplx c, cplx w) {
  if (std::abs(w) > 0.5) return gauss_2f1(a, b, c, 1.0 - w);
  if (is_nonpositive_integer(a) || is_nonpositive_integer(b)) return detail::series_2f1(a, b, c, 1.0 - w);
  if (w == cplx(0.0)) return gauss_2f1(a, b, c, 1.0);
  return detail::hyp2f1_complement(a, b, c, w, 0);
}

/// d/dz 2F1(a, b; c; z) = (ab/c) 2F1(a+1, b+1; c+1; z).
inline cplx gauss_2f1_dz(cplx a, cplx b, cplx c, cplx z) {
  if (a == cplx(0.0) || b == cplx(0.0)) return 0.0;
  return a * b / c * gauss_2f1(a + 1.0, b + 1.0, c + 1.0, z);
}

// ---------------------------------------------------------------------------
// Kummer confluent hypergeometric M(a, b, z) = 1F1(a; b; z)
// ---------------------------------------------------------------------------

struct KummerResult {
  cplx value;
  double error_estimate = 0.0;  // relative
  bool asymptotic = false;
  bool accuracy_loss = false;   // asymptotic series stalled above 1e-12
};

inline constexpr double kummer_series_radius = 50.0;

namespace detail {

inline cplx series_1f1(cplx a, cplx b, cplx z) {
  const auto na = nonpositive_integer_index(a);
  if (const auto nb = nonpositive_integer_index(b)) {
    if (!na || *na > *nb) {
      fail(ErrorKind::PoleError, "M(a,b,z): b = " + fmt(b) + " is a pole");
    }
  }
  CompensatedSum sum;
  cplx term = 1.0;
  sum.add(term);
  int quiet = 0;
  const int cap = na ? *na : series_term_cap;
  int k = 0;
  for (; k < cap; ++k) {
    const double kk = static_cast<double>(k);
    term *= (a + kk) / ((b + kk) * (kk + 1.0)) * z;
    sum.add(term);
    if (na) continue;
    if (std::abs(term) <= series_rel_cutoff * std::abs(sum.value()) || term == cplx(0.0)) {
      if (++quiet >= series_quiet_terms) break;
    } else {
      quiet = 0;
    }
  }
  if (!na && k >= series_term_cap) {
    fail(ErrorKind::NonConvergence, "M(a,b,z) series did not converge at z = " + fmt(z));
  }
  return sum.value();
}

// Asymptotic sum  sum_s (p)_s (q)_s / s! * x^s, truncated at its smallest term.
inline std::pair<cplx, double> asymptotic_sum(cplx p, cplx q, cplx x) {
  CompensatedSum sum;
  cplx term = 1.0;
  sum.add(term);
  double last = 1.0;
  for (int s = 0; s < 200; ++s) {
    const double ss = static_cast<double>(s);
    const cplx next = term * (p + ss) * (q + ss) / (ss + 1.0) * x;
    if (std::abs(next) >= last && s > 0) break;
    term = next;
    last = std::abs(term);
    sum.add(term);
    if (last < 1e-17 * std::abs(sum.value()) || term == cplx(0.0)) break;
  }
  return {sum.value(), last / std::max(std::abs(sum.value()), 1e-300)};
}

}  // namespace detail

/// M(a, b, z) with diagnostics: series (with Kummer's transformation for Re z < 0)
/// up to |z| = 50, asymptotic expansion beyond.
inline KummerResult kummer_m_checked(cplx a, cplx b, cplx z) {
  if (is_nonpositive_integer(b)) {
    const auto na = detail::nonpositive_integer_index(a);
    const auto nb = detail::nonpositive_integer_index(b);
    if (!na || *na > *nb) fail(ErrorKind::PoleError, "M(a,b,z): b = " + detail::fmt(b) + " is a pole");
  }
  if (z == cplx(0.0)) return {1.0};
  const bool poly = is_nonpositive_integer(a);
  if (poly || std::abs(z) <= kummer_series_radius) {
    if (z.real() < 0.0 && !poly) {
      // Kummer: M(a,b,z) = e^z M(b-a, b, -z) avoids alternating cancellation.
      return {std::exp(z) * detail::series_1f1(b - a, b, -z)};
    }
    return {detail::series_1f1(a, b, z)};
  }
  if (z.real() < 0.0) {
    KummerResult r = kummer_m_checked(b - a, b, -z);
    r.value *= std::exp(z);
    return r;
  }
  // Large |z|, Re z >= 0.
  const cplx gb = gamma(b);
  const auto [s1, e1] = detail::asymptotic_sum(1.0 - a, b - a, 1.0 / z);
  const auto [s2, e2] = detail::asymptotic_sum(a, a - b + 1.0, -1.0 / z);
  const cplx ra = rgamma(a);
  const cplx rba = rgamma(b - a);
  // Recessive branch factor: e^{+i pi a} above the real axis, e^{-i pi a} below,
  // their mean on it.
  cplx phase;
  if (z.imag() > 0.0) {
    phase = std::exp(cplx(0.0, pi) * a);
  } else if (z.imag() < 0.0) {
    phase = std::exp(cplx(0.0, -pi) * a);
  } else {
    phase = std::cos(pi * a);
  }
  const cplx dominant = ra * std::exp(z + (a - b) * std::log(z)) * s1;
  const cplx recessive = rba * phase * std::exp(-a * std::log(z)) * s2;
  KummerResult r;
  r.value = gb * (dominant + recessive);
  r.asymptotic = true;
  const double mag = std::abs(dominant) + std::abs(recessive);
  r.error_estimate = (std::abs(dominant) * e1 + std::abs(recessive) * e2) / std::max(mag, 1e-300);
  r.accuracy_loss = r.error_estimate > 1e-12;
  return r;
}

inline cplx kummer_m(cplx a, cplx b, cplx z) { return kummer_m_checked(a, b, z).value; }

}  // namespace milne::specfun
