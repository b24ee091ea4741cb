#pragma once

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <string>
#include <vector>

#include "milne/core/error.hpp"
#include "milne/milne/extent.hpp"
#include "milne/models/model.hpp"

namespace milne {

/// Classically allowed intervals {x : k^2(x) > 0}; turning points bisected to 1e-10.
inline std::vector<Interval> allowed_region(const models::ModelSpec& m, double E) {
  double lo = m.domain.lo, hi = m.domain.hi;
  if (std::holds_alternative<models::PoschlTellerPair>(m.variant)) {
    lo += models::pt_inset;
    hi -= models::pt_inset;
  }
  if (std::isinf(lo)) lo = m.anchor - tail_guard;
  if (std::isinf(hi)) hi = m.anchor + tail_guard;
  const auto k2 = models::local_wavevector(m, E);
  auto f = [&](double x) { return k2(x).real(); };
  auto turning = [&](double a, double b) {
    double fa = f(a);
    while (b - a > 1e-10) {
      const double c = 0.5 * (a + b);
      const double fc = f(c);
      if ((fc > 0.0) == (fa > 0.0)) {
        a = c;
        fa = fc;
      } else {
        b = c;
      }
    }
    return 0.5 * (a + b);
  };
  std::vector<Interval> out;
  const int n = 8000;
  double prev_x = lo, start = lo;
  bool inside = f(lo) > 0.0;
  for (int i = 1; i <= n; ++i) {
    const double x = lo + (hi - lo) * i / n;
    const bool now = f(x) > 0.0;
    if (now != inside) {
      const double t = turning(prev_x, x);
      if (now) start = t;
      else out.push_back({start, t});
      inside = now;
    }
    prev_x = x;
  }
  if (inside) out.push_back({start, hi});
  return out;
}

/// (1/pi) int sqrt(k^2) over the allowed region.
inline double wkb_integral(const models::ModelSpec& m, double E) {
  if (!models::is_hermitian(m)) fail(ErrorKind::DomainError, "WKB integral needs a real potential");
  const auto region = allowed_region(m, E);
  if (region.empty()) fail(ErrorKind::NoAllowedRegion, "no classically allowed region at E = " + std::to_string(E));
  const auto k2 = models::local_wavevector(m, E);
  static thread_local boost::math::quadrature::tanh_sinh<double> ts;
  double total = 0.0;
  for (const auto& iv : region) {
    auto g = [&](double x) { return std::sqrt(std::max(0.0, k2(x).real())); };
    total += ts.integrate(g, iv.lo, iv.hi, 1e-13);
  }
  return total / pi;
}

}  // namespace milne
