#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

#include "milne/core/types.hpp"
#include "milne/models/model.hpp"

namespace milne {

/// Finite window that carries the whole energy integral of a model at energy E.
struct IntegrationWindow {
  Interval range;
  double last_allowed_lo = 0.0;  // outermost points with Re k^2 > 0 on each side
  double last_allowed_hi = 0.0;
};

inline constexpr double tail_guard = 40.0;    // |x - x0| never exceeds this
inline constexpr double tail_action = 20.0;   // e^{-2 S} suppression of 1/sigma past the turning point

namespace detail {

inline double march_tail(const WaveNumberField& k2, double x0, double dir, double& last_allowed) {
  const double h = 0.02;
  double x = x0, action = 0.0;
  last_allowed = x0;
  while (std::abs(x - x0) < tail_guard) {
    x += dir * h;
    const double kr = k2(x).real();
    if (kr > 0.0) {
      action = 0.0;
      last_allowed = x;
    } else {
      action += h * std::sqrt(-kr);
      if (action >= tail_action && std::abs(x - x0) >= 1.0) break;
    }
  }
  return x;
}

}  // namespace detail

inline IntegrationWindow integration_window(const models::ModelSpec& m, double E) {
  IntegrationWindow w;
  if (std::holds_alternative<models::PoschlTellerPair>(m.variant)) {
    w.range = {m.domain.lo + models::pt_inset, m.domain.hi - models::pt_inset};
    w.last_allowed_lo = w.range.lo;
    w.last_allowed_hi = w.range.hi;
    return w;
  }
  if (!m.infinite_domain()) {
    w.range = m.domain;
    w.last_allowed_lo = m.domain.lo;
    w.last_allowed_hi = m.domain.hi;
    return w;
  }
  const auto k2 = models::local_wavevector(m, E);
  w.range.lo = detail::march_tail(k2, m.anchor, -1.0, w.last_allowed_lo);
  w.range.hi = detail::march_tail(k2, m.anchor, 1.0, w.last_allowed_hi);
  return w;
}

/// min Re V over the domain, sampled on 4001 points (|x - x0| <= tail_guard on
/// infinite sides).
inline double potential_floor(const models::ModelSpec& m) {
  double lo = m.domain.lo, hi = m.domain.hi;
  if (std::holds_alternative<models::PoschlTellerPair>(m.variant)) {
    lo += models::pt_inset;
    hi -= models::pt_inset;
  }
  if (std::isinf(lo)) lo = m.anchor - tail_guard;
  if (std::isinf(hi)) hi = m.anchor + tail_guard;
  double best = std::numeric_limits<double>::infinity();
  const int n = 4000;
  for (int i = 0; i <= n; ++i) best = std::min(best, models::potential(m, lo + (hi - lo) * i / n).real());
  return best;
}

}  // namespace milne
