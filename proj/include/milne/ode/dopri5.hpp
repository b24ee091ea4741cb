#pragma once

// Dormand-Prince 5(4) with PI step-size control.
//
// The state is a fixed-size array of real or complex scalars. After each accepted
// step the observer sees (x, y) and may rewrite y in place (used for joint
// rescaling); it returns true when it did, so the FSAL slope is recomputed.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <span>
#include <string>

#include "milne/core/error.hpp"

namespace milne::ode {

template <class Scalar, std::size_t N>
using State = std::array<Scalar, N>;

struct StepControl {
  double rtol = 1e-11;
  double atol = 1e-14;  // absolute floor of the mixed error norm
  double initial_step = 0.0;  // 0: chosen from the interval length
  long max_steps = 20'000'000;
};

struct IntegrationStats {
  long accepted = 0;
  long rejected = 0;
};

namespace detail {

// Butcher tableau (Dormand & Prince 1980).
inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                        a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
inline constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                        b6 = 11.0 / 84;
// b - b_hat (error coefficients)
inline constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                        e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

template <class Scalar, std::size_t N>
State<Scalar, N> axpy(const State<Scalar, N>& y, double h,
                      std::initializer_list<std::pair<double, const State<Scalar, N>*>> terms) {
  State<Scalar, N> out = y;
  for (const auto& [w, k] : terms) {
    if (w == 0.0) continue;
    for (std::size_t i = 0; i < N; ++i) out[i] += (h * w) * (*k)[i];
  }
  return out;
}

}  // namespace detail

/// Integrates y' = f(x, y) from x0 to x1 (either direction), stopping exactly at
/// every point of `stops` that lies strictly between them (they must be ordered
/// in the direction of integration). Returns the final state.
template <class Scalar, std::size_t N, class Rhs, class Observer>
State<Scalar, N> dopri5(Rhs&& f, double x0, double x1, State<Scalar, N> y, const StepControl& ctl,
                        Observer&& observe, std::span<const double> stops = {},
                        IntegrationStats* stats = nullptr) {
  using namespace detail;
  const double dir = x1 >= x0 ? 1.0 : -1.0;
  const double span_len = std::abs(x1 - x0);
  if (span_len == 0.0) return y;

  double x = x0;
  double h = ctl.initial_step > 0.0 ? ctl.initial_step : std::min(1e-2, 1e-3 * std::max(span_len, 1.0));
  h = std::min(h, span_len);
  double err_prev = 1e-4;
  State<Scalar, N> k1 = f(x, y);
  std::size_t next_stop = 0;
  while (next_stop < stops.size() && (stops[next_stop] - x0) * dir <= 0.0) ++next_stop;

  long steps = 0;
  IntegrationStats local;
  while ((x1 - x) * dir > 0.0) {
    if (++steps > ctl.max_steps) {
      fail(ErrorKind::StepUnderflow, "dopri5: step budget exhausted near x = " + std::to_string(x));
    }
    double target = x1;
    if (next_stop < stops.size() && (stops[next_stop] - x) * dir > 0.0 && (x1 - stops[next_stop]) * dir > 0.0) {
      target = stops[next_stop];
    }
    bool hit_target = false;
    const double h_unclipped = h;
    const double min_step = 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x));
    // never leave a remainder shorter than min_step in front of the target
    if (h >= std::abs(target - x) - min_step) {
      h = std::abs(target - x);
      hit_target = true;
    }
    const double hs = dir * h;
    if (h < min_step && !hit_target) {
      fail(ErrorKind::StepUnderflow, "dopri5: step size underflow at x = " + std::to_string(x));
    }

    const auto k2 = f(x + c2 * hs, axpy<Scalar, N>(y, hs, {{a21, &k1}}));
    const auto k3 = f(x + c3 * hs, axpy<Scalar, N>(y, hs, {{a31, &k1}, {a32, &k2}}));
    const auto k4 = f(x + c4 * hs, axpy<Scalar, N>(y, hs, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
    const auto k5 = f(x + c5 * hs, axpy<Scalar, N>(y, hs, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
    const auto k6 = f(x + hs, axpy<Scalar, N>(y, hs, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
    const auto y_new = axpy<Scalar, N>(y, hs, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
    const double x_new = hit_target ? target : x + hs;
    const auto k7 = f(x_new, y_new);

    double err = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const Scalar d = hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      const double sc = ctl.atol + ctl.rtol * std::max(std::abs(y[i]), std::abs(y_new[i]));
      const double r = std::abs(d) / sc;
      err += r * r;
    }
    err = std::sqrt(err / static_cast<double>(N));
    if (!std::isfinite(err)) err = 1e10;

    if (err <= 1.0) {
      ++local.accepted;
      x = x_new;
      y = y_new;
      k1 = k7;
      if (hit_target && target != x1) ++next_stop;
      if (observe(x, y)) k1 = f(x, y);
      const double fac = 0.9 * std::pow(err, -0.7 / 5.0) * std::pow(err_prev, 0.4 / 5.0);
      h *= std::clamp(std::isfinite(fac) ? fac : 5.0, 0.2, 5.0);
      if (hit_target) h = std::max(h, h_unclipped);
      err_prev = std::max(err, 1e-4);
    } else {
      ++local.rejected;
      h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
    }
  }
  if (stats) {
    stats->accepted += local.accepted;
    stats->rejected += local.rejected;
  }
  return y;
}

}  // namespace milne::ode
