#pragma once

#include <cmath>
#include <string>

#include "milne/core/error.hpp"
#include "milne/milne/extent.hpp"
#include "milne/models/model.hpp"
#include "milne/ode/dopri5.hpp"

namespace milne::oracle {

struct ShootingResult {
  double E = 0.0;
  int node_count = 0;
  double log_mismatch = 0.0;  // psi'/psi from the left minus from the right at the match point
};

namespace detail {

inline constexpr double singular_inset = 1e-6;

// Outer start of one side with the log-derivative of the solution that is
// regular (decaying) towards the boundary.
struct Boundary {
  double x = 0.0;
  double log_derivative = 0.0;  // in the direction of increasing x
};

inline Boundary boundary(const models::ModelSpec& m, double E, bool left) {
  const auto k2 = models::local_wavevector(m, E);
  const double end = left ? m.domain.lo : m.domain.hi;
  const double dir = left ? 1.0 : -1.0;  // inward
  if (std::isinf(end)) {
    const auto win = integration_window(m, E);
    const double x = left ? win.range.lo : win.range.hi;
    const double q2 = -k2(x).real();
    if (!(q2 > 0.0)) fail(ErrorKind::IntegrationFailure, "boundary lies in an allowed region");
    return {x, dir * std::sqrt(q2)};
  }
  if (std::holds_alternative<models::PoschlTellerPair>(m.variant)) {
    // psi ~ d^s, s = 1/2 + sqrt(1/4 + g) with V ~ g / d^2 at distance d from the wall
    const double d = singular_inset;
    const double x = end + dir * d;
    const double g = -k2(x).real() * d * d;
    const double s = 0.5 + std::sqrt(0.25 + std::max(0.0, g));
    return {x, dir * s / d};
  }
  return {end, dir * 1e300};  // hard wall: psi = 0
}

struct Sweep {
  double psi = 0.0, dpsi = 0.0;
  int nodes = 0;
};

inline Sweep sweep(const models::ModelSpec& m, double E, const Boundary& b, double x_end) {
  const auto k2 = models::local_wavevector(m, E);
  using S = ode::State<double, 2>;
  S y = std::abs(b.log_derivative) >= 1e300 ? S{0.0, 1.0} : S{1.0, b.log_derivative};
  auto rhs = [&](double x, const S& v) { return S{v[1], -k2(x).real() * v[0]}; };
  Sweep out;
  double last = y[0];
  auto observe = [&](double, S& v) {
    if (v[0] != 0.0 && last != 0.0 && std::signbit(v[0]) != std::signbit(last)) ++out.nodes;
    if (v[0] != 0.0) last = v[0];
    const double mag = std::max(std::abs(v[0]), std::abs(v[1]));
    if (!std::isfinite(mag)) fail(ErrorKind::IntegrationFailure, "shooting solution overflowed");
    if (mag > 1e50) {
      v[0] /= mag;
      v[1] /= mag;
      return true;
    }
    return false;
  };
  ode::StepControl ctl;
  ctl.rtol = 1e-12;
  ctl.atol = 1e-30;
  ctl.initial_step = std::min(1e-3, 0.1 * singular_inset);
  try {
    y = ode::dopri5<double, 2>(rhs, b.x, x_end, y, ctl, observe);
  } catch (const Error& e) {
    fail(ErrorKind::IntegrationFailure, std::string("shooting sweep failed: ") + e.what());
  }
  out.psi = y[0];
  out.dpsi = y[1];
  return out;
}

}  // namespace detail

/// Integrates inward from both boundaries with decaying (or wall-regular) data and
/// compares log-derivatives at the match point.
inline ShootingResult shoot(const models::ModelSpec& m, double E, double match_point) {
  if (!models::is_hermitian(m)) fail(ErrorKind::DomainError, "shooting needs a real potential");
  const auto bl = detail::boundary(m, E, true), br = detail::boundary(m, E, false);
  if (!(bl.x < match_point && match_point < br.x)) {
    fail(ErrorKind::DomainError, "match point " + std::to_string(match_point) + " is not interior");
  }
  const auto l = detail::sweep(m, E, bl, match_point);
  const auto r = detail::sweep(m, E, br, match_point);
  ShootingResult out;
  out.E = E;
  out.node_count = l.nodes + r.nodes;
  out.log_mismatch = l.dpsi / l.psi - r.dpsi / r.psi;
  return out;
}

/// Sign changes of the solution launched from the left boundary across the whole
/// domain: the number of levels below E (Sturm).
inline int levels_below(const models::ModelSpec& m, double E) {
  const auto bl = detail::boundary(m, E, true), br = detail::boundary(m, E, false);
  return detail::sweep(m, E, bl, br.x).nodes;
}

/// Level n of a Hermitian model, bisected on the node count to tol * max(1, |E|).
inline double oracle_eigenvalue(const models::ModelSpec& m, int n, double tol = 1e-10) {
  if (!models::is_hermitian(m)) fail(ErrorKind::DomainError, "oracle needs a real potential");
  if (n < 0) fail(ErrorKind::LevelOutOfRange, "n must be non-negative");
  double lo = potential_floor(m);
  const double cap = models::continuum_threshold(m);
  double span = 1.0, hi = lo + span;
  for (int k = 0;; ++k) {
    if (hi >= cap) hi = cap - 1e-9;
    if (levels_below(m, hi) >= n + 1) break;
    if (hi >= cap - 1e-9 || k == 60) {
      fail(ErrorKind::BracketNotFound, "no level " + std::to_string(n) + " below E = " + std::to_string(hi));
    }
    lo = hi;
    span *= 2.0;
    hi = lo + span;
  }
  for (int it = 0; it < 200 && hi - lo > tol * std::max(1.0, std::abs(0.5 * (lo + hi))); ++it) {
    const double mid = 0.5 * (lo + hi);
    (levels_below(m, mid) >= n + 1 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace milne::oracle
