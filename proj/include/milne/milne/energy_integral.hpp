#pragma once

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <mutex>
#include <string>
#include <tuple>

#include "milne/core/error.hpp"
#include "milne/core/types.hpp"
#include "milne/milne/extent.hpp"
#include "milne/models/analytic.hpp"
#include "milne/models/model.hpp"
#include "milne/ode/fundamental_pair.hpp"

namespace milne {

enum class Backend { analytic, numeric };

inline std::string to_string(Backend b) { return b == Backend::analytic ? "analytic" : "numeric"; }

inline constexpr double default_quad_tol = 1e-10;
inline constexpr double im_residual_threshold = 1e-6;

/// Quadrature tolerance, overridable through MILNE_QUAD_TOL.
inline double quad_tol_from_env() {
  if (const char* s = std::getenv("MILNE_QUAD_TOL")) {
    char* end = nullptr;
    const double v = std::strtod(s, &end);
    if (end != s && *end == '\0' && v > 0.0 && std::isfinite(v)) return v;
    fail(ErrorKind::ConfigError, std::string("MILNE_QUAD_TOL is not a positive number: ") + s);
  }
  return default_quad_tol;
}

struct EnergyIntegralSample {
  double E = 0.0;
  double I = 0.0;
  double im_residual = 0.0;
  double quadrature_error = 0.0;
  Backend backend = Backend::analytic;
  cplx raw;  // (W/pi) times the complex integral
  int branch_offset = 0;  // integer added to Re raw by EnergyCurve
};

struct EnergyIntegralOptions {
  double quad_tol = default_quad_tol;
  double lambda = 1.0;
  bool check_imaginary = true;
};

namespace detail {

// Below this |E| the sector-+ sech pair degenerates (it divides by sqrt(E) and the
// two solutions become parallel). I(E) is extrapolated from three nodes on the same
// side of zero; E = 0 itself takes the limit from below.
inline constexpr double sech_plus_gap = 1e-4;

inline bool is_sech_plus(const models::ModelSpec& m) {
  auto* s = std::get_if<models::SechPair>(&m.variant);
  return s && s->sector == models::Sector::plus;
}

struct Accumulated {
  cplx value;
  double error = 0.0;
};

template <class F>
cplx panel_once(boost::math::quadrature::tanh_sinh<double>& ts, const F& f, double a, double b, double tol, double& e,
                double& l1) {
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  auto g = [&](double t) { return half * f(mid + half * t); };
  e = 0.0;
  l1 = 0.0;
  const cplx v = ts.integrate(g, tol, &e, &l1);
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
    fail(ErrorKind::QuadratureFailure, "non-finite panel on [" + std::to_string(a) + ", " + std::to_string(b) + "]");
  }
  return v;
}

// Halves [a, b] while the error estimate exceeds tol relative to the panel. Stops when
// halving no longer helps: the integrand is then noisy at that level and the estimate
// is already the noise floor.
template <class F>
cplx refine(boost::math::quadrature::tanh_sinh<double>& ts, const F& f, double a, double b, cplx v, double e, double l1,
            double tol, int depth, double& err) {
  if (e <= 10.0 * tol * std::max(l1, 1e-300) || depth == 30) {
    err += e;
    return v;
  }
  const double mid = 0.5 * (a + b);
  double el, ll, er, lr;
  const cplx vl = panel_once(ts, f, a, mid, tol, el, ll);
  const cplx vr = panel_once(ts, f, mid, b, tol, er, lr);
  if (el + er > 0.5 * e) {
    err += el + er;
    return vl + vr;
  }
  return refine(ts, f, a, mid, vl, el, ll, tol, depth + 1, err) + refine(ts, f, mid, b, vr, er, lr, tol, depth + 1, err);
}

template <class F>
cplx panel(boost::math::quadrature::tanh_sinh<double>& ts, const F& f, double a, double b, double tol, int depth,
           double& err) {
  double e, l1;
  const cplx v = panel_once(ts, f, a, b, tol, e, l1);
  return refine(ts, f, a, b, v, e, l1, tol, depth, err);
}

// Integrates 1/sigma panel by panel from the anchor to `end`.
template <class Sigma>
Accumulated integrate_side(const Sigma& sigma, double x0, double end, double last_allowed, bool finite_side,
                           double max_width, double tol) {
  Accumulated acc;
  if (end == x0) return acc;
  static thread_local boost::math::quadrature::tanh_sinh<double> ts;
  const double dir = end > x0 ? 1.0 : -1.0;
  const double len = std::abs(end - x0);
  const double width = finite_side ? len / std::ceil(len / std::min(0.25, max_width)) : std::min(0.5, max_width);
  const double lo_clip = std::min(x0, end), hi_clip = std::max(x0, end);
  auto f = [&](double x) -> cplx {
    x = std::clamp(x, lo_clip, hi_clip);
    return 1.0 / sigma(x);
  };
  double a = x0;
  while ((end - a) * dir > 1e-14 * std::max(1.0, std::abs(a))) {
    double b = a + dir * width;
    if ((b - end) * dir > -1e-9 * width) b = end;
    double err = 0.0;
    const cplx part = dir * panel(ts, f, std::min(a, b), std::max(a, b), tol, 0, err);
    acc.value += part;
    acc.error += err;
    a = b;
    const bool past_turning = (a - last_allowed) * dir > 0.0;
    if (!finite_side && past_turning && std::abs(part) < 1e-12 * std::abs(acc.value)) break;
  }
  return acc;
}

inline EnergyIntegralSample analytic_integral(const models::ModelSpec& m, double E, const EnergyIntegralOptions& opt) {
  const models::AnalyticPair pair(m, E, opt.lambda);
  const auto win = integration_window(m, E);
  const bool finite = !m.infinite_domain();
  auto sigma = [&](double x) { return pair.sigma(x); };
  // panels no wider than ~ a quarter of the shortest local wavelength
  const auto k2 = models::local_wavevector(m, E);
  double k2_max = 0.0;
  for (int i = 0; i <= 200; ++i) {
    k2_max = std::max(k2_max, k2(win.range.lo + win.range.width() * i / 200.0).real());
  }
  const double max_width = k2_max > 0.0 ? 1.5 / std::sqrt(k2_max) : 0.5;
  const auto left =
      integrate_side(sigma, m.anchor, win.range.lo, win.last_allowed_lo, finite, max_width, opt.quad_tol);
  const auto right =
      integrate_side(sigma, m.anchor, win.range.hi, win.last_allowed_hi, finite, max_width, opt.quad_tol);
  // left was integrated anchor -> lo, i.e. carries the opposite orientation
  const cplx total = right.value - left.value;
  EnergyIntegralSample s;
  s.E = E;
  s.backend = Backend::analytic;
  s.raw = opt.lambda / pi * total;
  s.quadrature_error = std::abs(opt.lambda) / pi * (left.error + right.error);
  return s;
}

inline EnergyIntegralSample numeric_integral(const models::ModelSpec& m, double E, const EnergyIntegralOptions& opt) {
  const auto win = integration_window(m, E);
  const auto field = models::local_wavevector(m, E);
  ode::PairOptions po;
  po.control.atol = 1e-14;
  const double rtol = std::min(1e-11, 0.1 * opt.quad_tol);
  const auto init = models::pair_anchor_data(m, E, opt.lambda);
  const auto pair = ode::integrate_pair_from(field, win.range, m.anchor, init, opt.lambda, rtol, po);
  EnergyIntegralSample s;
  s.E = E;
  s.backend = Backend::numeric;
  s.raw = opt.lambda / pi * pair.total_sigma_integral();
  s.quadrature_error = 10.0 * rtol * std::abs(s.raw);
  return s;
}

inline EnergyIntegralSample direct_integral(const models::ModelSpec& m, double E, Backend backend,
                                            const EnergyIntegralOptions& opt) {
  return backend == Backend::analytic ? analytic_integral(m, E, opt) : numeric_integral(m, E, opt);
}

// The extrapolation nodes are expensive (the pair is nearly degenerate there) and
// shared by every energy in the gap, so they are memoized.
inline EnergyIntegralSample gap_node(const models::ModelSpec& m, double E, Backend backend,
                                     const EnergyIntegralOptions& opt) {
  using Key = std::tuple<double, double, int, double, double>;
  static std::mutex mutex;
  static std::map<Key, EnergyIntegralSample> cache;
  const Key key{std::get<models::SechPair>(m.variant).lambda, E, static_cast<int>(backend), opt.quad_tol, opt.lambda};
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  const auto s = direct_integral(m, E, backend, opt);
  std::lock_guard lock(mutex);
  return cache.emplace(key, s).first->second;
}

inline EnergyIntegralSample raw_energy_integral(const models::ModelSpec& m, double E, Backend backend,
                                                const EnergyIntegralOptions& opt) {
  if (!is_sech_plus(m) || std::abs(E) >= sech_plus_gap) return direct_integral(m, E, backend, opt);
  const double side = E > 0.0 ? 1.0 : -1.0;
  const double g = sech_plus_gap;
  const auto f1 = gap_node(m, side * g, backend, opt);
  const auto f2 = gap_node(m, side * 2.0 * g, backend, opt);
  const auto f3 = gap_node(m, side * 3.0 * g, backend, opt);
  // Lagrange weights at t = |E| / g for nodes t = 1, 2, 3
  const double t = std::abs(E) / g;
  const double w1 = (t - 2.0) * (t - 3.0) / 2.0;
  const double w2 = -(t - 1.0) * (t - 3.0);
  const double w3 = (t - 1.0) * (t - 2.0) / 2.0;
  EnergyIntegralSample s = f1;
  s.E = E;
  s.raw = w1 * f1.raw + w2 * f2.raw + w3 * f3.raw;
  s.quadrature_error = (std::abs(w1) + std::abs(w2) + std::abs(w3)) *
                       std::max({f1.quadrature_error, f2.quadrature_error, f3.quadrature_error});
  return s;
}

}  // namespace detail

/// I(E) = Re[(W/pi) int 1/sigma] over the model domain; |Im| is reported as im_residual.
inline EnergyIntegralSample energy_integral(const models::ModelSpec& m, double E, Backend backend,
                                            const EnergyIntegralOptions& opt = {}) {
  if (!std::isfinite(E)) fail(ErrorKind::DomainError, "energy must be finite");
  if (!(opt.quad_tol > 0.0)) fail(ErrorKind::DomainError, "quadrature tolerance must be positive");
  if (backend == Backend::analytic && std::holds_alternative<models::CustomTabulated>(m.variant)) {
    fail(ErrorKind::NoClosedForm, "tabulated model supports only the numeric backend");
  }
  auto s = detail::raw_energy_integral(m, E, backend, opt);
  s.I = s.raw.real();
  s.im_residual = std::abs(s.raw.imag());
  if (!std::isfinite(s.I)) fail(ErrorKind::QuadratureFailure, "non-finite integral at E = " + std::to_string(E));
  if (opt.check_imaginary && s.im_residual > im_residual_threshold * std::max(1.0, std::abs(s.I))) {
    fail(ErrorKind::ImaginaryPartTooLarge,
         "|Im I| = " + std::to_string(s.im_residual) + " at E = " + std::to_string(E));
  }
  return s;
}

inline EnergyIntegralSample energy_integral(const models::ModelSpec& m, double E, Backend backend, double quad_tol) {
  EnergyIntegralOptions opt;
  opt.quad_tol = quad_tol;
  return energy_integral(m, E, backend, opt);
}

}  // namespace milne
