#pragma once

// Closed-form fundamental solutions. `raw_fundamental` returns the printed pairs;
// `AnalyticPair` recombines them into the pair with psi1(x0) = 1, psi1'(x0) = 0,
// psi2(x0) = 0, psi2'(x0) = lambda used by every energy integral.

#include <array>
#include <utility>
#include <cmath>
#include <string>

#include "milne/core/error.hpp"
#include "milne/core/types.hpp"
#include "milne/models/model.hpp"
#include "milne/models/superpotential.hpp"
#include "milne/specfun/hypergeometric.hpp"
#include "milne/specfun/whittaker.hpp"

namespace milne::models {

struct PairValues {
  cplx psi1, dpsi1, psi2, dpsi2;

  cplx wronskian() const { return psi1 * dpsi2 - dpsi1 * psi2; }
};

namespace detail {

struct ValueDeriv {
  cplx v, d;
};

// psi'' + (eps - s^2 x^2) psi = 0 with z = s x^2:
// even  e^{-z/2} M(1/4 - eps/(4s), 1/2, z),  odd  x e^{-z/2} M(3/4 - eps/(4s), 3/2, z).
inline ValueDeriv parabolic(double eps, double s, double x, bool odd) {
  const double z = s * x * x;
  const cplx a = (odd ? 0.75 : 0.25) - eps / (4.0 * s);
  const double b = odd ? 1.5 : 0.5;
  const double damp = std::exp(-0.5 * z);
  const cplx m0 = specfun::kummer_m(a, b, z);
  const cplx m1 = specfun::kummer_m(a + 1.0, b + 1.0, z);
  const cplx g = damp * m0;
  const cplx dg = damp * (-0.5 * m0 + a / b * m1);  // d/dz
  if (!odd) return {g, 2.0 * s * x * dg};
  return {x * g, g + 2.0 * s * x * x * dg};
}

inline cplx parabolic_value(double eps, double s, double x, bool odd) {
  const double z = s * x * x;
  const cplx a = (odd ? 0.75 : 0.25) - eps / (4.0 * s);
  const cplx g = std::exp(-0.5 * z) * specfun::kummer_m(a, odd ? 1.5 : 0.5, z);
  return odd ? x * g : g;
}

// sin^p x cos^q x 2F1(a, b; c; sin^2 x)
inline ValueDeriv trig_hyp(double p, double q, cplx a, cplx b, cplx c, double x) {
  const double s = std::sin(x), co = std::cos(x), z = s * s, w = co * co;
  const double pre = std::pow(s, p) * std::pow(co, q);
  const cplx F = specfun::gauss_2f1_complement(a, b, c, w);
  const cplx dF = a * b / c * specfun::gauss_2f1_complement(a + 1.0, b + 1.0, c + 1.0, w);
  const cplx v = pre * F;
  return {v, v * (p * co / s - q * s / co) + pre * dF * (2.0 * s * co)};
}

inline cplx trig_hyp_value(double p, double q, cplx a, cplx b, cplx c, double x) {
  const double s = std::sin(x), co = std::cos(x);
  return std::pow(s, p) * std::pow(co, q) * specfun::gauss_2f1_complement(a, b, c, co * co);
}

// sinh^p x cosh^l x 2F1(a, b; c; -sinh^2 x), p in {0, 1}
inline ValueDeriv sech_hyp(int p, double l, cplx a, cplx b, cplx c, double x) {
  const double sh = std::sinh(x), ch = std::cosh(x);
  const double z = -sh * sh;
  const double chl = std::pow(ch, l);
  const double pre = (p == 1 ? sh : 1.0) * chl;
  const double dpre = p == 1 ? chl * ch + l * sh * sh * chl / ch : l * sh * chl / ch;
  const cplx F = specfun::gauss_2f1(a, b, c, z);
  const cplx dF = specfun::gauss_2f1_dz(a, b, c, z);
  return {pre * F, dpre * F + pre * dF * (-2.0 * sh * ch)};
}

struct SechMus {
  cplx minus, plus;
};

inline SechMus sech_mus(double lambda, double E) {
  const cplx r = std::sqrt(cplx(1.0 - 4.0 * E));
  return {(2.0 + 2.0 * lambda - r) / 4.0, (2.0 + 2.0 * lambda + r) / 4.0};
}

inline PairValues sech_minus(double lambda, double E, double x) {
  const auto mu = sech_mus(lambda, E);
  const auto f = sech_hyp(1, lambda, mu.minus, mu.plus, 1.5, x);
  const auto g = sech_hyp(0, lambda, mu.minus - 0.5, mu.plus - 0.5, 0.5, x);
  return {f.v, f.d, g.v, g.d};
}

// Printed sector-+ pair (values only).
inline std::pair<cplx, cplx> sech_plus_values(double lambda, double E, double x) {
  if (E == 0.0) fail(ErrorKind::ZeroEnergy, "sector-+ sech solutions carry 1/sqrt(E)");
  const auto mu = sech_mus(lambda, E);
  const double sh = std::sinh(x), ch = std::cosh(x), z = -sh * sh;
  const cplx I(0.0, 1.0);
  const cplx root = std::sqrt(cplx(E));
  const double pre = std::pow(ch, lambda - 1.0);
  const double s2x = std::sinh(2.0 * x);
  const cplx p1 = pre / (12.0 * root) *
                  (6.0 * (2.0 * ch * ch + (2.0 * lambda - 1.0) * sh * (sh - I)) *
                       specfun::gauss_2f1(mu.minus, mu.plus, 1.5, z) -
                   s2x * s2x / 4.0 * (4.0 * E + 4.0 * lambda * (lambda + 2.0) + 3.0) *
                       specfun::gauss_2f1(mu.minus + 1.0, mu.plus + 1.0, 2.5, z));
  const cplx p2 = pre / (4.0 * root) *
                  (2.0 * (2.0 * lambda - 1.0) * (sh - I) * specfun::gauss_2f1(mu.minus - 0.5, mu.plus - 0.5, 0.5, z) +
                   (1.0 - 4.0 * E - 4.0 * lambda * lambda) * sh * ch * ch *
                       specfun::gauss_2f1(mu.minus + 0.5, mu.plus + 0.5, 1.5, z));
  return {p1, p2};
}

// Derivatives from (L+ psi)' = (U^2 - E) psi + U psi'.
inline PairValues sech_plus(double lambda, double E, double x) {
  const auto [p1, p2] = sech_plus_values(lambda, E, x);
  const cplx root = std::sqrt(cplx(E));
  const auto m = sech_minus(lambda, E, x);
  const cplx u = cplx(-0.5 * std::tanh(x), 0.5 * (1.0 - 2.0 * lambda) / std::cosh(x));
  const cplx d1 = ((u * u - E) * m.psi1 + u * m.dpsi1) / root;
  const cplx d2 = ((u * u - E) * m.psi2 + u * m.dpsi2) / root;
  return {p1, d1, p2, d2};
}

inline std::pair<cplx, cplx> sech_minus_values(double lambda, double E, double x) {
  const auto mu = sech_mus(lambda, E);
  const double sh = std::sinh(x), chl = std::pow(std::cosh(x), lambda), z = -sh * sh;
  return {sh * chl * specfun::gauss_2f1(mu.minus, mu.plus, 1.5, z),
          chl * specfun::gauss_2f1(mu.minus - 0.5, mu.plus - 0.5, 0.5, z)};
}

inline std::pair<cplx, cplx> poschl_teller_values(const PoschlTellerPair& p, double E, double x) {
  const double k = p.kappa, l = p.lambda;
  const cplx Et = std::sqrt(cplx((k + l) * (k + l) + E));
  if (p.sector == Sector::minus) {
    return {trig_hyp_value(k, l, (k + l - Et) / 2.0, (k + l + Et) / 2.0, k + 0.5, x),
            trig_hyp_value(1.0 - k, l, (1.0 - k + l - Et) / 2.0, (1.0 - k + l + Et) / 2.0, 1.5 - k, x)};
  }
  return {trig_hyp_value(k + 1.0, l + 1.0, (2.0 + k + l - Et) / 2.0, (2.0 + k + l + Et) / 2.0, k + 1.5, x),
          trig_hyp_value(-k, l + 1.0, (1.0 - k + l - Et) / 2.0, (1.0 - k + l + Et) / 2.0, 0.5 - k, x)};
}

inline PairValues poschl_teller(const PoschlTellerPair& p, double E, double x) {
  const double k = p.kappa, l = p.lambda;
  const cplx Et = std::sqrt(cplx((k + l) * (k + l) + E));
  ValueDeriv f, g;
  if (p.sector == Sector::minus) {
    f = trig_hyp(k, l, (k + l - Et) / 2.0, (k + l + Et) / 2.0, k + 0.5, x);
    g = trig_hyp(1.0 - k, l, (1.0 - k + l - Et) / 2.0, (1.0 - k + l + Et) / 2.0, 1.5 - k, x);
  } else {
    f = trig_hyp(k + 1.0, l + 1.0, (2.0 + k + l - Et) / 2.0, (2.0 + k + l + Et) / 2.0, k + 1.5, x);
    g = trig_hyp(-k, l + 1.0, (1.0 - k + l - Et) / 2.0, (1.0 - k + l + Et) / 2.0, 0.5 - k, x);
  }
  return {f.v, f.d, g.v, g.d};
}

// Printed Whittaker pair x^{-1/2} {M, W}_{kappa,-1/4}(s x^2); the i Theta(-x) branch makes
// both even in x, so x < 0 mirrors x > 0.
inline PairValues whittaker_pair(double eps, double s, double x) {
  if (x == 0.0) fail(ErrorKind::BranchPoint, "Whittaker pair is singular at x = 0");
  const double ax = std::abs(x), sg = x > 0.0 ? 1.0 : -1.0;
  const double z = s * ax * ax;
  const cplx kap = eps / (4.0 * s);
  const cplx mu = -0.25;
  const double r = 1.0 / std::sqrt(ax);
  const cplx M = specfun::whittaker_m({kap, mu, z}), dM = specfun::whittaker_m_dz({kap, mu, z});
  const cplx W = specfun::whittaker_w({kap, mu, z}), dW = specfun::whittaker_w_dz({kap, mu, z});
  auto d = [&](cplx F, cplx dF) { return sg * (-0.5 * r / ax * F + r * 2.0 * s * ax * dF); };
  return {r * M, d(M, dM), r * W, d(W, dW)};
}

struct ParabolicCoeffs {
  double eps, s;
};

inline ParabolicCoeffs parabolic_coeffs(const ModelSpec& m, double E) {
  if (auto* sw = std::get_if<Swanson>(&m.variant)) {
    return {2.0 * E / sw->mu_plus, std::sqrt(sw->mu_minus / sw->mu_plus)};
  }
  return {E, 1.0};
}

}  // namespace detail

/// The fundamental pairs as printed (Swanson/harmonic: Whittaker M and W forms).
inline PairValues raw_fundamental(const ModelSpec& m, double E, double x) {
  if (std::holds_alternative<Swanson>(m.variant) || std::holds_alternative<Harmonic>(m.variant)) {
    const auto c = detail::parabolic_coeffs(m, E);
    return detail::whittaker_pair(c.eps, c.s, x);
  }
  if (auto* p = std::get_if<PoschlTellerPair>(&m.variant)) return detail::poschl_teller(*p, E, x);
  if (auto* s = std::get_if<SechPair>(&m.variant)) {
    return s->sector == Sector::minus ? detail::sech_minus(s->lambda, E, x) : detail::sech_plus(s->lambda, E, x);
  }
  fail(ErrorKind::NoClosedForm, "tabulated model has no closed-form solutions");
}

/// Canonical closed-form pair of a model at fixed energy.
class AnalyticPair {
 public:
  AnalyticPair(const ModelSpec& m, double E, double lambda = 1.0) : model_(m), E_(E), lambda_(lambda) {
    if (std::holds_alternative<CustomTabulated>(m.variant)) {
      fail(ErrorKind::NoClosedForm, "tabulated model has no closed-form solutions");
    }
    if (lambda == 0.0) fail(ErrorKind::DomainError, "lambda must be nonzero");
    if (std::holds_alternative<Swanson>(m.variant) || std::holds_alternative<Harmonic>(m.variant)) {
      kind_ = Kind::parabolic;
      coeffs_ = detail::parabolic_coeffs(m, E);
    } else if (auto* s = std::get_if<SechPair>(&m.variant)) {
      // sector -: already canonical at 0 (even psi_2^-, odd psi_1^-); sector +: their
      // images under L+ / sqrt(E), i.e. the printed psi_2^+, psi_1^+.
      kind_ = s->sector == Sector::minus ? Kind::sech_minus : Kind::sech_plus;
      if (kind_ == Kind::sech_plus && E == 0.0) fail(ErrorKind::ZeroEnergy, "sector-+ sech pair degenerates at E = 0");
    } else {
      kind_ = Kind::recombined;
      const auto a = raw_fundamental(m, E, m.anchor);
      f0_ = a.psi1;
      df0_ = a.dpsi1;
      g0_ = a.psi2;
      dg0_ = a.dpsi2;
      w_ = a.wronskian();
      if (std::abs(w_) <= 1e-300) fail(ErrorKind::ZeroWronskian, "printed pair is degenerate at E = " + std::to_string(E));
    }
  }

  PairValues operator()(double x) const {
    switch (kind_) {
      case Kind::parabolic: {
        const auto e = detail::parabolic(coeffs_.eps, coeffs_.s, x, false);
        const auto o = detail::parabolic(coeffs_.eps, coeffs_.s, x, true);
        return {e.v, e.d, lambda_ * o.v, lambda_ * o.d};
      }
      case Kind::sech_minus: {
        const auto r = detail::sech_minus(std::get<SechPair>(model_.variant).lambda, E_, x);
        return {r.psi2, r.dpsi2, lambda_ * r.psi1, lambda_ * r.dpsi1};
      }
      case Kind::sech_plus: {
        const auto r = detail::sech_plus(std::get<SechPair>(model_.variant).lambda, E_, x);
        return {r.psi2, r.dpsi2, lambda_ * r.psi1, lambda_ * r.dpsi1};
      }
      case Kind::recombined:
      default: {
        const auto r = raw_fundamental(model_, E_, x);
        return {(dg0_ * r.psi1 - df0_ * r.psi2) / w_, (dg0_ * r.dpsi1 - df0_ * r.dpsi2) / w_,
                lambda_ * (f0_ * r.psi2 - g0_ * r.psi1) / w_, lambda_ * (f0_ * r.dpsi2 - g0_ * r.dpsi1) / w_};
      }
    }
  }

  /// (psi1, psi2) without derivatives.
  std::pair<cplx, cplx> values(double x) const {
    switch (kind_) {
      case Kind::parabolic:
        return {detail::parabolic_value(coeffs_.eps, coeffs_.s, x, false),
                lambda_ * detail::parabolic_value(coeffs_.eps, coeffs_.s, x, true)};
      case Kind::sech_minus: {
        const auto [f, g] = detail::sech_minus_values(std::get<SechPair>(model_.variant).lambda, E_, x);
        return {g, lambda_ * f};
      }
      case Kind::sech_plus: {
        const auto [f, g] = detail::sech_plus_values(std::get<SechPair>(model_.variant).lambda, E_, x);
        return {g, lambda_ * f};
      }
      case Kind::recombined:
      default: {
        const auto [f, g] = detail::poschl_teller_values(std::get<PoschlTellerPair>(model_.variant), E_, x);
        return {(dg0_ * f - df0_ * g) / w_, lambda_ * (f0_ * g - g0_ * f) / w_};
      }
    }
  }

  /// sigma = psi1^2 + (lambda/W)^2 psi2^2 with W = lambda.
  cplx sigma(double x) const {
    const auto [a, b] = values(x);
    return a * a + b * b;
  }

  double lambda() const { return lambda_; }
  double energy() const { return E_; }

 private:
  enum class Kind { parabolic, sech_minus, sech_plus, recombined };
  ModelSpec model_;
  double E_;
  double lambda_;
  Kind kind_ = Kind::recombined;
  detail::ParabolicCoeffs coeffs_{};
  cplx f0_, df0_, g0_, dg0_, w_;
};

/// Anchor values of the pair AnalyticPair evaluates, in closed form.
inline std::array<cplx, 4> pair_anchor_data(const ModelSpec& m, double E, double lambda = 1.0) {
  if (auto* s = std::get_if<SechPair>(&m.variant); s && s->sector == Sector::plus) {
    if (E == 0.0) fail(ErrorKind::ZeroEnergy, "sector-+ sech pair degenerates at E = 0");
    const cplx u = superpotential(m)(m.anchor);
    const cplx root = std::sqrt(cplx(E));
    return {u / root, (u * u - E) / root, lambda / root, lambda * u / root};
  }
  return {cplx(1.0), cplx(0.0), cplx(0.0), cplx(lambda)};
}

/// (psi1, psi1', psi2, psi2') of the canonical pair at x.
inline PairValues analytic_fundamental(const ModelSpec& m, double E, double x, double lambda = 1.0) {
  if (!(x >= m.domain.lo && x <= m.domain.hi)) fail(ErrorKind::DomainError, "x outside the model domain");
  return AnalyticPair(m, E, lambda)(x);
}

}  // namespace milne::models
