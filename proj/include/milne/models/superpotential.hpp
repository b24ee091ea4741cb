#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <string>

#include "milne/core/error.hpp"
#include "milne/core/types.hpp"
#include "milne/models/model.hpp"

namespace milne::models {

/// Field with its first two derivatives.
struct SmoothField {
  RealField f, df, d2f;
};

/// U = a + i b with a = (ln b)'/2.
struct SuperpotentialSplit {
  RealField a, b, db;
  ComplexField U;
  ComplexField dU;
};

struct SusyPair {
  SuperpotentialSplit split;
  ComplexField v_minus, v_plus;
};

/// Partner potentials generated by b(x); `probe` lists points where b must not vanish.
inline SusyPair susy_from_b(const SmoothField& b, std::span<const double> probe = {}) {
  for (double x : probe) {
    if (b.f(x) == 0.0 || !std::isfinite(b.f(x))) {
      fail(ErrorKind::ZeroCrossing, "b vanishes at x = " + std::to_string(x));
    }
  }
  for (std::size_t i = 1; i < probe.size(); ++i) {
    if (std::signbit(b.f(probe[i])) != std::signbit(b.f(probe[i - 1]))) {
      fail(ErrorKind::ZeroCrossing, "b changes sign between " + std::to_string(probe[i - 1]) + " and " +
                                        std::to_string(probe[i]));
    }
  }
  SusyPair out;
  auto f = b.f, df = b.df, d2f = b.d2f;
  out.split.b = f;
  out.split.db = df;
  out.split.a = [f, df](double x) { return 0.5 * df(x) / f(x); };
  out.split.U = [f, df](double x) { return cplx(0.5 * df(x) / f(x), f(x)); };
  out.split.dU = [f, df, d2f](double x) {
    const double v = f(x), d = df(x);
    return cplx(0.5 * (d2f(x) / v - d * d / (v * v)), d);
  };
  out.v_minus = [f, df, d2f](double x) -> cplx {
    const double v = f(x), d = df(x);
    return 0.75 * d * d / (v * v) - 0.5 * d2f(x) / v - v * v;
  };
  out.v_plus = [f, df, d2f](double x) -> cplx {
    const double v = f(x), d = df(x);
    return cplx(0.5 * d2f(x) / v - 0.25 * d * d / (v * v) - v * v, 2.0 * d);
  };
  return out;
}

/// max over xs of |V_- - (U^2 - U')| and |V_+ - (U^2 + U')|, relative to the term size.
inline double susy_identity_residual(const SusyPair& p, std::span<const double> xs) {
  double worst = 0.0;
  for (double x : xs) {
    const cplx u = p.split.U(x), du = p.split.dU(x);
    const double scale = std::max({1.0, std::abs(u * u), std::abs(du)});
    worst = std::max(worst, std::abs(p.v_minus(x) - (u * u - du)) / scale);
    worst = std::max(worst, std::abs(p.v_plus(x) - (u * u + du)) / scale);
  }
  return worst;
}

/// Superpotential of a built-in SUSY pair.
inline ComplexField superpotential(const ModelSpec& m) {
  if (auto* p = std::get_if<PoschlTellerPair>(&m.variant)) {
    const double k = p->kappa, l = p->lambda;
    return [k, l](double x) { return cplx(l * std::tan(x) - k / std::tan(x), 0.0); };
  }
  if (auto* s = std::get_if<SechPair>(&m.variant)) {
    const double l = s->lambda;
    return [l](double x) { return cplx(-0.5 * std::tanh(x), 0.5 * (1.0 - 2.0 * l) / std::cosh(x)); };
  }
  fail(ErrorKind::DomainError, "model has no superpotential");
}

inline ComplexField superpotential_derivative(const ModelSpec& m) {
  if (auto* p = std::get_if<PoschlTellerPair>(&m.variant)) {
    const double k = p->kappa, l = p->lambda;
    return [k, l](double x) {
      const double c = std::cos(x), s = std::sin(x);
      return cplx(l / (c * c) + k / (s * s), 0.0);
    };
  }
  if (auto* s = std::get_if<SechPair>(&m.variant)) {
    const double l = s->lambda;
    return [l](double x) {
      const double sech = 1.0 / std::cosh(x);
      return cplx(-0.5 * sech * sech, -0.5 * (1.0 - 2.0 * l) * sech * std::tanh(x));
    };
  }
  fail(ErrorKind::DomainError, "model has no superpotential");
}

/// b(x) of the sech pair, (1 - 2 lambda)/2 sech x.
inline SmoothField sech_pair_b(double lambda) {
  const double c = 0.5 * (1.0 - 2.0 * lambda);
  return {[c](double x) { return c / std::cosh(x); },
          [c](double x) { return -c * std::tanh(x) / std::cosh(x); },
          [c](double x) {
            const double sech = 1.0 / std::cosh(x), t = std::tanh(x);
            return c * sech * (t * t - sech * sech);
          }};
}

/// max_i |conj(V(-x_i)) - V(x_i)| on a grid symmetric about 0.
inline double pt_residual(const ComplexField& V, std::span<const double> grid) {
  const std::size_t n = grid.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double a = grid[i], b = grid[n - 1 - i];
    if (std::abs(a + b) > 1e-12 * std::max(1.0, std::abs(a))) {
      fail(ErrorKind::AsymmetricGrid, "grid is not symmetric about 0");
    }
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, std::abs(std::conj(V(grid[n - 1 - i])) - V(grid[i])));
  return worst;
}

}  // namespace milne::models
