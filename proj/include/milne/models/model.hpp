#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "milne/core/error.hpp"
#include "milne/core/types.hpp"
#include "milne/models/tabulated.hpp"

namespace milne::models {

enum class Sector { minus, plus };

inline std::string to_string(Sector s) { return s == Sector::minus ? "minus" : "plus"; }

struct Swanson {
  double omega = 0.5, alpha = 0.125, beta = 0.25;
  double dyson_lambda = 0.0;
  double mu_plus = 1.0, mu_minus = 1.0;  // filled by make_model
};

struct PoschlTellerPair {
  double kappa = 2.0, lambda = 3.0;
  Sector sector = Sector::minus;
};

struct SechPair {
  double lambda = 7.5;
  Sector sector = Sector::minus;
};

/// psi'' + (E - x^2) psi = 0.
struct Harmonic {};

struct CustomTabulated {
  std::shared_ptr<const TabulatedPotential> table;
};

using Variant = std::variant<Swanson, PoschlTellerPair, SechPair, Harmonic, CustomTabulated>;

struct ModelSpec {
  Variant variant;
  Interval domain;
  double anchor = 0.0;

  bool infinite_domain() const { return std::isinf(domain.lo) || std::isinf(domain.hi); }
};

inline constexpr double inf = std::numeric_limits<double>::infinity();
inline constexpr double pt_inset = 1e-8;

struct SwansonMu {
  double mu_plus, mu_minus;
};

/// Hermitian-counterpart coefficients of the Swanson Hamiltonian. The square root is
/// carried as sign(D) sqrt(D^2 - (1-l^2)(a-b)^2), D = a+b-l w, which is the printed
/// form with D pulled inside and stays finite at D = 0.
inline SwansonMu swanson_mu(double omega, double alpha, double beta, double dyson_lambda) {
  const double l = dyson_lambda;
  if (std::abs(1.0 - l) == 0.0 || std::abs(1.0 + l) == 0.0 || omega == 0.0) {
    fail(ErrorKind::DegenerateDenominator, "(1 +- lambda) omega^(+-1) vanishes");
  }
  const double D = alpha + beta - l * omega;
  const double rad = D * D - (1.0 - l * l) * (alpha - beta) * (alpha - beta);
  if (rad < 0.0) fail(ErrorKind::ComplexBranch, "negative radicand in mu formula");
  const double root = std::copysign(std::sqrt(rad), D);
  const double base = -l * (alpha + beta) + omega;
  SwansonMu mu{(base - root) / ((1.0 + l) * omega), (base + root) * omega / (1.0 - l)};
  const double product = omega * omega - 4.0 * alpha * beta;
  if (std::abs(mu.mu_plus * mu.mu_minus - product) > 1e-12 * std::max(1.0, std::abs(product))) {
    fail(ErrorKind::ComplexBranch, "mu_+ mu_- differs from omega^2 - 4 alpha beta");
  }
  return mu;
}

inline ModelSpec make_model(Variant v) {
  ModelSpec m;
  if (auto* s = std::get_if<Swanson>(&v)) {
    if (s->omega * s->omega < 4.0 * s->alpha * s->beta) {
      fail(ErrorKind::ParameterOutOfRange, "omega^2 >= 4 alpha beta violated");
    }
    if (!(s->dyson_lambda >= -1.0 && s->dyson_lambda <= 1.0)) {
      fail(ErrorKind::ParameterOutOfRange, "dyson lambda must lie in [-1, 1]");
    }
    const auto mu = swanson_mu(s->omega, s->alpha, s->beta, s->dyson_lambda);
    if (!(mu.mu_plus > 0.0 && mu.mu_minus > 0.0)) {
      fail(ErrorKind::ParameterOutOfRange, "mu_+ > 0 and mu_- > 0 required for a confining h_S");
    }
    s->mu_plus = mu.mu_plus;
    s->mu_minus = mu.mu_minus;
    m.domain = {-inf, inf};
    m.anchor = 0.0;
  } else if (auto* p = std::get_if<PoschlTellerPair>(&v)) {
    if (!(p->kappa > 0.5)) fail(ErrorKind::ParameterOutOfRange, "kappa > 1/2 violated");
    if (!(p->lambda > 0.5)) fail(ErrorKind::ParameterOutOfRange, "lambda > 1/2 violated");
    m.domain = {0.0, pi / 2};
    m.anchor = pi / 4;
  } else if (auto* h = std::get_if<SechPair>(&v)) {
    if (!std::isfinite(h->lambda)) fail(ErrorKind::ParameterOutOfRange, "lambda must be finite");
    m.domain = {-inf, inf};
    m.anchor = 0.0;
  } else if (std::holds_alternative<Harmonic>(v)) {
    m.domain = {-inf, inf};
    m.anchor = 0.0;
  } else {
    const auto& c = std::get<CustomTabulated>(v);
    if (!c.table) fail(ErrorKind::ParameterOutOfRange, "custom model without table");
    m.domain = {c.table->x.front(), c.table->x.back()};
    m.anchor = 0.5 * (m.domain.lo + m.domain.hi);
  }
  m.variant = std::move(v);
  return m;
}

inline std::string model_name(const ModelSpec& m) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Swanson>) return "swanson";
        else if constexpr (std::is_same_v<T, PoschlTellerPair>) return "pt-pair";
        else if constexpr (std::is_same_v<T, SechPair>) return "sech-pair";
        else if constexpr (std::is_same_v<T, Harmonic>) return "harmonic";
        else return "custom";
      },
      m.variant);
}

/// Potential in the form k^2 = c (E - V) with c > 0 (c = 2/mu_+ for Swanson, 1 otherwise).
inline cplx potential(const ModelSpec& m, double x) {
  return std::visit(
      [x](const auto& v) -> cplx {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Swanson>) {
          return 0.5 * v.mu_minus * x * x;
        } else if constexpr (std::is_same_v<T, PoschlTellerPair>) {
          const double k = v.kappa, l = v.lambda, sg = v.sector == Sector::minus ? -1.0 : 1.0;
          const double sec2 = 1.0 / (std::cos(x) * std::cos(x)), csc2 = 1.0 / (std::sin(x) * std::sin(x));
          return l * (l + sg) * sec2 + k * (k + sg) * csc2 - (k + l) * (k + l);
        } else if constexpr (std::is_same_v<T, SechPair>) {
          const double l = v.lambda, sech = 1.0 / std::cosh(x), th = std::tanh(x);
          if (v.sector == Sector::minus) return 0.25 + (l - l * l) * sech * sech;
          return cplx(0.25 - (1.0 - l + l * l) * sech * sech, (2.0 * l - 1.0) * sech * th);
        } else if constexpr (std::is_same_v<T, Harmonic>) {
          return x * x;
        } else {
          return (*v.table)(x);
        }
      },
      m.variant);
}

inline double kinetic_factor(const ModelSpec& m) {
  if (auto* s = std::get_if<Swanson>(&m.variant)) return 2.0 / s->mu_plus;
  return 1.0;
}

/// k^2(x) = kappa(x) + i tau(x) at energy E.
inline WaveNumberField local_wavevector(const ModelSpec& m, double E) {
  const double c = kinetic_factor(m);
  return [m, E, c](double x) { return c * (E - potential(m, x)); };
}

inline bool is_hermitian(const ModelSpec& m) {
  if (auto* s = std::get_if<SechPair>(&m.variant)) return s->sector == Sector::minus || s->lambda == 0.5;
  if (auto* c = std::get_if<CustomTabulated>(&m.variant)) return !c->table->has_imaginary;
  return true;
}

/// Bottom of the continuum (infinity for confining models).
inline double continuum_threshold(const ModelSpec& m) {
  if (std::holds_alternative<SechPair>(m.variant)) return 0.25;
  return inf;
}

inline Sector sector_of(const ModelSpec& m) {
  if (auto* p = std::get_if<PoschlTellerPair>(&m.variant)) return p->sector;
  if (auto* s = std::get_if<SechPair>(&m.variant)) return s->sector;
  return Sector::minus;
}

/// Same model in the other SUSY sector.
inline ModelSpec partner(const ModelSpec& m, Sector s) {
  Variant v = m.variant;
  if (auto* p = std::get_if<PoschlTellerPair>(&v)) p->sector = s;
  else if (auto* h = std::get_if<SechPair>(&v)) h->sector = s;
  else fail(ErrorKind::DomainError, "model has no SUSY partner");
  return make_model(std::move(v));
}

/// Bound levels of the sech pair. V_- = 1/4 - l(l+1) sech^2 has 1/4 - (l-j)^2 for
/// l - j > 0. V_+ = L+ L- keeps all of them (the zero mode of L+ grows like
/// cosh^{1/2}) and gains E = 0 from the decaying zero mode exp(int U) of L-.
inline std::vector<double> sech_levels(const SechPair& p) {
  const double ell = std::abs(p.lambda - 0.5) - 0.5;
  std::vector<double> out;
  for (int j = 0; ell - j > 1e-12; ++j) out.push_back(0.25 - (ell - j) * (ell - j));
  if (p.sector == Sector::plus && (out.empty() || std::abs(out.back()) > 1e-12)) {
    out.push_back(0.0);
    std::sort(out.begin(), out.end());
  }
  return out;
}

inline double exact_energy(const ModelSpec& m, int n) {
  if (n < 0) fail(ErrorKind::LevelOutOfRange, "n must be non-negative");
  return std::visit(
      [n](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Swanson>) {
          return (n + 0.5) * std::sqrt(v.omega * v.omega - 4.0 * v.alpha * v.beta);
        } else if constexpr (std::is_same_v<T, PoschlTellerPair>) {
          const int j = v.sector == Sector::minus ? n : n + 1;
          const double s = v.kappa + v.lambda;
          return (s + 2.0 * j) * (s + 2.0 * j) - s * s;
        } else if constexpr (std::is_same_v<T, SechPair>) {
          const auto levels = sech_levels(v);
          if (n >= static_cast<int>(levels.size())) {
            fail(ErrorKind::LevelOutOfRange, "sech pair has no level n = " + std::to_string(n));
          }
          return levels[n];
        } else if constexpr (std::is_same_v<T, Harmonic>) {
          return 2.0 * n + 1.0;
        } else {
          fail(ErrorKind::NoClosedForm, "tabulated model has no closed-form spectrum");
        }
      },
      m.variant);
}

/// Number of bound states (INT_MAX when unbounded).
inline int bound_state_count(const ModelSpec& m) {
  if (auto* s = std::get_if<SechPair>(&m.variant)) return static_cast<int>(sech_levels(*s).size());
  return std::numeric_limits<int>::max();
}

}  // namespace milne::models
