#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "milne/core/error.hpp"
#include "milne/models/model.hpp"
#include "milne/models/superpotential.hpp"
#include "milne/ode/fundamental_pair.hpp"
#include "milne/ode/intertwiner.hpp"

namespace milne::models {

/// Max relative residuals of the intertwining identities at one energy.
struct IikResiduals {
  double w_equal = 0.0;          // |W+ - W-| / |W-|
  double second_identity = 0.0;  // E rho+^2 = (L+ rho-)^2 + W^2 / rho-^2
  double i2_identity = 0.0;      // E rho+^2 = U^2 rho-^2 + U (rho-^2)' + psi-'^2 + chi-'^2
  double im_derivative = 0.0;    // Im(E rho+^2) = (b rho-^2)'
};

/// The - sector pair (psi-, chi-) is the canonical pair with W = 1; the + pair is its
/// image under L+ / sqrt(E). (L+ rho)^2 is expanded as
/// ((rho^2)')^2 / (4 rho^2) + U (rho^2)' + U^2 rho^2, which avoids choosing a branch of rho.
inline IikResiduals iik_residuals(const ModelSpec& model, double E, const std::vector<double>& grid) {
  if (grid.empty()) fail(ErrorKind::DomainError, "empty grid");
  const ModelSpec minus = partner(model, Sector::minus);
  const auto U = superpotential(minus);
  const auto dU = superpotential_derivative(minus);
  std::vector<double> pts = grid;
  std::sort(pts.begin(), pts.end());
  const Interval span{std::min(pts.front(), minus.anchor), std::max(pts.back(), minus.anchor)};

  ode::PairOptions po;
  po.output_points = pts;
  po.control.atol = 1e-300;
  const auto pair = ode::integrate_fundamental_pair(local_wavevector(minus, E), span, minus.anchor, 1.0, 1e-12, po);

  ode::SolutionSamples g1, g2;
  for (const auto& s : pair.samples) {
    if (!std::binary_search(pts.begin(), pts.end(), s.x)) continue;
    g1.x.push_back(s.x);
    g1.psi.push_back(s.unscaled_psi1());
    g1.dpsi.push_back(s.unscaled_dpsi1());
    g2.x.push_back(s.x);
    g2.psi.push_back(s.unscaled_psi2());
    g2.dpsi.push_back(s.unscaled_dpsi2());
  }
  const auto f1 = ode::apply_intertwiner(1, U, g1, E);
  const auto f2 = ode::apply_intertwiner(1, U, g2, E);
  const cplx w_minus = pair.wronskian;

  auto rel = [](cplx a, cplx b, double floor) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
  };

  IikResiduals r;
  for (std::size_t i = 0; i < g1.x.size(); ++i) {
    const double x = g1.x[i];
    const cplx u = U(x), du = dU(x);
    const cplx p = g1.psi[i], dp = g1.dpsi[i], c = g2.psi[i], dc = g2.dpsi[i];
    const cplx rho2m = p * p + c * c;
    const cplx drho2m = 2.0 * (p * dp + c * dc);
    const cplx rho2p = f1.psi[i] * f1.psi[i] + f2.psi[i] * f2.psi[i];
    const cplx w_plus = f1.psi[i] * f2.dpsi[i] - f1.dpsi[i] * f2.psi[i];
    const cplx lhs = E * rho2p;

    r.w_equal = std::max(r.w_equal, std::abs(w_plus - w_minus) / std::abs(w_minus));
    const cplx l_rho_sq = drho2m * drho2m / (4.0 * rho2m) + u * drho2m + u * u * rho2m;
    r.second_identity = std::max(r.second_identity, rel(lhs, l_rho_sq + w_minus * w_minus / rho2m, 0.0));
    r.i2_identity = std::max(r.i2_identity, rel(lhs, u * u * rho2m + u * drho2m + dp * dp + dc * dc, 0.0));
    const double b = u.imag(), db = du.imag();
    const double im_rhs = (db * rho2m + b * drho2m).real();
    const double floor = std::abs(b * drho2m) + std::abs(db * rho2m);
    if (floor > 0.0) r.im_derivative = std::max(r.im_derivative, rel(lhs.imag(), im_rhs, floor));
  }
  return r;
}

}  // namespace milne::models
