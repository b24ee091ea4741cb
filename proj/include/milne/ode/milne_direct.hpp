#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "milne/core/error.hpp"
#include "milne/core/types.hpp"
#include "milne/ode/dopri5.hpp"

namespace milne::ode {

/// Amplitude/phase trajectory of rho'' + kappa rho = lambda^2 / rho^3, rho^2 phi' = lambda.
struct MilneTrajectory {
  std::vector<double> x;  // increasing
  std::vector<double> rho, drho, phi;
  double lambda = 1.0;

  double total_phase() const { return phi.back() - phi.front(); }

  /// max_i |rho^2 phi' - lambda| / |lambda| with phi' taken from the phase law itself.
  double phase_law_residual(const std::vector<double>& dphi) const {
    double worst = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      worst = std::max(worst, std::abs(rho[i] * rho[i] * dphi[i] - lambda) / std::abs(lambda));
    }
    return worst;
  }
};

struct MilneDirectOptions {
  StepControl control{};
  /// > 0: samples on the uniform grid x0 + k*grid_step (needed by finite-difference
  /// checks); 0: one sample per accepted step.
  double grid_step = 0.0;
};

namespace detail {

inline void sweep_milne(const RealField& kappa, double W, double x0, double x_end, double rho0, double drho0,
                        const MilneDirectOptions& opt, MilneTrajectory& out, bool prepend) {
  using S = State<double, 3>;
  if (x_end == x0) return;
  auto rhs = [&](double x, const S& y) -> S {
    const double r = y[0];
    return S{y[1], -kappa(x) * r + W * W / (r * r * r), W / (r * r)};
  };
  std::vector<double> stops;
  if (opt.grid_step > 0.0) {
    const double dir = x_end > x0 ? 1.0 : -1.0;
    for (long k = 1;; ++k) {
      const double p = x0 + dir * static_cast<double>(k) * opt.grid_step;
      if ((x_end - p) * dir <= 1e-12 * opt.grid_step) break;
      stops.push_back(p);
    }
  }
  std::size_t next = 0;
  std::vector<std::array<double, 4>> rec;
  auto observe = [&](double x, S& y) {
    if (!(y[0] > 0.0) || !std::isfinite(y[0])) {
      fail(ErrorKind::NonPositiveAmplitude, "rho = " + std::to_string(y[0]) + " at x = " + std::to_string(x));
    }
    const bool at_stop = next < stops.size() && x == stops[next];
    if (at_stop) ++next;
    if (opt.grid_step <= 0.0 || at_stop || x == x_end) rec.push_back({x, y[0], y[1], y[2]});
    return false;
  };
  dopri5<double, 3>(rhs, x0, x_end, S{rho0, drho0, 0.0}, opt.control, observe, std::span<const double>(stops));
  if (prepend) {
    std::reverse(rec.begin(), rec.end());
    std::vector<double> xs, r, dr, ph;
    for (auto& s : rec) {
      xs.push_back(s[0]);
      r.push_back(s[1]);
      dr.push_back(s[2]);
      ph.push_back(s[3]);
    }
    out.x.insert(out.x.begin(), xs.begin(), xs.end());
    out.rho.insert(out.rho.begin(), r.begin(), r.end());
    out.drho.insert(out.drho.begin(), dr.begin(), dr.end());
    out.phi.insert(out.phi.begin(), ph.begin(), ph.end());
  } else {
    for (auto& s : rec) {
      out.x.push_back(s[0]);
      out.rho.push_back(s[1]);
      out.drho.push_back(s[2]);
      out.phi.push_back(s[3]);
    }
  }
}

}  // namespace detail

/// Integrates the EMP equation with lambda = W and the phase law outward from x0.
/// phi(x0) = 0.
inline MilneTrajectory integrate_milne_direct(const RealField& kappa, double W, Interval domain, double x0,
                                              double rho0, double drho0, double tol,
                                              const MilneDirectOptions& options = {}) {
  if (!(rho0 > 0.0)) fail(ErrorKind::NonPositiveAmplitude, "initial amplitude must be positive");
  if (W == 0.0) fail(ErrorKind::DomainError, "W must be nonzero");
  if (!domain.contains(x0)) fail(ErrorKind::DomainError, "anchor outside domain");
  if (!(tol > 0.0)) fail(ErrorKind::DomainError, "tolerance must be positive");
  MilneDirectOptions opt = options;
  opt.control.rtol = tol;
  MilneTrajectory t;
  t.lambda = W;
  t.x.push_back(x0);
  t.rho.push_back(rho0);
  t.drho.push_back(drho0);
  t.phi.push_back(0.0);
  detail::sweep_milne(kappa, W, x0, domain.lo, rho0, drho0, opt, t, true);
  detail::sweep_milne(kappa, W, x0, domain.hi, rho0, drho0, opt, t, false);
  return t;
}

}  // namespace milne::ode
