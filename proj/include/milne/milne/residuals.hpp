#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "milne/core/error.hpp"
#include "milne/core/types.hpp"
#include "milne/ode/intertwiner.hpp"
#include "milne/ode/milne_direct.hpp"

namespace milne {

namespace detail {

// Uniform spacing of x, or GridTooCoarse.
inline double uniform_step(const std::vector<double>& x) {
  if (x.size() < 5) fail(ErrorKind::GridTooCoarse, "need at least 5 grid points");
  const double h = (x.back() - x.front()) / static_cast<double>(x.size() - 1);
  for (std::size_t i = 1; i < x.size(); ++i) {
    if (std::abs((x[i] - x[i - 1]) - h) > 1e-9 * h) fail(ErrorKind::GridTooCoarse, "grid is not uniform");
  }
  return h;
}

// Fourth-order central first derivative at interior point i (2 <= i < n-2).
template <class T>
T d1(const std::vector<T>& f, std::size_t i, double h) {
  return (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) / (12.0 * h);
}

template <class T>
T d2(const std::vector<T>& f, std::size_t i, double h) {
  return (-f[i - 2] + 16.0 * f[i - 1] - 30.0 * f[i] + 16.0 * f[i + 1] - f[i + 2]) / (12.0 * h * h);
}

}  // namespace detail

/// max over interior points of |rho'' + kappa rho - lambda^2/rho^3| divided by the
/// largest of the three terms there; rho'' by a five-point stencil on rho.
inline double emp_residual(const ode::MilneTrajectory& t, const RealField& kappa) {
  const double h = detail::uniform_step(t.x);
  double kmax = 0.0;
  for (double x : t.x) kmax = std::max(kmax, std::sqrt(std::abs(kappa(x))));
  if (h * kmax > 0.5) fail(ErrorKind::GridTooCoarse, "grid step too large for the local wavenumber");
  const double l2 = t.lambda * t.lambda;
  double worst = 0.0;
  for (std::size_t i = 2; i + 2 < t.x.size(); ++i) {
    const double r = t.rho[i];
    const double rpp = detail::d2(t.rho, i, h);
    const double a = kappa(t.x[i]) * r, b = l2 / (r * r * r);
    const double scale = std::max({std::abs(rpp), std::abs(a), std::abs(b)});
    if (scale > 0.0) worst = std::max(worst, std::abs(rpp + a - b) / scale);
  }
  return worst;
}

struct PhaseDecomposition {
  std::vector<double> rho, phi;
};

/// psi = rho e^{i phi} with phi unwrapped continuously from Arg psi(x0).
inline PhaseDecomposition phase_decompose(const std::vector<cplx>& psi) {
  PhaseDecomposition out;
  out.rho.reserve(psi.size());
  out.phi.reserve(psi.size());
  for (std::size_t i = 0; i < psi.size(); ++i) {
    const double r = std::abs(psi[i]);
    if (!(r >= 1e-13)) fail(ErrorKind::PhaseUnwrapFailure, "|psi| below 1e-13 at sample " + std::to_string(i));
    double a = std::arg(psi[i]);
    if (i > 0) {
      const double prev = out.phi.back();
      a += 2.0 * pi * std::round((prev - a) / (2.0 * pi));
    }
    out.rho.push_back(r);
    out.phi.push_back(a);
  }
  return out;
}

struct GeneralizedEmpResidual {
  double r1_printed = 0.0;       // rho'' + kappa rho = rho phi'
  double r1_consistent = 0.0;    // rho'' + kappa rho = rho phi'^2
  double r2 = 0.0;               // phi'' rho + 2 phi' rho' + tau rho = 0
};

/// Residuals of the amplitude/phase equations for a complex solution on a uniform
/// grid. rho' and phi' come from psi'; rho'' and phi'' by differencing those.
inline GeneralizedEmpResidual generalized_emp_residual(const ode::SolutionSamples& s, const RealField& kappa,
                                                       const RealField& tau) {
  const double h = detail::uniform_step(s.x);
  const auto pd = phase_decompose(s.psi);
  const std::size_t n = s.x.size();
  std::vector<double> drho(n), dphi(n);
  for (std::size_t i = 0; i < n; ++i) {
    const cplx q = s.dpsi[i] / s.psi[i];  // rho'/rho + i phi'
    drho[i] = pd.rho[i] * q.real();
    dphi[i] = q.imag();
  }
  // Each residual is relative to the local term size, floored at 1e-3 of its peak so
  // points where all terms vanish together (tau = phi' = 0) do not divide noise by noise.
  struct Row {
    double e1p, s1p, e1c, s1c, e2, s2;
  };
  std::vector<Row> rows;
  double peak1p = 0.0, peak1c = 0.0, peak2 = 0.0;
  for (std::size_t i = 2; i + 2 < n; ++i) {
    const double r = pd.rho[i], x = s.x[i];
    const double rpp = detail::d1(drho, i, h), ppp = detail::d1(dphi, i, h);
    const double kr = kappa(x) * r;
    const double p1 = r * dphi[i], p2 = r * dphi[i] * dphi[i];
    const double a = ppp * r, b = 2.0 * dphi[i] * drho[i], c = tau(x) * r;
    Row w{std::abs(rpp + kr - p1), std::max({std::abs(rpp), std::abs(kr), std::abs(p1)}),
          std::abs(rpp + kr - p2), std::max({std::abs(rpp), std::abs(kr), std::abs(p2)}),
          std::abs(a + b + c),     std::max({std::abs(a), std::abs(b), std::abs(c)})};
    peak1p = std::max(peak1p, w.s1p);
    peak1c = std::max(peak1c, w.s1c);
    peak2 = std::max(peak2, w.s2);
    rows.push_back(w);
  }
  GeneralizedEmpResidual out;
  for (const auto& w : rows) {
    if (peak1p > 0.0) out.r1_printed = std::max(out.r1_printed, w.e1p / std::max(w.s1p, 1e-3 * peak1p));
    if (peak1c > 0.0) out.r1_consistent = std::max(out.r1_consistent, w.e1c / std::max(w.s1c, 1e-3 * peak1c));
    if (peak2 > 0.0) out.r2 = std::max(out.r2, w.e2 / std::max(w.s2, 1e-3 * peak2));
  }
  return out;
}

}  // namespace milne
