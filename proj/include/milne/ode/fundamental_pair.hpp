#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "milne/core/error.hpp"
#include "milne/core/types.hpp"
#include "milne/ode/dopri5.hpp"

namespace milne::ode {

/// One grid point of a fundamental pair. Stored values are jointly rescaled:
/// the unscaled solution is value * exp(log_scale).
struct PairSample {
  double x = 0.0;
  cplx psi1, dpsi1, psi2, dpsi2;
  double log_scale = 0.0;
  /// Integral of 1/sigma from the anchor to x, sigma = psi1^2 + (lambda/W)^2 psi2^2
  /// in unscaled units (signed: negative direction gives the negated integral).
  cplx sigma_integral;

  cplx unscaled_psi1() const { return psi1 * std::exp(log_scale); }
  cplx unscaled_psi2() const { return psi2 * std::exp(log_scale); }
  cplx unscaled_dpsi1() const { return dpsi1 * std::exp(log_scale); }
  cplx unscaled_dpsi2() const { return dpsi2 * std::exp(log_scale); }

  /// Wronskian in unscaled units.
  cplx wronskian() const { return (psi1 * dpsi2 - dpsi1 * psi2) * std::exp(2.0 * log_scale); }

  /// |psi1 psi2'| + |psi1' psi2| in unscaled units: the size of the terms whose
  /// difference is the Wronskian.
  double wronskian_term_scale() const {
    return (std::abs(psi1 * dpsi2) + std::abs(dpsi1 * psi2)) * std::exp(2.0 * log_scale);
  }
};

/// Two independent solutions of psi'' + k^2 psi = 0. The default initial data are
/// psi1(x0) = 1, psi1'(x0) = 0, psi2(x0) = 0, psi2'(x0) = lambda, so W = lambda.
struct FundamentalPair {
  std::vector<PairSample> samples;  // increasing x
  double anchor = 0.0;
  double lambda = 1.0;  // Pinney constant
  cplx wronskian = 1.0;

  /// max_i |W(x_i) - W(x0)| / |W(x0)|.
  double wronskian_drift() const {
    double worst = 0.0;
    for (const auto& s : samples) worst = std::max(worst, std::abs(s.wronskian() - wronskian) / std::abs(wronskian));
    return worst;
  }

  /// Same drift restricted to samples where the Wronskian is not swamped by the
  /// cancellation of its two terms (term scale <= max_conditioning |W|).
  double wronskian_drift_conditioned(double max_conditioning) const {
    double worst = 0.0;
    for (const auto& s : samples) {
      if (s.wronskian_term_scale() > max_conditioning * std::abs(wronskian)) continue;
      worst = std::max(worst, std::abs(s.wronskian() - wronskian) / std::abs(wronskian));
    }
    return worst;
  }

  /// Integral of 1/sigma over [front().x, back().x].
  cplx total_sigma_integral() const { return samples.back().sigma_integral - samples.front().sigma_integral; }
};

struct PairOptions {
  StepControl control{};
  double rescale_threshold = 1e100;
  /// When non-empty, samples are recorded exactly at these points (sorted) plus the
  /// anchor and both ends; otherwise at every accepted step.
  std::span<const double> output_points{};
};

/// Values (psi1, psi1', psi2, psi2') at the anchor.
using AnchorData = std::array<cplx, 4>;

namespace detail {

struct Sweep {
  std::vector<PairSample> samples;  // in integration order, excluding the anchor
};

inline Sweep sweep_pair(const WaveNumberField& field, double x0, double x_end, const AnchorData& init,
                        cplx pinney_sq, const PairOptions& opt) {
  using S = State<cplx, 5>;
  Sweep out;
  if (x_end == x0) return out;
  double log_scale = 0.0;

  auto rhs = [&](double x, const S& y) -> S {
    const cplx k2 = field(x);
    const cplx sigma = y[0] * y[0] + pinney_sq * y[2] * y[2];
    return S{y[1], -k2 * y[0], y[3], -k2 * y[2], std::exp(-2.0 * log_scale) / sigma};
  };

  const bool record_all = opt.output_points.empty();
  std::vector<double> stops;
  if (!record_all) {
    for (double p : opt.output_points) {
      if ((p - x0) * (x_end - x0) > 0.0 && std::abs(p - x0) < std::abs(x_end - x0)) stops.push_back(p);
    }
    std::sort(stops.begin(), stops.end());
    if (x_end < x0) std::reverse(stops.begin(), stops.end());
  }
  std::size_t next = 0;

  auto observe = [&](double x, S& y) {
    const bool at_stop = !record_all && next < stops.size() && x == stops[next];
    if (at_stop) ++next;
    if (record_all || at_stop || x == x_end) {
      out.samples.push_back({x, y[0], y[1], y[2], y[3], log_scale, y[4]});
    }
    const double m = std::max(std::abs(y[0]), std::abs(y[2]));
    if (!std::isfinite(m)) {
      fail(ErrorKind::StepUnderflow, "fundamental pair overflowed at x = " + std::to_string(x));
    }
    if (m > opt.rescale_threshold) {
      for (int i = 0; i < 4; ++i) y[i] /= m;
      log_scale += std::log(m);
      return true;
    }
    return false;
  };

  S y0{init[0], init[1], init[2], init[3], cplx(0.0)};
  dopri5<cplx, 5>(rhs, x0, x_end, y0, opt.control, observe, std::span<const double>(stops));
  return out;
}

}  // namespace detail

/// Integrates a pair with arbitrary anchor data outward from x0 to both ends of
/// `domain`; sigma uses the Pinney weight (lambda / W)^2.
inline FundamentalPair integrate_pair_from(const WaveNumberField& field, Interval domain, double x0,
                                           const AnchorData& init, double lambda, double tol,
                                           const PairOptions& options = {}) {
  if (!(domain.lo <= x0 && x0 <= domain.hi)) {
    fail(ErrorKind::DomainError, "anchor " + std::to_string(x0) + " outside [" + std::to_string(domain.lo) +
                                     ", " + std::to_string(domain.hi) + "]");
  }
  if (!(tol > 0.0)) fail(ErrorKind::DomainError, "tolerance must be positive");
  if (lambda == 0.0) fail(ErrorKind::DomainError, "lambda must be nonzero");
  const cplx W = init[0] * init[3] - init[1] * init[2];
  if (std::abs(W) == 0.0) fail(ErrorKind::ZeroWronskian, "anchor data are linearly dependent");
  PairOptions opt = options;
  opt.control.rtol = tol;

  FundamentalPair pair;
  pair.anchor = x0;
  pair.lambda = lambda;
  pair.wronskian = W;
  const cplx weight = (lambda / W) * (lambda / W);

  auto left = detail::sweep_pair(field, x0, domain.lo, init, weight, opt);
  auto right = detail::sweep_pair(field, x0, domain.hi, init, weight, opt);
  pair.samples.reserve(left.samples.size() + right.samples.size() + 1);
  for (auto it = left.samples.rbegin(); it != left.samples.rend(); ++it) pair.samples.push_back(*it);
  pair.samples.push_back({x0, init[0], init[1], init[2], init[3], 0.0, 0.0});
  for (auto& s : right.samples) pair.samples.push_back(s);
  return pair;
}

/// Integrates the fundamental pair outward from x0 to both ends of `domain`.
inline FundamentalPair integrate_fundamental_pair(const WaveNumberField& field, Interval domain, double x0,
                                                  double lambda, double tol, const PairOptions& options = {}) {
  return integrate_pair_from(field, domain, x0, {cplx(1.0), cplx(0.0), cplx(0.0), cplx(lambda)}, lambda, tol,
                             options);
}

}  // namespace milne::ode
