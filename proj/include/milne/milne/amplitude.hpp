#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "milne/core/error.hpp"
#include "milne/core/types.hpp"
#include "milne/ode/fundamental_pair.hpp"

namespace milne {

/// Pinney combination sigma = psi1^2 + (lambda/W)^2 psi2^2, stored as
/// sigma_scaled * exp(2 log_scale) to survive exponential tails.
struct MilneAmplitude {
  std::vector<double> x;
  std::vector<cplx> sigma_scaled;
  std::vector<double> log_scale;
  double lambda = 1.0;
  cplx wronskian = 1.0;

  cplx sigma(std::size_t i) const { return sigma_scaled[i] * std::exp(2.0 * log_scale[i]); }
};

inline MilneAmplitude pinney_amplitude(const ode::FundamentalPair& pair, double lambda, bool hermitian = false) {
  if (std::abs(pair.wronskian) == 0.0) fail(ErrorKind::ZeroWronskian, "pair has zero Wronskian");
  MilneAmplitude a;
  a.lambda = lambda;
  a.wronskian = pair.wronskian;
  const cplx c = (lambda / pair.wronskian) * (lambda / pair.wronskian);
  for (const auto& s : pair.samples) {
    const cplx sig = s.psi1 * s.psi1 + c * s.psi2 * s.psi2;
    if (hermitian && !(sig.real() > 0.0)) {
      fail(ErrorKind::AmplitudeVanishes, "sigma <= 0 at x = " + std::to_string(s.x));
    }
    a.x.push_back(s.x);
    a.sigma_scaled.push_back(sig);
    a.log_scale.push_back(s.log_scale);
  }
  return a;
}

/// max_i |Im sigma(x_i) + Im sigma(-x_i)| / max_i |sigma(x_i)| for samples on a
/// grid symmetric about 0 (sigma given directly).
inline double pt_oddness(const std::vector<double>& x, const std::vector<cplx>& sigma) {
  const std::size_t n = x.size();
  double peak = 0.0, worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(x[i] + x[n - 1 - i]) > 1e-12 * std::max(1.0, std::abs(x[i]))) {
      fail(ErrorKind::AsymmetricGrid, "grid is not symmetric about 0");
    }
    peak = std::max(peak, std::abs(sigma[i]));
    worst = std::max(worst, std::abs(sigma[i].imag() + sigma[n - 1 - i].imag()));
  }
  return worst / peak;
}

}  // namespace milne
