#pragma once

// Whittaker functions M_{kappa,mu}(z) and W_{kappa,mu}(z) for real z > 0.

#include <cmath>
#include <string>

#include "milne/core/error.hpp"
#include "milne/core/types.hpp"
#include "milne/specfun/gamma.hpp"
#include "milne/specfun/hypergeometric.hpp"

namespace milne::specfun {

struct WhittakerParams {
  cplx kappa_index;
  cplx mu_index;
  double z = 0.0;
};

namespace detail {

inline void require_positive(double z) {
  if (!(z > 0.0)) fail(ErrorKind::DomainError, "Whittaker argument must be > 0, got " + std::to_string(z));
}

inline bool twice_is_integer(cplx mu) { return near_integer(2.0 * mu, 1e-12); }

// W switches from the two-M connection formula to its own asymptotic series here.
inline double whittaker_w_asymptotic_threshold(cplx kappa, cplx mu) {
  const double s = std::abs(kappa) + std::abs(mu) + 1.0;
  return std::max(30.0, 2.0 * s * s);
}

}  // namespace detail

/// M_{kappa,mu}(z) = e^{-z/2} z^{mu+1/2} M(mu - kappa + 1/2, 1 + 2 mu, z).
inline cplx whittaker_m(const WhittakerParams& p) {
  detail::require_positive(p.z);
  const cplx b = 1.0 + 2.0 * p.mu_index;
  if (is_nonpositive_integer(b)) {
    fail(ErrorKind::PoleError, "M_{kappa,mu}: 1 + 2 mu = " + detail::fmt(b) + " is a pole");
  }
  const cplx a = p.mu_index - p.kappa_index + 0.5;
  const double z = p.z;
  return std::exp(-0.5 * z + (p.mu_index + 0.5) * std::log(z)) * kummer_m(a, b, z);
}

/// dM_{kappa,mu}/dz from  z M' = (z/2 - kappa) M_{kappa,mu} + (1/2 + mu + kappa) M_{kappa+1,mu}.
inline cplx whittaker_m_dz(const WhittakerParams& p) {
  const cplx m0 = whittaker_m(p);
  const cplx m1 = whittaker_m({p.kappa_index + 1.0, p.mu_index, p.z});
  return ((0.5 * p.z - p.kappa_index) * m0 + (0.5 + p.mu_index + p.kappa_index) * m1) / p.z;
}

/// W_{kappa,mu}(z): connection formula through M_{kappa,+-mu} for moderate z,
/// e^{-z/2} z^kappa asymptotic series for large z.
inline cplx whittaker_w(const WhittakerParams& p) {
  detail::require_positive(p.z);
  const cplx kappa = p.kappa_index;
  const cplx mu = p.mu_index;
  const double z = p.z;
  if (z >= detail::whittaker_w_asymptotic_threshold(kappa, mu)) {
    const auto [s, err] = detail::asymptotic_sum(0.5 + mu - kappa, 0.5 - mu - kappa, cplx(-1.0 / z));
    if (err < 1e-14) return std::exp(-0.5 * z + kappa * std::log(z)) * s;
  }
  if (detail::twice_is_integer(mu)) {
    fail(ErrorKind::ConnectionFormulaPole,
         "W_{kappa,mu}: 2 mu = " + detail::fmt(2.0 * mu) + " is an integer");
  }
  const cplx c1 = gamma(-2.0 * mu) * rgamma(0.5 - mu - kappa);
  const cplx c2 = gamma(2.0 * mu) * rgamma(0.5 + mu - kappa);
  cplx r = 0.0;
  if (c1 != cplx(0.0)) r += c1 * whittaker_m(p);
  if (c2 != cplx(0.0)) r += c2 * whittaker_m({kappa, -mu, z});
  return r;
}

/// dW_{kappa,mu}/dz from  z W' = (z/2 - kappa) W_{kappa,mu} - W_{kappa+1,mu}.
inline cplx whittaker_w_dz(const WhittakerParams& p) {
  const cplx w0 = whittaker_w(p);
  const cplx w1 = whittaker_w({p.kappa_index + 1.0, p.mu_index, p.z});
  return ((0.5 * p.z - p.kappa_index) * w0 - w1) / p.z;
}

/// Wronskian  M W' - M' W = -Gamma(1 + 2 mu) / Gamma(1/2 + mu - kappa), constant in z.
inline cplx whittaker_wronskian_exact(cplx kappa, cplx mu) {
  return -gamma(1.0 + 2.0 * mu) * rgamma(0.5 + mu - kappa);
}

}  // namespace milne::specfun
