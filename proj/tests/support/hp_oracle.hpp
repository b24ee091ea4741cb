#pragma once

// 50-digit reference evaluations by plain term-by-term summation.
// Test-only; shares no code with the library's special functions.

#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

namespace hp {

using real = boost::multiprecision::cpp_bin_float_50;

inline real series_2f1(const real& a, const real& b, const real& c, const real& z) {
  real sum = 1;
  real term = 1;
  const real eps = std::numeric_limits<real>::epsilon();
  for (int k = 0; k < 200000; ++k) {
    term *= (a + k) * (b + k) / ((c + k) * (k + 1)) * z;
    sum += term;
    if (term == 0 || (abs(term) < eps * abs(sum) && k > 5)) break;
  }
  return sum;
}

inline real series_1f1(const real& a, const real& b, const real& z) {
  real sum = 1;
  real term = 1;
  const real eps = std::numeric_limits<real>::epsilon();
  for (int k = 0; k < 200000; ++k) {
    term *= (a + k) / ((b + k) * (k + 1)) * z;
    sum += term;
    if (term == 0 || (abs(term) < eps * abs(sum) && k > 5)) break;
  }
  return sum;
}

inline real whittaker_m(const real& kappa, const real& mu, const real& z) {
  return exp(-z / 2) * pow(z, mu + real(0.5)) * series_1f1(mu - kappa + real(0.5), 1 + 2 * mu, z);
}

// Connection formula; requires 2 mu non-integer.
inline real whittaker_w(const real& kappa, const real& mu, const real& z) {
  using boost::math::tgamma;
  return tgamma(-2 * mu) / tgamma(real(0.5) - mu - kappa) * whittaker_m(kappa, mu, z) +
         tgamma(2 * mu) / tgamma(real(0.5) + mu - kappa) * whittaker_m(kappa, -mu, z);
}

}  // namespace hp
