#pragma once

#include <cmath>

#include "milne/core/types.hpp"

namespace milne::specfun {

/// Neumaier-compensated running sum, applied to both components of a complex value.
class CompensatedSum {
 public:
  void add(cplx term) {
    re_ = step(re_, re_c_, term.real());
    im_ = step(im_, im_c_, term.imag());
  }

  cplx value() const { return {re_ + re_c_, im_ + im_c_}; }

 private:
  static double step(double sum, double& comp, double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      comp += (sum - t) + x;
    } else {
      comp += (x - t) + sum;
    }
    return t;
  }

  double re_ = 0.0;
  double re_c_ = 0.0;
  double im_ = 0.0;
  double im_c_ = 0.0;
};

}  // namespace milne::specfun
