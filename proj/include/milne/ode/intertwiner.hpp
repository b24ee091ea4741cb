#pragma once

#include <complex>
#include <vector>

#include "milne/core/error.hpp"
#include "milne/core/types.hpp"

namespace milne::ode {

/// Solution values with first derivatives on a common grid.
struct SolutionSamples {
  std::vector<double> x;
  std::vector<cplx> psi, dpsi;
};

/// psi_out = (+-d/dx + U) psi / sqrt(E), with U^2 -+ U' the potential psi solves.
/// The derivative uses the Schroedinger equation, so U' is never needed:
/// (L+- psi)' = +-(U^2 - E) psi + U psi'. sqrt(E) is the principal branch.
inline SolutionSamples apply_intertwiner(int sign, const ComplexField& U, const SolutionSamples& sol, double E) {
  if (E == 0.0) fail(ErrorKind::ZeroEnergy, "intertwiner divides by sqrt(E) and E = 0");
  if (sign != 1 && sign != -1) fail(ErrorKind::DomainError, "sign must be +1 or -1");
  const cplx root = std::sqrt(cplx(E));
  const double s = sign;
  SolutionSamples out;
  out.x = sol.x;
  out.psi.resize(sol.x.size());
  out.dpsi.resize(sol.x.size());
  for (std::size_t i = 0; i < sol.x.size(); ++i) {
    const cplx u = U(sol.x[i]);
    out.psi[i] = (s * sol.dpsi[i] + u * sol.psi[i]) / root;
    out.dpsi[i] = (s * (u * u - E) * sol.psi[i] + u * sol.dpsi[i]) / root;
  }
  return out;
}

}  // namespace milne::ode
