#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <vector>

#include "milne/milne/amplitude.hpp"
#include "milne/milne/continuation.hpp"
#include "milne/milne/energy_integral.hpp"
#include "milne/milne/extent.hpp"
#include "milne/milne/residuals.hpp"
#include "milne/milne/wkb.hpp"
#include "milne/models/analytic.hpp"
#include "milne/models/model.hpp"
#include "milne/ode/fundamental_pair.hpp"
#include "milne/ode/milne_direct.hpp"

using namespace milne;
using models::Sector;

namespace {

const models::ModelSpec& harmonic() {
  static const auto m = models::make_model(models::Harmonic{});
  return m;
}

const models::ModelSpec& sech_plus() {
  static const auto m = models::make_model(models::SechPair{7.5, Sector::plus});
  return m;
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v;
  for (int i = 0; i < n; ++i) v.push_back(a + (b - a) * i / (n - 1));
  return v;
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorKind::ConfigError;
}

}  // namespace

TEST(PinneyAmplitude, UnitForFreeParticle) {
  const auto pair =
      ode::integrate_fundamental_pair([](double) { return cplx(1.0); }, {-4.0, 4.0}, 0.0, 1.0, 1e-12);
  const auto a = pinney_amplitude(pair, 1.0, true);
  for (std::size_t i = 0; i < a.x.size(); ++i) EXPECT_NEAR(std::abs(a.sigma(i) - 1.0), 0.0, 1e-9);
}

TEST(PinneyAmplitude, ScaledByLambda) {
  // rho'' + rho = 9 / rho^3 with rho(0) = 1: rho^2 = cos^2 x + 9 sin^2 x
  const auto pair =
      ode::integrate_fundamental_pair([](double) { return cplx(1.0); }, {-1.0, 1.0}, 0.0, 3.0, 1e-12);
  const auto a = pinney_amplitude(pair, 3.0);
  for (std::size_t i = 0; i < a.x.size(); ++i) {
    const double c = std::cos(a.x[i]), s = std::sin(a.x[i]);
    EXPECT_NEAR(std::abs(a.sigma(i) - (c * c + 9.0 * s * s)), 0.0, 1e-9);
  }
}

TEST(EnergyIntegral, HarmonicLevelsBothBackends) {
  for (auto b : {Backend::analytic, Backend::numeric}) {
    for (int n : {0, 2, 5}) {
      const auto s = energy_integral(harmonic(), 2.0 * n + 1.0, b);
      EXPECT_NEAR(s.I, n + 1.0, 1e-8) << to_string(b) << " n=" << n;
      EXPECT_LT(s.im_residual, 1e-10);
      EXPECT_EQ(s.backend, b);
    }
  }
}

TEST(EnergyIntegral, SwansonGroundAndThirdLevel) {
  const auto m = models::make_model(models::Swanson{1.0, 0.5, 0.25});
  EXPECT_NEAR(energy_integral(m, models::exact_energy(m, 0), Backend::analytic).I, 1.0, 1e-8);
  EXPECT_NEAR(energy_integral(m, models::exact_energy(m, 2), Backend::numeric).I, 3.0, 1e-8);
}

TEST(EnergyIntegral, PoschlTellerPartners) {
  const auto minus = models::make_model(models::PoschlTellerPair{2.0, 3.0, Sector::minus});
  const auto plus = models::partner(minus, Sector::plus);
  EXPECT_NEAR(energy_integral(minus, 24.0, Backend::analytic).I, 2.0, 1e-7);
  EXPECT_NEAR(energy_integral(plus, 24.0, Backend::analytic).I, 1.0, 1e-7);
  EXPECT_NEAR(energy_integral(minus, 56.0, Backend::numeric).I, 3.0, 1e-7);
  EXPECT_NEAR(energy_integral(plus, 56.0, Backend::numeric).I, 2.0, 1e-7);
}

TEST(EnergyIntegral, SechMinusLevels) {
  const auto m = models::make_model(models::SechPair{7.5, Sector::minus});
  EXPECT_NEAR(energy_integral(m, -42.0, Backend::analytic).I, 1.0, 1e-7);
  EXPECT_NEAR(energy_integral(m, -30.0, Backend::analytic).I, 2.0, 1e-7);
  EXPECT_NEAR(energy_integral(m, -12.0, Backend::numeric).I, 4.0, 1e-7);
}

TEST(EnergyIntegral, RejectsBadInput) {
  EXPECT_EQ(kind_of([] { energy_integral(harmonic(), INFINITY, Backend::numeric); }), ErrorKind::DomainError);
  EXPECT_EQ(kind_of([] { energy_integral(harmonic(), 1.0, Backend::numeric, 0.0); }), ErrorKind::DomainError);
  EXPECT_EQ(kind_of([] {
              auto t = std::make_shared<models::TabulatedPotential>(std::vector<double>{-1, 0, 1},
                                                                    std::vector<cplx>{1, 0, 1});
              energy_integral(models::make_model(models::CustomTabulated{t}), 0.5, Backend::analytic);
            }),
            ErrorKind::NoClosedForm);
}

TEST(EnergyIntegral, ToleranceFromEnvironment) {
  ::unsetenv("MILNE_QUAD_TOL");
  EXPECT_EQ(quad_tol_from_env(), 1e-10);
  ::setenv("MILNE_QUAD_TOL", "1e-8", 1);
  EXPECT_EQ(quad_tol_from_env(), 1e-8);
  for (const char* bad : {"abc", "-1", "0", "1e-8x"}) {
    ::setenv("MILNE_QUAD_TOL", bad, 1);
    EXPECT_EQ(kind_of([] { quad_tol_from_env(); }), ErrorKind::ConfigError) << bad;
  }
  ::unsetenv("MILNE_QUAD_TOL");
}

TEST(EnergyIntegral, IndependentOfPinneyConstantAtLevels) {
  EnergyIntegralOptions opt;
  for (double lambda : {0.5, 2.0, 7.0}) {
    opt.lambda = lambda;
    EXPECT_NEAR(energy_integral(harmonic(), 5.0, Backend::analytic, opt).I, 3.0, 1e-8) << lambda;
    EXPECT_NEAR(energy_integral(harmonic(), 9.0, Backend::numeric, opt).I, 5.0, 1e-8) << lambda;
  }
}

TEST(EnergyIntegral, MonotoneInEnergy) {
  const auto m = models::make_model(models::Swanson{1.5, 1.0, 1.0 / 3.0});
  double prev = -1.0;
  for (double E : linspace(0.1, 6.0, 25)) {
    const double I = energy_integral(m, E, Backend::numeric).I;
    EXPECT_GT(I, prev) << E;
    prev = I;
  }
}

TEST(EnergyIntegral, BackendsAgreeBetweenLevels) {
  const std::vector<std::pair<models::ModelSpec, double>> cases{
      {harmonic(), 4.3},
      {models::make_model(models::Swanson{1.0, 0.5, 0.25}), 1.9},
      {models::make_model(models::PoschlTellerPair{2.0, 3.0, Sector::minus}), 37.5},
      {models::make_model(models::SechPair{7.5, Sector::minus}), -17.2},
  };
  for (const auto& [m, E] : cases) {
    const double a = energy_integral(m, E, Backend::analytic).I;
    const double n = energy_integral(m, E, Backend::numeric).I;
    EXPECT_NEAR(a, n, 1e-7) << models::model_name(m) << " E=" << E;
  }
}

TEST(EnergyCurve, ContinuedSechPlusCountsLevels) {
  const EnergyCurve curve(sech_plus(), Backend::numeric);
  ASSERT_TRUE(curve.continued());
  const std::vector<double> levels{-42, -30, -20, -12, -6, -2, 0};
  for (std::size_t n = 0; n < levels.size(); ++n) {
    const auto s = curve(levels[n]);
    EXPECT_NEAR(s.I, n + 1.0, 1e-6) << "E=" << levels[n];
  }
  EXPECT_NEAR(EnergyCurve(sech_plus(), Backend::analytic)(-30.0).I, 2.0, 1e-6);
}

TEST(EnergyCurve, LocatesBranchJumps) {
  const EnergyCurve curve(sech_plus(), Backend::numeric);
  curve(0.1);
  const auto jumps = curve.jumps();
  ASSERT_GE(jumps.size(), 4u);
  const std::vector<double> expected{-38.907, -19.642, -6.067, -0.166};
  for (double e : expected) {
    const bool found = std::any_of(jumps.begin(), jumps.end(), [&](const BranchJump& j) {
      return std::abs(j.E - e) < 2e-3 && std::abs(j.shift) == 2;
    });
    EXPECT_TRUE(found) << e;
  }
  // continued curve is monotone across every jump
  double prev = -1.0;
  for (double E : linspace(-44.0, 0.2, 45)) {
    const double I = curve(E).I;
    EXPECT_GT(I, prev - 1e-9) << E;
    prev = I;
  }
}

TEST(EnergyCurve, RealPotentialPassesThrough) {
  const EnergyCurve curve(harmonic(), Backend::analytic);
  EXPECT_FALSE(curve.continued());
  const auto s = curve(7.0);
  EXPECT_EQ(s.branch_offset, 0);
  EXPECT_NEAR(s.I, 4.0, 1e-8);
}

TEST(Wkb, HarmonicIsHalfEnergy) {
  for (double E : {1.0, 3.0, 10.5}) EXPECT_NEAR(wkb_integral(harmonic(), E), E / 2.0, 1e-10);
  EXPECT_EQ(kind_of([] { wkb_integral(harmonic(), -1.0); }), ErrorKind::NoAllowedRegion);
  EXPECT_EQ(kind_of([] { wkb_integral(sech_plus(), -10.0); }), ErrorKind::DomainError);
}

TEST(Wkb, MilneExceedsWkbByHalfAtQuadraticLevels) {
  const auto m = models::make_model(models::Swanson{1.0, 0.5, 0.25});
  for (double E : {models::exact_energy(m, 1), models::exact_energy(m, 4)}) {
    const double d = energy_integral(m, E, Backend::numeric).I - wkb_integral(m, E);
    EXPECT_NEAR(d, 0.5, 1e-6) << E;
  }
}

TEST(Wkb, AllowedRegionOfPoschlTeller) {
  const auto m = models::make_model(models::PoschlTellerPair{2.0, 3.0, Sector::minus});
  const auto r = allowed_region(m, 24.0);
  ASSERT_EQ(r.size(), 1u);
  const auto k2 = models::local_wavevector(m, 24.0);
  EXPECT_NEAR(k2(r[0].lo).real(), 0.0, 1e-6);
  EXPECT_NEAR(k2(r[0].hi).real(), 0.0, 1e-6);
}

TEST(EmpResidual, SmallOnIntegratedTrajectory) {
  const RealField kappa = [](double x) { return 9.0 - x * x; };
  const double rho0 = std::pow(9.0, -0.25);
  ode::MilneDirectOptions mo;
  mo.grid_step = 0.01 / 3.0;
  const auto t = ode::integrate_milne_direct(kappa, 1.0, {-2.0, 2.0}, 0.0, rho0, 0.0, 1e-12, mo);
  EXPECT_LT(emp_residual(t, kappa), 1e-6);
}

TEST(EmpResidual, DetectsCorruptedAmplitude) {
  const RealField kappa = [](double x) { return 9.0 - x * x; };
  ode::MilneDirectOptions mo;
  mo.grid_step = 0.01 / 3.0;
  auto t = ode::integrate_milne_direct(kappa, 1.0, {-2.0, 2.0}, 0.0, std::pow(9.0, -0.25), 0.0, 1e-12, mo);
  for (std::size_t i = 0; i < t.x.size(); ++i) t.rho[i] *= 1.0 + 1e-3 * std::exp(-100.0 * t.x[i] * t.x[i]);
  EXPECT_GT(emp_residual(t, kappa), 1e-3);
}

TEST(EmpResidual, RejectsCoarseOrShortGrids) {
  const RealField kappa = [](double) { return 400.0; };
  ode::MilneDirectOptions mo;
  mo.grid_step = 0.05;
  const auto t = ode::integrate_milne_direct(kappa, 1.0, {-1.0, 1.0}, 0.0, 1.0, 0.0, 1e-10, mo);
  EXPECT_EQ(kind_of([&] { emp_residual(t, kappa); }), ErrorKind::GridTooCoarse);
  ode::MilneTrajectory tiny;
  tiny.x = {0.0, 0.1, 0.2};
  tiny.rho = tiny.drho = tiny.phi = {1.0, 1.0, 1.0};
  EXPECT_EQ(kind_of([&] { emp_residual(tiny, kappa); }), ErrorKind::GridTooCoarse);
}

TEST(PhaseDecompose, UnwrapsLinearPhase) {
  std::vector<cplx> psi;
  const auto x = linspace(0.0, 10.0, 1001);
  for (double v : x) psi.push_back(2.0 * std::exp(cplx(0.0, 3.0 * v + 0.5)));
  const auto pd = phase_decompose(psi);
  for (std::size_t i = 0; i < x.size(); ++i) {
    EXPECT_NEAR(pd.rho[i], 2.0, 1e-14);
    EXPECT_NEAR(pd.phi[i], 3.0 * x[i] + 0.5, 1e-10);
  }
  EXPECT_EQ(kind_of([] { phase_decompose({cplx(1.0), cplx(0.0)}); }), ErrorKind::PhaseUnwrapFailure);
}

TEST(GeneralizedEmp, ConsistentFormHoldsForComplexSolution) {
  const double E = -30.0;
  const auto k2 = models::local_wavevector(sech_plus(), E);
  const auto xs = linspace(-3.0, 3.0, 2401);
  ode::PairOptions po;
  po.output_points = xs;
  const auto pair = ode::integrate_pair_from(k2, {-3.0, 3.0}, 0.0, models::pair_anchor_data(sech_plus(), E), 1.0,
                                             1e-12, po);
  ode::SolutionSamples s;
  for (const auto& p : pair.samples) {
    s.x.push_back(p.x);
    s.psi.push_back(p.unscaled_psi1());
    s.dpsi.push_back(p.unscaled_dpsi1());
  }
  const auto r = generalized_emp_residual(
      s, [&](double x) { return k2(x).real(); }, [&](double x) { return k2(x).imag(); });
  EXPECT_LT(r.r1_consistent, 1e-6);
  EXPECT_LT(r.r2, 1e-6);
  EXPECT_GT(r.r1_printed, 1e-3);
}

TEST(PtOddness, SigmaImaginaryPartIsOdd) {
  const auto xs = linspace(-4.0, 4.0, 401);
  for (double E : {-30.0, -12.0}) {
    const models::AnalyticPair ap(sech_plus(), E);
    std::vector<cplx> sig;
    for (double x : xs) sig.push_back(ap.sigma(x));
    EXPECT_LT(pt_oddness(xs, sig), 1e-7) << E;
  }
  EXPECT_EQ(kind_of([] { pt_oddness({-1.0, 0.5}, {cplx(1.0), cplx(1.0)}); }), ErrorKind::AsymmetricGrid);
}

TEST(IntegrationWindow, CoversTurningPoints) {
  const auto w = integration_window(harmonic(), 9.0);
  EXPECT_LT(w.range.lo, -3.0);
  EXPECT_GT(w.range.hi, 3.0);
  EXPECT_NEAR(w.last_allowed_hi, 3.0, 0.05);
  EXPECT_NEAR(potential_floor(sech_plus()), 0.25 - (1.0 - 7.5 + 56.25), 1e-6);
}
