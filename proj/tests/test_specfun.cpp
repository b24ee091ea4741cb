#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "milne/specfun/gamma.hpp"
#include "milne/specfun/hypergeometric.hpp"
#include "milne/specfun/whittaker.hpp"
#include "support/hp_oracle.hpp"

using namespace milne;
using namespace milne::specfun;

namespace {

double rel(cplx got, cplx want) { return std::abs(got - want) / std::abs(want); }

}  // namespace

// ---------------------------------------------------------------- Gamma ----

TEST(Gamma, MatchesStdTgammaOnRealAxis) {
  for (double x : {0.1, 0.5, 1.0, 2.5, 7.3, 20.0, -0.5, -2.7, -10.25}) {
    EXPECT_LT(rel(specfun::gamma(x), std::tgamma(x)), 1e-13) << x;
  }
}

TEST(Gamma, ReciprocalVanishesAtPoles) {
  EXPECT_EQ(rgamma(0.0), cplx(0.0));
  EXPECT_EQ(rgamma(-3.0), cplx(0.0));
  EXPECT_LT(std::abs(rgamma(3.0) - 0.5), 1e-15);
}

TEST(Gamma, ComplexReflectionConsistency) {
  // Gamma(z) Gamma(1 - z) = pi / sin(pi z)
  const cplx z(0.3, 1.7);
  EXPECT_LT(rel(specfun::gamma(z) * specfun::gamma(1.0 - z), pi / std::sin(pi * z)), 1e-13);
}

// ------------------------------------------------------------------ 2F1 ----

TEST(Gauss2F1, ZeroArgumentIsOne) {
  EXPECT_EQ(gauss_2f1(0.3, -4.1, 2.2, 0.0), cplx(1.0));
  EXPECT_EQ(gauss_2f1(cplx(1, 2), 5.0, cplx(-0.5, 1), 0.0), cplx(1.0));
}

TEST(Gauss2F1, LogClosedForm) {
  EXPECT_LT(rel(gauss_2f1(1, 1, 2, 0.5), 2.0 * std::log(2.0)), 1e-14);
}

TEST(Gauss2F1, PolynomialMatchesHighPrecisionOracle) {
  const double z = std::sin(0.3) * std::sin(0.3);
  const hp::real want = hp::series_2f1(-2, 7, hp::real(5) / 2, hp::real(z));
  EXPECT_LT(rel(gauss_2f1(-2, 7, 2.5, z), want.convert_to<double>()), 1e-15);
  // 50-digit reference recorded from an independent arbitrary-precision library
  EXPECT_NEAR(want.convert_to<double>(), 0.559751957617467571311965186685, 1e-15);
}

TEST(Gauss2F1, PolynomialTruncationIsExact) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int n = 0; n <= 12; ++n) {
    const double b = u(rng);
    const double c = std::abs(u(rng)) + 0.25;
    const double z = u(rng);
    // exact finite sum, evaluated independently in 50 digits
    hp::real sum = 1, term = 1, magnitude = 1;
    for (int k = 0; k < n; ++k) {
      term *= (hp::real(-n) + k) * (hp::real(b) + k) / ((hp::real(c) + k) * (k + 1)) * hp::real(z);
      sum += term;
      magnitude += abs(term);
    }
    const double want = sum.convert_to<double>();
    const double got = gauss_2f1(-n, b, c, z).real();
    // machine precision relative to the size of the summed terms
    EXPECT_LE(std::abs(got - want), 8 * 2.2e-16 * magnitude.convert_to<double>()) << n;
  }
}

TEST(Gauss2F1, DirectSeriesAgainstOracle) {
  struct Case { double a, b, c, z; };
  for (auto p : {Case{0.3, 1.7, 2.2, 0.45}, Case{-1.3, 2.4, 0.7, -0.49}, Case{5.5, -3.25, 1.5, 0.3}}) {
    const double want = hp::series_2f1(p.a, p.b, p.c, p.z).convert_to<double>();
    EXPECT_LT(rel(gauss_2f1(p.a, p.b, p.c, p.z), want), 1e-13);
  }
}

TEST(Gauss2F1, TransformationRegions) {
  // 30-digit references from an independent arbitrary-precision library
  EXPECT_LT(rel(gauss_2f1(0.3, 1.7, 2.2, 0.93), 1.64057995965950617997208678791), 1e-12);
  EXPECT_LT(rel(gauss_2f1(1.25, -0.4, 0.6, -0.8), 1.51689239390227680707163621434), 1e-12);
  EXPECT_LT(rel(gauss_2f1(4.2, 4.9, 1.5, -5000.0), -1.83544384860344983561559710023e-17), 1e-11);
  EXPECT_LT(rel(gauss_2f1(-0.35, 2.15, -0.5, 0.97), 3069.74839087938091123175086816), 1e-12);
  EXPECT_LT(rel(gauss_2f1(2.5, 1.0, 0.7, -1.6), -0.0373866434805572846125036616183), 1e-12);
  const cplx got = gauss_2f1(cplx(4.3, 0.7), cplx(4.3, -0.7), 1.5, -37.5);
  EXPECT_LT(std::abs(got - (-4.21937461781045754536274461957e-8)), 1e-12 * 4.2e-8);
}

TEST(Gauss2F1, DegenerateConnectionUsesLimit) {
  // 2F1(1,1;2;z) = -log(1-z)/z, degenerate for both the 1-z and 1/z formulas
  for (double z : {0.9, 0.999, -3.0, -1e4, -1.5}) {
    EXPECT_LT(rel(gauss_2f1(1, 1, 2, z), -std::log1p(-z) / z), 1e-9) << z;
  }
}

TEST(Gauss2F1, PoleInC) {
  try {
    gauss_2f1(0.5, 0.7, -2.0, 0.3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::PoleError);
  }
  // a = -1 truncates before the pole at c = -2
  EXPECT_LT(rel(gauss_2f1(-1.0, 0.7, -2.0, 0.3), 1.0 + (-1.0 * 0.7 / -2.0) * 0.3), 1e-15);
}

TEST(Gauss2F1, DivergesAtOneWithNonPositiveExcess) {
  try {
    gauss_2f1(1.0, 1.5, 2.0, 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NonConvergence);
  }
}

// (c-a) F(a-1) + (2a - c + (b-a) z) F(a) + a (z-1) F(a+1) = 0
TEST(Gauss2F1, ContiguousRelationProperty) {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> par(-4.0, 4.0);
  std::uniform_real_distribution<double> rad(0.0, 0.9);
  std::uniform_real_distribution<double> ang(-pi, pi);
  int checked = 0;
  while (checked < 100) {
    const cplx a(par(rng), 0.5 * par(rng));
    const cplx b(par(rng), 0.0);
    const cplx c(par(rng), 0.3 * par(rng));
    if (is_nonpositive_integer(c, 1e-3)) continue;
    const cplx z = std::polar(rad(rng), ang(rng));
    const cplx fm = gauss_2f1(a - 1.0, b, c, z);
    const cplx f0 = gauss_2f1(a, b, c, z);
    const cplx fp = gauss_2f1(a + 1.0, b, c, z);
    const cplx t1 = (c - a) * fm;
    const cplx t2 = (2.0 * a - c + (b - a) * z) * f0;
    const cplx t3 = a * (z - 1.0) * fp;
    const double scale = std::abs(t1) + std::abs(t2) + std::abs(t3);
    EXPECT_LT(std::abs(t1 + t2 + t3), 1e-9 * scale) << "a=" << a << " b=" << b << " c=" << c << " z=" << z;
    ++checked;
  }
}

// ---------------------------------------------------------------- Kummer ---

TEST(KummerM, Identities) {
  EXPECT_EQ(kummer_m(0.3, 1.2, 0.0), cplx(1.0));
  for (double z : {-3.0, 0.5, 7.0, 30.0}) {
    EXPECT_LT(rel(kummer_m(1.0, 1.0, z), std::exp(z)), 1e-14) << z;
  }
}

TEST(KummerM, OracleValue) {
  const double want = hp::series_1f1(hp::real(7) / 10, hp::real(19) / 10, hp::real(32) / 10).convert_to<double>();
  EXPECT_LT(rel(kummer_m(0.7, 1.9, 3.2), want), 1e-13);
  EXPECT_NEAR(want, 5.02109422888513244183558754791, 1e-14);
}

TEST(KummerM, NegativeArgumentAndAsymptoticRegime) {
  EXPECT_LT(rel(kummer_m(0.7, 1.9, -20.0), 0.127720674685875076749605231708), 1e-12);
  const KummerResult r = kummer_m_checked(-2.3, 0.5, 60.0);
  EXPECT_TRUE(r.asymptotic);
  EXPECT_FALSE(r.accuracy_loss);
  EXPECT_LT(rel(r.value, -1730773905810026529369.00898078), 1e-11);
}

TEST(KummerM, PoleInB) {
  try {
    kummer_m(0.5, -1.0, 2.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::PoleError);
  }
}

// -------------------------------------------------------------- Whittaker --

TEST(Whittaker, SmallArgumentLeadingOrder) {
  for (double kappa : {0.0, 0.8, 2.75}) {
    const double z = 1e-9;
    const cplx m = whittaker_m({kappa, -0.25, z});
    EXPECT_NEAR((m / std::pow(z, 0.25)).real(), 1.0, 1e-8);
  }
}

TEST(Whittaker, MOracleValues) {
  const double m0 = hp::whittaker_m(0, hp::real(1) / 4, 1).convert_to<double>();
  EXPECT_LT(rel(whittaker_m({0.0, 0.25, 1.0}), m0), 1e-12);
  EXPECT_NEAR(m0, 1.05069891241648280265686929337, 1e-14);

  const double m1 = hp::whittaker_m(hp::real(3) / 2, -hp::real(1) / 4, hp::real(8) / 10).convert_to<double>();
  EXPECT_LT(rel(whittaker_m({1.5, -0.25, 0.8}), m1), 1e-12);
  EXPECT_NEAR(m1, -0.541911936779275322472705530515, 1e-14);
}

TEST(Whittaker, MZeroIndexBesselForm) {
  // M_{0,mu}(z) = Gamma(1+mu) 2^{2mu} sqrt(z) I_mu(z/2)
  const double z = 1.0;
  const double want = std::tgamma(1.25) * std::sqrt(2.0) * std::sqrt(z) * std::cyl_bessel_i(0.25, z / 2);
  EXPECT_LT(rel(whittaker_m({0.0, 0.25, z}), want), 1e-12);
}

TEST(Whittaker, WOracleValue) {
  const double w = hp::whittaker_w(hp::real(1) / 4, -hp::real(1) / 4, 2).convert_to<double>();
  EXPECT_LT(rel(whittaker_w({0.25, -0.25, 2.0}), w), 1e-11);
  EXPECT_NEAR(w, 0.43748484890430416815693911971, 1e-14);
}

TEST(Whittaker, WLargeArgumentAsymptotics) {
  for (double kappa : {0.25, 1.2, 2.75}) {
    const double z = 1000.0;
    const cplx w = whittaker_w({kappa, -0.25, z});
    EXPECT_NEAR((w / (std::exp(-z / 2) * std::pow(z, kappa))).real(), 1.0, 1e-2) << kappa;
  }
  EXPECT_LT(rel(whittaker_w({1.2, -0.25, 45.0}), 1.61467422021525969237771586546e-8), 1e-10);
}

TEST(Whittaker, WronskianConstantAcrossArguments) {
  const cplx kappa = 0.37;
  const cplx mu = -0.25;
  const cplx exact = whittaker_wronskian_exact(kappa, mu);
  cplx at[2];
  int i = 0;
  for (double z : {1.0, 2.0}) {
    const WhittakerParams p{kappa, mu, z};
    at[i++] = whittaker_m(p) * whittaker_w_dz(p) - whittaker_m_dz(p) * whittaker_w(p);
  }
  EXPECT_LT(rel(at[0], exact), 1e-11);
  EXPECT_LT(rel(at[1], exact), 1e-11);
  EXPECT_LT(rel(at[0], at[1]), 1e-11);
}

TEST(Whittaker, ConnectionFormulaGuard) {
  try {
    whittaker_w({0.3, 0.5, 1.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ConnectionFormulaPole);
  }
  try {
    whittaker_m({0.3, -0.5, 1.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::PoleError);
  }
}
