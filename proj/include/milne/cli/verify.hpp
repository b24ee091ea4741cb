#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "milne/core/error.hpp"
#include "milne/milne/amplitude.hpp"
#include "milne/milne/continuation.hpp"
#include "milne/milne/energy_integral.hpp"
#include "milne/milne/extent.hpp"
#include "milne/milne/residuals.hpp"
#include "milne/milne/wkb.hpp"
#include "milne/models/analytic.hpp"
#include "milne/models/identities.hpp"
#include "milne/models/model.hpp"
#include "milne/models/superpotential.hpp"
#include "milne/ode/fundamental_pair.hpp"
#include "milne/ode/milne_direct.hpp"
#include "milne/oracle/shooting.hpp"
#include "milne/quantize/spectrum.hpp"

namespace milne::verify {

/// One line of a verification report. A check without a limit is informational.
struct Check {
  std::string name;
  double value = 0.0;
  double limit = std::numeric_limits<double>::quiet_NaN();
  bool pass = true;
  std::string note;
};

inline Check check(std::string name, double value, double limit, std::string note = {}) {
  return {std::move(name), value, limit, std::isfinite(value) && value < limit, std::move(note)};
}

inline Check info(std::string name, double value, std::string note = {}) {
  return {std::move(name), value, std::numeric_limits<double>::quiet_NaN(), true, std::move(note)};
}

inline Check failed(std::string name, const std::string& why) {
  return {std::move(name), std::numeric_limits<double>::quiet_NaN(), 0.0, false, why};
}

inline bool all_pass(const std::vector<Check>& cs) {
  return std::all_of(cs.begin(), cs.end(), [](const Check& c) { return c.pass; });
}

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"emp", "iik", "pt", "wronskian", "backends", "wkb", "oracle"};
  return names;
}

struct SuiteConfig {
  Backend backend = Backend::analytic;
  EnergyIntegralOptions integral{};
  std::optional<double> energy;  // otherwise the model's first levels
  int levels = 6;                // oracle / wkb depth
  int jobs = 1;
};

namespace detail {

inline std::string at(double E) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "E=%.10g", E);
  return buf;
}

inline bool has_closed_form(const models::ModelSpec& m) {
  return !std::holds_alternative<models::CustomTabulated>(m.variant);
}

inline bool is_susy(const models::ModelSpec& m) {
  return std::holds_alternative<models::PoschlTellerPair>(m.variant) ||
         std::holds_alternative<models::SechPair>(m.variant);
}

inline bool symmetric_domain(const models::ModelSpec& m) {
  return m.domain.lo == -m.domain.hi && m.anchor == 0.0;
}

inline int level_count(const models::ModelSpec& m, int want) {
  return std::min(want, models::bound_state_count(m));
}

// Energies a suite runs at: the given one, or the first `count` exact levels.
inline std::vector<double> energies(const models::ModelSpec& m, const SuiteConfig& cfg, int count = 3) {
  if (cfg.energy) return {*cfg.energy};
  if (!has_closed_form(m)) fail(ErrorKind::ConfigError, "--energy is required for a custom model");
  std::vector<double> out;
  for (int n = 0; n < level_count(m, count); ++n) out.push_back(models::exact_energy(m, n));
  return out;
}

// Interior stretch used for finite-difference checks.
inline Interval check_interval(const models::ModelSpec& m, double E) {
  if (std::holds_alternative<models::PoschlTellerPair>(m.variant)) return {0.1, pi / 2 - 0.1};
  if (!m.infinite_domain()) {
    const double pad = 0.05 * m.domain.width();
    return {m.domain.lo + pad, m.domain.hi - pad};
  }
  return integration_window(m, E).range;
}

inline std::vector<double> uniform(double lo, double hi, int n) {
  std::vector<double> xs(n);
  for (int i = 0; i < n; ++i) xs[i] = lo + (hi - lo) * i / (n - 1);
  return xs;
}

// Symmetric grid: x and -x are bitwise negatives.
inline std::vector<double> symmetric(double half, int n_half) {
  std::vector<double> xs;
  for (int i = n_half; i >= 1; --i) xs.push_back(-half * i / n_half);
  xs.push_back(0.0);
  for (int i = 1; i <= n_half; ++i) xs.push_back(half * i / n_half);
  return xs;
}

inline std::vector<cplx> sigma_on(const models::ModelSpec& m, double E, Backend backend,
                                  const std::vector<double>& xs) {
  std::vector<cplx> out;
  if (backend == Backend::analytic) {
    const models::AnalyticPair pair(m, E);
    for (double x : xs) out.push_back(pair.sigma(x));
    return out;
  }
  ode::PairOptions po;
  po.output_points = xs;
  po.control.atol = 1e-300;
  const Interval span{std::min(xs.front(), m.anchor), std::max(xs.back(), m.anchor)};
  const auto pair = ode::integrate_pair_from(models::local_wavevector(m, E), span, m.anchor,
                                             models::pair_anchor_data(m, E), 1.0, 1e-12, po);
  const auto amp = pinney_amplitude(pair, 1.0);
  for (double x : xs) {
    const auto it = std::lower_bound(amp.x.begin(), amp.x.end(), x);
    out.push_back(amp.sigma(static_cast<std::size_t>(it - amp.x.begin())));
  }
  return out;
}

// sigma of the pair with psi1 = 1, psi2' = 1 at the anchor.
inline std::vector<cplx> canonical_sigma_on(const models::ModelSpec& m, double E, const std::vector<double>& xs) {
  ode::PairOptions po;
  po.output_points = xs;
  po.control.atol = 1e-300;
  const Interval span{std::min(xs.front(), m.anchor), std::max(xs.back(), m.anchor)};
  const auto amp = pinney_amplitude(
      ode::integrate_fundamental_pair(models::local_wavevector(m, E), span, m.anchor, 1.0, 1e-12, po), 1.0);
  std::vector<cplx> out;
  for (double x : xs) {
    const auto it = std::lower_bound(amp.x.begin(), amp.x.end(), x);
    out.push_back(amp.sigma(static_cast<std::size_t>(it - amp.x.begin())));
  }
  return out;
}

}  // namespace detail

/// EMP residual of directly integrated trajectories (real potentials) or the
/// amplitude/phase residuals of the closed-form complex solution.
inline std::vector<Check> emp_suite(const models::ModelSpec& m, const SuiteConfig& cfg) {
  std::vector<Check> out;
  for (double E : detail::energies(m, cfg)) {
    const auto k2 = models::local_wavevector(m, E);
    const auto span = detail::check_interval(m, E);
    if (models::is_hermitian(m)) {
      RealField kappa = [k2](double x) { return k2(x).real(); };
      double kmax = 0.0;
      for (double x : detail::uniform(span.lo, span.hi, 401)) kmax = std::max(kmax, std::sqrt(std::abs(kappa(x))));
      ode::MilneDirectOptions mo;
      mo.grid_step = std::min(0.01, 0.01 / std::max(kmax, 1e-3));
      const double x0 = std::clamp(m.anchor, span.lo, span.hi), h = mo.grid_step;
      const Interval grid{x0 - h * std::floor((x0 - span.lo) / h), x0 + h * std::floor((span.hi - x0) / h)};
      try {
        // WKB amplitude at the anchor keeps rho free of the fast 2k ripple
        const double rho0 = kappa(x0) > 0.0 ? std::pow(kappa(x0), -0.25) : 1.0;
        const auto t = ode::integrate_milne_direct(kappa, 1.0, grid, x0, rho0, 0.0, 1e-12, mo);
        out.push_back(check("emp_residual " + detail::at(E), emp_residual(t, kappa), 1e-6));
      } catch (const Error& e) {
        out.push_back(failed("emp_residual " + detail::at(E), e.what()));
      }
    } else {
      if (!detail::has_closed_form(m)) fail(ErrorKind::ConfigError, "emp suite needs a closed-form model here");
      RealField kappa = [k2](double x) { return k2(x).real(); };
      RealField tau = [k2](double x) { return k2(x).imag(); };
      try {
        const models::AnalyticPair pair(m, E);
        ode::SolutionSamples s;
        s.x = detail::uniform(-3.0, 3.0, 2401);
        for (double x : s.x) {
          const auto v = pair(x);
          s.psi.push_back(v.psi1);
          s.dpsi.push_back(v.dpsi1);
        }
        const auto r = generalized_emp_residual(s, kappa, tau);
        out.push_back(check("amplitude_equation " + detail::at(E), r.r1_consistent, 1e-6, "rho phi'^2 form"));
        out.push_back(info("amplitude_equation_printed " + detail::at(E), r.r1_printed, "rho phi' form"));
        out.push_back(check("phase_equation " + detail::at(E), r.r2, 1e-6));
      } catch (const Error& e) {
        out.push_back(failed("generalized_emp " + detail::at(E), e.what()));
      }
    }
  }
  return out;
}

/// Intertwining identities at the + sector levels (any E != 0 would do).
inline std::vector<Check> iik_suite(const models::ModelSpec& m, const SuiteConfig& cfg) {
  if (!detail::is_susy(m)) fail(ErrorKind::ConfigError, "iik suite needs pt-pair or sech-pair");
  const auto plus = models::partner(m, models::Sector::plus);
  std::vector<double> Es = cfg.energy ? std::vector<double>{*cfg.energy} : detail::energies(plus, cfg);
  const bool pt = std::holds_alternative<models::PoschlTellerPair>(m.variant);
  const auto grid = pt ? detail::uniform(0.3, pi / 2 - 0.3, 41) : detail::uniform(-3.0, 3.0, 61);
  std::vector<Check> out;
  for (double E : Es) {
    try {
      const auto r = models::iik_residuals(m, E, grid);
      out.push_back(check("w_equal " + detail::at(E), r.w_equal, 1e-6));
      out.push_back(check("second_identity " + detail::at(E), r.second_identity, 1e-6));
      out.push_back(check("i2_identity " + detail::at(E), r.i2_identity, 1e-6));
      out.push_back(check("im_derivative " + detail::at(E), r.im_derivative, 1e-6));
    } catch (const Error& e) {
      out.push_back(failed("iik " + detail::at(E), e.what()));
    }
  }
  if (auto* s = std::get_if<models::SechPair>(&m.variant); s && s->lambda != 0.5) {
    const auto pair = models::susy_from_b(models::sech_pair_b(s->lambda), grid);
    out.push_back(check("susy_from_b", models::susy_identity_residual(pair, grid), 1e-10));
  }
  return out;
}

/// PT symmetry of the potential and, at the levels, oddness of Im sigma and the
/// size of the imaginary part of the energy integral.
inline std::vector<Check> pt_suite(const models::ModelSpec& m, const SuiteConfig& cfg) {
  if (!detail::symmetric_domain(m)) fail(ErrorKind::ConfigError, "pt suite needs a model symmetric about x = 0");
  std::vector<Check> out;
  const auto grid = detail::symmetric(8.0, 200);
  auto V = [&m](const models::ModelSpec& mm) { return ComplexField([mm](double x) { return models::potential(mm, x); }); };
  out.push_back(check("pt_residual " + models::model_name(m), models::pt_residual(V(m), grid), 1e-12));
  if (detail::is_susy(m)) {
    const auto other = models::partner(m, models::sector_of(m) == models::Sector::minus ? models::Sector::plus
                                                                                        : models::Sector::minus);
    out.push_back(check("pt_residual partner", models::pt_residual(V(other), grid), 1e-12));
    const auto U = models::superpotential(m);
    double worst = 0.0;
    for (double x : grid) worst = std::max(worst, std::abs(std::conj(U(-x)) + U(x)));
    out.push_back(check("superpotential_odd", worst, 1e-14));
  }
  if (models::is_hermitian(m) || !detail::has_closed_form(m)) return out;
  const EnergyCurve curve(m, cfg.backend, [&] {
    auto o = cfg.integral;
    o.check_imaginary = false;
    return o;
  }());
  const auto sym = detail::symmetric(6.0, 120);
  for (double E : detail::energies(m, cfg, models::bound_state_count(m))) {
    try {
      const auto s = curve(E);
      out.push_back(check("im_over_re " + detail::at(E), s.im_residual / std::abs(s.I), 1e-6));
    } catch (const Error& e) {
      out.push_back(failed("im_over_re " + detail::at(E), e.what()));
    }
    try {
      // the intertwined pair degenerates at E = 0; the canonical one stays PT covariant
      const auto sigma = E == 0.0 ? detail::canonical_sigma_on(m, E, sym) : detail::sigma_on(m, E, cfg.backend, sym);
      out.push_back(check("im_sigma_odd " + detail::at(E), pt_oddness(sym, sigma), 1e-7));
    } catch (const Error& e) {
      out.push_back(failed("im_sigma_odd " + detail::at(E), e.what()));
    }
  }
  return out;
}

/// Wronskian constancy of the integrated pair, and of the closed-form pair.
inline std::vector<Check> wronskian_suite(const models::ModelSpec& m, const SuiteConfig& cfg) {
  std::vector<Check> out;
  for (double E : detail::energies(m, cfg)) {
    try {
      const auto win = integration_window(m, E);
      const auto pair = ode::integrate_pair_from(models::local_wavevector(m, E), win.range, m.anchor,
                                                 detail::has_closed_form(m) ? models::pair_anchor_data(m, E)
                                                                            : ode::AnchorData{1.0, 0.0, 0.0, 1.0},
                                                 1.0, 1e-12);
      out.push_back(check("numeric_drift " + detail::at(E), pair.wronskian_drift_conditioned(1e6), 1e-8));
    } catch (const Error& e) {
      out.push_back(failed("numeric_drift " + detail::at(E), e.what()));
    }
    if (!detail::has_closed_form(m) || (models::is_hermitian(m) == false && E == 0.0)) continue;
    try {
      const models::AnalyticPair pair(m, E);
      const auto span = detail::check_interval(m, E);
      const double lo = std::max(span.lo, m.anchor - 2.0), hi = std::min(span.hi, m.anchor + 2.0);
      const cplx w0 = pair(m.anchor).wronskian();
      double worst = 0.0;
      for (double x : detail::uniform(lo, hi, 9)) worst = std::max(worst, std::abs(pair(x).wronskian() - w0) / std::abs(w0));
      out.push_back(check("analytic_drift " + detail::at(E), worst, 1e-9));
    } catch (const Error& e) {
      out.push_back(failed("analytic_drift " + detail::at(E), e.what()));
    }
  }
  return out;
}

/// Analytic and numeric energy integrals at the levels and between them.
inline std::vector<Check> backends_suite(const models::ModelSpec& m, const SuiteConfig& cfg) {
  if (!detail::has_closed_form(m)) fail(ErrorKind::ConfigError, "backends suite needs a built-in model");
  std::vector<double> Es = detail::energies(m, cfg);
  if (!cfg.energy) {
    const std::size_t n = Es.size();
    for (std::size_t i = 0; i + 1 < n; ++i) Es.push_back(0.5 * (Es[i] + Es[i + 1]));
    std::sort(Es.begin(), Es.end());
  }
  auto opt = cfg.integral;
  opt.check_imaginary = false;
  std::vector<Check> out;
  for (double E : Es) {
    if (detail::is_susy(m) && !models::is_hermitian(m) && E == 0.0) continue;
    try {
      const auto a = energy_integral(m, E, Backend::analytic, opt);
      const auto n = energy_integral(m, E, Backend::numeric, opt);
      out.push_back(check("analytic_vs_numeric " + detail::at(E), std::abs(a.raw - n.raw), 1e-6));
    } catch (const Error& e) {
      out.push_back(failed("analytic_vs_numeric " + detail::at(E), e.what()));
    }
  }
  return out;
}

/// WKB against the exact integral: I(E_n) - I_WKB(E_n) should be 1/2. It is exact
/// for quadratic potentials; elsewhere the defect is O(1).
inline std::vector<Check> wkb_suite(const models::ModelSpec& m, const SuiteConfig& cfg) {
  if (!models::is_hermitian(m)) fail(ErrorKind::ConfigError, "wkb suite needs a real potential");
  const bool quadratic = std::holds_alternative<models::Harmonic>(m.variant) ||
                         std::holds_alternative<models::Swanson>(m.variant);
  std::vector<Check> out;
  if (std::holds_alternative<models::Harmonic>(m.variant)) {
    for (double E : {0.5, 1.0, 3.0, 5.0, 7.5, 11.0}) {
      out.push_back(check("wkb_is_E_over_2 " + detail::at(E), std::abs(wkb_integral(m, E) - E / 2), 1e-10));
    }
  }
  std::vector<double> Es;
  if (cfg.energy) Es.push_back(*cfg.energy);
  else if (detail::has_closed_form(m)) {
    for (int n = 0; n < detail::level_count(m, cfg.levels); ++n) Es.push_back(models::exact_energy(m, n));
  } else {
    const auto sp = quantize::spectrum(m, cfg.levels, cfg.backend, {cfg.integral, 1e-10, cfg.jobs});
    for (const auto& l : sp.levels) Es.push_back(l.E);
  }
  const EnergyCurve curve(m, cfg.backend, cfg.integral);
  for (double E : Es) {
    try {
      const double d = curve(E).I - wkb_integral(m, E) - 0.5;
      out.push_back(check("wkb_defect " + detail::at(E), std::abs(d), quadratic ? 1e-3 : 0.6));
    } catch (const Error& e) {
      out.push_back(failed("wkb_defect " + detail::at(E), e.what()));
    }
  }
  return out;
}

/// Milne levels against the shooting oracle, plus node counts.
inline std::vector<Check> oracle_suite(const models::ModelSpec& m, const SuiteConfig& cfg) {
  if (!models::is_hermitian(m)) fail(ErrorKind::ConfigError, "oracle suite needs a real potential");
  quantize::SpectrumOptions so{cfg.integral, 1e-10, cfg.jobs};
  const auto sp = quantize::spectrum(m, detail::level_count(m, cfg.levels), cfg.backend, so);
  std::vector<Check> out;
  for (const auto& e : sp.errors) out.push_back(failed("level n=" + std::to_string(e.n), e.message));
  for (const auto& l : sp.levels) {
    const std::string tag = "n=" + std::to_string(l.n);
    try {
      const double Eo = oracle::oracle_eigenvalue(m, l.n);
      out.push_back(check("milne_vs_oracle " + tag, std::abs(l.E - Eo) / std::max(1.0, std::abs(Eo)), 1e-5));
      // the level sits inside the node-count window (n nodes just below, n + 1 just above)
      const double d = 1e-6 * std::max(1.0, std::abs(l.E));
      const int below = oracle::levels_below(m, l.E - d), above = oracle::levels_below(m, l.E + d);
      out.push_back(check("node_count " + tag, std::abs(below - l.n) + std::abs(above - l.n - 1), 0.5));
    } catch (const Error& e) {
      out.push_back(failed("oracle " + tag, e.what()));
    }
  }
  return out;
}

inline std::vector<Check> run_suite(const std::string& name, const models::ModelSpec& m, const SuiteConfig& cfg) {
  if (name == "emp") return emp_suite(m, cfg);
  if (name == "iik") return iik_suite(m, cfg);
  if (name == "pt") return pt_suite(m, cfg);
  if (name == "wronskian") return wronskian_suite(m, cfg);
  if (name == "backends") return backends_suite(m, cfg);
  if (name == "wkb") return wkb_suite(m, cfg);
  if (name == "oracle") return oracle_suite(m, cfg);
  fail(ErrorKind::ConfigError, "unknown suite '" + name + "'");
}

}  // namespace milne::verify
