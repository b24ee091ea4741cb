// Prints one PASS/FAIL line per acceptance criterion. Exit status is the number of
// failing criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "milne/cli/verify.hpp"
#include "milne/specfun/hypergeometric.hpp"
#include "milne/specfun/whittaker.hpp"
#include "support/hp_oracle.hpp"

using namespace milne;
using models::Sector;

namespace {

struct Case {
  std::string label;
  models::ModelSpec model;
  int levels;                    // levels requested from the spectrum solver
  std::pair<double, double> fig;  // scan window
};

std::vector<Case> matrix() {
  auto sw = [](double w, double a, double b) { return models::make_model(models::Swanson{w, a, b}); };
  return {
      {"swanson(1/2,1/8,1/4)", sw(0.5, 0.125, 0.25), 6, {0.0, 1.4}},
      {"swanson(1,1/2,1/4)", sw(1.0, 0.5, 0.25), 6, {0.0, 4.5}},
      {"swanson(3/2,1,1/3)", sw(1.5, 1.0, 1.0 / 3.0), 6, {0.0, 6.0}},
      {"pt-pair(2,3,-)", models::make_model(models::PoschlTellerPair{2.0, 3.0, Sector::minus}), 9, {0.0, 430.0}},
      {"pt-pair(2,3,+)", models::make_model(models::PoschlTellerPair{2.0, 3.0, Sector::plus}), 8, {0.0, 430.0}},
      {"sech-pair(15/2,-)", models::make_model(models::SechPair{7.5, Sector::minus}), 8, {-45.0, 0.2}},
      {"sech-pair(15/2,+)", models::make_model(models::SechPair{7.5, Sector::plus}), 8, {-45.0, 0.2}},
      {"harmonic", models::make_model(models::Harmonic{}), 6, {0.0, 12.0}},
  };
}

double relerr(double got, double want) { return std::abs(got - want) / std::max(1.0, std::abs(want)); }

std::string fmt(double v) {
  char b[32];
  std::snprintf(b, sizeof b, "%.3g", v);
  return b;
}

std::string list(const std::vector<double>& v) {
  std::ostringstream o;
  o << "[";
  for (std::size_t i = 0; i < v.size(); ++i) o << (i ? "," : "") << std::round(v[i] * 1e6) / 1e6 + 0.0;
  o << "]";
  return o.str();
}

std::vector<double> energies(const quantize::SpectrumResult& s) {
  std::vector<double> out;
  for (const auto& l : s.levels) out.push_back(l.E);
  return out;
}

struct Spectra {
  std::map<std::string, quantize::SpectrumResult> analytic, numeric;
};

const quantize::SpectrumResult& spectrum_of(Spectra& cache, const Case& c, Backend b) {
  auto& m = b == Backend::analytic ? cache.analytic : cache.numeric;
  auto it = m.find(c.label);
  if (it == m.end()) it = m.emplace(c.label, quantize::spectrum(c.model, c.levels, b)).first;
  return it->second;
}

struct Verdict {
  bool pass;
  std::string detail;
};

Verdict closed_form_levels(Spectra& cache, const std::vector<Case>& cases, int want, double rel_tol) {
  bool ok = true;
  double worst_E = 0.0, worst_I = 0.0;
  std::string notes;
  for (const auto& c : cases) {
    const auto& s = spectrum_of(cache, c, Backend::analytic);
    if (static_cast<int>(s.levels.size()) != std::min(want, c.levels) || !s.errors.empty()) {
      ok = false;
      notes += " " + c.label + " returned " + std::to_string(s.levels.size()) + " levels;";
    }
    for (const auto& l : s.levels) {
      const double exact = models::exact_energy(c.model, l.n);
      worst_E = std::max(worst_E, relerr(l.E, exact));
      worst_I = std::max(worst_I, std::abs(energy_integral(c.model, exact, Backend::analytic).I - (l.n + 1.0)));
    }
  }
  ok = ok && worst_E < rel_tol && worst_I < 1e-6;
  return {ok, "max rel |E - E_exact| = " + fmt(worst_E) + ", max |I(E_n) - (n+1)| = " + fmt(worst_I) + notes};
}

Verdict criterion1(Spectra& cache, const std::vector<Case>& cases) {
  return closed_form_levels(cache, {cases[0], cases[1], cases[2]}, 6, 1e-6);
}

Verdict criterion2(Spectra& cache, const std::vector<Case>& cases) {
  auto v = closed_form_levels(cache, {cases[3], cases[4]}, 9, 1e-6);
  v.detail = "- " + list(energies(spectrum_of(cache, cases[3], Backend::analytic))) + ", + " +
             list(energies(spectrum_of(cache, cases[4], Backend::analytic))) + "; " + v.detail;
  return v;
}

Verdict criterion3(Spectra& cache, const std::vector<Case>& cases) {
  const auto& minus = spectrum_of(cache, cases[5], Backend::analytic);
  const auto& plus = spectrum_of(cache, cases[6], Backend::analytic);
  const std::vector<double> want_minus{-42, -30, -20, -12, -6, -2, 0}, want_plus{-30, -20, -12, -6, -2, 0};
  auto matches = [](const std::vector<double>& got, const std::vector<double>& want, double tol) {
    if (got.size() != want.size()) return false;
    for (std::size_t i = 0; i < got.size(); ++i) {
      if (relerr(got[i], want[i]) >= tol) return false;
    }
    return true;
  };
  double worst_im = 0.0;
  for (const auto* s : {&minus, &plus}) {
    for (const auto& l : s->levels) worst_im = std::max(worst_im, l.im_residual);
  }
  const bool ok_minus = matches(energies(minus), want_minus, 1e-5);
  const bool ok_plus = matches(energies(plus), want_plus, 1e-4);
  std::string d = "- " + std::to_string(minus.levels.size()) + " levels " + list(energies(minus)) + " (" +
                  (ok_minus ? "ok" : "mismatch") + "); + " + std::to_string(plus.levels.size()) + " levels " +
                  list(energies(plus)) + " (" + (ok_plus ? "ok" : "expected 6 levels -30..0") +
                  "); max im_residual = " + fmt(worst_im);
  return {ok_minus && ok_plus && worst_im < 1e-6, d};
}

Verdict suite_verdict(const std::vector<verify::Check>& checks) {
  int failed = 0, counted = 0;
  double worst_ratio = 0.0;
  std::string first;
  for (const auto& c : checks) {
    if (std::isnan(c.limit)) continue;
    ++counted;
    if (!c.pass) {
      ++failed;
      if (first.empty()) first = " first failure: " + c.name + (c.note.empty() ? "" : " (" + c.note + ")");
    }
    if (c.limit > 0.0 && std::isfinite(c.value)) worst_ratio = std::max(worst_ratio, c.value / c.limit);
  }
  return {failed == 0, std::to_string(counted - failed) + "/" + std::to_string(counted) +
                           " checks pass, worst value/limit = " + fmt(worst_ratio) + first};
}

std::vector<verify::Check> concat(std::vector<verify::Check> a, const std::vector<verify::Check>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

Verdict criterion4(const std::vector<Case>& cases) {
  return suite_verdict(verify::pt_suite(cases[6].model, {}));
}

Verdict criterion5(const std::vector<Case>& cases) {
  auto checks = verify::iik_suite(cases[3].model, {});
  checks = concat(checks, verify::iik_suite(cases[5].model, {}));
  return suite_verdict(checks);
}

Verdict criterion6(Spectra& cache, const std::vector<Case>& cases) {
  double worst_an = 0.0, worst_ao = 0.0, worst_no = 0.0;
  bool ok = true;
  std::string notes;
  for (const auto& c : cases) {
    if (!models::is_hermitian(c.model)) continue;
    const auto& a = spectrum_of(cache, c, Backend::analytic);
    const auto& n = spectrum_of(cache, c, Backend::numeric);
    const std::size_t count = std::min<std::size_t>(6, a.levels.size());
    if (n.levels.size() < count) {
      ok = false;
      notes += " " + c.label + ": numeric backend found " + std::to_string(n.levels.size()) + " levels;";
      continue;
    }
    for (std::size_t i = 0; i < count; ++i) {
      const double o = oracle::oracle_eigenvalue(c.model, a.levels[i].n);
      worst_an = std::max(worst_an, relerr(a.levels[i].E, n.levels[i].E));
      worst_ao = std::max(worst_ao, relerr(a.levels[i].E, o));
      worst_no = std::max(worst_no, relerr(n.levels[i].E, o));
    }
  }
  ok = ok && worst_an < 1e-5 && worst_ao < 1e-5 && worst_no < 1e-5;
  std::string d = "hermitian: analytic/numeric " + fmt(worst_an) + ", analytic/oracle " + fmt(worst_ao) +
                  ", numeric/oracle " + fmt(worst_no) + ";";
  // isospectrality: + levels against - levels without the - ground state
  auto iso = [&](const Case& minus, const Case& plus) {
    auto m = energies(spectrum_of(cache, minus, Backend::analytic));
    const auto p = energies(spectrum_of(cache, plus, Backend::analytic));
    if (!m.empty()) m.erase(m.begin());
    bool same = m.size() == p.size();
    for (std::size_t i = 0; same && i < m.size(); ++i) same = relerr(p[i], m[i]) < 1e-5;
    d += " " + plus.label + " vs " + minus.label + " minus ground: " +
         (same ? "match" : "mismatch (" + std::to_string(p.size()) + " vs " + std::to_string(m.size()) + " levels)") +
         ";";
    return same;
  };
  const bool iso_pt = iso(cases[3], cases[4]);
  const bool iso_sech = iso(cases[5], cases[6]);
  return {ok && iso_pt && iso_sech, d + notes};
}

Verdict criterion7(const std::vector<Case>& cases) {
  std::vector<verify::Check> emp;
  for (const auto& c : cases) emp = concat(emp, verify::emp_suite(c.model, {}));
  const auto emp_v = suite_verdict(emp);

  double spread = 0.0;
  for (const auto& c : cases) {
    const int count = std::min(3, models::bound_state_count(c.model));
    std::vector<const EnergyCurve*> curves;
    std::vector<EnergyCurve> owned;
    for (double lambda : {0.5, 1.0, 2.0}) {
      EnergyIntegralOptions o;
      o.lambda = lambda;
      owned.emplace_back(c.model, Backend::analytic, o);
    }
    for (int n = 0; n < count; ++n) {
      const double E = models::exact_energy(c.model, n);
      double lo = INFINITY, hi = -INFINITY;
      for (const auto& curve : owned) {
        const double I = curve(E).I;
        lo = std::min(lo, I);
        hi = std::max(hi, I);
      }
      spread = std::max(spread, hi - lo);
    }
  }

  bool monotone = true;
  double worst_drop = 0.0;
  std::string bad;
  for (const auto& c : cases) {
    const auto s = quantize::scan_energy_integral(c.model, c.fig.first, c.fig.second, 57, Backend::analytic);
    bool all = std::all_of(s.points.begin(), s.points.end(), [](const auto& p) { return p.sample.has_value(); });
    if (!s.monotone || !all) {
      monotone = false;
      bad += " " + c.label;
    }
    worst_drop = std::max(worst_drop, s.worst_drop);
  }
  return {emp_v.pass && spread < 1e-9 && monotone,
          "emp: " + emp_v.detail + "; lambda spread at levels = " + fmt(spread) + "; scans monotone: " +
              (monotone ? "yes" : "no," + bad) + " (largest drop " + fmt(worst_drop) + ")"};
}

Verdict criterion8(const std::vector<Case>& cases) {
  return suite_verdict(verify::wkb_suite(cases[7].model, {}));
}

Verdict criterion9() {
  using specfun::gauss_2f1;
  auto rel = [](cplx got, double want) { return std::abs(got - want) / std::abs(want); };
  struct Ref {
    std::string name;
    double err, tol;
  };
  std::vector<Ref> refs;
  const double z = std::sin(0.3) * std::sin(0.3);
  refs.push_back({"2F1(-2,7;5/2;sin^2 0.3)",
                  rel(gauss_2f1(-2, 7, 2.5, z), hp::series_2f1(-2, 7, hp::real(5) / 2, hp::real(z)).convert_to<double>()),
                  1e-14});
  refs.push_back({"2F1 direct", rel(gauss_2f1(0.3, 1.7, 2.2, 0.45), hp::series_2f1(0.3, 1.7, 2.2, 0.45).convert_to<double>()),
                  1e-13});
  refs.push_back({"2F1 z=0.93", rel(gauss_2f1(0.3, 1.7, 2.2, 0.93), 1.64057995965950617997208678791), 1e-12});
  refs.push_back({"2F1 z=-0.8", rel(gauss_2f1(1.25, -0.4, 0.6, -0.8), 1.51689239390227680707163621434), 1e-12});
  refs.push_back({"2F1 z=-5000", rel(gauss_2f1(4.2, 4.9, 1.5, -5000.0), -1.83544384860344983561559710023e-17), 1e-11});
  refs.push_back({"1F1(0.7;1.9;3.2)",
                  rel(specfun::kummer_m(0.7, 1.9, 3.2),
                      hp::series_1f1(hp::real(7) / 10, hp::real(19) / 10, hp::real(32) / 10).convert_to<double>()),
                  1e-13});
  refs.push_back({"M(0,1/4,1)", rel(specfun::whittaker_m({0.0, 0.25, 1.0}), hp::whittaker_m(0, hp::real(1) / 4, 1).convert_to<double>()),
                  1e-12});
  refs.push_back({"W(1/4,-1/4,2)",
                  rel(specfun::whittaker_w({0.25, -0.25, 2.0}),
                      hp::whittaker_w(hp::real(1) / 4, -hp::real(1) / 4, 2).convert_to<double>()),
                  1e-11});
  int bad_refs = 0;
  double worst = 0.0;
  for (const auto& r : refs) {
    if (!(r.err < r.tol)) ++bad_refs;
    worst = std::max(worst, r.err / r.tol);
  }

  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> par(-4.0, 4.0), rad(0.0, 0.9), ang(-pi, pi);
  int checked = 0, bad_rel = 0;
  while (checked < 100) {
    const cplx a(par(rng), 0.5 * par(rng)), b(par(rng), 0.0), c(par(rng), 0.3 * par(rng));
    if (specfun::is_nonpositive_integer(c, 1e-3)) continue;
    const cplx zz = std::polar(rad(rng), ang(rng));
    const cplx t1 = (c - a) * gauss_2f1(a - 1.0, b, c, zz);
    const cplx t2 = (2.0 * a - c + (b - a) * zz) * gauss_2f1(a, b, c, zz);
    const cplx t3 = a * (zz - 1.0) * gauss_2f1(a + 1.0, b, c, zz);
    if (!(std::abs(t1 + t2 + t3) < 1e-9 * (std::abs(t1) + std::abs(t2) + std::abs(t3)))) ++bad_rel;
    ++checked;
  }
  return {bad_refs == 0 && bad_rel == 0, std::to_string(refs.size() - bad_refs) + "/" + std::to_string(refs.size()) +
                                             " oracle values (worst err/tol " + fmt(worst) + "), contiguous relation " +
                                             std::to_string(checked - bad_rel) + "/100"};
}

}  // namespace

int main() {
  const auto cases = matrix();
  Spectra cache;
  const std::vector<std::function<Verdict()>> criteria{
      [&] { return criterion1(cache, cases); }, [&] { return criterion2(cache, cases); },
      [&] { return criterion3(cache, cases); }, [&] { return criterion4(cases); },
      [&] { return criterion5(cases); },        [&] { return criterion6(cache, cases); },
      [&] { return criterion7(cases); },        [&] { return criterion8(cases); },
      [&] { return criterion9(); },
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = criteria[i]();
    } catch (const std::exception& e) {
      v = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!v.pass) ++failures;
    std::printf("criterion %zu: %s  %s  [%.1fs]\n", i + 1, v.pass ? "PASS" : "FAIL", v.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return failures;
}
