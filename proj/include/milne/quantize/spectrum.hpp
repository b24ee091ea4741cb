#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "milne/core/error.hpp"
#include "milne/core/parallel.hpp"
#include "milne/milne/continuation.hpp"
#include "milne/milne/energy_integral.hpp"
#include "milne/milne/extent.hpp"
#include "milne/milne/wkb.hpp"

namespace milne::quantize {

struct SpectrumEntry {
  int n = 0;
  double E = 0.0;
  double I_at_E = 0.0;
  double im_residual = 0.0;
  double bracket_lo = 0.0, bracket_hi = 0.0;
  int iterations = 0;
  Backend backend = Backend::analytic;
};

struct ScanPoint {
  double E = 0.0;
  std::optional<EnergyIntegralSample> sample;  // empty when evaluation failed
  std::string error;
};

struct Scan {
  std::vector<ScanPoint> points;
  bool monotone = true;
  double worst_drop = 0.0;  // max(I_i - I_{i+1}) over consecutive good samples
  bool has_errors() const {
    return std::any_of(points.begin(), points.end(), [](const ScanPoint& p) { return !p.sample; });
  }
};

inline constexpr double monotone_slack = 1e-9;

/// Uniform grid of `steps` energies on [E_lo, E_hi]; failures are kept per point.
inline Scan scan_energy_integral(const EnergyCurve& curve, double E_lo, double E_hi, int steps, int jobs = 1) {
  if (!(E_lo < E_hi)) fail(ErrorKind::DomainError, "scan needs E_lo < E_hi");
  if (steps < 2) fail(ErrorKind::DomainError, "steps must be >= 2");
  Scan out;
  out.points.resize(steps);
  curve.offset(E_hi);  // builds the branch map once, before the parallel sweep
  parallel_for(static_cast<std::size_t>(steps), jobs, [&](std::size_t i) {
    auto& p = out.points[i];
    p.E = i + 1 == static_cast<std::size_t>(steps) ? E_hi : E_lo + (E_hi - E_lo) * i / (steps - 1);
    try {
      p.sample = curve(p.E);
    } catch (const Error& e) {
      p.error = e.what();
    }
  });
  const EnergyIntegralSample* prev = nullptr;
  for (const auto& p : out.points) {
    if (!p.sample) continue;
    if (prev) out.worst_drop = std::max(out.worst_drop, prev->I - p.sample->I);
    prev = &*p.sample;
  }
  out.monotone = out.worst_drop <= monotone_slack;
  return out;
}

inline Scan scan_energy_integral(const models::ModelSpec& m, double E_lo, double E_hi, int steps, Backend backend,
                                 const EnergyIntegralOptions& opt = {}, int jobs = 1) {
  return scan_energy_integral(EnergyCurve(m, backend, opt, jobs), E_lo, E_hi, steps, jobs);
}

/// Bisection for I(E) = n + 1 on a bracket with I(E_lo) <= n + 1 <= I(E_hi).
inline SpectrumEntry solve_level(const EnergyCurve& curve, int n, double E_lo, double E_hi, double tol = 1e-10) {
  if (!(tol > 0.0)) fail(ErrorKind::DomainError, "tolerance must be positive");
  if (!(E_lo < E_hi)) fail(ErrorKind::InvalidBracket, "bracket must satisfy E_lo < E_hi");
  const double target = n + 1.0;
  const auto s_lo = curve(E_lo), s_hi = curve(E_hi);
  if (!(s_lo.I <= target && target <= s_hi.I)) {
    fail(ErrorKind::InvalidBracket, "I(" + std::to_string(E_lo) + ") = " + std::to_string(s_lo.I) + ", I(" +
                                        std::to_string(E_hi) + ") = " + std::to_string(s_hi.I) +
                                        " do not bracket " + std::to_string(target));
  }
  SpectrumEntry e;
  e.n = n;
  e.backend = curve.backend();
  e.bracket_lo = E_lo;
  e.bracket_hi = E_hi;
  double lo = E_lo, hi = E_hi;
  int it = 0;
  while (hi - lo >= tol * std::max(1.0, std::abs(0.5 * (lo + hi)))) {
    if (it == 200) fail(ErrorKind::MaxIterations, "bisection did not converge in 200 steps");
    const double mid = 0.5 * (lo + hi);
    (curve(mid).I < target ? lo : hi) = mid;
    ++it;
  }
  e.E = 0.5 * (lo + hi);
  const auto s = curve(e.E);
  e.I_at_E = s.I;
  e.im_residual = s.im_residual;
  e.iterations = it;
  return e;
}

inline SpectrumEntry solve_level(const models::ModelSpec& m, int n, double E_lo, double E_hi, double tol,
                                 Backend backend, const EnergyIntegralOptions& opt = {}) {
  return solve_level(EnergyCurve(m, backend, opt), n, E_lo, E_hi, tol);
}

struct LevelError {
  int n = 0;
  std::string message;
};

struct SpectrumResult {
  std::vector<SpectrumEntry> levels;
  std::vector<LevelError> errors;
  bool exhausted = false;  // finite spectrum ran out before `levels` were found
  int available = 0;       // levels bracketed below the continuum when exhausted
  double scan_lo = 0.0, scan_hi = 0.0;
};

struct SpectrumOptions {
  EnergyIntegralOptions integral{};
  double tol = 1e-10;
  int jobs = 1;
};

namespace detail {

// Upper scan edge: just below the continuum, or where the WKB count passes the target.
inline double initial_upper(const models::ModelSpec& m, double floor, int levels) {
  const double cap = models::continuum_threshold(m);
  if (std::isfinite(cap)) return cap - 0.05;
  if (!models::is_hermitian(m)) return floor + 10.0 * levels;
  auto enough = [&](double span) {
    try {
      return wkb_integral(m, floor + span) >= levels + 1.0;
    } catch (const Error&) {
      return false;
    }
  };
  double span = 1.0;
  for (int k = 0; k < 60 && !enough(span); ++k) span *= 2.0;
  // doubling overshoots by up to 2x; high energies are the expensive ones
  double lo = 0.5 * span;
  for (int k = 0; k < 6; ++k) {
    const double mid = 0.5 * (lo + span);
    (enough(mid) ? span : lo) = mid;
  }
  return floor + 1.1 * span;
}

}  // namespace detail

/// Coarse scan, bracket each crossing I = n + 1, bisect. Range auto-extends twice.
inline SpectrumResult spectrum(const models::ModelSpec& m, int levels, Backend backend,
                               const SpectrumOptions& opt = {}) {
  if (levels < 1) fail(ErrorKind::DomainError, "levels must be >= 1");
  const EnergyCurve curve(m, backend, opt.integral, opt.jobs);
  const double cap = models::continuum_threshold(m);
  SpectrumResult out;
  out.scan_lo = potential_floor(m) - 1.0;
  out.scan_hi = std::max(out.scan_lo + 1.0, detail::initial_upper(m, out.scan_lo + 1.0, levels));
  const int points = std::max(64, 8 * levels);

  std::vector<std::pair<double, double>> brackets;
  for (int attempt = 0; attempt < 3; ++attempt) {
    const auto scan = scan_energy_integral(curve, out.scan_lo, out.scan_hi, points, opt.jobs);
    brackets.assign(levels, {NAN, NAN});
    const ScanPoint* prev = nullptr;
    for (const auto& p : scan.points) {
      if (!p.sample) continue;
      if (prev) {
        for (int n = 0; n < levels; ++n) {
          const double t = n + 1.0;
          if (std::isnan(brackets[n].first) && prev->sample->I <= t && t <= p.sample->I) {
            brackets[n] = {prev->E, p.E};
          }
        }
      }
      prev = &p;
    }
    const bool complete = std::none_of(brackets.begin(), brackets.end(), [](auto b) { return std::isnan(b.first); });
    if (complete || std::isfinite(cap)) break;
    if (attempt < 2) out.scan_hi = out.scan_lo + 2.0 * (out.scan_hi - out.scan_lo);
  }

  std::vector<int> todo;
  for (int n = 0; n < levels; ++n) {
    if (!std::isnan(brackets[n].first)) todo.push_back(n);
  }
  if (std::isfinite(cap) && static_cast<int>(todo.size()) < levels) {
    out.exhausted = true;
    out.available = static_cast<int>(todo.size());
  }
  std::vector<std::optional<SpectrumEntry>> solved(todo.size());
  std::vector<std::string> failures(todo.size());
  parallel_for(todo.size(), opt.jobs, [&](std::size_t i) {
    const int n = todo[i];
    try {
      solved[i] = solve_level(curve, n, brackets[n].first, brackets[n].second, opt.tol);
    } catch (const Error& e) {
      failures[i] = e.what();
    }
  });
  for (std::size_t i = 0; i < todo.size(); ++i) {
    if (solved[i]) out.levels.push_back(*solved[i]);
    else out.errors.push_back({todo[i], failures[i]});
  }
  if (!out.exhausted) {
    for (int n = 0; n < levels; ++n) {
      if (std::isnan(brackets[n].first)) {
        out.errors.push_back({n, std::string(to_string(ErrorKind::BracketNotFound)) + ": no crossing of I = " +
                                     std::to_string(n + 1) + " below E = " + std::to_string(out.scan_hi)});
      }
    }
  }
  std::sort(out.errors.begin(), out.errors.end(), [](const auto& a, const auto& b) { return a.n < b.n; });
  return out;
}

}  // namespace milne::quantize
