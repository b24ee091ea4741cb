#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <vector>

#include "milne/core/parallel.hpp"
#include "milne/milne/energy_integral.hpp"
#include "milne/milne/extent.hpp"

namespace milne {

/// Energy where Re I jumps by `shift` (an even integer, negated here) as a pair of
/// complex-conjugate zeros of sigma crosses the real axis.
struct BranchJump {
  double E = 0.0;  // offset applies for energies above E
  int shift = 0;
};

/// I(E) continued in energy. For a complex potential the principal value of
/// Re (W/pi) int 1/sigma jumps by +-2 wherever a zero of sigma crosses the real x
/// axis; the curve here removes those jumps, counting from a reference energy below
/// the potential floor where no zeros are present. Real potentials pass through.
class EnergyCurve {
 public:
  static constexpr double grid_step = 0.25;
  static constexpr double jump_threshold = 1.0;

  EnergyCurve(models::ModelSpec m, Backend backend, EnergyIntegralOptions opt = {}, int jobs = 1)
      : model_(std::move(m)), backend_(backend), opt_(opt), jobs_(jobs), map_(std::make_shared<Map>()) {
    map_->active = !models::is_hermitian(model_);
    if (map_->active) {
      map_->k_lo = static_cast<long>(std::floor((potential_floor(model_) - 1.0) / grid_step));
      map_->k_hi = map_->k_lo;
    }
  }

  const models::ModelSpec& model() const { return model_; }
  Backend backend() const { return backend_; }
  const EnergyIntegralOptions& options() const { return opt_; }
  bool continued() const { return map_->active; }

  EnergyIntegralSample operator()(double E) const {
    auto s = energy_integral(model_, E, backend_, opt_);
    if (map_->active) {
      const int off = offset(E);
      s.I += off;
      s.branch_offset = off;
    }
    return s;
  }

  /// Integer added to the principal value at E.
  int offset(double E) const {
    if (!map_->active) return 0;
    ensure(E);
    std::lock_guard lock(map_->mutex);
    int off = 0;
    for (const auto& j : map_->jumps) {
      if (E > j.E) off += j.shift;
    }
    return off;
  }

  /// Jumps located so far (all of them below the highest energy queried).
  std::vector<BranchJump> jumps() const {
    std::lock_guard lock(map_->mutex);
    return map_->jumps;
  }

 private:
  struct Map {
    std::mutex mutex;
    bool active = false;
    bool started = false;
    long k_lo = 0, k_hi = 0;  // grid nodes k * grid_step covered so far
    double v_hi = 0.0;        // principal value just above the last node
    std::vector<BranchJump> jumps;
  };

  // Principal value; the map always uses the numeric backend (cheap, branch free).
  double principal(double E) const {
    EnergyIntegralOptions o = opt_;
    o.check_imaginary = false;
    return energy_integral(model_, E, Backend::numeric, o).I;
  }

  // Principal value just above E (differs from principal(E) only at the sector-+
  // sech degeneracy E = 0, whose left limit is used at E itself).
  double principal_above(double E) const {
    if (E == 0.0 && detail::is_sech_plus(model_)) return principal(std::nextafter(0.0, 1.0));
    return principal(E);
  }

  static void record(double E, double vlo, double vhi, std::vector<BranchJump>& out) {
    const int shift = -2 * static_cast<int>(std::lround((vhi - vlo) / 2.0));
    if (shift != 0) out.push_back({E, shift});
  }

  void locate(double lo, double vlo, double hi, double vhi, std::vector<BranchJump>& out) const {
    if (std::abs(vhi - vlo) < jump_threshold) return;
    if (hi - lo < 1e-11 * std::max(1.0, std::abs(lo))) {
      record(lo, vlo, vhi, out);
      return;
    }
    double mid = 0.5 * (lo + hi), vm = 0.0;
    // sigma nearly vanishes on the axis right at a crossing; step off it
    for (int attempt = 0;; ++attempt) {
      try {
        vm = principal(mid);
        break;
      } catch (const Error&) {
        if (attempt < 8) continue;
        if (hi - lo > 1e-6 * std::max(1.0, std::abs(lo))) throw;
        record(lo, vlo, vhi, out);
        return;
      }
      mid = lo + (hi - lo) * (0.5 + 0.05 * (attempt + 1) * (attempt % 2 ? -1.0 : 1.0));
    }
    locate(lo, vlo, mid, vm, out);
    locate(mid, vm, hi, vhi, out);
  }

  void ensure(double E) const {
    std::lock_guard lock(map_->mutex);
    auto& mp = *map_;
    const long target = static_cast<long>(std::ceil(E / grid_step));
    if (target <= mp.k_hi && mp.started) return;
    if (!mp.started) {
      mp.v_hi = principal_above(mp.k_lo * grid_step);
      mp.started = true;
    }
    if (target <= mp.k_hi) return;
    const long first = mp.k_hi + 1;
    const std::size_t count = static_cast<std::size_t>(target - mp.k_hi);
    std::vector<double> left(count), right(count);
    parallel_for(count, jobs_, [&](std::size_t i) {
      const double e = (first + static_cast<long>(i)) * grid_step;
      left[i] = principal(e);
      right[i] = (e == 0.0 && detail::is_sech_plus(model_)) ? principal_above(e) : left[i];
    });
    double lo = mp.k_hi * grid_step, vlo = mp.v_hi;
    for (std::size_t i = 0; i < count; ++i) {
      const double e = (first + static_cast<long>(i)) * grid_step;
      locate(lo, vlo, e, left[i], mp.jumps);
      if (std::abs(right[i] - left[i]) >= jump_threshold) record(e, left[i], right[i], mp.jumps);
      lo = e;
      vlo = right[i];
    }
    mp.k_hi = target;
    mp.v_hi = vlo;
  }

  models::ModelSpec model_;
  Backend backend_;
  EnergyIntegralOptions opt_;
  int jobs_ = 1;
  std::shared_ptr<Map> map_;
};

}  // namespace milne
