#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "lorcomp/common.hpp"
#include "lorcomp/congruence.hpp"
#include "lorcomp/model_geometry.hpp"

namespace lorcomp {

/// Area of the level set S_t as a function of t on [0, t_max]: either a
/// closed-form callable (optionally carrying an exact volume antiderivative
/// V(t) = integral of the area over [0, t]) or cubic-Hermite interpolated
/// samples.
class AreaHistory {
 public:
  static AreaHistory from_function(std::function<double(double)> area, double t_max) {
    return from_function(std::move(area), t_max, nullptr);
  }

  static AreaHistory from_function(std::function<double(double)> area, double t_max,
                                   std::function<double(double)> exact_volume) {
    if (!area) throw std::invalid_argument("AreaHistory: null area function");
    if (!std::isfinite(t_max) || !(t_max > 0.0))
      throw std::invalid_argument("AreaHistory: t_max must be finite and > 0");
    AreaHistory h;
    h.fn_ = std::move(area);
    h.vol_ = std::move(exact_volume);
    h.t_max_ = t_max;
    return h;
  }

  /// Sampled history with finite-difference slopes (three-point at interior
  /// knots, secant at the ends).
  static AreaHistory from_samples(std::vector<double> t, std::vector<double> area) {
    std::vector<double> slope(t.size(), 0.0);
    if (t.size() >= 2) {
      for (std::size_t i = 0; i + 1 < t.size(); ++i) {
        const double s = (area[i + 1] - area[i]) / (t[i + 1] - t[i]);
        if (i == 0) slope[0] = s;
        slope[i + 1] = s;
      }
      for (std::size_t i = 1; i + 1 < t.size(); ++i) {
        const double hl = t[i] - t[i - 1];
        const double hr = t[i + 1] - t[i];
        const double sl = (area[i] - area[i - 1]) / hl;
        const double sr = (area[i + 1] - area[i]) / hr;
        slope[i] = (hr * sl + hl * sr) / (hl + hr);
      }
    }
    return from_samples(std::move(t), std::move(area), std::move(slope));
  }

  /// Sampled history with caller-supplied slopes.
  static AreaHistory from_samples(std::vector<double> t, std::vector<double> area,
                                  std::vector<double> slope) {
    if (t.size() != area.size() || t.size() != slope.size() || t.size() < 2)
      throw std::invalid_argument("AreaHistory: need >= 2 matching samples");
    if (t.front() != 0.0)
      throw std::invalid_argument("AreaHistory: sample grid must start at t = 0");
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (!std::isfinite(t[i]) || !std::isfinite(area[i]) || !std::isfinite(slope[i]))
        throw std::invalid_argument("AreaHistory: samples must be finite");
      if (!(area[i] >= 0.0)) throw std::invalid_argument("AreaHistory: areas must be >= 0");
      if (i > 0 && !(t[i] > t[i - 1]))
        throw std::invalid_argument("AreaHistory: sample grid must be strictly increasing");
    }
    AreaHistory h;
    h.ts_ = std::move(t);
    h.vs_ = std::move(area);
    h.ms_ = std::move(slope);
    h.t_max_ = h.ts_.back();
    return h;
  }

  double t_max() const noexcept { return t_max_; }
  bool has_exact_volume() const noexcept { return static_cast<bool>(vol_); }

  double value(double t) const {
    if (!(t >= 0.0) || t > t_max_ * (1.0 + 1e-12))
      throw std::domain_error("AreaHistory: t outside history domain");
    t = std::min(t, t_max_);
    if (fn_) return fn_(t);
    return hermite_eval(t);
  }

  /// V(t) = integral of the area over [0, t]; only for tagged histories.
  double exact_volume(double t) const {
    if (!vol_) throw std::logic_error("AreaHistory: no exact volume tag");
    if (!(t >= 0.0) || t > t_max_ * (1.0 + 1e-12))
      throw std::domain_error("AreaHistory: t outside history domain");
    return vol_(std::min(t, t_max_));
  }

 private:
  AreaHistory() = default;

  double hermite_eval(double t) const {
    const auto it = std::upper_bound(ts_.begin(), ts_.end(), t);
    std::size_t hi = std::min<std::size_t>(it - ts_.begin(), ts_.size() - 1);
    if (hi == 0) hi = 1;
    const std::size_t lo = hi - 1;
    const double h = ts_[hi] - ts_[lo];
    const double s = (t - ts_[lo]) / h;
    const double s2 = s * s;
    const double s3 = s2 * s;
    return (2.0 * s3 - 3.0 * s2 + 1.0) * vs_[lo] + (s3 - 2.0 * s2 + s) * h * ms_[lo] +
           (-2.0 * s3 + 3.0 * s2) * vs_[hi] + (s3 - s2) * h * ms_[hi];
  }

  std::function<double(double)> fn_;
  std::function<double(double)> vol_;
  std::vector<double> ts_, vs_, ms_;
  double t_max_ = 0.0;
};

/// |Omega_t| = integral of |S_s| over [0, t]: the exact antiderivative when
/// the history carries one, otherwise adaptive Simpson quadrature to 1e-10
/// relative.
inline double omega_volume(const AreaHistory& hist, double t) {
  if (!(t >= 0.0) || t > hist.t_max() * (1.0 + 1e-12))
    throw std::domain_error("omega_volume: t outside history domain");
  t = std::min(t, hist.t_max());
  if (hist.has_exact_volume()) return hist.exact_volume(t);
  if (t == 0.0) return 0.0;
  return detail::adaptive_simpson([&hist](double s) { return hist.value(s); }, 0.0, t, 1e-10);
}

/// Geometric window schedule h_k = h0 ratio^k, k = 0..count-1; the estimate
/// maximizes the final ceil(tail_fraction * count) difference quotients.
struct GenAreaSchedule {
  double h0 = 0.0;
  double ratio = 0.5;
  int count = 20;
  double tail_fraction = 0.5;
};

inline GenAreaSchedule default_schedule(double T) { return {T / 10.0, 0.5, 20, 0.5}; }

/// Finite surrogate for the limsup of (|Omega_T| - |Omega_{T-h}|)/h as h -> 0+.
/// The full quotient sequence is kept for auditing.
struct GeneralizedAreaEstimate {
  double T = 0.0;
  std::vector<double> h_schedule;
  std::vector<double> quotients;
  double estimate = 0.0;
  double tail_fraction = 0.5;
  bool truncated = false;  ///< schedule stopped at machine-resolvable h or clipped at T = 0
};

inline GeneralizedAreaEstimate generalized_area(const AreaHistory& hist, double T,
                                                const GenAreaSchedule& sched) {
  if (!(T >= 0.0) || T > hist.t_max() * (1.0 + 1e-12))
    throw std::domain_error("generalized_area: T outside history domain");
  if (!(sched.ratio > 0.0) || !(sched.ratio < 1.0))
    throw std::invalid_argument("generalized_area: ratio must be in (0, 1)");
  if (sched.count < 1) throw std::invalid_argument("generalized_area: count must be >= 1");
  if (!(sched.tail_fraction > 0.0) || sched.tail_fraction > 1.0)
    throw std::invalid_argument("generalized_area: tail_fraction must be in (0, 1]");

  GeneralizedAreaEstimate est;
  est.T = T;
  est.tail_fraction = sched.tail_fraction;

  if (T == 0.0) {
    // Degenerate: every window is clipped away; report the instantaneous area.
    est.estimate = hist.value(0.0);
    est.truncated = true;
    return est;
  }

  if (!(sched.h0 > 0.0) || sched.h0 > T * (1.0 + 1e-12))
    throw std::invalid_argument("generalized_area: need 0 < h0 <= T");

  double h = std::min(sched.h0, T);
  for (int k = 0; k < sched.count; ++k) {
    // The window is [T - h, T] as actually representable; dividing by the
    // exact effective width keeps the quotient noise-free down to the last
    // resolvable h.
    const double lo = T - h;
    const double h_eff = T - lo;
    if (h_eff == 0.0 ||
        (!est.h_schedule.empty() && h_eff >= est.h_schedule.back())) {
      est.truncated = true;
      break;
    }
    const double window = detail::adaptive_simpson(
        [&hist](double s) { return hist.value(s); }, lo, T, 1e-10);
    est.h_schedule.push_back(h_eff);
    est.quotients.push_back(window / h_eff);
    h *= sched.ratio;
  }
  if (est.quotients.empty())
    throw std::invalid_argument("generalized_area: schedule not resolvable at this T");

  const std::size_t m = est.quotients.size();
  const auto tail = static_cast<std::size_t>(std::ceil(sched.tail_fraction * double(m)));
  const std::size_t first = m - std::min(tail, m);
  est.estimate = est.quotients[first];
  for (std::size_t i = first + 1; i < m; ++i)
    est.estimate = std::max(est.estimate, est.quotients[i]);
  return est;
}

inline GeneralizedAreaEstimate generalized_area(const AreaHistory& hist, double T) {
  return generalized_area(hist, T, default_schedule(T));
}

/// Both margins of |S_T| <= estimate <= left limsup, each padded by tol.
struct SandwichVerdict {
  bool ok;
  double margin_lower;  ///< estimate + tol - s_T
  double margin_upper;  ///< left_limsup + tol - estimate
};

inline SandwichVerdict sandwich_check(double s_T, const GeneralizedAreaEstimate& est,
                                      double left_limsup, double tol) {
  if (!std::isfinite(s_T) || !std::isfinite(left_limsup) || !std::isfinite(est.estimate) ||
      !std::isfinite(tol))
    throw std::invalid_argument("sandwich_check: inputs must be finite");
  SandwichVerdict v{};
  v.margin_lower = est.estimate + tol - s_T;
  v.margin_upper = left_limsup + tol - est.estimate;
  v.ok = v.margin_lower >= 0.0 && v.margin_upper >= 0.0;
  return v;
}

/// Closed-form model history, tagged with its exact volume.
inline AreaHistory history_from_model(const ModelGeometry& m, double base_area, double t_max) {
  return AreaHistory::from_function(
      [m, base_area](double t) { return model_area(m, base_area, t); }, t_max,
      [m, base_area](double t) { return model_volume(m, base_area, t); });
}

/// Closed-form history of |S_t| in a generalized FLRW spacetime.
inline AreaHistory history_from_flrw(const GeneralizedFLRW& st, double t_max) {
  return AreaHistory::from_function([st](double t) { return evolve_flrw_areas(st, t); }, t_max);
}

/// Sampled history from an integrated trajectory, scaled by the initial area.
/// Slopes come from the trajectory itself (dA/dtau = theta A), so the
/// interpolation matches the integrator's order.
inline AreaHistory history_from_trajectory(const CongruenceTrajectory& traj,
                                           double base_area = 1.0) {
  if (traj.samples.size() < 2)
    throw std::invalid_argument("history_from_trajectory: need >= 2 samples");
  if (!(base_area >= 0.0))
    throw std::invalid_argument("history_from_trajectory: base_area must be >= 0");
  std::vector<double> ts, vs, ms;
  ts.reserve(traj.samples.size());
  vs.reserve(traj.samples.size());
  ms.reserve(traj.samples.size());
  for (const TrajectorySample& s : traj.samples) {
    ts.push_back(s.tau);
    vs.push_back(base_area * s.area);
    ms.push_back(base_area * s.theta * s.area);
  }
  return AreaHistory::from_samples(std::move(ts), std::move(vs), std::move(ms));
}

}  // namespace lorcomp
