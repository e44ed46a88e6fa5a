#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "lorcomp/common.hpp"
#include "lorcomp/initial_data.hpp"
#include "lorcomp/model_geometry.hpp"

namespace lorcomp {

/// Ric(gamma', gamma') along a normal geodesic as a scalar function of proper
/// time: zero, a constant, or a sampled table with linear interpolation.
/// The sec() flag records whether every represented value is >= 0.
class RicciProfile {
 public:
  enum class Kind { Zero, Constant, Table };

  static RicciProfile zero() { return RicciProfile(Kind::Zero); }

  static RicciProfile constant(double value) {
    if (!std::isfinite(value))
      throw std::invalid_argument("RicciProfile: value must be finite");
    RicciProfile p(Kind::Constant);
    p.constant_ = value;
    return p;
  }

  static RicciProfile table(std::vector<double> tau, std::vector<double> value) {
    if (tau.size() != value.size() || tau.size() < 2)
      throw std::invalid_argument("RicciProfile: table needs >= 2 matching samples");
    for (std::size_t i = 0; i < tau.size(); ++i) {
      if (!std::isfinite(tau[i]) || !std::isfinite(value[i]))
        throw std::invalid_argument("RicciProfile: table entries must be finite");
      if (i > 0 && !(tau[i] > tau[i - 1]))
        throw std::invalid_argument("RicciProfile: tau samples must be strictly increasing");
    }
    RicciProfile p(Kind::Table);
    p.tau_ = std::move(tau);
    p.val_ = std::move(value);
    return p;
  }

  double value(double tau) const {
    switch (kind_) {
      case Kind::Zero:
        return 0.0;
      case Kind::Constant:
        return constant_;
      case Kind::Table:
        break;
    }
    if (tau < tau_.front() || tau > tau_.back())
      throw std::domain_error("RicciProfile: tau outside sampled range");
    const auto it = std::upper_bound(tau_.begin(), tau_.end(), tau);
    const std::size_t hi = std::min<std::size_t>(it - tau_.begin(), tau_.size() - 1);
    const std::size_t lo = hi == 0 ? 0 : hi - 1;
    if (hi == lo) return val_[lo];
    const double s = (tau - tau_[lo]) / (tau_[hi] - tau_[lo]);
    return val_[lo] + s * (val_[hi] - val_[lo]);
  }

  bool sec() const noexcept {
    switch (kind_) {
      case Kind::Zero:
        return true;
      case Kind::Constant:
        return constant_ >= 0.0;
      case Kind::Table:
        return *std::min_element(val_.begin(), val_.end()) >= 0.0;
    }
    return false;
  }

  double min_tau() const noexcept {
    return kind_ == Kind::Table ? tau_.front() : -std::numeric_limits<double>::infinity();
  }
  double max_tau() const noexcept {
    return kind_ == Kind::Table ? tau_.back() : std::numeric_limits<double>::infinity();
  }
  Kind kind() const noexcept { return kind_; }
  double constant_value() const noexcept { return constant_; }

 private:
  explicit RicciProfile(Kind k) : kind_(k) {}
  Kind kind_;
  double constant_ = 0.0;
  std::vector<double> tau_;
  std::vector<double> val_;
};

struct TrajectorySample {
  double tau;
  double theta;  ///< mean curvature of the level set along the fiber
  double area;   ///< relative area element, area(0) = 1
};

/// Evolution of the expansion scalar and the relative area element along one
/// fiber of the normal congruence.
struct CongruenceTrajectory {
  std::vector<TrajectorySample> samples;
  std::optional<double> focal_time;  ///< first zero of the area element, when located
  bool truncated = false;            ///< integration stopped before t_end
  bool sec_profile = false;          ///< the driving Ricci profile was SEC-flagged
  int dim = 0;
  double theta0 = 0.0;
};

namespace detail {

struct RaychaudhuriState {
  double theta;
  double area;
};

/// One classical RK4 step of theta' = -theta^2/n - Ric(tau), area' = theta area.
template <class Ric>
RaychaudhuriState rk4_raychaudhuri_step(const Ric& ric, int n, double tau,
                                        const RaychaudhuriState& y, double h) {
  const auto f = [&](double s, double th, double ar) {
    return RaychaudhuriState{-th * th / n - ric(s), th * ar};
  };
  const RaychaudhuriState k1 = f(tau, y.theta, y.area);
  const RaychaudhuriState k2 =
      f(tau + 0.5 * h, y.theta + 0.5 * h * k1.theta, y.area + 0.5 * h * k1.area);
  const RaychaudhuriState k3 =
      f(tau + 0.5 * h, y.theta + 0.5 * h * k2.theta, y.area + 0.5 * h * k2.area);
  const RaychaudhuriState k4 = f(tau + h, y.theta + h * k3.theta, y.area + h * k3.area);
  return {y.theta + h / 6.0 * (k1.theta + 2.0 * k2.theta + 2.0 * k3.theta + k4.theta),
          y.area + h / 6.0 * (k1.area + 2.0 * k2.area + 2.0 * k3.area + k4.area)};
}

// Substituting u = area^{1/n} turns the pair above into the linear equation
// u'' = -(Ric/n) u with u' = u theta / n. The area element vanishes exactly
// where u does, and u crosses zero transversally, so the focal event can be
// bracketed and bisected even though theta diverges there.
struct JacobiState {
  double u;
  double v;  ///< u'
};

template <class Ric>
JacobiState rk4_jacobi_step(const Ric& ric, int n, double tau, const JacobiState& y,
                            double h) {
  const auto f = [&](double s, double u, double v) {
    return JacobiState{v, -ric(s) / n * u};
  };
  const JacobiState k1 = f(tau, y.u, y.v);
  const JacobiState k2 = f(tau + 0.5 * h, y.u + 0.5 * h * k1.u, y.v + 0.5 * h * k1.v);
  const JacobiState k3 = f(tau + 0.5 * h, y.u + 0.5 * h * k2.u, y.v + 0.5 * h * k2.v);
  const JacobiState k4 = f(tau + h, y.u + h * k3.u, y.v + h * k3.v);
  return {y.u + h / 6.0 * (k1.u + 2.0 * k2.u + 2.0 * k3.u + k4.u),
          y.v + h / 6.0 * (k1.v + 2.0 * k2.v + 2.0 * k3.v + k4.v)};
}

}  // namespace detail

/// Integrates theta' = -theta^2/n - Ric(tau), area' = theta area from
/// theta(0) = theta0, area(0) = 1 with classical fixed-step RK4.
///
/// The trajectory terminates at min(t_end, focal time). A focal event is
/// triggered when the area element falls below 1e-12 or |theta| exceeds 1e12;
/// the focal time itself is then located on the n-th root of the area element
/// (which crosses zero transversally) by sign-change bracketing and bisection
/// to 1e-10, starting from the most recent sample the fixed step still
/// resolves.
inline CongruenceTrajectory integrate_raychaudhuri(double theta0, const RicciProfile& ricci,
                                                   int n, double t_end, double step) {
  if (n < 1) throw std::invalid_argument("integrate_raychaudhuri: n must be >= 1");
  if (!std::isfinite(theta0))
    throw std::invalid_argument("integrate_raychaudhuri: theta0 must be finite");
  if (!(t_end > 0.0)) throw std::invalid_argument("integrate_raychaudhuri: t_end must be > 0");
  if (!(step > 0.0) || step > t_end / 10.0 * (1.0 + 1e-12))
    throw std::invalid_argument("integrate_raychaudhuri: need 0 < step <= t_end/10");
  if (ricci.min_tau() > 0.0 || ricci.max_tau() < t_end)
    throw std::invalid_argument("integrate_raychaudhuri: ricci profile not evaluable on [0, t_end]");

  constexpr double kThetaBlowup = 1e12;
  constexpr double kAreaFloor = 1e-12;
  constexpr double kBisectTol = 1e-10;

  // Clamped evaluation for the focal search only, which may probe a fraction
  // of a step beyond a table's last sample.
  const auto ric = [&ricci](double s) { return ricci.value(s); };
  const auto ric_clamped = [&ricci](double s) {
    return ricci.value(std::clamp(s, std::max(ricci.min_tau(), 0.0),
                                  std::min(ricci.max_tau(), 1e300)));
  };

  CongruenceTrajectory traj;
  traj.dim = n;
  traj.theta0 = theta0;
  traj.sec_profile = ricci.sec();
  traj.samples.reserve(static_cast<std::size_t>(t_end / step) + 2);
  traj.samples.push_back({0.0, theta0, 1.0});

  detail::RaychaudhuriState y{theta0, 1.0};
  double tau = 0.0;
  bool event = false;
  while (tau < t_end * (1.0 - 1e-15)) {
    const double h = std::min(step, t_end - tau);
    const detail::RaychaudhuriState ynew = detail::rk4_raychaudhuri_step(ric, n, tau, y, h);
    if (!std::isfinite(ynew.theta) || !std::isfinite(ynew.area) ||
        std::abs(ynew.theta) > kThetaBlowup || ynew.area < kAreaFloor) {
      event = true;
      break;
    }
    tau += h;
    y = ynew;
    traj.samples.push_back({tau, y.theta, y.area});
  }
  if (!event) return traj;

  traj.truncated = true;

  // Anchor the focal search where |theta| * step is still small; from there
  // the linear u-equation integrates accurately through the zero crossing.
  std::size_t ai = traj.samples.size() - 1;
  while (ai > 0 && std::abs(traj.samples[ai].theta) * step > 0.5) --ai;
  const TrajectorySample anchor = traj.samples[ai];

  detail::JacobiState j{std::pow(anchor.area, 1.0 / n), 0.0};
  j.v = j.u * anchor.theta / n;
  double ta = anchor.tau;
  const double t_stop = t_end + 0.5 * step;
  std::optional<double> root;
  while (ta < t_stop) {
    const detail::JacobiState jn = detail::rk4_jacobi_step(ric_clamped, n, ta, j, step);
    if (jn.u <= 0.0) {
      double lo = 0.0;
      double hi = step;
      while (hi - lo > kBisectTol) {
        const double mid = 0.5 * (lo + hi);
        const detail::JacobiState jm = detail::rk4_jacobi_step(ric_clamped, n, ta, j, mid);
        (jm.u <= 0.0 ? hi : lo) = mid;
      }
      root = ta + 0.5 * (lo + hi);
      break;
    }
    ta += step;
    j = jn;
  }
  if (root && *root <= t_end * (1.0 + 1e-12)) traj.focal_time = *root;
  return traj;
}

/// Richardson estimate of the fixed-step integration error: the runs at
/// `step` and `step/2` are compared on the coarse grid and the difference is
/// scaled by 1/(2^4 - 1).
struct StepErrorEstimate {
  double theta_error;
  double area_error;
};

inline StepErrorEstimate richardson_error_estimate(double theta0, const RicciProfile& ricci,
                                                   int n, double t_end, double step) {
  const CongruenceTrajectory coarse = integrate_raychaudhuri(theta0, ricci, n, t_end, step);
  const CongruenceTrajectory fine = integrate_raychaudhuri(theta0, ricci, n, t_end, 0.5 * step);
  StepErrorEstimate e{0.0, 0.0};
  const std::size_t m = std::min(coarse.samples.size(), (fine.samples.size() + 1) / 2);
  for (std::size_t i = 0; i < m; ++i) {
    const TrajectorySample& a = coarse.samples[i];
    const TrajectorySample& b = fine.samples[2 * i];
    e.theta_error = std::max(e.theta_error, std::abs(a.theta - b.theta) / 15.0);
    e.area_error = std::max(e.area_error, std::abs(a.area - b.area) / 15.0);
  }
  return e;
}

/// Comparison value n / (tau + n / beta): the mean curvature of the time-tau
/// slice in the model with initial mean curvature beta > 0. Along any SEC
/// congruence started at theta0 <= beta the expansion stays below it.
inline double comparison_envelope(double beta, int n, double tau) {
  if (n < 1) throw std::invalid_argument("comparison_envelope: n must be >= 1");
  if (!(beta > 0.0)) throw std::domain_error("comparison_envelope: beta must be > 0");
  if (!(tau >= 0.0)) throw std::domain_error("comparison_envelope: tau must be >= 0");
  return n / (tau + n / beta);
}

/// Largest signed excess of theta over the comparison envelope along the
/// trajectory, evaluated at tau > 0 (at tau = 0 the two sides agree by
/// construction whenever theta0 = beta). Refuses trajectories whose Ricci
/// profile was not SEC-flagged, since the envelope presupposes nonnegative
/// Ricci.
inline double envelope_violation(const CongruenceTrajectory& traj, double beta, int n) {
  if (!traj.sec_profile)
    throw std::domain_error(
        "envelope_violation: trajectory was not produced under a nonnegative Ricci profile");
  if (traj.dim != n)
    throw std::invalid_argument("envelope_violation: dimension mismatch with trajectory");
  if (!(beta > 0.0)) throw std::domain_error("envelope_violation: beta must be > 0");
  if (traj.theta0 > beta * (1.0 + 1e-12) + 1e-300)
    throw std::invalid_argument("envelope_violation: requires theta0 <= beta");
  double worst = -std::numeric_limits<double>::infinity();
  for (const TrajectorySample& s : traj.samples) {
    if (s.tau == 0.0) continue;
    worst = std::max(worst, s.theta - comparison_envelope(beta, n, s.tau));
  }
  return worst;
}

/// Per-cell scale factor f(t) of a generalized FLRW spacetime
/// g = -dt^2 + f(t,x)^2 h_c, with first and second time derivatives.
/// Closed forms:
///   linear  f(t) = c0 + c1 t
///   power   f(t) = c0 (1 + c1 t)^exponent
///   table   piecewise-linear samples (derivative per segment, f'' = 0)
/// or arbitrary callables via custom().
class ScaleProfile {
 public:
  enum class Kind { Linear, Power, Table, Custom };

  static ScaleProfile linear(double c0, double c1) {
    if (!std::isfinite(c0) || !std::isfinite(c1) || !(c0 > 0.0))
      throw std::invalid_argument("ScaleProfile::linear: need finite c0 > 0, c1");
    ScaleProfile p(Kind::Linear);
    p.c0_ = c0;
    p.c1_ = c1;
    return p;
  }

  static ScaleProfile power(double c0, double c1, double exponent) {
    if (!std::isfinite(c0) || !std::isfinite(c1) || !std::isfinite(exponent) || !(c0 > 0.0))
      throw std::invalid_argument("ScaleProfile::power: need finite c0 > 0, c1, exponent");
    ScaleProfile p(Kind::Power);
    p.c0_ = c0;
    p.c1_ = c1;
    p.exponent_ = exponent;
    return p;
  }

  static ScaleProfile table(std::vector<double> t, std::vector<double> f) {
    if (t.size() != f.size() || t.size() < 2)
      throw std::invalid_argument("ScaleProfile::table: need >= 2 matching samples");
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (!std::isfinite(t[i]) || !std::isfinite(f[i]))
        throw std::invalid_argument("ScaleProfile::table: entries must be finite");
      if (i > 0 && !(t[i] > t[i - 1]))
        throw std::invalid_argument("ScaleProfile::table: t samples must be strictly increasing");
    }
    ScaleProfile p(Kind::Table);
    p.knots_ = std::move(t);
    p.values_ = std::move(f);
    return p;
  }

  static ScaleProfile custom(std::function<double(double)> f,
                             std::function<double(double)> df,
                             std::function<double(double)> ddf) {
    if (!f || !df || !ddf)
      throw std::invalid_argument("ScaleProfile::custom: all three callables required");
    ScaleProfile p(Kind::Custom);
    p.f_ = std::move(f);
    p.df_ = std::move(df);
    p.ddf_ = std::move(ddf);
    return p;
  }

  double value(double t) const {
    switch (kind_) {
      case Kind::Linear:
        return c0_ + c1_ * t;
      case Kind::Power:
        return c0_ * std::pow(power_base(t), exponent_);
      case Kind::Table:
        return table_eval(t).first;
      case Kind::Custom:
        return f_(t);
    }
    return 0.0;
  }

  double deriv1(double t) const {
    switch (kind_) {
      case Kind::Linear:
        return c1_;
      case Kind::Power:
        return c0_ * c1_ * exponent_ * std::pow(power_base(t), exponent_ - 1.0);
      case Kind::Table:
        return table_eval(t).second;
      case Kind::Custom:
        return df_(t);
    }
    return 0.0;
  }

  double deriv2(double t) const {
    switch (kind_) {
      case Kind::Linear:
        return 0.0;
      case Kind::Power:
        return c0_ * c1_ * c1_ * exponent_ * (exponent_ - 1.0) *
               std::pow(power_base(t), exponent_ - 2.0);
      case Kind::Table:
        table_eval(t);  // range check
        return 0.0;
      case Kind::Custom:
        return ddf_(t);
    }
    return 0.0;
  }

  Kind kind() const noexcept { return kind_; }
  double c0() const noexcept { return c0_; }
  double c1() const noexcept { return c1_; }
  double exponent() const noexcept { return exponent_; }
  const std::vector<double>& knots() const noexcept { return knots_; }
  const std::vector<double>& values() const noexcept { return values_; }

 private:
  explicit ScaleProfile(Kind k) : kind_(k) {}

  double power_base(double t) const {
    const double base = 1.0 + c1_ * t;
    if (!(base > 0.0))
      throw std::domain_error("ScaleProfile::power: 1 + c1 t must stay positive");
    return base;
  }

  std::pair<double, double> table_eval(double t) const {
    if (t < knots_.front() || t > knots_.back())
      throw std::domain_error("ScaleProfile::table: t outside sampled range");
    const auto it = std::upper_bound(knots_.begin(), knots_.end(), t);
    std::size_t hi = std::min<std::size_t>(it - knots_.begin(), knots_.size() - 1);
    if (hi == 0) hi = 1;
    const std::size_t lo = hi - 1;
    const double slope = (values_[hi] - values_[lo]) / (knots_[hi] - knots_[lo]);
    return {values_[lo] + slope * (t - knots_[lo]), slope};
  }

  Kind kind_;
  double c0_ = 0.0;
  double c1_ = 0.0;
  double exponent_ = 0.0;
  std::vector<double> knots_;
  std::vector<double> values_;
  std::function<double(double)> f_, df_, ddf_;
};

struct FlrwCell {
  std::string id;
  double weight = 0.0;  ///< reference fiber measure of the cell
  ScaleProfile profile;
};

/// Spacetime g = -dt^2 + f(t,x)^2 h_c with a piecewise-constant-in-x family of
/// scale profiles. Normal geodesics are the t-lines, so the fiber congruence
/// never crosses and |S_t| = sum of weight * f(t)^n over cells.
class GeneralizedFLRW {
 public:
  GeneralizedFLRW(int n, std::vector<FlrwCell> cells) : n_(n), cells_(std::move(cells)) {
    if (n_ < 2) throw std::invalid_argument("GeneralizedFLRW: dimension must be >= 2");
    std::unordered_set<std::string_view> seen;
    for (const FlrwCell& c : cells_) {
      if (c.id.empty())
        throw std::invalid_argument("GeneralizedFLRW: cell ids must be non-empty");
      if (!seen.insert(c.id).second)
        throw std::invalid_argument("GeneralizedFLRW: duplicate cell id '" + c.id + "'");
      if (!std::isfinite(c.weight) || !(c.weight > 0.0))
        throw std::invalid_argument("GeneralizedFLRW: cell '" + c.id +
                                    "': weight must be finite and > 0");
    }
  }

  int dimension() const noexcept { return n_; }
  const std::vector<FlrwCell>& cells() const noexcept { return cells_; }

 private:
  int n_;
  std::vector<FlrwCell> cells_;
};

/// |S_t| restricted to the cells the predicate keeps:
/// sum of weight * f(t)^n. Throws on a degenerate (f <= 0) profile value.
template <class Pred>
double evolve_flrw_areas(const GeneralizedFLRW& st, Pred&& keep, double t) {
  if (!(t >= 0.0)) throw std::domain_error("evolve_flrw_areas: t must be >= 0");
  std::vector<double> terms;
  terms.reserve(st.cells().size());
  for (const FlrwCell& c : st.cells()) {
    if (!keep(c.id)) continue;
    const double f = c.profile.value(t);
    if (!(f > 0.0))
      throw std::domain_error("evolve_flrw_areas: degenerate metric, f <= 0 on cell '" +
                              c.id + "'");
    terms.push_back(c.weight * detail::pow_int(f, st.dimension()));
  }
  return detail::pairwise_sum(terms);
}

inline double evolve_flrw_areas(const GeneralizedFLRW& st, double t) {
  return evolve_flrw_areas(st, [](const std::string&) { return true; }, t);
}

/// Verdict of the non-increasing check on t -> areas(t) / (beta t / n + 1)^n.
struct QuotientVerdict {
  bool non_increasing;   ///< no upward jump beyond tol * max(1, max |quotient|)
  double max_increase;   ///< largest upward jump between consecutive quotients
  double at_t;           ///< grid time where that jump ends
};

inline QuotientVerdict monotone_quotient_check(std::span<const double> ts,
                                               std::span<const double> areas, double beta,
                                               int n, double tol = 1e-9) {
  if (ts.size() != areas.size() || ts.size() < 2)
    throw std::invalid_argument("monotone_quotient_check: need >= 2 matching samples");
  if (!(beta > 0.0)) throw std::domain_error("monotone_quotient_check: beta must be > 0");
  if (!(ts.front() >= 0.0))
    throw std::domain_error("monotone_quotient_check: grid must start at t >= 0");
  std::vector<double> q(ts.size());
  double scale = 1.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (i > 0 && !(ts[i] > ts[i - 1]))
      throw std::invalid_argument("monotone_quotient_check: grid must be strictly increasing");
    q[i] = areas[i] / comparison_area_factor(beta, n, ts[i]);
    scale = std::max(scale, std::abs(q[i]));
  }
  QuotientVerdict v{true, 0.0, ts.front()};
  for (std::size_t i = 0; i + 1 < q.size(); ++i) {
    const double d = q[i + 1] - q[i];
    if (d > v.max_increase) {
      v.max_increase = d;
      v.at_t = ts[i + 1];
    }
  }
  v.non_increasing = v.max_increase <= tol * scale;
  return v;
}

/// Per-cell SEC verdict for the t-line congruence: Ric(d_t, d_t) = -n f''/f
/// must stay >= -1e-12 at every grid time.
struct SecCellVerdict {
  std::string id;
  bool sec_holds;
  double worst_ric_tt;
  double worst_t;
};

inline std::vector<SecCellVerdict> sec_check(const GeneralizedFLRW& st,
                                             std::span<const double> t_grid) {
  if (t_grid.empty()) throw std::invalid_argument("sec_check: empty time grid");
  std::vector<SecCellVerdict> out;
  out.reserve(st.cells().size());
  for (const FlrwCell& c : st.cells()) {
    SecCellVerdict v{c.id, true, std::numeric_limits<double>::infinity(), t_grid.front()};
    for (double t : t_grid) {
      if (!(t >= 0.0)) throw std::domain_error("sec_check: grid times must be >= 0");
      const double f = c.profile.value(t);
      if (!(f > 0.0))
        throw std::domain_error("sec_check: degenerate metric, f <= 0 on cell '" + c.id + "'");
      const double ric = -st.dimension() * c.profile.deriv2(t) / f;
      if (ric < v.worst_ric_tt) {
        v.worst_ric_tt = ric;
        v.worst_t = t;
      }
    }
    v.sec_holds = v.worst_ric_tt >= -1e-12;
    out.push_back(std::move(v));
  }
  return out;
}

/// Initial data induced on the t = 0 slice: per-cell area weight * f(0)^n and
/// mean curvature n f'(0)/f(0).
inline InitialDataSet induced_initial_data(const GeneralizedFLRW& st) {
  std::vector<Cell> cells;
  cells.reserve(st.cells().size());
  for (const FlrwCell& c : st.cells()) {
    const double f0 = c.profile.value(0.0);
    if (!(f0 > 0.0))
      throw std::domain_error("induced_initial_data: degenerate metric, f(0) <= 0 on cell '" +
                              c.id + "'");
    Cell cell;
    cell.id = c.id;
    cell.weight = c.weight * detail::pow_int(f0, st.dimension());
    cell.mean_curvature = st.dimension() * c.profile.deriv1(0.0) / f0;
    cells.push_back(std::move(cell));
  }
  return InitialDataSet(st.dimension(), std::move(cells), "induced");
}

}  // namespace lorcomp
