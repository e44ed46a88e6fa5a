#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "lorcomp/common.hpp"
#include "lorcomp/initial_data.hpp"
#include "lorcomp/model_geometry.hpp"

namespace lorcomp {

/// Discrete integral area bound: sum over cells of (H_+ t / n + 1)^n weight.
/// This is the sharp estimate; every other area bound here dominates it.
inline double area_bound_exact(const InitialDataSet& data, double t) {
  if (!(t >= 0.0)) throw std::domain_error("area_bound_exact: t must be >= 0");
  const int n = data.dimension();
  std::vector<double> terms;
  terms.reserve(data.size());
  for (const Cell& c : data.cells()) {
    const double hp = std::max(c.mean_curvature, 0.0);
    terms.push_back(c.weight * comparison_area_factor(hp, n, t));
  }
  return detail::pairwise_sum(terms);
}

/// t-integral of area_bound_exact, with the per-cell closed-form
/// antiderivative (series branch for small H_+ t / n).
inline double volume_bound_exact(const InitialDataSet& data, double t) {
  if (!(t >= 0.0)) throw std::domain_error("volume_bound_exact: t must be >= 0");
  const int n = data.dimension();
  std::vector<double> terms;
  terms.reserve(data.size());
  for (const Cell& c : data.cells()) {
    const double hp = std::max(c.mean_curvature, 0.0);
    terms.push_back(c.weight * comparison_volume_factor(hp, n, t));
  }
  return detail::pairwise_sum(terms);
}

/// Jensen-form area bound 2^{n-1} ((t/n)^n ||H||_{L^n}^n + |Sigma|), or with
/// use_k the second-fundamental-form variant 2^{n-1} (t^n ||K||_{L^n}^n + |Sigma|).
inline double area_bound_jensen(const InitialDataSet& data, double t, bool use_k = false) {
  if (!(t >= 0.0)) throw std::domain_error("area_bound_jensen: t must be >= 0");
  const int n = data.dimension();
  const double c2 = detail::pow_int(2.0, n - 1);
  if (use_k) {
    if (!data.has_k_norm())
      throw std::invalid_argument("area_bound_jensen: use_k requires |K| on every cell");
    const double kn = detail::weighted_power_sum(data, Field::SecondFormNorm, n);
    return c2 * (detail::pow_int(t, n) * kn + data.total_area());
  }
  const double hn = detail::weighted_power_sum(data, Field::MeanCurvature, n);
  return c2 * (detail::pow_int(t / n, n) * hn + data.total_area());
}

/// Jensen-form bound with ||H||_{L^p} in place of ||H||_{L^n}. On data of
/// unit total area this is valid (and never smaller) for any p >= n.
inline double area_bound_jensen_p(const InitialDataSet& data, double t, double p) {
  if (!(t >= 0.0)) throw std::domain_error("area_bound_jensen_p: t must be >= 0");
  const int n = data.dimension();
  if (!(p >= n)) throw std::invalid_argument("area_bound_jensen_p: requires p >= n");
  const double c2 = detail::pow_int(2.0, n - 1);
  const double norm = lp_norm(data, Field::MeanCurvature, p);
  return c2 * (detail::pow_int(t / n, n) * detail::pow_int(norm, n) + data.total_area());
}

/// t-integrated Jensen-form volume bounds:
/// 2^{n-1} ((t^{n+1} / (n^n (n+1))) ||H||_{L^n}^n + t |Sigma|), or with use_k
/// 2^{n-1} ((t^{n+1} / (n+1)) ||K||_{L^n}^n + t |Sigma|).
inline double volume_bound_jensen(const InitialDataSet& data, double t, bool use_k = false) {
  if (!(t >= 0.0)) throw std::domain_error("volume_bound_jensen: t must be >= 0");
  const int n = data.dimension();
  const double c2 = detail::pow_int(2.0, n - 1);
  if (use_k) {
    if (!data.has_k_norm())
      throw std::invalid_argument("volume_bound_jensen: use_k requires |K| on every cell");
    const double kn = detail::weighted_power_sum(data, Field::SecondFormNorm, n);
    return c2 * (detail::pow_int(t, n + 1) / (n + 1.0) * kn + t * data.total_area());
  }
  const double hn = detail::weighted_power_sum(data, Field::MeanCurvature, n);
  return c2 * (detail::pow_int(t, n + 1) / (detail::pow_int(double(n), n) * (n + 1.0)) * hn +
               t * data.total_area());
}

/// Binomial expansion of the exact area bound. Term k = 0 is |Sigma|; term k
/// (1 <= k <= n) is C(n,k) (t/n)^k ||H_+||_{L^k}^k. The n+1 terms sum to
/// area_bound_exact exactly.
inline std::vector<double> area_bound_binomial(const InitialDataSet& data, double t) {
  if (!(t >= 0.0)) throw std::domain_error("area_bound_binomial: t must be >= 0");
  const int n = data.dimension();
  std::vector<double> terms(n + 1);
  terms[0] = data.total_area();
  for (int k = 1; k <= n; ++k)
    terms[k] = detail::binomial(n, k) * detail::pow_int(t / n, k) *
               detail::weighted_power_sum(data, Field::PositiveMeanCurvature, k);
  return terms;
}

/// t-integrated binomial terms; term k is C(n,k) (t/n)^k t/(k+1) ||H_+||_{L^k}^k
/// (term 0 is t |Sigma|). The terms sum to volume_bound_exact.
inline std::vector<double> volume_bound_binomial(const InitialDataSet& data, double t) {
  if (!(t >= 0.0)) throw std::domain_error("volume_bound_binomial: t must be >= 0");
  const int n = data.dimension();
  std::vector<double> terms(n + 1);
  terms[0] = t * data.total_area();
  for (int k = 1; k <= n; ++k)
    terms[k] = detail::binomial(n, k) * detail::pow_int(t / n, k) * t / (k + 1.0) *
               detail::weighted_power_sum(data, Field::PositiveMeanCurvature, k);
  return terms;
}

/// Pointwise-bound comparison area estimate |Sigma| (beta t / n + 1)^n, valid
/// for all t >= 0 when beta >= 0 and for t <= n/|beta| when beta < 0 (the
/// comparison slice focuses at t = n/|beta|).
inline double tg_pointwise_area(double beta, double base_area, int n, double t) {
  if (n < 2) throw std::invalid_argument("tg_pointwise_area: n must be >= 2");
  if (!(base_area >= 0.0)) throw std::domain_error("tg_pointwise_area: base_area must be >= 0");
  if (!(t >= 0.0)) throw std::domain_error("tg_pointwise_area: t must be >= 0");
  if (beta < 0.0 && t > n / -beta)
    throw std::domain_error("tg_pointwise_area: t outside validity window t <= n/|beta|");
  return base_area * comparison_area_factor(beta, n, t);
}

/// t-integral companion of tg_pointwise_area, same validity window.
inline double tg_pointwise_volume(double beta, double base_area, int n, double t) {
  if (n < 2) throw std::invalid_argument("tg_pointwise_volume: n must be >= 2");
  if (!(base_area >= 0.0)) throw std::domain_error("tg_pointwise_volume: base_area must be >= 0");
  if (!(t >= 0.0)) throw std::domain_error("tg_pointwise_volume: t must be >= 0");
  if (beta < 0.0 && t > n / -beta)
    throw std::domain_error("tg_pointwise_volume: t outside validity window t <= n/|beta|");
  return base_area * comparison_volume_factor(beta, n, t);
}

/// Every area bound variant at one time, with the beta used for the pointwise
/// comparison. `sec_assumed` records that the bounds presuppose nonnegative
/// timelike Ricci curvature along the congruence, which the data set alone
/// cannot certify.
struct AreaBoundReport {
  double t = 0.0;
  double exact = 0.0;
  double jensen_h = 0.0;
  std::optional<double> from_k;
  std::vector<double> binomial_terms;
  std::optional<double> tg_pointwise;
  double beta_max = 0.0;
  bool sec_assumed = true;
};

struct VolumeBoundReport {
  double t = 0.0;
  double exact = 0.0;
  double jensen_h = 0.0;
  std::optional<double> from_k;
  std::vector<double> binomial_terms;
  std::optional<double> tg_pointwise;
  double beta_max = 0.0;
  bool sec_assumed = true;
};

inline AreaBoundReport make_area_report(const InitialDataSet& data, double t) {
  AreaBoundReport r;
  r.t = t;
  r.exact = area_bound_exact(data, t);
  r.jensen_h = area_bound_jensen(data, t, false);
  if (data.has_k_norm()) r.from_k = area_bound_jensen(data, t, true);
  r.binomial_terms = area_bound_binomial(data, t);
  r.beta_max = data.max_h_plus();
  r.tg_pointwise = tg_pointwise_area(r.beta_max, data.total_area(), data.dimension(), t);
  return r;
}

inline VolumeBoundReport make_volume_report(const InitialDataSet& data, double t) {
  VolumeBoundReport r;
  r.t = t;
  r.exact = volume_bound_exact(data, t);
  r.jensen_h = volume_bound_jensen(data, t, false);
  if (data.has_k_norm()) r.from_k = volume_bound_jensen(data, t, true);
  r.binomial_terms = volume_bound_binomial(data, t);
  r.beta_max = data.max_h_plus();
  r.tg_pointwise = tg_pointwise_volume(r.beta_max, data.total_area(), data.dimension(), t);
  return r;
}

}  // namespace lorcomp
