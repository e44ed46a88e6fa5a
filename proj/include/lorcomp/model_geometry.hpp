#pragma once

#include <cmath>
#include <stdexcept>

#include "lorcomp/common.hpp"

namespace lorcomp {

/// Warped-product model spacetime [0,inf) x H^n with scale factor
/// a(t) = t + n/beta. The slice at t = 0 has constant mean curvature beta and
/// the timelike Ricci curvature along the normal congruence vanishes.
/// beta = 0 is admitted as the static limit, normalized so the scale factor
/// is identically 1.
class ModelGeometry {
 public:
  ModelGeometry(int n, double beta) : n_(n), beta_(beta) {
    if (n < 2) throw std::invalid_argument("ModelGeometry: dimension must be >= 2");
    if (!std::isfinite(beta) || !(beta >= 0.0))
      throw std::invalid_argument("ModelGeometry: beta must be finite and >= 0");
  }

  int dimension() const noexcept { return n_; }
  double beta() const noexcept { return beta_; }
  bool is_static() const noexcept { return beta_ == 0.0; }

 private:
  int n_;
  double beta_;
};

/// (1 + beta t / n)^n, the relative area growth factor of a slice evolving
/// from initial mean curvature beta. Defined for signed beta; validity-window
/// checks for beta < 0 are the caller's responsibility.
inline double comparison_area_factor(double beta, int n, double t) {
  return detail::pow_int(1.0 + beta * t / n, n);
}

/// Integral of comparison_area_factor over [0, t], via the antiderivative
/// (n / (beta (n+1))) ((1 + beta t/n)^{n+1} - 1). Switches to a short series
/// when |beta| t / n < 1e-8 because the closed form divides by beta.
inline double comparison_volume_factor(double beta, int n, double t) {
  const double x = beta * t / n;
  if (std::abs(x) < 1e-8) {
    return t * (1.0 + x * (n / 2.0 +
                           x * (n * (n - 1.0) / 6.0 +
                                x * (n * (n - 1.0) * (n - 2.0) / 24.0))));
  }
  return n / (beta * (n + 1.0)) * (detail::pow_int(1.0 + x, n + 1) - 1.0);
}

/// a(t) = t + n/beta; identically 1 in the static limit.
inline double scale_factor(const ModelGeometry& m, double t) {
  if (!(t >= 0.0)) throw std::domain_error("scale_factor: t must be >= 0");
  if (m.is_static()) return 1.0;
  return t + m.dimension() / m.beta();
}

/// Area at time t of a region of initial area base_area:
/// base_area (1 + beta t / n)^n.
inline double model_area(const ModelGeometry& m, double base_area, double t) {
  if (!(base_area >= 0.0)) throw std::domain_error("model_area: base_area must be >= 0");
  if (!(t >= 0.0)) throw std::domain_error("model_area: t must be >= 0");
  return base_area * comparison_area_factor(m.beta(), m.dimension(), t);
}

/// Spacetime volume swept out until time t; the t-integral of model_area.
inline double model_volume(const ModelGeometry& m, double base_area, double t) {
  if (!(base_area >= 0.0)) throw std::domain_error("model_volume: base_area must be >= 0");
  if (!(t >= 0.0)) throw std::domain_error("model_volume: t must be >= 0");
  return base_area * comparison_volume_factor(m.beta(), m.dimension(), t);
}

/// Mean curvature n a'(t)/a(t) of the slice at time t; equals n / a(t) in the
/// model and 0 in the static limit.
inline double model_mean_curvature(const ModelGeometry& m, double t) {
  if (!(t >= 0.0)) throw std::domain_error("model_mean_curvature: t must be >= 0");
  if (m.is_static()) return 0.0;
  return m.dimension() / scale_factor(m, t);
}

/// Curvature data of a warped-product metric g = -dt^2 + a(t)^2 h_c evaluated
/// from pointwise values (a, a', a'') of the scale factor.
struct WarpedInvariants {
  double ric_tt;             ///< Ric(d_t, d_t) = -n a''/a
  double mean_curvature;     ///< H = n a'/a
  double ric_spatial_coeff;  ///< (n-1)(a'/a)^2 + (n-1) c / a^2 + a''/a
};

inline WarpedInvariants warped_invariants(double a, double a_dot, double a_ddot,
                                          int n, int c) {
  if (n < 2) throw std::invalid_argument("warped_invariants: n must be >= 2");
  if (c < -1 || c > 1)
    throw std::invalid_argument("warped_invariants: fiber curvature c must be -1, 0 or 1");
  if (!(a > 0.0)) throw std::domain_error("warped_invariants: degenerate metric, a <= 0");
  WarpedInvariants w;
  w.ric_tt = -n * a_ddot / a;
  w.mean_curvature = n * a_dot / a;
  w.ric_spatial_coeff = (n - 1.0) * (a_dot / a) * (a_dot / a) +
                        (n - 1.0) * c / (a * a) + a_ddot / a;
  return w;
}

}  // namespace lorcomp
