#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lorcomp/common.hpp"
#include "lorcomp/congruence.hpp"
#include "lorcomp/initial_data.hpp"
#include "lorcomp/model_geometry.hpp"

namespace lorcomp {

/// Two-region family on a unit-area slice: a region of area 1/(2j) with mean
/// curvature j^{1/p} and its complement tuned so that the L^p norm of H is
/// exactly 1 for every j. For p < n the evolved areas are unbounded in j even
/// though the L^p norm stays 1, so no L^p analog of the Jensen-form bound can
/// hold.
struct CounterexampleInstance {
  long j = 1;
  double p = 1.0;
  int n = 3;
  double beta1 = 0.0;  ///< j^{1/p}
  double beta2 = 0.0;  ///< (1 / (2 - 1/j))^{1/p}
  double area1 = 0.0;  ///< 1 / (2j)
  double area2 = 0.0;  ///< 1 - 1/(2j)
};

inline CounterexampleInstance build_counterexample(long j, double p, int n) {
  if (j < 1) throw std::invalid_argument("build_counterexample: j must be >= 1");
  if (n < 2) throw std::invalid_argument("build_counterexample: n must be >= 2");
  if (!(p >= 1.0)) throw std::invalid_argument("build_counterexample: p must be >= 1");
  if (!(p < n)) throw std::domain_error("build_counterexample: requires p < n");
  CounterexampleInstance inst;
  inst.j = j;
  inst.p = p;
  inst.n = n;
  const double dj = static_cast<double>(j);
  inst.beta1 = std::pow(dj, 1.0 / p);
  inst.beta2 = std::pow(1.0 / (2.0 - 1.0 / dj), 1.0 / p);
  inst.area1 = 1.0 / (2.0 * dj);
  inst.area2 = 1.0 - inst.area1;
  return inst;
}

/// The instance as a two-cell initial data set (unit total area).
inline InitialDataSet counterexample_initial_data(const CounterexampleInstance& inst) {
  std::vector<Cell> cells(2);
  cells[0].id = "A1";
  cells[0].weight = inst.area1;
  cells[0].mean_curvature = inst.beta1;
  cells[1].id = "A2";
  cells[1].weight = inst.area2;
  cells[1].mean_curvature = inst.beta2;
  return InitialDataSet(inst.n, std::move(cells), "counterexample j=" + std::to_string(inst.j));
}

/// The instance as a generalized FLRW spacetime: normalized linear profiles
/// f_i(t) = 1 + beta_i t / n with the cell areas as fiber weights, so
/// |S_0| = 1 and Ric vanishes along the congruence.
inline GeneralizedFLRW counterexample_spacetime(const CounterexampleInstance& inst) {
  std::vector<FlrwCell> cells;
  cells.push_back({"A1", inst.area1, ScaleProfile::linear(1.0, inst.beta1 / inst.n)});
  cells.push_back({"A2", inst.area2, ScaleProfile::linear(1.0, inst.beta2 / inst.n)});
  return GeneralizedFLRW(inst.n, std::move(cells));
}

/// L^p norm of H over the two regions; equal to 1 by construction.
inline double counterexample_lp_norm(const CounterexampleInstance& inst) {
  return std::pow(std::pow(inst.beta1, inst.p) * inst.area1 +
                      std::pow(inst.beta2, inst.p) * inst.area2,
                  1.0 / inst.p);
}

/// Evolved area |S_t| of the two regions:
/// area1 (beta1 t/n + 1)^n + area2 (beta2 t/n + 1)^n.
inline double counterexample_area(const CounterexampleInstance& inst, double t) {
  if (!(t >= 0.0)) throw std::domain_error("counterexample_area: t must be >= 0");
  return inst.area1 * comparison_area_factor(inst.beta1, inst.n, t) +
         inst.area2 * comparison_area_factor(inst.beta2, inst.n, t);
}

struct DivergenceRow {
  long j;
  double area;   ///< evolved area at time t
  double bound;  ///< would-be L^p analog of the Jensen-form bound
  double ratio;  ///< area / bound
};

/// Comparison of the evolved areas against the would-be L^p bound
/// 2^{n-1} ((t/n)^n ||H||_{L^p}^n + |A_j|) with |A_j| = 1. For p < n the
/// ratios grow without bound along increasing j.
struct DivergenceReport {
  double p = 0.0;
  int n = 0;
  double t = 0.0;
  std::vector<DivergenceRow> rows;
  std::optional<long> first_violation_j;     ///< first j with ratio > 1
  bool increasing_after_violation = false;   ///< ratios strictly increase from there on
};

inline DivergenceReport divergence_report(double p, int n, double t,
                                          std::span<const long> j_list) {
  if (!(t >= 0.0)) throw std::domain_error("divergence_report: t must be >= 0");
  if (j_list.empty()) throw std::invalid_argument("divergence_report: empty j list");
  for (std::size_t i = 1; i < j_list.size(); ++i)
    if (!(j_list[i] > j_list[i - 1]))
      throw std::invalid_argument("divergence_report: j list must be strictly increasing");

  DivergenceReport rep;
  rep.p = p;
  rep.n = n;
  rep.t = t;
  for (long j : j_list) {
    const CounterexampleInstance inst = build_counterexample(j, p, n);
    DivergenceRow row;
    row.j = j;
    row.area = counterexample_area(inst, t);
    const double norm = counterexample_lp_norm(inst);
    row.bound = detail::pow_int(2.0, n - 1) *
                (detail::pow_int(t / n, n) * detail::pow_int(norm, n) + 1.0);
    row.ratio = row.area / row.bound;
    if (!rep.first_violation_j && row.ratio > 1.0 + 1e-12) rep.first_violation_j = j;
    rep.rows.push_back(row);
  }
  if (rep.first_violation_j) {
    rep.increasing_after_violation = true;
    bool seen = false;
    double prev = 0.0;
    for (const DivergenceRow& row : rep.rows) {
      if (row.j < *rep.first_violation_j) continue;
      if (seen && !(row.ratio > prev)) rep.increasing_after_violation = false;
      prev = row.ratio;
      seen = true;
    }
  }
  return rep;
}

}  // namespace lorcomp
