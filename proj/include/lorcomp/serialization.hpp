#pragma once

#include <cstdio>
#include <cstdlib>
#include <optional>
#include <ostream>
#include <string>

#include <json.hpp>

#include "lorcomp/congruence.hpp"
#include "lorcomp/counterexample.hpp"
#include "lorcomp/initial_data.hpp"
#include "lorcomp/integral_bounds.hpp"
#include "lorcomp/level_sets.hpp"

namespace lorcomp {

namespace detail {

/// Shortest decimal rendering that parses back to the same double, so CSV
/// emission both round-trips exactly and stays readable.
inline std::string format_double(double x, int max_precision = 17) {
  char buf[64];
  for (int p = 1; p < max_precision; ++p) {
    std::snprintf(buf, sizeof buf, "%.*g", p, x);
    if (std::strtod(buf, nullptr) == x) return buf;
  }
  std::snprintf(buf, sizeof buf, "%.*g", max_precision, x);
  return buf;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// JSON converters (nlohmann ADL hooks plus explicit parsers for types without
// default constructors).

inline void to_json(nlohmann::json& j, const Cell& c) {
  j = nlohmann::json{{"id", c.id}, {"weight", c.weight}, {"H", c.mean_curvature}};
  if (c.k_norm) j["K"] = *c.k_norm;
}

inline void to_json(nlohmann::json& j, const InitialDataSet& d) {
  j = nlohmann::json{{"label", d.label()},
                     {"n", d.dimension()},
                     {"total_area", d.total_area()},
                     {"cells", d.cells()}};
}

inline InitialDataSet initial_data_from_json(const nlohmann::json& j) {
  try {
    std::vector<Cell> cells;
    for (const auto& jc : j.at("cells")) {
      Cell c;
      c.id = jc.at("id").get<std::string>();
      c.weight = jc.at("weight").get<double>();
      c.mean_curvature = jc.at("H").get<double>();
      if (jc.contains("K") && !jc.at("K").is_null()) c.k_norm = jc.at("K").get<double>();
      cells.push_back(std::move(c));
    }
    return InitialDataSet(j.at("n").get<int>(), std::move(cells),
                          j.value("label", std::string{}));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("initial data JSON: ") + e.what());
  }
}

inline void to_json(nlohmann::json& j, const AreaBoundReport& r) {
  j = nlohmann::json{{"t", r.t},
                     {"exact", r.exact},
                     {"jensen_h", r.jensen_h},
                     {"from_k", nullptr},
                     {"binomial_terms", r.binomial_terms},
                     {"tg_pointwise", nullptr},
                     {"beta_max", r.beta_max},
                     {"sec_assumed", r.sec_assumed}};
  if (r.from_k) j["from_k"] = *r.from_k;
  if (r.tg_pointwise) j["tg_pointwise"] = *r.tg_pointwise;
}

inline void to_json(nlohmann::json& j, const VolumeBoundReport& r) {
  j = nlohmann::json{{"t", r.t},
                     {"exact", r.exact},
                     {"jensen_h", r.jensen_h},
                     {"from_k", nullptr},
                     {"binomial_terms", r.binomial_terms},
                     {"tg_pointwise", nullptr},
                     {"beta_max", r.beta_max},
                     {"sec_assumed", r.sec_assumed}};
  if (r.from_k) j["from_k"] = *r.from_k;
  if (r.tg_pointwise) j["tg_pointwise"] = *r.tg_pointwise;
}

inline void to_json(nlohmann::json& j, const TrajectorySample& s) {
  j = nlohmann::json{{"tau", s.tau}, {"theta", s.theta}, {"A", s.area}};
}

inline void to_json(nlohmann::json& j, const CongruenceTrajectory& t) {
  j = nlohmann::json{{"n", t.dim},
                     {"theta0", t.theta0},
                     {"sec_profile", t.sec_profile},
                     {"truncated", t.truncated},
                     {"focal_time", nullptr},
                     {"samples", t.samples}};
  if (t.focal_time) j["focal_time"] = *t.focal_time;
}

inline void to_json(nlohmann::json& j, const ScaleProfile& p) {
  switch (p.kind()) {
    case ScaleProfile::Kind::Linear:
      j = nlohmann::json{{"kind", "linear"}, {"c0", p.c0()}, {"c1", p.c1()}};
      return;
    case ScaleProfile::Kind::Power:
      j = nlohmann::json{
          {"kind", "power"}, {"c0", p.c0()}, {"c1", p.c1()}, {"exponent", p.exponent()}};
      return;
    case ScaleProfile::Kind::Table:
      j = nlohmann::json{{"kind", "table"}, {"t", p.knots()}, {"value", p.values()}};
      return;
    case ScaleProfile::Kind::Custom:
      throw std::invalid_argument("ScaleProfile: custom profiles are not serializable");
  }
}

inline ScaleProfile scale_profile_from_json(const nlohmann::json& j) {
  try {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "linear")
      return ScaleProfile::linear(j.at("c0").get<double>(), j.at("c1").get<double>());
    if (kind == "power")
      return ScaleProfile::power(j.at("c0").get<double>(), j.at("c1").get<double>(),
                                 j.at("exponent").get<double>());
    if (kind == "table")
      return ScaleProfile::table(j.at("t").get<std::vector<double>>(),
                                 j.at("value").get<std::vector<double>>());
    throw ParseError("spacetime JSON: unknown profile kind '" + kind + "'");
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("spacetime JSON: ") + e.what());
  }
}

inline void to_json(nlohmann::json& j, const FlrwCell& c) {
  j = nlohmann::json{{"id", c.id}, {"weight", c.weight}, {"profile", c.profile}};
}

inline void to_json(nlohmann::json& j, const GeneralizedFLRW& st) {
  j = nlohmann::json{{"n", st.dimension()}, {"cells", st.cells()}};
}

inline GeneralizedFLRW flrw_from_json(const nlohmann::json& j) {
  try {
    std::vector<FlrwCell> cells;
    for (const auto& jc : j.at("cells")) {
      cells.push_back({jc.at("id").get<std::string>(), jc.at("weight").get<double>(),
                       scale_profile_from_json(jc.at("profile"))});
    }
    return GeneralizedFLRW(j.at("n").get<int>(), std::move(cells));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("spacetime JSON: ") + e.what());
  }
}

inline void to_json(nlohmann::json& j, const GeneralizedAreaEstimate& e) {
  j = nlohmann::json{{"T", e.T},
                     {"h_schedule", e.h_schedule},
                     {"quotients", e.quotients},
                     {"estimate", e.estimate},
                     {"tail_fraction", e.tail_fraction},
                     {"truncated", e.truncated}};
}

inline void to_json(nlohmann::json& j, const DivergenceRow& r) {
  j = nlohmann::json{{"j", r.j}, {"area", r.area}, {"bound", r.bound}, {"ratio", r.ratio}};
}

inline void to_json(nlohmann::json& j, const DivergenceReport& r) {
  j = nlohmann::json{{"p", r.p},
                     {"n", r.n},
                     {"t", r.t},
                     {"rows", r.rows},
                     {"first_violation_j", nullptr},
                     {"increasing_after_violation", r.increasing_after_violation}};
  if (r.first_violation_j) j["first_violation_j"] = *r.first_violation_j;
}

// ---------------------------------------------------------------------------
// CSV emission. Formats are stable: callers may rely on the exact headers.

inline void write_initial_data_csv(std::ostream& out, const InitialDataSet& d) {
  out << "# n=" << d.dimension() << "\n";
  out << "id,weight,H,K\n";
  for (const Cell& c : d.cells()) {
    out << c.id << ',' << detail::format_double(c.weight) << ','
        << detail::format_double(c.mean_curvature) << ',';
    if (c.k_norm) out << detail::format_double(*c.k_norm);
    out << '\n';
  }
}

inline void write_trajectory_csv(std::ostream& out, const CongruenceTrajectory& t) {
  out << "tau,theta,A\n";
  for (const TrajectorySample& s : t.samples)
    out << detail::format_double(s.tau) << ',' << detail::format_double(s.theta) << ','
        << detail::format_double(s.area) << '\n';
}

inline void write_quotients_csv(std::ostream& out, const GeneralizedAreaEstimate& e) {
  out << "h,quotient\n";
  for (std::size_t i = 0; i < e.h_schedule.size(); ++i)
    out << detail::format_double(e.h_schedule[i]) << ','
        << detail::format_double(e.quotients[i]) << '\n';
}

inline void write_divergence_csv(std::ostream& out, const DivergenceReport& r) {
  out << "j,area,bound,ratio\n";
  for (const DivergenceRow& row : r.rows)
    out << row.j << ',' << detail::format_double(row.area) << ','
        << detail::format_double(row.bound) << ',' << detail::format_double(row.ratio) << '\n';
}

inline void write_bounds_csv_header(std::ostream& out, int n) {
  out << "t,exact,jensen_h,from_k,tg";
  for (int k = 0; k <= n; ++k) out << ",binomial_k" << k;
  out << '\n';
}

namespace detail {

template <class Report>
void write_bound_report_row(std::ostream& out, const Report& r) {
  out << format_double(r.t) << ',' << format_double(r.exact) << ','
      << format_double(r.jensen_h) << ',';
  if (r.from_k) out << format_double(*r.from_k);
  out << ',';
  if (r.tg_pointwise) out << format_double(*r.tg_pointwise);
  for (double term : r.binomial_terms) out << ',' << format_double(term);
  out << '\n';
}

}  // namespace detail

inline void write_bounds_csv_row(std::ostream& out, const AreaBoundReport& r) {
  detail::write_bound_report_row(out, r);
}

inline void write_bounds_csv_row(std::ostream& out, const VolumeBoundReport& r) {
  detail::write_bound_report_row(out, r);
}

}  // namespace lorcomp
