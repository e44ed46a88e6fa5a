// lorcomp command-line interface.
//
// Subcommands: bounds, model, evolve, gen-area, counterexample, verify.
// Exit codes: 0 success, 1 validation error, 2 verification failure,
// 3 I/O error. Every emitted table/CSV stream starts with a '#' config echo
// line; JSON output embeds the same echo under "config".

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "lorcomp/lorcomp.hpp"
#include "lorcomp/verify.hpp"

namespace {

using lorcomp::detail::format_double;

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class OutputTarget {
 public:
  explicit OutputTarget(const std::string& path) {
    if (path.empty() || path == "-") {
      os_ = &std::cout;
      return;
    }
    file_.open(path);
    if (!file_) throw IoError("cannot open output file '" + path + "'");
    os_ = &file_;
  }
  std::ostream& os() { return *os_; }

 private:
  std::ofstream file_;
  std::ostream* os_ = nullptr;
};

using KvList = std::vector<std::pair<std::string, std::string>>;

std::string echo_line(const std::string& cmd, const KvList& kv) {
  std::string s = "# lorcomp " + cmd;
  for (const auto& [k, v] : kv) s += " " + k + "=" + v;
  return s;
}

nlohmann::json echo_json(const std::string& cmd, const KvList& kv) {
  nlohmann::json j;
  j["command"] = cmd;
  for (const auto& [k, v] : kv) j[k] = v;
  return j;
}

std::string join_list(const std::vector<double>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) s += ',';
    s += format_double(xs[i]);
  }
  return s;
}

std::string join_list(const std::vector<long>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(xs[i]);
  }
  return s;
}

void print_table(std::ostream& os, const std::vector<std::string>& header,
                 const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
  for (const auto& row : rows)
    for (std::size_t c = 0; c < row.size(); ++c)
      width[c] = std::max(width[c], row[c].size());
  const auto emit = [&](const std::vector<std::string>& row) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      os << row[c];
      if (c + 1 < row.size()) os << std::string(width[c] - row[c].size() + 2, ' ');
    }
    os << '\n';
  };
  emit(header);
  for (const auto& row : rows) emit(row);
}

std::string tdisp(double x) { return format_double(x, 10); }

// ---------------------------------------------------------------------------

struct BoundsArgs {
  std::string input;
  std::optional<int> n;
  std::vector<double> t;
  std::string format = "table";
  std::string output = "-";
  bool echo_data = false;
};

int run_bounds(const BoundsArgs& a) {
  std::ifstream in(a.input);
  if (!in) throw IoError("cannot open input file '" + a.input + "'");
  const lorcomp::InitialDataSet data = lorcomp::load_initial_data(in, a.n, a.input);

  KvList kv{{"input", a.input},
            {"n", std::to_string(data.dimension())},
            {"t", join_list(a.t)},
            {"format", a.format},
            {"output", a.output},
            {"echo_data", a.echo_data ? "true" : "false"}};
  OutputTarget out(a.output);

  if (a.echo_data) {
    nlohmann::json j;
    j["config"] = echo_json("bounds", kv);
    j["data"] = data;
    out.os() << j.dump(2) << '\n';
    return 0;
  }
  if (a.t.empty())
    throw std::invalid_argument("bounds: --t is required unless --echo-data is given");

  std::vector<lorcomp::AreaBoundReport> areas;
  std::vector<lorcomp::VolumeBoundReport> volumes;
  for (double t : a.t) {
    areas.push_back(lorcomp::make_area_report(data, t));
    volumes.push_back(lorcomp::make_volume_report(data, t));
  }

  if (a.format == "json") {
    nlohmann::json j;
    j["config"] = echo_json("bounds", kv);
    j["area_reports"] = areas;
    j["volume_reports"] = volumes;
    out.os() << j.dump(2) << '\n';
    return 0;
  }
  if (a.format == "csv") {
    out.os() << echo_line("bounds", kv) << '\n';
    out.os() << "# report=area\n";
    lorcomp::write_bounds_csv_header(out.os(), data.dimension());
    for (const auto& r : areas) lorcomp::write_bounds_csv_row(out.os(), r);
    out.os() << "# report=volume\n";
    lorcomp::write_bounds_csv_header(out.os(), data.dimension());
    for (const auto& r : volumes) lorcomp::write_bounds_csv_row(out.os(), r);
    return 0;
  }
  out.os() << echo_line("bounds", kv) << '\n';
  const auto render = [&](const auto& reports, const char* title) {
    out.os() << title << '\n';
    std::vector<std::string> header = {"t", "exact", "jensen_h", "from_k", "tg"};
    std::vector<std::vector<std::string>> rows;
    for (const auto& r : reports) {
      std::vector<std::string> row = {tdisp(r.t), tdisp(r.exact), tdisp(r.jensen_h),
                                      r.from_k ? tdisp(*r.from_k) : "-",
                                      r.tg_pointwise ? tdisp(*r.tg_pointwise) : "-"};
      rows.push_back(std::move(row));
    }
    print_table(out.os(), header, rows);
  };
  render(areas, "area bounds");
  out.os() << '\n';
  render(volumes, "volume bounds");
  return 0;
}

// ---------------------------------------------------------------------------

struct ModelArgs {
  int n = 3;
  double beta = 0.0;
  double base_area = 1.0;
  std::vector<double> t;
  std::string format = "table";
  std::string output = "-";
};

int run_model(const ModelArgs& a) {
  const lorcomp::ModelGeometry m(a.n, a.beta);
  KvList kv{{"n", std::to_string(a.n)},       {"beta", format_double(a.beta)},
            {"base_area", format_double(a.base_area)}, {"t", join_list(a.t)},
            {"format", a.format},             {"output", a.output}};
  OutputTarget out(a.output);

  struct Row {
    double t, scale, area, volume, envelope;
  };
  std::vector<Row> rows;
  for (double t : a.t) {
    rows.push_back({t, lorcomp::scale_factor(m, t), lorcomp::model_area(m, a.base_area, t),
                    lorcomp::model_volume(m, a.base_area, t),
                    lorcomp::model_mean_curvature(m, t)});
  }

  if (a.format == "json") {
    nlohmann::json j;
    j["config"] = echo_json("model", kv);
    j["rows"] = nlohmann::json::array();
    for (const Row& r : rows)
      j["rows"].push_back({{"t", r.t},
                           {"scale_factor", r.scale},
                           {"area", r.area},
                           {"volume", r.volume},
                           {"envelope", r.envelope}});
    out.os() << j.dump(2) << '\n';
    return 0;
  }
  out.os() << echo_line("model", kv) << '\n';
  if (a.format == "csv") {
    out.os() << "t,scale_factor,area,volume,envelope\n";
    for (const Row& r : rows)
      out.os() << format_double(r.t) << ',' << format_double(r.scale) << ','
               << format_double(r.area) << ',' << format_double(r.volume) << ','
               << format_double(r.envelope) << '\n';
    return 0;
  }
  std::vector<std::vector<std::string>> trows;
  for (const Row& r : rows)
    trows.push_back(
        {tdisp(r.t), tdisp(r.scale), tdisp(r.area), tdisp(r.volume), tdisp(r.envelope)});
  print_table(out.os(), {"t", "scale_factor", "area", "volume", "envelope"}, trows);
  return 0;
}

// ---------------------------------------------------------------------------

struct EvolveArgs {
  std::optional<double> theta0;
  std::string ric = "zero";
  double ric_value = 0.0;
  int n = 3;
  double t_end = 2.0;
  double step = 1e-3;
  std::optional<double> beta;
  std::string spacetime;
  double t_max = 5.0;
  int samples = 101;
  std::string format = "table";
  std::string output = "-";
};

int run_evolve_congruence(const EvolveArgs& a) {
  lorcomp::RicciProfile profile = lorcomp::RicciProfile::zero();
  if (a.ric == "constant")
    profile = lorcomp::RicciProfile::constant(a.ric_value);
  else if (a.ric != "zero")
    throw std::invalid_argument("evolve: --ric must be 'zero' or 'constant'");

  const lorcomp::CongruenceTrajectory traj =
      lorcomp::integrate_raychaudhuri(*a.theta0, profile, a.n, a.t_end, a.step);

  const double beta_env = a.beta.value_or(*a.theta0);
  std::optional<double> excess;
  std::optional<lorcomp::QuotientVerdict> quotient;
  if (beta_env > 0.0 && traj.sec_profile && *a.theta0 <= beta_env) {
    excess = lorcomp::envelope_violation(traj, beta_env, a.n);
    std::vector<double> ts, areas;
    for (const auto& s : traj.samples) {
      ts.push_back(s.tau);
      areas.push_back(s.area);
    }
    if (ts.size() >= 2)
      quotient = lorcomp::monotone_quotient_check(ts, areas, beta_env, a.n);
  }

  KvList kv{{"theta0", format_double(*a.theta0)},
            {"ric", a.ric},
            {"ric_value", format_double(a.ric_value)},
            {"n", std::to_string(a.n)},
            {"t_end", format_double(a.t_end)},
            {"step", format_double(a.step)},
            {"beta", format_double(beta_env)},
            {"format", a.format},
            {"output", a.output}};
  OutputTarget out(a.output);

  if (a.format == "json") {
    nlohmann::json j;
    j["config"] = echo_json("evolve", kv);
    j["trajectory"] = traj;
    j["envelope_excess"] = nullptr;
    if (excess) j["envelope_excess"] = *excess;
    if (quotient)
      j["quotient"] = {{"non_increasing", quotient->non_increasing},
                       {"max_increase", quotient->max_increase},
                       {"at_t", quotient->at_t}};
    out.os() << j.dump(2) << '\n';
    return 0;
  }

  out.os() << echo_line("evolve", kv) << '\n';
  const auto summary = [&](std::ostream& os, const char* prefix) {
    os << prefix << "samples=" << traj.samples.size()
       << " sec_profile=" << (traj.sec_profile ? "true" : "false")
       << " truncated=" << (traj.truncated ? "true" : "false") << " focal_time="
       << (traj.focal_time ? format_double(*traj.focal_time) : std::string("none")) << '\n';
    os << prefix << "envelope_excess="
       << (excess ? format_double(*excess) : std::string("n/a (needs theta0 <= beta, beta > 0, SEC)"))
       << '\n';
    if (quotient)
      os << prefix << "quotient non_increasing="
         << (quotient->non_increasing ? "true" : "false")
         << " max_increase=" << format_double(quotient->max_increase) << '\n';
  };
  if (a.format == "csv") {
    lorcomp::write_trajectory_csv(out.os(), traj);
    summary(out.os(), "# ");
    return 0;
  }
  summary(out.os(), "");
  std::vector<std::vector<std::string>> rows;
  const std::size_t stride = std::max<std::size_t>(1, traj.samples.size() / 25);
  for (std::size_t i = 0; i < traj.samples.size(); i += stride)
    rows.push_back({tdisp(traj.samples[i].tau), tdisp(traj.samples[i].theta),
                    tdisp(traj.samples[i].area)});
  print_table(out.os(), {"tau", "theta", "A"}, rows);
  return 0;
}

int run_evolve_spacetime(const EvolveArgs& a) {
  std::ifstream in(a.spacetime);
  if (!in) throw IoError("cannot open spacetime spec '" + a.spacetime + "'");
  nlohmann::json jin;
  try {
    in >> jin;
  } catch (const nlohmann::json::exception& e) {
    throw lorcomp::ParseError(std::string("spacetime JSON: ") + e.what());
  }
  const lorcomp::GeneralizedFLRW st = lorcomp::flrw_from_json(jin);
  if (a.samples < 2) throw std::invalid_argument("evolve: --samples must be >= 2");
  if (!(a.t_max > 0.0)) throw std::invalid_argument("evolve: --t-max must be > 0");

  std::vector<double> ts(a.samples), areas(a.samples);
  for (int i = 0; i < a.samples; ++i) {
    ts[i] = a.t_max * double(i) / double(a.samples - 1);
    areas[i] = lorcomp::evolve_flrw_areas(st, ts[i]);
  }
  const lorcomp::InitialDataSet data = lorcomp::induced_initial_data(st);
  const double beta = data.max_h_plus();
  std::optional<lorcomp::QuotientVerdict> quotient;
  if (beta > 0.0) quotient = lorcomp::monotone_quotient_check(ts, areas, beta, st.dimension());
  const std::vector<lorcomp::SecCellVerdict> sec = lorcomp::sec_check(st, ts);
  bool sec_all = true;
  for (const auto& v : sec) sec_all = sec_all && v.sec_holds;

  KvList kv{{"spacetime", a.spacetime},
            {"t_max", format_double(a.t_max)},
            {"samples", std::to_string(a.samples)},
            {"beta", format_double(beta)},
            {"format", a.format},
            {"output", a.output}};
  OutputTarget out(a.output);

  if (a.format == "json") {
    nlohmann::json j;
    j["config"] = echo_json("evolve", kv);
    j["t"] = ts;
    j["area"] = areas;
    j["sec_all"] = sec_all;
    j["sec"] = nlohmann::json::array();
    for (const auto& v : sec)
      j["sec"].push_back({{"id", v.id},
                          {"sec_holds", v.sec_holds},
                          {"worst_ric_tt", v.worst_ric_tt},
                          {"worst_t", v.worst_t}});
    if (quotient)
      j["quotient"] = {{"non_increasing", quotient->non_increasing},
                       {"max_increase", quotient->max_increase},
                       {"at_t", quotient->at_t}};
    out.os() << j.dump(2) << '\n';
    return 0;
  }

  out.os() << echo_line("evolve", kv) << '\n';
  const auto summary = [&](const char* prefix) {
    out.os() << prefix << "sec_all=" << (sec_all ? "true" : "false");
    if (quotient)
      out.os() << " quotient non_increasing=" << (quotient->non_increasing ? "true" : "false")
               << " max_increase=" << format_double(quotient->max_increase);
    out.os() << '\n';
  };
  if (a.format == "csv") {
    out.os() << "t,area\n";
    for (int i = 0; i < a.samples; ++i)
      out.os() << format_double(ts[i]) << ',' << format_double(areas[i]) << '\n';
    summary("# ");
    return 0;
  }
  summary("");
  std::vector<std::vector<std::string>> rows;
  const std::size_t stride = std::max<std::size_t>(1, ts.size() / 25);
  for (std::size_t i = 0; i < ts.size(); i += stride)
    rows.push_back({tdisp(ts[i]), tdisp(areas[i])});
  print_table(out.os(), {"t", "area"}, rows);
  return 0;
}

int run_evolve(const EvolveArgs& a) {
  const bool have_theta = a.theta0.has_value();
  const bool have_st = !a.spacetime.empty();
  if (have_theta == have_st)
    throw std::invalid_argument("evolve: give exactly one of --theta0 or --spacetime");
  return have_theta ? run_evolve_congruence(a) : run_evolve_spacetime(a);
}

// ---------------------------------------------------------------------------

struct GenAreaArgs {
  std::string spacetime;
  std::optional<double> beta;
  int n = 3;
  double base_area = 1.0;
  double T = 1.0;
  std::optional<double> h0;
  double ratio = 0.5;
  int count = 20;
  double tail = 0.5;
  double tol = 1e-6;
  std::string format = "table";
  std::string output = "-";
};

int run_gen_area(const GenAreaArgs& a) {
  const bool have_st = !a.spacetime.empty();
  const bool have_model = a.beta.has_value();
  if (have_st == have_model)
    throw std::invalid_argument("gen-area: give exactly one of --spacetime or --beta");
  if (!(a.T > 0.0)) throw std::invalid_argument("gen-area: --T must be > 0");

  std::optional<lorcomp::AreaHistory> hist;
  std::string source;
  if (have_st) {
    std::ifstream in(a.spacetime);
    if (!in) throw IoError("cannot open spacetime spec '" + a.spacetime + "'");
    nlohmann::json jin;
    try {
      in >> jin;
    } catch (const nlohmann::json::exception& e) {
      throw lorcomp::ParseError(std::string("spacetime JSON: ") + e.what());
    }
    hist = lorcomp::history_from_flrw(lorcomp::flrw_from_json(jin), a.T);
    source = a.spacetime;
  } else {
    const lorcomp::ModelGeometry m(a.n, *a.beta);
    hist = lorcomp::history_from_model(m, a.base_area, a.T);
    source = "model(n=" + std::to_string(a.n) + ",beta=" + format_double(*a.beta) + ")";
  }

  lorcomp::GenAreaSchedule sched = lorcomp::default_schedule(a.T);
  if (a.h0) sched.h0 = *a.h0;
  sched.ratio = a.ratio;
  sched.count = a.count;
  sched.tail_fraction = a.tail;

  const lorcomp::GeneralizedAreaEstimate est = lorcomp::generalized_area(*hist, a.T, sched);
  const double s_T = hist->value(a.T);
  const double left = est.h_schedule.empty()
                          ? s_T
                          : hist->value(a.T - est.h_schedule.back());
  const lorcomp::SandwichVerdict verdict = lorcomp::sandwich_check(s_T, est, left, a.tol);

  KvList kv{{"source", source},
            {"T", format_double(a.T)},
            {"h0", format_double(sched.h0)},
            {"ratio", format_double(sched.ratio)},
            {"count", std::to_string(sched.count)},
            {"tail", format_double(sched.tail_fraction)},
            {"tol", format_double(a.tol)},
            {"format", a.format},
            {"output", a.output}};
  OutputTarget out(a.output);

  if (a.format == "json") {
    nlohmann::json j;
    j["config"] = echo_json("gen-area", kv);
    j["estimate"] = est;
    j["s_T"] = s_T;
    j["left_limit"] = left;
    j["sandwich"] = {{"ok", verdict.ok},
                     {"margin_lower", verdict.margin_lower},
                     {"margin_upper", verdict.margin_upper}};
    out.os() << j.dump(2) << '\n';
    return 0;
  }

  out.os() << echo_line("gen-area", kv) << '\n';
  const auto summary = [&](const char* prefix) {
    out.os() << prefix << "estimate=" << format_double(est.estimate)
             << " s_T=" << format_double(s_T) << " left_limit=" << format_double(left)
             << " truncated=" << (est.truncated ? "true" : "false") << '\n';
    out.os() << prefix << "sandwich ok=" << (verdict.ok ? "true" : "false")
             << " margin_lower=" << format_double(verdict.margin_lower)
             << " margin_upper=" << format_double(verdict.margin_upper) << '\n';
  };
  if (a.format == "csv") {
    lorcomp::write_quotients_csv(out.os(), est);
    summary("# ");
    return 0;
  }
  summary("");
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < est.h_schedule.size(); ++i)
    rows.push_back({tdisp(est.h_schedule[i]), tdisp(est.quotients[i])});
  print_table(out.os(), {"h", "quotient"}, rows);
  return 0;
}

// ---------------------------------------------------------------------------

struct CounterexampleArgs {
  double p = 1.0;
  int n = 3;
  double t = 3.0;
  std::vector<long> j;
  std::string format = "table";
  std::string output = "-";
};

int run_counterexample(const CounterexampleArgs& a) {
  const lorcomp::DivergenceReport rep = lorcomp::divergence_report(a.p, a.n, a.t, a.j);

  KvList kv{{"p", format_double(a.p)},   {"n", std::to_string(a.n)},
            {"t", format_double(a.t)},   {"j", join_list(a.j)},
            {"format", a.format},        {"output", a.output}};
  OutputTarget out(a.output);

  if (a.format == "json") {
    nlohmann::json j;
    j["config"] = echo_json("counterexample", kv);
    j["report"] = rep;
    out.os() << j.dump(2) << '\n';
    return 0;
  }
  out.os() << echo_line("counterexample", kv) << '\n';
  if (a.format == "csv") {
    lorcomp::write_divergence_csv(out.os(), rep);
    out.os() << "# first_violation_j="
             << (rep.first_violation_j ? std::to_string(*rep.first_violation_j)
                                       : std::string("none"))
             << " increasing_after_violation="
             << (rep.increasing_after_violation ? "true" : "false") << '\n';
    return 0;
  }
  std::vector<std::vector<std::string>> rows;
  for (const auto& row : rep.rows)
    rows.push_back(
        {std::to_string(row.j), tdisp(row.area), tdisp(row.bound), tdisp(row.ratio)});
  print_table(out.os(), {"j", "area", "bound", "ratio"}, rows);
  out.os() << "first_violation_j="
           << (rep.first_violation_j ? std::to_string(*rep.first_violation_j)
                                     : std::string("none"))
           << " increasing_after_violation="
           << (rep.increasing_after_violation ? "true" : "false") << '\n';
  return 0;
}

// ---------------------------------------------------------------------------

struct VerifyArgs {
  std::uint64_t seed = lorcomp::verify::kDefaultSeed;
  std::string output = "-";
};

int run_verify(const VerifyArgs& a) {
  OutputTarget out(a.output);
  out.os() << "# lorcomp verify seed=" << a.seed << " output=" << a.output << '\n';
  const std::vector<lorcomp::verify::CheckResult> results =
      lorcomp::verify::run_acceptance_checks(a.seed);
  int failures = 0;
  for (const auto& r : results) {
    out.os() << (r.passed ? "PASS" : "FAIL") << ' ' << r.id << '/' << results.size() << ' '
             << r.name << ": " << r.detail << '\n';
    if (!r.passed) ++failures;
  }
  if (failures == 0) {
    out.os() << "verify: " << results.size() << '/' << results.size() << " checks passed\n";
    return 0;
  }
  out.os() << "verify: " << failures << " of " << results.size() << " checks FAILED\n";
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lorentzian area/volume comparison toolkit"};
  app.require_subcommand(1);

  BoundsArgs bounds;
  auto* cmd_bounds = app.add_subcommand(
      "bounds", "Area/volume bound reports for an initial data CSV over a t grid");
  cmd_bounds->add_option("--input", bounds.input, "cell CSV file (id,weight,H[,K])")
      ->required();
  int bounds_n = 0;
  auto* bounds_n_opt =
      cmd_bounds->add_option("--n", bounds_n, "dimension (overrides the '# n=' sidecar)");
  cmd_bounds->add_option("--t", bounds.t, "comma-separated evaluation times")
      ->delimiter(',');
  cmd_bounds->add_option("--format", bounds.format, "table|csv|json")
      ->check(CLI::IsMember({"table", "csv", "json"}));
  cmd_bounds->add_option("--output", bounds.output, "output file ('-' = stdout)");
  cmd_bounds->add_flag("--echo-data", bounds.echo_data,
                       "emit the loaded data set as JSON and exit");

  ModelArgs model;
  auto* cmd_model =
      app.add_subcommand("model", "Closed-form model areas, volumes and envelope");
  cmd_model->add_option("--n", model.n, "dimension")->required();
  cmd_model->add_option("--beta", model.beta, "initial mean curvature (>= 0)")->required();
  cmd_model->add_option("--base-area", model.base_area, "initial area (default 1)");
  cmd_model->add_option("--t", model.t, "comma-separated evaluation times")
      ->delimiter(',')
      ->required();
  cmd_model->add_option("--format", model.format, "table|csv|json")
      ->check(CLI::IsMember({"table", "csv", "json"}));
  cmd_model->add_option("--output", model.output, "output file ('-' = stdout)");

  EvolveArgs evolve;
  auto* cmd_evolve = app.add_subcommand(
      "evolve", "Integrate a congruence (--theta0) or evolve spacetime areas (--spacetime)");
  double evolve_theta0 = 0.0;
  auto* theta_opt =
      cmd_evolve->add_option("--theta0", evolve_theta0, "initial expansion scalar");
  cmd_evolve->add_option("--ric", evolve.ric, "Ricci profile: zero|constant");
  cmd_evolve->add_option("--ric-value", evolve.ric_value, "constant Ricci value");
  cmd_evolve->add_option("--n", evolve.n, "dimension");
  cmd_evolve->add_option("--t-end", evolve.t_end, "integration horizon (default 2)");
  cmd_evolve->add_option("--step", evolve.step, "fixed integrator step (default 1e-3)");
  double evolve_beta = 0.0;
  auto* beta_opt = cmd_evolve->add_option("--beta", evolve_beta,
                                          "envelope beta (defaults to theta0)");
  cmd_evolve->add_option("--spacetime", evolve.spacetime, "spacetime spec JSON file");
  cmd_evolve->add_option("--t-max", evolve.t_max, "area sweep horizon (default 5)");
  cmd_evolve->add_option("--samples", evolve.samples, "area sweep sample count");
  cmd_evolve->add_option("--format", evolve.format, "table|csv|json")
      ->check(CLI::IsMember({"table", "csv", "json"}));
  cmd_evolve->add_option("--output", evolve.output, "output file ('-' = stdout)");

  GenAreaArgs gen;
  auto* cmd_gen = app.add_subcommand(
      "gen-area", "Generalized-area estimate and sandwich check for a history");
  cmd_gen->add_option("--spacetime", gen.spacetime, "spacetime spec JSON file");
  double gen_beta = 0.0;
  auto* gen_beta_opt =
      cmd_gen->add_option("--beta", gen_beta, "model-history beta (with --n)");
  cmd_gen->add_option("--n", gen.n, "dimension for the model history");
  cmd_gen->add_option("--base-area", gen.base_area, "model-history initial area");
  cmd_gen->add_option("--T", gen.T, "evaluation time")->required();
  double gen_h0 = 0.0;
  auto* gen_h0_opt = cmd_gen->add_option("--h0", gen_h0, "largest window (default T/10)");
  cmd_gen->add_option("--ratio", gen.ratio, "window shrink ratio (default 0.5)");
  cmd_gen->add_option("--count", gen.count, "window count (default 20)");
  cmd_gen->add_option("--tail", gen.tail, "tail fraction maximized over (default 0.5)");
  cmd_gen->add_option("--tol", gen.tol, "sandwich tolerance (default 1e-6)");
  cmd_gen->add_option("--format", gen.format, "table|csv|json")
      ->check(CLI::IsMember({"table", "csv", "json"}));
  cmd_gen->add_option("--output", gen.output, "output file ('-' = stdout)");

  CounterexampleArgs cex;
  auto* cmd_cex = app.add_subcommand(
      "counterexample", "L^p-bound divergence report for the two-region family");
  cmd_cex->add_option("--p", cex.p, "norm exponent (1 <= p < n)")->required();
  cmd_cex->add_option("--n", cex.n, "dimension")->required();
  cmd_cex->add_option("--t", cex.t, "evaluation time")->required();
  cmd_cex->add_option("--j", cex.j, "comma-separated, strictly increasing j values")
      ->delimiter(',')
      ->required();
  cmd_cex->add_option("--format", cex.format, "table|csv|json")
      ->check(CLI::IsMember({"table", "csv", "json"}));
  cmd_cex->add_option("--output", cex.output, "output file ('-' = stdout)");

  VerifyArgs verify;
  auto* cmd_verify =
      app.add_subcommand("verify", "Run the full oracle suite; exit 2 on any failure");
  cmd_verify->add_option("--seed", verify.seed, "seed for the randomized sweeps");
  cmd_verify->add_option("--output", verify.output, "output file ('-' = stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (cmd_bounds->parsed()) {
      if (*bounds_n_opt) bounds.n = bounds_n;
      return run_bounds(bounds);
    }
    if (cmd_model->parsed()) return run_model(model);
    if (cmd_evolve->parsed()) {
      if (*theta_opt) evolve.theta0 = evolve_theta0;
      if (*beta_opt) evolve.beta = evolve_beta;
      return run_evolve(evolve);
    }
    if (cmd_gen->parsed()) {
      if (*gen_beta_opt) gen.beta = gen_beta;
      if (*gen_h0_opt) gen.h0 = gen_h0;
      return run_gen_area(gen);
    }
    if (cmd_cex->parsed()) return run_counterexample(cex);
    if (cmd_verify->parsed()) return run_verify(verify);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const lorcomp::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
