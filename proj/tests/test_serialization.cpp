#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "lorcomp/serialization.hpp"

using namespace lorcomp;

TEST_CASE("initial data JSON round trip") {
  std::istringstream in("# n=3\nid,weight,H,K\nc0,1.25,3.0,1.5\nc1,0.5,-2.0,\n");
  const InitialDataSet d = load_initial_data(in, {}, "demo");
  const nlohmann::json j = d;
  CHECK(j.at("n") == 3);
  CHECK(j.at("label") == "demo");
  CHECK(j.at("total_area").get<double>() == doctest::Approx(1.75));
  REQUIRE(j.at("cells").size() == 2);
  CHECK(j.at("cells")[0].contains("K"));
  CHECK_FALSE(j.at("cells")[1].contains("K"));

  const InitialDataSet back = initial_data_from_json(j);
  CHECK(back.dimension() == d.dimension());
  CHECK(back.total_area() == d.total_area());
  REQUIRE(back.size() == d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    CHECK(back.cells()[i].id == d.cells()[i].id);
    CHECK(back.cells()[i].weight == d.cells()[i].weight);
    CHECK(back.cells()[i].mean_curvature == d.cells()[i].mean_curvature);
    CHECK(back.cells()[i].k_norm == d.cells()[i].k_norm);
  }
}

TEST_CASE("initial data CSV round trip") {
  const InitialDataSet d(4, {{"a", 0.125, 2.0, 0.5}, {"b", 2.0, -1.0, 0.25}}, "rt");
  std::ostringstream out;
  write_initial_data_csv(out, d);
  std::istringstream in(out.str());
  const InitialDataSet back = load_initial_data(in, {}, "rt");
  CHECK(back.dimension() == 4);
  REQUIRE(back.size() == 2);
  CHECK(back.cells()[0].weight == d.cells()[0].weight);
  CHECK(back.cells()[1].mean_curvature == d.cells()[1].mean_curvature);
  CHECK(*back.cells()[1].k_norm == *d.cells()[1].k_norm);
}

TEST_CASE("spacetime JSON round trip for every closed-form profile kind") {
  std::vector<FlrwCell> cells;
  cells.push_back({"lin", 1.0, ScaleProfile::linear(2.0, 0.5)});
  cells.push_back({"pow", 0.5, ScaleProfile::power(1.5, 1.0, 2.0 / 3.0)});
  cells.push_back({"tab", 0.25, ScaleProfile::table({0.0, 1.0, 2.0}, {1.0, 2.0, 2.5})});
  const GeneralizedFLRW st(3, std::move(cells));

  const nlohmann::json j = st;
  const GeneralizedFLRW back = flrw_from_json(j);
  CHECK(back.dimension() == 3);
  REQUIRE(back.cells().size() == 3);
  for (double t : {0.0, 0.7, 1.9}) {
    CHECK(evolve_flrw_areas(back, t) == evolve_flrw_areas(st, t));
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(back.cells()[i].profile.value(t) == st.cells()[i].profile.value(t));
      CHECK(back.cells()[i].profile.deriv1(t) == st.cells()[i].profile.deriv1(t));
    }
  }

  SUBCASE("custom profiles refuse to serialize") {
    std::vector<FlrwCell> cc;
    cc.push_back({"c", 1.0, ScaleProfile::custom([](double) { return 1.0; },
                                                 [](double) { return 0.0; },
                                                 [](double) { return 0.0; })});
    const GeneralizedFLRW cst(3, std::move(cc));
    nlohmann::json out;
    CHECK_THROWS_AS(out = cst, std::invalid_argument);
  }
  SUBCASE("parse errors name the problem") {
    CHECK_THROWS_AS(flrw_from_json(nlohmann::json{{"n", 3}}), ParseError);
    nlohmann::json bad = j;
    bad["cells"][0]["profile"]["kind"] = "spline";
    CHECK_THROWS_AS(flrw_from_json(bad), ParseError);
    nlohmann::json missing = j;
    missing["cells"][0]["profile"].erase("c1");
    CHECK_THROWS_AS(flrw_from_json(missing), ParseError);
  }
}

TEST_CASE("report JSON shapes") {
  const InitialDataSet d(3, {{"c0", 1.0, 3.0, 1.0}});
  const nlohmann::json ja = make_area_report(d, 1.0);
  CHECK(ja.at("t") == 1.0);
  CHECK(ja.at("exact").get<double>() == doctest::Approx(8.0));
  CHECK(ja.at("jensen_h").get<double>() == doctest::Approx(8.0));
  CHECK(ja.at("from_k").get<double>() == doctest::Approx(8.0));
  CHECK(ja.at("tg_pointwise").get<double>() == doctest::Approx(8.0));
  CHECK(ja.at("binomial_terms").size() == 4);
  CHECK(ja.at("sec_assumed") == true);

  const InitialDataSet no_k(3, {{"c0", 1.0, 3.0, {}}});
  const nlohmann::json jn = make_area_report(no_k, 1.0);
  CHECK(jn.at("from_k").is_null());

  const nlohmann::json jv = make_volume_report(d, 1.0);
  CHECK(jv.at("exact").get<double>() == doctest::Approx(3.75));
  CHECK(jv.at("jensen_h").get<double>() == doctest::Approx(5.0));
}

TEST_CASE("trajectory and estimate emission") {
  const CongruenceTrajectory traj =
      integrate_raychaudhuri(-3.0, RicciProfile::zero(), 3, 2.0, 0.05);
  const nlohmann::json jt = traj;
  CHECK(jt.at("focal_time").get<double>() == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(jt.at("truncated") == true);
  CHECK(jt.at("samples").size() == traj.samples.size());

  std::ostringstream csv;
  write_trajectory_csv(csv, traj);
  CHECK(csv.str().rfind("tau,theta,A\n0,-3,1\n", 0) == 0);

  const AreaHistory hist = AreaHistory::from_function([](double) { return 2.0; }, 4.0);
  const GeneralizedAreaEstimate est = generalized_area(hist, 1.0);
  const nlohmann::json je = est;
  CHECK(je.at("estimate").get<double>() == doctest::Approx(2.0));
  CHECK(je.at("quotients").size() == est.quotients.size());
  std::ostringstream qcsv;
  write_quotients_csv(qcsv, est);
  CHECK(qcsv.str().rfind("h,quotient\n", 0) == 0);
}

TEST_CASE("bounds and divergence CSV rows") {
  const InitialDataSet d(3, {{"c0", 1.0, 3.0, 1.0}});
  std::ostringstream out;
  write_bounds_csv_header(out, 3);
  write_bounds_csv_row(out, make_area_report(d, 1.0));
  CHECK(out.str() ==
        "t,exact,jensen_h,from_k,tg,binomial_k0,binomial_k1,binomial_k2,binomial_k3\n"
        "1,8,8,8,8,1,3,3,1\n");

  const std::vector<long> js = {1, 100};
  const DivergenceReport rep = divergence_report(1.0, 3, 3.0, js);
  std::ostringstream dcsv;
  write_divergence_csv(dcsv, rep);
  CHECK(dcsv.str().rfind("j,area,bound,ratio\n1,8,8,1\n100,5154.88", 0) == 0);

  const nlohmann::json jr = rep;
  CHECK(jr.at("first_violation_j") == 100);
  CHECK(jr.at("rows")[1].at("ratio").get<double>() == doctest::Approx(644.36).epsilon(1e-3));
}
