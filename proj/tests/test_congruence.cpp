#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "lorcomp/congruence.hpp"
#include "lorcomp/integral_bounds.hpp"
#include "support/reference.hpp"

using namespace lorcomp;

namespace {

double model_theta(double beta, int n, double tau) { return n / (tau + n / beta); }

double max_traj_rel_err(double theta0, int n, double t_end, double step) {
  const CongruenceTrajectory traj =
      integrate_raychaudhuri(theta0, RicciProfile::zero(), n, t_end, step);
  double worst = 0.0;
  for (const TrajectorySample& s : traj.samples) {
    const double th = model_theta(theta0, n, s.tau);
    const double ar = std::pow(1.0 + theta0 * s.tau / n, n);
    worst = std::max(worst, std::abs(s.theta - th) / std::abs(th));
    worst = std::max(worst, std::abs(s.area - ar) / std::abs(ar));
  }
  return worst;
}

GeneralizedFLRW random_sec_flrw(std::mt19937& gen) {
  std::uniform_real_distribution<double> w_d(0.1, 2.0);
  std::uniform_real_distribution<double> c0_d(0.5, 2.0);
  std::uniform_real_distribution<double> c1_d(0.05, 1.5);
  std::uniform_real_distribution<double> e_d(0.25, 1.0);
  const int n = 2 + int(gen() % 3);
  const std::size_t m = 1 + gen() % 20;
  std::vector<FlrwCell> cells;
  for (std::size_t i = 0; i < m; ++i) {
    ScaleProfile p = (gen() % 2 == 0) ? ScaleProfile::linear(c0_d(gen), c1_d(gen))
                                      : ScaleProfile::power(c0_d(gen), c1_d(gen), e_d(gen));
    cells.push_back({"c" + std::to_string(i), w_d(gen), std::move(p)});
  }
  return GeneralizedFLRW(n, std::move(cells));
}

}  // namespace

TEST_CASE("RicciProfile") {
  CHECK(RicciProfile::zero().value(10.0) == 0.0);
  CHECK(RicciProfile::zero().sec());
  CHECK(RicciProfile::constant(0.5).value(3.0) == 0.5);
  CHECK(RicciProfile::constant(0.5).sec());
  CHECK_FALSE(RicciProfile::constant(-0.1).sec());

  const RicciProfile tab = RicciProfile::table({0.0, 1.0, 2.0}, {0.0, 2.0, 2.0});
  CHECK(tab.value(0.5) == doctest::Approx(1.0));
  CHECK(tab.value(2.0) == doctest::Approx(2.0));
  CHECK(tab.sec());
  CHECK_THROWS_AS(tab.value(2.5), std::domain_error);
  CHECK_THROWS_AS(RicciProfile::table({0.0, 0.0}, {1.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(RicciProfile::table({0.0}, {1.0}), std::invalid_argument);
}

TEST_CASE("integrate_raychaudhuri reproduces the expanding model") {
  const CongruenceTrajectory traj =
      integrate_raychaudhuri(3.0, RicciProfile::zero(), 3, 1.0, 1e-3);
  REQUIRE(traj.samples.size() == 1001);
  const TrajectorySample last = traj.samples.back();
  CHECK(last.tau == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(last.theta == doctest::Approx(1.5).epsilon(1e-6));
  CHECK(last.area == doctest::Approx(8.0).epsilon(1e-6));
  CHECK_FALSE(traj.focal_time.has_value());
  CHECK_FALSE(traj.truncated);
  CHECK(traj.sec_profile);
}

TEST_CASE("stationary congruence stays put") {
  const CongruenceTrajectory traj =
      integrate_raychaudhuri(0.0, RicciProfile::zero(), 3, 1.0, 0.01);
  for (const TrajectorySample& s : traj.samples) {
    CHECK(s.theta == 0.0);
    CHECK(s.area == 1.0);
  }
}

TEST_CASE("focal time of the contracting model") {
  const CongruenceTrajectory traj =
      integrate_raychaudhuri(-3.0, RicciProfile::zero(), 3, 2.0, 1e-3);
  CHECK(traj.truncated);
  REQUIRE(traj.focal_time.has_value());
  CHECK(*traj.focal_time == doctest::Approx(1.0).epsilon(1e-6));

  // n/|beta| for another configuration: theta0 = -2, n = 4 -> focal at 2.
  const CongruenceTrajectory traj2 =
      integrate_raychaudhuri(-2.0, RicciProfile::zero(), 4, 3.0, 1e-3);
  REQUIRE(traj2.focal_time.has_value());
  CHECK(*traj2.focal_time == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("closed-form regression and fourth-order convergence") {
  CHECK(max_traj_rel_err(3.0, 3, 2.0, 1e-3) < 1e-6);
  const double e1 = max_traj_rel_err(3.0, 3, 2.0, 0.1);
  const double e2 = max_traj_rel_err(3.0, 3, 2.0, 0.05);
  CHECK(e1 / e2 > 12.0);
  CHECK(e1 / e2 < 22.0);
}

TEST_CASE("table Ricci profiles integrate like their closed forms") {
  // A flat table reproducing a constant profile must give the same trajectory.
  const RicciProfile tab = RicciProfile::table({0.0, 1.0, 2.0}, {0.5, 0.5, 0.5});
  const CongruenceTrajectory a = integrate_raychaudhuri(2.0, tab, 3, 2.0, 0.01);
  const CongruenceTrajectory b =
      integrate_raychaudhuri(2.0, RicciProfile::constant(0.5), 3, 2.0, 0.01);
  REQUIRE(a.samples.size() == b.samples.size());
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    CHECK(a.samples[i].theta == b.samples[i].theta);
    CHECK(a.samples[i].area == b.samples[i].area);
  }
  CHECK(a.sec_profile);
}

TEST_CASE("d/dtau log A = theta along trajectories") {
  const RicciProfile ric = RicciProfile::constant(0.3);
  const CongruenceTrajectory traj = integrate_raychaudhuri(1.0, ric, 3, 2.0, 1e-3);
  const auto& s = traj.samples;
  for (std::size_t i = 1; i + 1 < s.size(); i += 37) {
    const double fd =
        (std::log(s[i + 1].area) - std::log(s[i - 1].area)) / (s[i + 1].tau - s[i - 1].tau);
    CHECK(std::abs(fd - s[i].theta) < 1e-5 * std::max(1.0, std::abs(s[i].theta)));
  }
}

TEST_CASE("integration preconditions and truncation") {
  CHECK_THROWS_AS(integrate_raychaudhuri(1.0, RicciProfile::zero(), 3, 1.0, 0.2),
                  std::invalid_argument);
  CHECK_THROWS_AS(integrate_raychaudhuri(1.0, RicciProfile::zero(), 3, -1.0, 0.01),
                  std::invalid_argument);
  CHECK_THROWS_AS(integrate_raychaudhuri(1.0, RicciProfile::zero(), 0, 1.0, 0.01),
                  std::invalid_argument);
  // Table covering only [0, 0.5] cannot drive integration to 1.
  const RicciProfile tab = RicciProfile::table({0.0, 0.5}, {0.0, 0.0});
  CHECK_THROWS_AS(integrate_raychaudhuri(1.0, tab, 3, 1.0, 0.01), std::invalid_argument);

  // Strong contraction focuses well before t_end; trajectory is truncated.
  const CongruenceTrajectory traj =
      integrate_raychaudhuri(-30.0, RicciProfile::zero(), 3, 2.0, 1e-3);
  CHECK(traj.truncated);
  REQUIRE(traj.focal_time.has_value());
  CHECK(*traj.focal_time == doctest::Approx(0.1).epsilon(1e-5));
  CHECK(traj.samples.back().tau <= *traj.focal_time);
}

TEST_CASE("richardson error estimate tracks the actual error") {
  const StepErrorEstimate est =
      richardson_error_estimate(3.0, RicciProfile::zero(), 3, 2.0, 0.1);
  // Actual coarse-step max errors against the closed form.
  const CongruenceTrajectory traj =
      integrate_raychaudhuri(3.0, RicciProfile::zero(), 3, 2.0, 0.1);
  double worst_area = 0.0;
  for (const TrajectorySample& s : traj.samples)
    worst_area = std::max(worst_area, std::abs(s.area - std::pow(1.0 + s.tau, 3)));
  CHECK(est.area_error > 0.0);
  CHECK(worst_area < 40.0 * est.area_error);
  CHECK(est.area_error < worst_area * 2.0);
}

TEST_CASE("comparison envelope") {
  CHECK(comparison_envelope(3.0, 3, 0.0) == doctest::Approx(3.0));
  CHECK(comparison_envelope(3.0, 3, 1.0) == doctest::Approx(1.5));
  // The envelope is exactly the slice mean curvature of the matching model.
  for (double beta : {0.25, 1.0, 3.0})
    for (double tau : {0.0, 0.7, 4.0})
      CHECK(comparison_envelope(beta, 3, tau) ==
            model_mean_curvature(ModelGeometry(3, beta), tau));
  double prev = comparison_envelope(2.0, 3, 0.0);
  for (double tau : {0.5, 1.0, 5.0, 50.0, 500.0}) {
    const double v = comparison_envelope(2.0, 3, tau);
    CHECK(v < prev);
    CHECK(v > 0.0);
    prev = v;
  }
  CHECK_THROWS_AS(comparison_envelope(0.0, 3, 1.0), std::domain_error);
  CHECK_THROWS_AS(comparison_envelope(-1.0, 3, 1.0), std::domain_error);
}

TEST_CASE("envelope_violation") {
  SUBCASE("saturation by the model congruence") {
    const CongruenceTrajectory traj =
        integrate_raychaudhuri(3.0, RicciProfile::zero(), 3, 2.0, 1e-3);
    const double excess = envelope_violation(traj, 3.0, 3);
    CHECK(std::abs(excess) < 1e-9);
  }
  SUBCASE("positive Ricci pushes theta strictly below") {
    const CongruenceTrajectory traj =
        integrate_raychaudhuri(3.0, RicciProfile::constant(0.5), 3, 2.0, 1e-3);
    CHECK(envelope_violation(traj, 3.0, 3) < 0.0);
  }
  SUBCASE("smaller initial expansion stays strictly below") {
    const CongruenceTrajectory traj =
        integrate_raychaudhuri(1.0, RicciProfile::zero(), 3, 2.0, 1e-3);
    CHECK(envelope_violation(traj, 3.0, 3) < 0.0);
  }
  SUBCASE("hypothesis errors") {
    const CongruenceTrajectory bad =
        integrate_raychaudhuri(1.0, RicciProfile::constant(-0.2), 3, 2.0, 1e-3);
    CHECK_THROWS_AS(envelope_violation(bad, 3.0, 3), std::domain_error);
    const CongruenceTrajectory ok =
        integrate_raychaudhuri(2.0, RicciProfile::zero(), 3, 2.0, 1e-3);
    CHECK_THROWS_AS(envelope_violation(ok, 1.0, 3), std::invalid_argument);
  }
}

TEST_CASE("ScaleProfile") {
  SUBCASE("linear") {
    const ScaleProfile p = ScaleProfile::linear(1.0, 3.0);
    CHECK(p.value(2.0) == 7.0);
    CHECK(p.deriv1(2.0) == 3.0);
    CHECK(p.deriv2(2.0) == 0.0);
    CHECK_THROWS_AS(ScaleProfile::linear(0.0, 1.0), std::invalid_argument);
  }
  SUBCASE("power with derivative oracles") {
    const ScaleProfile p = ScaleProfile::power(2.0, 0.5, 2.0 / 3.0);
    for (double t : {0.0, 0.7, 3.0}) {
      const double fd1 = testref::central_diff([&](double s) { return p.value(s); }, t + 0.1);
      const double fd2 =
          testref::central_diff([&](double s) { return p.deriv1(s); }, t + 0.1);
      CHECK(p.deriv1(t + 0.1) == doctest::Approx(fd1).epsilon(1e-8));
      CHECK(p.deriv2(t + 0.1) == doctest::Approx(fd2).epsilon(1e-8));
    }
    CHECK_THROWS_AS(ScaleProfile::power(2.0, -1.0, 0.5).value(2.0), std::domain_error);
  }
  SUBCASE("table") {
    const ScaleProfile p = ScaleProfile::table({0.0, 1.0, 3.0}, {1.0, 2.0, 2.5});
    CHECK(p.value(0.5) == doctest::Approx(1.5));
    CHECK(p.deriv1(0.5) == doctest::Approx(1.0));
    CHECK(p.value(2.0) == doctest::Approx(2.25));
    CHECK(p.deriv1(2.0) == doctest::Approx(0.25));
    CHECK(p.deriv2(2.0) == 0.0);
    CHECK_THROWS_AS(p.value(3.5), std::domain_error);
  }
  SUBCASE("custom") {
    const ScaleProfile p = ScaleProfile::custom(
        [](double t) { return std::exp(-t); }, [](double t) { return -std::exp(-t); },
        [](double t) { return std::exp(-t); });
    CHECK(p.value(1.0) == doctest::Approx(std::exp(-1.0)));
    CHECK(p.deriv2(1.0) == doctest::Approx(std::exp(-1.0)));
  }
}

TEST_CASE("evolve_flrw_areas") {
  std::vector<FlrwCell> cells;
  cells.push_back({"a", 0.25, ScaleProfile::linear(1.0, 1.0)});
  cells.push_back({"b", 0.75, ScaleProfile::linear(1.0, 1.0)});
  const GeneralizedFLRW st(3, std::move(cells));
  // Unit total weight with f = t + 1 matches the beta = 3 model.
  CHECK(evolve_flrw_areas(st, 1.0) == doctest::Approx(8.0).epsilon(1e-14));
  CHECK(evolve_flrw_areas(st, 0.0) == doctest::Approx(1.0).epsilon(1e-15));

  std::vector<FlrwCell> bad;
  bad.push_back({"a", 1.0, ScaleProfile::linear(1.0, -2.0)});
  const GeneralizedFLRW deg(3, std::move(bad));
  CHECK_THROWS_AS(evolve_flrw_areas(deg, 1.0), std::domain_error);

  SUBCASE("subset additivity over random partitions") {
    std::mt19937 gen(3);
    for (int it = 0; it < 20; ++it) {
      const GeneralizedFLRW rst = random_sec_flrw(gen);
      const double t = 0.25 * double(gen() % 20);
      double parts = 0.0;
      for (int g = 0; g < 3; ++g)
        parts += evolve_flrw_areas(
            rst, [&](const std::string& id) {
              return int(std::hash<std::string>{}(id) % 3) == g;
            },
            t);
      CHECK(parts == doctest::Approx(evolve_flrw_areas(rst, t)).epsilon(1e-12));
    }
  }
}

TEST_CASE("sec_check") {
  const std::vector<double> grid = {0.0, 0.5, 1.0, 2.0, 4.0};
  std::vector<FlrwCell> cells;
  cells.push_back({"lin", 1.0, ScaleProfile::linear(2.0, 0.7)});
  cells.push_back({"pow", 1.0, ScaleProfile::power(1.0, 1.0, 2.0 / 3.0)});
  cells.push_back({"acc", 1.0, ScaleProfile::power(1.0, 1.0, 2.0)});
  const GeneralizedFLRW st(3, std::move(cells));
  const std::vector<SecCellVerdict> verdicts = sec_check(st, grid);
  REQUIRE(verdicts.size() == 3);
  CHECK(verdicts[0].sec_holds);
  CHECK(verdicts[1].sec_holds);
  CHECK_FALSE(verdicts[2].sec_holds);  // f'' = 2 (1+t)^0 > 0 means Ric_tt < 0
  CHECK(verdicts[2].worst_ric_tt < 0.0);
}

TEST_CASE("induced_initial_data") {
  std::vector<FlrwCell> cells;
  cells.push_back({"a", 0.5, ScaleProfile::linear(2.0, 1.0)});   // f0 = 2, H = 3/2
  cells.push_back({"b", 1.0, ScaleProfile::power(1.0, 0.6, 0.5)});  // H = 3 * 0.3
  const GeneralizedFLRW st(3, std::move(cells));
  const InitialDataSet d = induced_initial_data(st);
  REQUIRE(d.size() == 2);
  CHECK(d.cells()[0].weight == doctest::Approx(0.5 * 8.0).epsilon(1e-15));
  CHECK(d.cells()[0].mean_curvature == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(d.cells()[1].weight == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(d.cells()[1].mean_curvature == doctest::Approx(0.9).epsilon(1e-12));
}

TEST_CASE("evolved areas never exceed the exact bound on SEC spacetimes") {
  std::mt19937 gen(99);
  for (int it = 0; it < 30; ++it) {
    const GeneralizedFLRW st = random_sec_flrw(gen);
    const InitialDataSet d = induced_initial_data(st);
    for (double t : {0.1, 1.0, 5.0}) {
      const double evolved = evolve_flrw_areas(st, t);
      const double bound = area_bound_exact(d, t);
      CHECK(evolved <= bound * (1.0 + 1e-9));
    }
  }
}

TEST_CASE("monotone_quotient_check") {
  SUBCASE("model areas saturate the quotient") {
    std::vector<double> ts, areas;
    for (int i = 0; i <= 50; ++i) {
      const double t = 0.1 * i;
      ts.push_back(t);
      areas.push_back(2.5 * comparison_area_factor(3.0, 3, t));
    }
    const QuotientVerdict v = monotone_quotient_check(ts, areas, 3.0, 3);
    CHECK(v.non_increasing);
    CHECK(v.max_increase <= 1e-12);
  }
  SUBCASE("matter-era profile decays strictly") {
    // areas (1+t)^2 against beta = 2, n = 3: quotient (1+t)^2/(1+2t/3)^3.
    std::vector<double> ts, areas;
    for (int i = 0; i <= 60; ++i) {
      const double t = 0.1 * i;
      ts.push_back(t);
      areas.push_back((1.0 + t) * (1.0 + t));
    }
    const QuotientVerdict v = monotone_quotient_check(ts, areas, 2.0, 3);
    CHECK(v.non_increasing);
    CHECK(v.max_increase == 0.0);
    // Derivative-sign oracle: d/dt log quotient = 2/(1+t) - 2/(1+2t/3) < 0.
    for (double t : {0.5, 1.0, 3.0})
      CHECK(2.0 / (1.0 + t) < 2.0 / (1.0 + 2.0 * t / 3.0));
  }
  SUBCASE("undersized beta is detected") {
    std::vector<double> ts, areas;
    for (int i = 0; i <= 20; ++i) {
      const double t = 0.2 * i;
      ts.push_back(t);
      areas.push_back(comparison_area_factor(2.0, 3, t));  // real growth rate beta = 2
    }
    const QuotientVerdict v = monotone_quotient_check(ts, areas, 1.0, 3);
    CHECK_FALSE(v.non_increasing);
    CHECK(v.max_increase > 0.0);
  }
  SUBCASE("integrated congruence with positive Ricci") {
    const CongruenceTrajectory traj =
        integrate_raychaudhuri(2.0, RicciProfile::constant(0.4), 3, 2.0, 1e-3);
    std::vector<double> ts, areas;
    for (std::size_t i = 0; i < traj.samples.size(); i += 50) {
      ts.push_back(traj.samples[i].tau);
      areas.push_back(traj.samples[i].area);
    }
    const QuotientVerdict v = monotone_quotient_check(ts, areas, 2.0, 3);
    CHECK(v.non_increasing);
  }
}
