#include "doctest.h"

#include <cmath>
#include <sstream>

#include "gnc/analysis.hpp"
#include "gnc/codespec.hpp"

using namespace gnc;

namespace {
DEParams c1_params() {
  return {25, 0.6600, DegreeDistribution({{2, 1.0}}), 0.0490, 1 - 0.9433, {}};
}
CodeSpec spec(const char* name) {
  return load_spec(std::string(GAMMA_SPEC_DIR "/") + name + ".json");
}
}  // namespace

TEST_CASE("gamma_reg boundary values and frozen references") {
  for (unsigned g : {1u, 5u, 25u, 128u}) CHECK(gamma_reg(g, 0.0) == 1.0);
  // frozen against scipy.special.gammaincc
  CHECK(gamma_reg(25, 25.0) == doctest::Approx(0.47339846855634937).epsilon(1e-12));
  CHECK(gamma_reg(5, 1.7) == doctest::Approx(0.9703851936954679).epsilon(1e-12));
  CHECK(gamma_reg(25, 18.8443) == doctest::Approx(0.9000010266013307).epsilon(1e-10));
  // strictly decreasing (for small x the value saturates at 1 in doubles)
  double prev = 2;
  for (double x : {8.0, 15.0, 20.0, 25.0, 40.0, 80.0}) {
    double v = gamma_reg(25, x);
    CHECK(v < prev);
    prev = v;
  }
}

TEST_CASE("gamma_reg matches a direct high-precision summation") {
  // 25-term direct sum at x=25 in long double
  long double x = 25.0L, term = expl(-x), sum = term;
  for (int i = 1; i < 25; ++i) {
    term *= x / i;
    sum += term;
  }
  CHECK(gamma_reg(25, 25.0) == doctest::Approx(double(sum)).epsilon(1e-12));
}

TEST_CASE("gamma_reg_inv inverts gamma_reg") {
  CHECK(gamma_reg_inv(25, 1.0) == 0.0);
  CHECK(gamma_reg_inv(25, 0.951) ==
        doctest::Approx(17.343899518321034).epsilon(1e-9));
  CHECK(gamma_reg_inv(7, 0.3) == doctest::Approx(8.111049306692797).epsilon(1e-9));
  for (double y : {0.999, 0.9, 0.5, 0.1, 0.003}) {
    for (unsigned g : {2u, 25u, 75u}) {
      double x = gamma_reg_inv(g, y);
      CHECK(gamma_reg(g, x) == doctest::Approx(y).epsilon(1e-10));
    }
  }
  CHECK_THROWS_AS(gamma_reg_inv(25, 0.0), ConfigError);
  CHECK_THROWS_AS(gamma_reg_inv(25, 1.5), ConfigError);
}

TEST_CASE("truncated Poisson rank pmf") {
  auto p0 = rank_pmf_poisson(0, 5);
  CHECK(p0[0] == 1.0);
  for (double r : {0.1, 1.0, 10.0, 100.0}) {
    auto pmf = rank_pmf_poisson(r, 25);
    double sum = 0;
    for (double v : pmf) sum += v;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    // tail complement identity: P[g] = 1 - gamma_reg(g, r)
    CHECK(pmf[25] == doctest::Approx(1.0 - gamma_reg(25, r)).epsilon(1e-9));
  }
}

TEST_CASE("truncated binomial rank pmf") {
  auto p0 = rank_pmf_binomial(0, 4, 3);
  CHECK(p0[0] == 1.0);
  // frozen: rn=2, n=4, g=3
  auto pm = rank_pmf_binomial(0.5, 4, 3);
  CHECK(pm[0] == doctest::Approx(0.5625).epsilon(1e-12));
  CHECK(pm[1] == doctest::Approx(0.375).epsilon(1e-12));
  CHECK(pm[2] == doctest::Approx(0.0625).epsilon(1e-12));
  CHECK(pm[3] == doctest::Approx(0.0).epsilon(1e-12));
  // n=1: all packets land in the single generation
  auto p1 = rank_pmf_binomial(7, 1, 5);
  CHECK(p1[5] == doctest::Approx(1.0));
  CHECK_THROWS_AS(rank_pmf_binomial(0.51, 4, 3), ConfigError);
}

TEST_CASE("binomial converges to Poisson as n grows") {
  const unsigned g = 25;
  auto pb = rank_pmf_binomial(27.3, 10000, g);
  auto pp = rank_pmf_poisson(27.3, g);
  double tv = 0;
  for (unsigned i = 0; i <= g; ++i) tv += std::abs(pb[i] - pp[i]);
  CHECK(tv / 2 <= 1e-3);
}

TEST_CASE("expected rank counts") {
  auto c = expected_rank_counts(0, 67, 25);
  CHECK(c[0] == doctest::Approx(67.0));
  auto c2 = expected_rank_counts(1.0, 67, 25);
  double sum = 0;
  for (double v : c2) sum += v;
  CHECK(sum == doctest::Approx(67.0).epsilon(1e-9));
}

TEST_CASE("de_step at zero reproduces x0 for degree-2 distributions") {
  auto params = c1_params();
  // P'(0) = 0, so the map at 0 equals 1 - gamma_reg(g, r0) = x0
  CHECK(de_step(params, 0.0) == doctest::Approx(params.x0).epsilon(1e-9));
  // monotone in x_prev
  DensityEvolution de(params);
  double prev = -1;
  for (double x : {0.0, 0.2, 0.4, 0.6, 0.8, 0.99}) {
    double v = de.step(x);
    CHECK(v >= prev);
    prev = v;
  }
}

TEST_CASE("heuristic chart opens to a closing point near one") {
  // Just above the critical opening x0 the trajectory climbs to ~1.
  DEParams p{25, 0.6351, heuristic_px(33), 0.105, 1e-6, {}};
  DensityEvolution de(p);
  auto traj = de.trajectory(20000);
  CHECK(traj.converged);
  CHECK(traj.xs.back() >= 1 - 1e-6);
  auto rep = de.check_convergence(20000);
  CHECK(rep.ok);
}

TEST_CASE("trajectory converges exactly when the chart check passes") {
  // C1 closes at ~0.94338: a target below it converges, one above stalls.
  DegreeDistribution p2({{2, 1.0}});
  DEParams open{25, 0.6600, p2, 0.0490, 1 - 0.94, {}};
  CHECK(check_convergence(open).ok);
  CHECK(DensityEvolution(open).trajectory().converged);

  DEParams closed{25, 0.6600, p2, 0.0490, 1 - 0.96, {}};
  CHECK(!check_convergence(closed).ok);
  auto traj = DensityEvolution(closed).trajectory();
  CHECK(!traj.converged);
  CHECK(traj.xs.back() < 0.96);
}

TEST_CASE("convergence fails when the outer code is too weak") {
  // R close to 1 removes the check-node term; the chart closes immediately.
  DEParams p{25, 0.99, DegreeDistribution({{2, 1.0}}), 0.05, 0.05, {}};
  auto rep = check_convergence(p);
  CHECK(!rep.ok);
  CHECK(rep.closing_point < 0.2);
}

TEST_CASE("C4 chart is open up to its tabulated closing point") {
  auto s = spec("c4");
  auto rep = check_convergence(to_de_params(s), 20000, s.dip_tolerance);
  CHECK(rep.ok);
  // strict closing point, searched on (x0, ~1)
  DEParams wide = to_de_params(s);
  wide.delta = 1e-9;
  auto strict = check_convergence(wide, 200000);
  CHECK(strict.closing_point == doctest::Approx(0.9910).epsilon(2e-4));
}

TEST_CASE("C9 robust margin holds at table precision") {
  auto s = spec("c9");
  REQUIRE(s.robust.has_value());
  auto params = to_de_params(s);
  auto rep = check_convergence(params, 20000, s.dip_tolerance);
  CHECK(rep.ok);
  // tabulated reference values are rounded to 4 decimals; the margin dips about
  // 1.4e-3 below Delta at the region boundary
  CHECK(rep.min_margin_upper >= -2e-3);
}

TEST_CASE("overhead formulas reproduce the reference designs") {
  CHECK(overhead_dense(c1_params()) == doctest::Approx(0.1143).epsilon(0.01));
  auto h = spec("heuristic");
  CHECK(overhead_dense(to_de_params(h)) ==
        doctest::Approx(0.1883).epsilon(0.006));
  auto c6 = spec("c6");
  CHECK(overhead_dense(to_de_params(c6)) == doctest::Approx(0.0260).epsilon(0.04));
  auto c7 = spec("c7");
  CHECK(overhead_dense(to_de_params(c7)) == doctest::Approx(0.0217).epsilon(0.05));
}

TEST_CASE("improved-design formulas") {
  DEParams p{25, 0.68, DegreeDistribution({{2, 1.0}}), 0.0540, 1 - 0.9172, {}};
  auto [rp, eps] = overhead_improved(p);
  CHECK(rp == doctest::Approx(0.9658).epsilon(2e-4));
  CHECK(eps == doctest::Approx(0.0677).epsilon(0.015));

  // delta -> 0 reduces to the dense formula
  DEParams p0{25, 0.68, DegreeDistribution({{2, 1.0}}), 0.0540, 1e-12, {}};
  auto [rp0, eps0] = overhead_improved(p0);
  CHECK(rp0 == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(eps0 == doctest::Approx(overhead_dense(p0)).epsilon(1e-9));

  // packet-level beats dense at identical parameters
  auto c1 = c1_params();
  auto [rp1, eps1] = overhead_improved(c1);
  CHECK(eps1 < overhead_dense(c1));
}

TEST_CASE("evolution chart rows") {
  auto params = c1_params();
  DensityEvolution de(params);
  std::ostringstream os;
  write_evolution_chart(os, de, 101);
  std::string text = os.str();
  size_t rows = size_t(std::count(text.begin(), text.end(), '\n'));
  CHECK(rows == 102);  // header + grid
  CHECK(text.substr(0, 11) == "x,f_x,diag\n");
  // the map exceeds the diagonal at x0 when the chart is open
  CHECK(de.map(params.x0) > params.x0);
}

TEST_CASE("narrower opening of C1 versus C6 near x = 1") {
  auto sc1 = spec("c1");
  auto sc6 = spec("c6");
  DensityEvolution d1(to_de_params(sc1)), d6(to_de_params(sc6));
  const double x = 0.97;  // beyond C1's closing point, inside C6's
  CHECK(d1.map(x) - x < 0);
  CHECK(d6.map(x) - x > 0);
}
