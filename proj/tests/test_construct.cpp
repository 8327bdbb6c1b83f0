#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "votecount/construct.hpp"

using namespace votecount;

TEST_CASE("simplex solver on tiny problems") {
  SECTION("vertex of the simplex") {
    LpProblem lp;
    lp.num_vars = 3;
    lp.objective = {1.0, 0.0, 0.0};
    lp.equalities.push_back({{1.0, 1.0, 1.0}, 1.0, "sum"});
    LpSolution sol = solve_lp(lp);
    REQUIRE(sol.status == LpStatus::Optimal);
    CHECK(sol.objective == Catch::Approx(1.0).margin(1e-9));
    CHECK(sol.x[0] == Catch::Approx(1.0).margin(1e-9));
  }
  SECTION("active upper bound") {
    LpProblem lp;
    lp.num_vars = 3;
    lp.objective = {1.0, 0.0, 0.0};
    lp.equalities.push_back({{1.0, 1.0, 1.0}, 1.0, "sum"});
    lp.inequalities.push_back({{1.0, 0.0, 0.0}, 0.3, "w0 cap"});
    LpSolution sol = solve_lp(lp);
    REQUIRE(sol.status == LpStatus::Optimal);
    CHECK(sol.objective == Catch::Approx(0.3).margin(1e-9));
  }
  SECTION("infeasible") {
    LpProblem lp;
    lp.num_vars = 2;
    lp.objective = {1.0, 1.0};
    lp.equalities.push_back({{1.0, 1.0}, 1.0, "sum"});
    lp.inequalities.push_back({{1.0, 1.0}, 0.5, "conflicting cap"});
    CHECK(solve_lp(lp).status == LpStatus::Infeasible);
  }
  SECTION("unbounded") {
    LpProblem lp;
    lp.num_vars = 2;
    lp.objective = {1.0, 0.0};
    lp.inequalities.push_back({{-1.0, 1.0}, 1.0, "open"});
    CHECK(solve_lp(lp).status == LpStatus::Unbounded);
  }
  SECTION("negative rhs handled") {
    LpProblem lp;
    lp.num_vars = 2;
    lp.objective = {-1.0, -1.0};
    lp.inequalities.push_back({{-1.0, 0.0}, -0.25, "w0 >= 0.25"});
    lp.equalities.push_back({{1.0, 1.0}, 1.0, "sum"});
    LpSolution sol = solve_lp(lp);
    REQUIRE(sol.status == LpStatus::Optimal);
    CHECK(sol.x[0] >= 0.25 - 1e-9);
  }
}

TEST_CASE("theorem4 boundary constructions at m=101") {
  BasisMatrix basis = build_basis(101);

  ErrorCountDistribution w1 = theorem4_distribution(101, 1, basis);
  CHECK(w1.w[100] == 1.0);
  ErrorCurve c1 = error_curve(w1, basis);
  CHECK(c1.at(1) == Catch::Approx(100.0 / 101.0).margin(1e-12));
  for (long v = 3; v <= 101; v += 2) CHECK(c1.at(v) == 1.0);

  ErrorCountDistribution wm = theorem4_distribution(101, 101, basis);
  CHECK(wm.w[50] == 1.0);
  ErrorCurve cm = error_curve(wm, basis);
  CHECK(cm.at(101) == 0.0);
  for (long v = 1; v < 101; v += 2) CHECK(cm.at(v) > 0.0);
}

TEST_CASE("theorem4 intermediate case at m=5 resembles the theta mixture") {
  BasisMatrix basis = build_basis(5);
  ErrorCountDistribution w = theorem4_distribution(5, 3, basis);
  // support on a=1 and b=3 only
  CHECK(w.w[1] >= 0.5);
  CHECK(w.w[3] > 0.0);
  CHECK(w.w[0] == 0.0);
  CHECK(w.w[2] == 0.0);
  CHECK(w.w[4] == 0.0);
  CHECK(w.w[5] == 0.0);
  CHECK(error_curve(w, basis).argmin_v == 3);
}

TEST_CASE("theorem4 argmin is exact for all odd m <= 21 and all vmin") {
  for (long m = 3; m <= 21; m += 2) {
    BasisMatrix basis = build_basis(m);
    for (long vmin = 1; vmin <= m; vmin += 2) {
      ErrorCountDistribution w = theorem4_distribution(m, vmin, basis);
      CHECK(error_curve(w, basis).argmin_v == vmin);
    }
  }
}

TEST_CASE("max-gap LP certificates") {
  SECTION("gap matches an independent curve recomputation at m=5") {
    BasisMatrix basis = build_basis(5);
    GapCertificate cert = max_gap_lp(basis, 3, 0.3, 0.5);
    ErrorCurve again = error_curve(cert.w, basis);
    CHECK(cert.gap == Catch::Approx(again.at(5) - again.at(3)).margin(1e-9));
    CHECK(cert.locally_optimal);
  }
  SECTION("paper defaults feasible with positive gap at m=101 spot values") {
    BasisMatrix basis = build_basis(101);
    for (long vmin : {1L, 17L, 51L, 99L}) {
      GapCertificate cert = max_gap_lp(basis, vmin);
      CHECK(cert.gap > 0.0);
      CHECK(cert.locally_optimal);
      CHECK(cert.max_constraint_residual <= 1e-8);
    }
  }
  SECTION("vertex sparsity: support size bounded by active constraints") {
    BasisMatrix basis = build_basis(101);
    GapCertificate cert = max_gap_lp(basis, 25);
    long support = 0;
    for (double x : cert.w.w)
      if (x > 1e-9) ++support;
    CHECK(support <= 6);  // 2 equalities + 4 inequalities
  }
}
