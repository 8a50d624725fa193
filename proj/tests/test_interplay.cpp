#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "lotto/core.hpp"
#include "lotto/interplay.hpp"

using namespace lotto;

TEST_CASE("level curve values on both branches") {
  // Pi = 0.25, R_B = 1: linear up to P = 2/3, quadratic beyond.
  auto v = level_curve_value(0.25, 1.0, 0.4);
  REQUIRE(v.has_value());
  CHECK(*v == doctest::Approx(0.3).epsilon(1e-14));

  v = level_curve_value(0.25, 1.0, 1.0);
  REQUIRE(v.has_value());
  CHECK(*v == doctest::Approx(0.041666666666666664).epsilon(1e-14));

  // Pi >= 1/2 has no linear branch.
  v = level_curve_value(0.5, 1.0, 1.0);
  REQUIRE(v.has_value());
  CHECK(*v == doctest::Approx(0.25).epsilon(1e-14));

  v = level_curve_value(0.75, 1.0, 2.309);
  REQUIRE(v.has_value());
  CHECK(*v == doctest::Approx(0.3574351249999999).epsilon(1e-13));

  // Past the domain end the target is already exceeded with zero budget.
  CHECK_FALSE(level_curve_value(0.25, 1.0, 1.5).has_value());
  CHECK(spe_payoff(1.5, 0.0, 1.0).pi_A >= 0.25);

  // Pi = 1 is unreachable with finite budget at any P.
  v = level_curve_value(1.0, 1.0, 5.0);
  REQUIRE(v.has_value());
  CHECK(std::isinf(*v));
}

TEST_CASE("level curve is dual to the payoff function") {
  for (double Pi : {0.1, 0.25, 0.5, 0.625, 0.75, 0.9}) {
    const auto curve = sample_level_curve(Pi, 1.0, 40);
    CHECK(curve.domain_end == doctest::Approx(1.0 / (1.0 - Pi)).epsilon(1e-14));
    REQUIRE(curve.samples.size() == 40);
    CHECK(curve.samples.front().first == 0.0);
    CHECK(curve.samples.back().first == doctest::Approx(curve.domain_end).epsilon(1e-14));
    for (const auto& [P, RA] : curve.samples) {
      CHECK(std::abs(spe_payoff(P, RA, 1.0).pi_A - Pi) < 1e-9);
    }
    // The curve ends where pre-allocation alone reaches the target.
    CHECK(curve.samples.back().second == doctest::Approx(0.0).epsilon(1e-12));
  }
}

TEST_CASE("level curve branches meet at the breakpoint") {
  for (double Pi : {0.05, 0.1, 0.25, 0.4, 0.45}) {
    const double P_br = (1.0 - 2.0 * Pi) / (1.0 - Pi);  // R_B = 1
    const double lin = 2.0 * Pi * (1.0 - P_br);
    const double r = 1.0 - (1.0 - Pi) * P_br;
    const double quad = r * r / (2.0 * (1.0 - Pi));
    CHECK(std::abs(lin - quad) < 1e-12);
    const auto v = level_curve_value(Pi, 1.0, P_br);
    REQUIRE(v.has_value());
    CHECK(*v == doctest::Approx(lin).epsilon(1e-12));
  }
}

TEST_CASE("level curve input validation") {
  CHECK_THROWS_AS(level_curve_value(-0.1, 1.0, 0.5), Error);
  CHECK_THROWS_AS(level_curve_value(1.1, 1.0, 0.5), Error);
  CHECK_THROWS_AS(level_curve_value(0.5, 0.0, 0.5), Error);
  CHECK_THROWS_AS(level_curve_value(0.5, 1.0, -0.5), Error);
  CHECK_THROWS_AS(sample_level_curve(0.5, 1.0, 1), Error);
  try {
    sample_level_curve(1.0, 1.0, 40);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Err::NumericUnsupported);
  }
}

TEST_CASE("pre-allocation effectiveness is at least two") {
  CHECK(effectiveness_ratio(1.0, 1.0) == 2.0);
  CHECK(effectiveness_ratio(2.0, 1.0) == 2.0);  // exact whenever R_A >= R_B
  CHECK(effectiveness_ratio(0.5, 1.0) == doctest::Approx(2.6666666666666665).epsilon(1e-14));
  CHECK(effectiveness_ratio(0.2, 1.0) == doctest::Approx(5.5555555555555545).epsilon(1e-14));
  for (double RA : {0.05, 0.3, 0.9, 1.7}) {
    for (double RB : {0.2, 1.0, 2.5}) {
      CHECK(effectiveness_ratio(RA, RB) >= 2.0 - 1e-12);
    }
  }
  CHECK_THROWS_AS(effectiveness_ratio(0.0, 1.0), Error);
  CHECK_THROWS_AS(effectiveness_ratio(1.0, -1.0), Error);
}

TEST_CASE("equivalent pre-allocation reproduces the one-shot payoff") {
  for (auto [RA, RB] : {std::pair{0.5, 1.0}, {1.0, 1.0}, {2.0, 1.0}, {0.2, 1.0}, {1.3, 0.7}}) {
    const double P_eq = equivalent_preallocation(RA, RB);
    CHECK(P_eq == doctest::Approx(effectiveness_ratio(RA, RB) * RA).epsilon(1e-14));
    CHECK(std::abs(spe_payoff(P_eq, 0.0, RB).pi_A - hart_baseline(RA, RB)) < 1e-9);
  }
  CHECK(equivalent_preallocation(0.5, 1.0) == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
  CHECK(equivalent_preallocation(2.0, 1.0) == 4.0);
}

TEST_CASE("optimal investment, interior branch") {
  const auto plan = optimal_investment(1.0, 0.3, 2.0);
  CHECK(plan.branch == InvestmentBranch::Interior);
  CHECK(plan.P_star == doctest::Approx(2.7450980392156863).epsilon(1e-13));
  CHECK(plan.R_A_star == doctest::Approx(0.17647058823529416).epsilon(1e-12));
  CHECK(plan.pi_opt == doctest::Approx(0.49).epsilon(1e-13));
  CHECK(plan.R_A_star == 1.0 - 0.3 * plan.P_star);  // exactly on the budget line
  CHECK(plan.pi_opt ==
        doctest::Approx(spe_payoff(plan.P_star, plan.R_A_star, 2.0).pi_A).epsilon(1e-12));

  // Neighbouring points on the budget line do no better.
  for (double dP : {-0.2, -0.05, 0.05, 0.2}) {
    const double P = plan.P_star + dP;
    const double RA = 1.0 - 0.3 * P;
    CHECK(spe_payoff(P, RA, 2.0).pi_A <= plan.pi_opt + 1e-12);
  }
}

TEST_CASE("optimal investment, boundary and indifferent branches") {
  auto plan = optimal_investment(1.0, 0.7, 2.0);
  CHECK(plan.branch == InvestmentBranch::Boundary);
  CHECK(plan.P_star == 0.0);
  CHECK(plan.R_A_star == 1.0);
  CHECK(plan.pi_opt == 0.25);  // hart value of (1, 2)

  // c_A equal to min{1, M_A/R_B}: a whole segment of optima.
  plan = optimal_investment(1.0, 0.5, 2.0);
  CHECK(plan.branch == InvestmentBranch::Indifferent);
  CHECK(plan.P_star == 0.0);
  CHECK(plan.pi_opt == 0.25);
  CHECK(plan.indifference_end == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
  // Both segment endpoints really give the same payoff.
  const double P_end = plan.indifference_end;
  CHECK(spe_payoff(0.0, 1.0, 2.0).pi_A == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(spe_payoff(P_end, 1.0 - 0.5 * P_end, 2.0).pi_A == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("optimal investment at the reference budget") {
  auto plan = optimal_investment(4.0 / 3.0, 0.423, 1.0);
  CHECK(plan.branch == InvestmentBranch::Interior);
  CHECK(plan.P_star == doctest::Approx(2.306601046465319).epsilon(1e-13));
  CHECK(plan.R_A_star == doctest::Approx(0.35764109067850347).epsilon(1e-12));
  CHECK(plan.pi_opt == doctest::Approx(0.749848375).epsilon(1e-13));

  // Cost above 1 makes pre-allocation pointless.
  plan = optimal_investment(4.0 / 3.0, 1.333, 1.0);
  CHECK(plan.branch == InvestmentBranch::Boundary);
  CHECK(plan.P_star == 0.0);
  CHECK(plan.R_A_star == 4.0 / 3.0);
  CHECK(plan.pi_opt == doctest::Approx(0.625).epsilon(1e-12));
}

TEST_CASE("optimal investment validation") {
  CHECK_THROWS_AS(optimal_investment(0.0, 0.5, 1.0), Error);
  CHECK_THROWS_AS(optimal_investment(1.0, 0.0, 1.0), Error);
  CHECK_THROWS_AS(optimal_investment(1.0, 0.5, 0.0), Error);
  CHECK_THROWS_AS(optimal_investment(1.0, 0.5,
                                     -std::numeric_limits<double>::infinity()),
                  Error);
}
