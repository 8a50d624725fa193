#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "lotto/stackelberg.hpp"

using namespace lotto;

namespace {

MonetaryParams params(double M_A, double M_B, double c_A, double c_B) {
  MonetaryParams mp;
  mp.M_A = M_A;
  mp.M_B = M_B;
  mp.c_A = c_A;
  mp.c_B = c_B;
  return mp;
}

}  // namespace

TEST_CASE("follower payoff in all four regions") {
  const auto mp = params(1.0, 0.8, 0.5, 0.4);

  auto [u, reg] = follower_payoff(1.0, 0.0, mp);
  CHECK(reg == FollowerRegion::R1A);
  CHECK(u == doctest::Approx(0.3055728090000842).epsilon(1e-13));

  std::tie(u, reg) = follower_payoff(0.4, 0.9, mp);
  CHECK(reg == FollowerRegion::R1B);
  CHECK(u == doctest::Approx(0.5391678389929471).epsilon(1e-13));

  std::tie(u, reg) = follower_payoff(1.5, 0.2, mp);
  CHECK(reg == FollowerRegion::R1A);
  CHECK(u == doctest::Approx(0.3007396753959593).epsilon(1e-13));

  std::tie(u, reg) = follower_payoff(0.1, 1.9, mp);
  CHECK(reg == FollowerRegion::R1B);
  CHECK(u == doctest::Approx(0.5723755853513701).epsilon(1e-13));
}

TEST_CASE("follower payoff is continuous across the diagonal") {
  const auto mp = params(1.0, 0.8, 0.5, 0.4);
  const double at = follower_payoff(0.6, 0.6, mp).first;
  CHECK(std::abs(follower_payoff(0.6 + 1e-9, 0.6, mp).first - at) < 1e-7);
  CHECK(std::abs(follower_payoff(0.6, 0.6 + 1e-9, mp).first - at) < 1e-7);
}

TEST_CASE("follower payoff rejects overspending") {
  const auto mp = params(1.0, 0.8, 0.5, 0.4);
  CHECK_THROWS_AS(follower_payoff(2.1, 0.0, mp), Error);  // cap_A = 2
  try {
    follower_payoff(0.0, 2.1, mp);  // cap_B = 2
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Err::OutOfBudget);
    CHECK(exit_category(e.code()) == 1);
  }
  CHECK_THROWS_AS(follower_payoff(0.5, 0.5, params(1.0, 0.8, 0.5, 1.0)), Error);
  CHECK_THROWS_AS(follower_payoff(0.5, 0.5, params(0.0, 0.8, 0.5, 0.4)), Error);
}

TEST_CASE("interior stationary point of the matching branch") {
  CHECK(hat_pB(0.0, 2.0, 0.5) == doctest::Approx(2.6666666666666665).epsilon(1e-14));
  CHECK(hat_pB(1.0, 1.2, 0.5) == doctest::Approx(1.9333333333333333).epsilon(1e-14));
  // The stationary match always overshoots the leader's level.
  for (double pA : {0.0, 0.5, 1.5, 2.3}) {
    CHECK(hat_pB(pA, 1.2, 0.5) > pA);
  }
  CHECK_THROWS_AS(hat_pB(3.0, 1.2, 0.5), Error);  // M_B <= c_B p_A
}

TEST_CASE("matching-region quadratic roots") {
  auto r = roots_r_pm(0.5, 0.5, 0.6, 0.5);
  REQUIRE(r.has_value());
  CHECK(r->first == doctest::Approx(0.6666666666666669).epsilon(1e-13));
  CHECK(r->second == doctest::Approx(1.0999999999999999).epsilon(1e-13));

  r = roots_r_pm(1.0, 1.0, 1.2, 0.5);
  REQUIRE(r.has_value());
  CHECK(r->first == doctest::Approx(1.3333333333333337).epsilon(1e-13));
  CHECK(r->second == doctest::Approx(2.1999999999999997).epsilon(1e-13));

  r = roots_r_pm(0.0, 1.0, 0.5, 0.5);
  REQUIRE(r.has_value());
  CHECK(r->first == doctest::Approx(0.6666666666666666).epsilon(1e-13));
  CHECK(r->second == doctest::Approx(1.0).epsilon(1e-13));

  CHECK_FALSE(roots_r_pm(0.5, 0.5, 0.1, 0.5).has_value());  // complex pair
}

TEST_CASE("matching-region boundary picks the root in [p_A, p_A + R_A)") {
  CHECK(pB_1B(0.5, 0.5, 0.6, 0.5) == doctest::Approx(0.6666666666666669).epsilon(1e-13));
  CHECK(pB_1B(1.0, 1.0, 1.2, 0.5) == doctest::Approx(1.3333333333333337).epsilon(1e-13));
  CHECK(pB_1B(0.2, 0.3, 0.3, 0.4) == doctest::Approx(0.27802936659835936).epsilon(1e-13));
  CHECK_THROWS_AS(pB_1B(0.5, 0.5, 0.1, 0.5), Error);
}

TEST_CASE("folding-region boundary by bisection") {
  CHECK(pB_1A(1.0, 0.2, 0.71, 0.5) == doctest::Approx(0.9898780306383841).epsilon(1e-10));
  CHECK(pB_1A(1.0, 0.2, 1.2, 0.5) == doctest::Approx(0.3483314773547883).epsilon(1e-10));
  CHECK(pB_1A(2.0, 0.3, 1.7, 0.6) == doctest::Approx(1.7428336656696066).epsilon(1e-10));
}

TEST_CASE("fold-or-match threshold") {
  CHECK(threshold_h(1.0, 1.0, 0.5) == doctest::Approx(2.0302160700480707).epsilon(1e-13));
  CHECK(threshold_h(0.5, 2.0, 0.3) == doctest::Approx(2.5242504598194966).epsilon(1e-13));
  // Against no pre-allocation the threshold is the leader's budget itself.
  CHECK(threshold_h(1.0, 0.0, 0.5) == 1.0);
  for (double RA : {0.3, 0.7311, 1.9}) {
    for (double cB : {0.2, 0.55, 0.9}) {
      CHECK(std::abs(threshold_h(RA, 0.0, cB) - RA) < 1e-12);
    }
  }
  // With no stage-two budget the threshold collapses to the pre-allocation.
  CHECK(std::abs(threshold_h(0.0, 1.3, 0.45) - 1.3) < 1e-12);
}

TEST_CASE("follower best response folds, matches, or ties") {
  const auto mp = params(0.5, 0.3, 0.2, 0.5);  // x = M_B / c_B = 0.6

  // Low leader level: threshold h(0.5, 0, 0.5) = 0.5 < 0.6, follower matches.
  auto br = best_response_B(0.0, mp);
  CHECK_FALSE(br.indifferent);
  CHECK(br.p_B_star == doctest::Approx(0.4).epsilon(1e-12));  // hat_pB(0)
  CHECK(br.u_B == doctest::Approx(follower_payoff(0.0, br.p_B_star, mp).first).epsilon(1e-13));

  // High leader level: deterred, fold.
  br = best_response_B(2.0, mp);
  CHECK_FALSE(br.indifferent);
  CHECK(br.p_B_star == 0.0);
  CHECK(br.u_B == doctest::Approx(follower_payoff(2.0, 0.0, mp).first).epsilon(1e-13));

  // Exactly at the indifference level both responses tie.
  const double dag = pA_dagger(mp);
  br = best_response_B(dag, mp);
  CHECK(br.indifferent);
  CHECK(br.p_B_star == 0.0);
  CHECK(br.p_B_alt > dag);
  const double u_fold = follower_payoff(dag, 0.0, mp).first;
  const double u_match = follower_payoff(dag, br.p_B_alt, mp).first;
  CHECK(std::abs(u_fold - u_match) < 1e-9);
}

TEST_CASE("indifference level satisfies the threshold identity") {
  struct Probe {
    double M_A, c_A, c_B, M_B, expected;
  };
  const Probe probes[] = {
      {0.5, 0.2, 0.5, 0.3, 0.1220956411882557},
      {0.5, 0.2, 0.5, 0.5, 0.6020685129237795},
      {1.0, 0.4, 0.6, 0.9, 0.7782603927467091},
  };
  for (const auto& pr : probes) {
    const auto mp = params(pr.M_A, pr.M_B, pr.c_A, pr.c_B);
    const double dag = pA_dagger(mp);
    CHECK(dag == doctest::Approx(pr.expected).epsilon(1e-9));
    // At the dagger the fold-or-match threshold meets the follower's cap.
    const double RA_d = pr.M_A - pr.c_A * dag;
    CHECK(std::abs(threshold_h(RA_d, dag, pr.c_B) - pr.M_B / pr.c_B) < 1e-9);
  }
}

TEST_CASE("indifference level exists only in the middle regime") {
  CHECK_THROWS_AS(pA_dagger(params(0.5, 0.09, 0.2, 0.5)), Error);  // weak follower
  try {
    pA_dagger(params(0.5, 2.0, 0.2, 0.5));  // strong follower
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Err::BracketFailure);
  }
}

TEST_CASE("leader-follower equilibrium across the four cases") {
  // Weak: the follower cannot threaten the unconstrained optimum.
  auto out = stackelberg_equilibrium(params(0.5, 0.2, 0.2, 0.5));
  CHECK(out.case_tag == StackelbergCase::WeakFollower);
  CHECK(out.p_A_star == doctest::Approx(2.2222222222222223).epsilon(1e-13));
  CHECK(out.p_B_star == 0.0);
  CHECK(out.u_A == doctest::Approx(0.9279999999999999).epsilon(1e-13));
  CHECK_FALSE(out.p_A_dagger.has_value());

  // Middle with cheap deterrence: same action as weak.
  out = stackelberg_equilibrium(params(0.5, 0.6, 0.2, 0.5));
  CHECK(out.case_tag == StackelbergCase::MiddleInterior);
  CHECK(out.p_A_star == doctest::Approx(2.2222222222222223).epsilon(1e-13));
  CHECK(out.u_A == doctest::Approx(0.784).epsilon(1e-12));
  REQUIRE(out.p_A_dagger.has_value());
  CHECK(*out.p_A_dagger == doctest::Approx(0.8448477211931413).epsilon(1e-9));
  CHECK_FALSE(out.p_B_alt.has_value());

  // Middle with expensive deterrence: overshoot to the indifference level.
  out = stackelberg_equilibrium(params(0.5, 1.2, 0.2, 0.5));
  CHECK(out.case_tag == StackelbergCase::MiddleIndifferent);
  CHECK(out.p_A_star == doctest::Approx(2.3637495297493265).epsilon(1e-9));
  CHECK(out.p_B_star == 0.0);
  CHECK(out.u_A == doctest::Approx(0.5637877356148606).epsilon(1e-9));
  REQUIRE(out.p_B_alt.has_value());
  // The follower really is indifferent at the equilibrium point.
  const auto mp = params(0.5, 1.2, 0.2, 0.5);
  const double u_fold = follower_payoff(out.p_A_star, 0.0, mp).first;
  const double u_match = follower_payoff(out.p_A_star, *out.p_B_alt, mp).first;
  CHECK(std::abs(u_fold - u_match) < 1e-8);

  // Strong: deterrence infeasible, leader concedes the first stage.
  out = stackelberg_equilibrium(params(0.5, 2.0, 0.2, 0.5));
  CHECK(out.case_tag == StackelbergCase::StrongFollower);
  CHECK(out.p_A_star == 0.0);
  CHECK(out.p_B_star == doctest::Approx(2.666666666666667).epsilon(1e-13));
  CHECK(out.u_A == 0.09375);
  CHECK(out.u_B == 0.90625);
}

TEST_CASE("equilibrium payoffs sum to one and the knife edge is exact") {
  const auto out = stackelberg_equilibrium(params(0.5, 1.25, 0.2, 0.5));
  CHECK(out.case_tag == StackelbergCase::MiddleIndifferent);
  CHECK(out.p_A_star == doctest::Approx(2.5).epsilon(1e-12));
  CHECK(out.u_A == doctest::Approx(0.5).epsilon(1e-12));  // 1 - c_B
  CHECK(out.u_A + out.u_B == 1.0);
  CHECK(to_string(out.case_tag) == std::string("MiddleIndifferent"));
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(stackelberg_equilibrium(params(1.0, 1.0, 0.0, 0.5)), Error);
  CHECK_THROWS_AS(stackelberg_equilibrium(params(1.0, 1.0, 0.5, 1.0)), Error);
  CHECK_THROWS_AS(stackelberg_equilibrium(params(1.0, -1.0, 0.5, 0.5)), Error);
  CHECK_THROWS_AS(best_response_B(-0.1, params(1.0, 1.0, 0.5, 0.5)), Error);
}
