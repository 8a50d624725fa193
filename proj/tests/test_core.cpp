#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "lotto/core.hpp"

using namespace lotto;

TEST_CASE("make_preallocation sums entries and rejects bad input") {
  const auto pre = make_preallocation({0.4, 0.0, 1.1});
  CHECK(pre.P == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(pre.p.size() == 3);

  CHECK_THROWS_AS(make_preallocation({}), Error);
  CHECK_THROWS_AS(make_preallocation({0.2, -0.1}), Error);
  try {
    make_preallocation({-1.0});
  } catch (const Error& e) {
    CHECK(e.code() == Err::NegativeBudget);
    CHECK(exit_category(e.code()) == 1);
  }
}

TEST_CASE("normalize_config rescales w and folds q into R_B") {
  GameConfig raw;
  raw.w = {2.0, 3.0, 5.0};
  raw.P = 1.0;
  raw.R_A = 0.5;
  raw.R_B = 2.0;
  raw.q = 0.8;
  const auto cfg = normalize_config(raw);
  CHECK(cfg.w[0] == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(cfg.w[1] == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(cfg.w[2] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(cfg.R_B == doctest::Approx(1.6).epsilon(1e-15));
  CHECK(cfg.q == 1.0);
  CHECK(cfg.P == raw.P);
  CHECK(cfg.R_A == raw.R_A);
}

TEST_CASE("normalize_config validation") {
  GameConfig raw;
  raw.w = {};
  CHECK_THROWS_AS(normalize_config(raw), Error);
  raw.w = {1.0, 0.0};
  CHECK_THROWS_AS(normalize_config(raw), Error);
  raw.w = {1.0};
  raw.q = 0.0;
  CHECK_THROWS_AS(normalize_config(raw), Error);
  raw.q = 1.0;
  raw.R_B = 0.0;
  CHECK_THROWS_AS(normalize_config(raw), Error);
  raw.R_B = 1.0;
  raw.P = -0.1;
  try {
    normalize_config(raw);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Err::NegativeBudget);
  }
}

TEST_CASE("regime classification and boundary distance") {
  // Threshold at P=0.5, R_B=1 is 1/3: below it Case2, at or above Case1.
  const double T = 2.0 * 0.25 / 1.5;
  auto r = classify_regime(0.5, T, 1.0);
  CHECK(r.tag == RegimeTag::Case1);
  CHECK(r.boundary_distance == doctest::Approx(0.0).epsilon(1e-15));

  r = classify_regime(0.5, 0.1, 1.2);
  CHECK(r.tag == RegimeTag::Case2);
  CHECK(r.boundary_distance < 0.0);

  // Once P >= R_B the threshold collapses to zero.
  r = classify_regime(1.5, 0.3, 1.0);
  CHECK(r.tag == RegimeTag::Case1);
  CHECK(r.boundary_distance == 0.3);

  r = classify_regime(0.5, 0.0, 1.0);
  CHECK(r.tag == RegimeTag::Case3_ZeroRealTime);
  CHECK(r.boundary_distance == doctest::Approx(-1.0 / 3.0).epsilon(1e-15));

  CHECK(to_string(RegimeTag::Case2) == std::string("Case2"));
}

TEST_CASE("payoff agrees with hand-computed values in every regime") {
  CHECK(spe_payoff(0.4, 1.0, 1.0).pi_A == doctest::Approx(0.6352549156242113).epsilon(1e-14));
  CHECK(spe_payoff(0.5, 0.2, 1.2).pi_A == doctest::Approx(0.14285714285714288).epsilon(1e-14));
  CHECK(spe_payoff(2.0, 0.7, 1.5).pi_A == doctest::Approx(0.6676883930206396).epsilon(1e-14));
  // R_B <= P makes the favored branch exact: f = 0.4, ratio = 1/4.
  CHECK(spe_payoff(1.2, 0.05, 1.0).pi_A == 0.375);

  const auto res = spe_payoff(0.4, 1.0, 1.0);
  CHECK(res.pi_A + res.pi_B == 1.0);
  CHECK(res.regime.tag == RegimeTag::Case1);
  CHECK_FALSE(res.degenerate);
}

TEST_CASE("zero stage-two budget cases") {
  auto res = spe_payoff(2.0, 0.0, 1.0);
  CHECK(res.regime.tag == RegimeTag::Case3_ZeroRealTime);
  CHECK(res.pi_A == 0.5);

  res = spe_payoff(0.5, 0.0, 1.0);
  CHECK(res.pi_A == 0.0);  // pre-allocation fully overrun
  CHECK_FALSE(res.degenerate);

  res = spe_payoff(0.0, 0.0, 1.0);
  CHECK(res.pi_A == 0.0);
  CHECK(res.degenerate);
}

TEST_CASE("no pre-allocation reduces bitwise to the one-shot game") {
  for (double RA : {0.05, 0.4, 1.0, 2.7}) {
    for (double RB : {0.3, 1.0, 1.9}) {
      CHECK(spe_payoff(0.0, RA, RB).pi_A == hart_baseline(RA, RB));
    }
  }
  CHECK(hart_baseline(1.0, 1.0) == 0.5);
  CHECK(hart_baseline(0.5, 1.0) == 0.25);
  CHECK(hart_baseline(2.0, 1.0) == 0.75);
  CHECK_THROWS_AS(hart_baseline(1.0, 0.0), Error);
  CHECK_THROWS_AS(hart_baseline(-0.1, 1.0), Error);
}

TEST_CASE("payoff is continuous across the case boundary") {
  const double T = 2.0 * 0.25 / 1.5;  // P=0.5, R_B=1
  const double at = spe_payoff(0.5, T, 1.0).pi_A;
  const double limit = T / (2.0 * 0.5);
  CHECK(std::abs(at - limit) < 1e-12);
}

TEST_CASE("payoff is invariant under budget scaling") {
  const double base = spe_payoff(0.4, 1.0, 1.0).pi_A;
  for (double lam : {0.1, 3.0, 10.0}) {
    CHECK(std::abs(spe_payoff(0.4 * lam, lam, lam).pi_A - base) < 1e-12);
  }
}

TEST_CASE("equilibrium pre-allocation is value-proportional") {
  const std::vector<double> w = {2.0, 3.0, 5.0};  // rescaled internally
  const auto res = spe_payoff(2.0, 0.7, 1.0, w);
  REQUIRE(res.p_star.p.size() == 3);
  CHECK(res.p_star.p[0] == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(res.p_star.p[1] == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(res.p_star.p[2] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(res.p_star.P == 2.0);
  // The weighted split never changes the value: same payoff as n=1.
  CHECK(res.pi_A == doctest::Approx(spe_payoff(2.0, 0.7, 1.0).pi_A).epsilon(1e-14));
}

TEST_CASE("payoff stays within [0,1] and is monotone on a coarse grid") {
  double prev = -1.0;
  for (int i = 0; i <= 40; ++i) {
    const double P = 0.1 * i;
    const double v = spe_payoff(P, 0.6, 1.3).pi_A;
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
    CHECK(v >= prev - 1e-12);  // more pre-allocation never hurts
    prev = v;
  }
}

TEST_CASE("error taxonomy round-trips") {
  CHECK(to_string(Err::NoConsistentPartition) == std::string("NoConsistentPartition"));
  CHECK(exit_category(Err::NonPositiveValue) == 1);
  CHECK(exit_category(Err::OutOfBudget) == 1);
  CHECK(exit_category(Err::ConvergenceFailure) == 2);
  CHECK(exit_category(Err::BracketFailure) == 2);
  const Error e(Err::NumericUnsupported, "probe");
  CHECK(std::string(e.what()).find("NumericUnsupported") != std::string::npos);
  CHECK(std::string(e.what()).find("probe") != std::string::npos);
}
