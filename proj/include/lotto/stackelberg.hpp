#pragma once

#include <optional>
#include <utility>

#include "lotto/errors.hpp"

namespace lotto {

// Leader-follower investment game. Both players buy pre-allocation at unit
// cost c and keep the rest of their monetary budget M for stage two.
struct MonetaryParams {
  double M_A = 1.0;
  double M_B = 1.0;
  double c_A = 0.5;  // costs must lie in (0, 1)
  double c_B = 0.5;
};

// Which closed-form branch of the follower's payoff applies at (p_A, p_B):
// 1A/2A when A holds the pre-allocation gap, 1B/2B when B does.
enum class FollowerRegion { R1A, R2A, R1B, R2B };

const char* to_string(FollowerRegion region) noexcept;

enum class StackelbergCase { WeakFollower, MiddleInterior, MiddleIndifferent, StrongFollower };

const char* to_string(StackelbergCase c) noexcept;

struct BestResponse {
  double p_B_star = 0.0;
  double u_B = 0.0;
  bool indifferent = false;  // 0 and the interior stationary point tie
  double p_B_alt = 0.0;      // the tying alternative when indifferent
};

struct StackelbergOutcome {
  double p_A_star = 0.0;
  double p_B_star = 0.0;
  double u_A = 0.0;
  double u_B = 0.0;
  StackelbergCase case_tag = StackelbergCase::WeakFollower;
  // Leader level at which the follower becomes indifferent between folding
  // (p_B = 0) and matching; set in the middle cases.
  std::optional<double> p_A_dagger;
  // Follower's equal-payoff alternative to the reported p_B_star.
  std::optional<double> p_B_alt;
};

// Follower payoff u_B and active region at a pre-allocation profile.
// Throws OutOfBudget when a pre-allocation exceeds its monetary budget.
std::pair<double, FollowerRegion> follower_payoff(double p_A, double p_B,
                                                  const MonetaryParams& mp);

// Interior stationary point of the follower's matching branch:
// M_B/c_B - (M_B - c_B p_A) / (2 - c_B). Requires M_B > c_B p_A.
double hat_pB(double p_A, double M_B, double c_B);

// Roots of the quadratic whose solutions bound the follower's matching
// region, (r_minus, r_plus); nullopt when complex.
std::optional<std::pair<double, double>> roots_r_pm(double p_A, double R_A, double M_B,
                                                    double c_B);

// Boundary of the follower's matching region below p_A + R_A: the root of
// roots_r_pm lying in [p_A, p_A + R_A). Throws NoRootInInterval otherwise.
double pB_1B(double p_A, double R_A, double M_B, double c_B);

// Boundary inside the folding region: the p_B in [0, p_A] at which the
// leader-favored branch switches between its two sub-cases, found by
// bisection of an increasing function. Throws NoRootInInterval if the
// parameters put no boundary in that range.
double pB_1A(double p_A, double R_A, double M_B, double c_B);

// Follower budget level h(R_A, p_A, c_B) at which folding and matching tie:
// the follower folds iff M_B / c_B <= h. h(R_A, 0, c_B) = R_A exactly.
double threshold_h(double R_A, double p_A, double c_B);

// Follower's optimal pre-allocation against a committed p_A.
BestResponse best_response_B(double p_A, const MonetaryParams& mp);

// Leader level making the follower exactly indifferent, by bisection.
// Meaningful in the middle regime M_A < M_B/c_B <= M_A/c_A; throws
// BracketFailure outside it.
double pA_dagger(const MonetaryParams& mp);

// Subgame-perfect outcome of the leader-follower investment game.
StackelbergOutcome stackelberg_equilibrium(const MonetaryParams& mp);

}  // namespace lotto
