#pragma once

#include <vector>

#include "lotto/errors.hpp"

namespace lotto {

// Static data of a two-stage resource-allocation contest. Player A commits
// a pre-allocated budget P across battlefields before both sides play a
// simultaneous expected-budget bidding stage with budgets R_A and R_B.
// Battlefield values w are weights on a unit prize; q discounts B's budget
// and is folded into R_B by normalize_config.
struct GameConfig {
  std::vector<double> w{1.0};
  double P = 0.0;
  double R_A = 0.0;
  double R_B = 1.0;
  double q = 1.0;
};

// A concrete split of the pre-allocated budget. P caches the total.
struct PreAllocation {
  std::vector<double> p;
  double P = 0.0;
};

// Builds a PreAllocation from per-battlefield amounts; rejects negatives.
PreAllocation make_preallocation(std::vector<double> p);

// Payoff regimes for the aggregate game. Case1: A's stage-two budget is
// large enough (or P alone is) that A is effectively favored everywhere.
// Case2: B outspends the pre-allocation and A is budget-constrained.
// Case3: A fields no stage-two budget at all.
enum class RegimeTag { Case1, Case2, Case3_ZeroRealTime };

const char* to_string(RegimeTag tag) noexcept;

struct SpeRegime {
  RegimeTag tag = RegimeTag::Case1;
  // R_A minus the Case1/Case2 threshold 2(R_B-P)^2 / (P + 2(R_B-P));
  // the threshold is 0 when R_B <= P, so the value is then just R_A.
  double boundary_distance = 0.0;
};

struct SpeResult {
  SpeRegime regime;
  double pi_A = 0.0;
  double pi_B = 0.0;
  PreAllocation p_star;  // equilibrium pre-allocation, proportional to w
  bool degenerate = false;  // P = 0 and R_A = 0: payoff 0 by convention
};

// Validates a raw config, rescales w to sum to one, and multiplies R_B by
// the discount q (q becomes 1). Throws NonPositiveValue / NegativeBudget.
GameConfig normalize_config(const GameConfig& raw);

// Which payoff regime (P, R_A, R_B) falls in, plus the signed distance to
// the Case1/Case2 boundary. R_B must be positive; P and R_A nonnegative.
SpeRegime classify_regime(double P, double R_A, double R_B);

// Equilibrium payoff of the aggregate game. The optimal pre-allocation is
// value-proportional: p_b = w_b * P (single battlefield when w is omitted).
// P = 0 reduces bitwise to hart_baseline.
SpeResult spe_payoff(double P, double R_A, double R_B);
SpeResult spe_payoff(double P, double R_A, double R_B, const std::vector<double>& w);

// Payoff of player A in the classic one-shot expected-budget bidding game:
// R_A/(2 R_B) when R_A < R_B, else 1 - R_B/(2 R_A).
double hart_baseline(double R_A, double R_B);

}  // namespace lotto
