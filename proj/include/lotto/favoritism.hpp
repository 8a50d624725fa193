#pragma once

#include <utility>
#include <vector>

#include "lotto/core.hpp"

namespace lotto {

enum class SolveMethod { ClosedFormPartition, NumericRootFind };

const char* to_string(SolveMethod method) noexcept;

// Equilibrium multipliers of the stage-two bidding game for an arbitrary
// (not necessarily proportional) pre-allocation. partition_B1 holds the
// battlefields where A's bid distribution carries an atom at p_b (the
// contested fields); partition_B2 the fields B concedes more often.
// Membership rule: b is in B1 iff kappa_B - kappa_A <= p_b / w_b.
struct KappaSolution {
  double kappa_A = 0.0;
  double kappa_B = 0.0;
  std::vector<int> partition_B1;
  std::vector<int> partition_B2;
  double residual_A = 0.0;  // budget-consistency defect for A, should be ~0
  double residual_B = 0.0;
  SolveMethod method = SolveMethod::ClosedFormPartition;
};

struct Stage2Outcome {
  double pi_A = 0.0;
  double pi_B = 0.0;
  KappaSolution kappa;
};

// B's equilibrium bid cap on one battlefield: min{w_b kappa_B, w_b kappa_A + p_b}.
double h_threshold(double kappa_A, double kappa_B, double p_b, double w_b);

// Budget-consistency defects (res_A, res_B) of a multiplier pair. Zero at
// an equilibrium. This is the ground truth every solver is checked against.
std::pair<double, double> soe_residuals(double kappa_A, double kappa_B,
                                        const PreAllocation& p, const GameConfig& cfg);

// Closed-form multiplier solve: enumerates candidate contested sets (upper
// sets of p_b/w_b, largest first), solves the per-set quadratic for kappa_B
// (trying the "+" root before the "-" root), recovers kappa_A linearly, and
// accepts the first candidate passing positivity, the membership
// inequalities (tolerance 1e-9, kappa-scaled), and the residual certificate
// |res| <= 1e-10 * max(1, budget). Requires R_A > 0.
KappaSolution solve_partition_closed(const PreAllocation& p, const GameConfig& cfg);

// Independent numeric solve of the same system: damped Newton iteration in
// log-multiplier space from several starts, with a bisection fallback
// (outer on kappa_B, inner on kappa_A). Same residual certificate.
KappaSolution solve_numeric(const PreAllocation& p, const GameConfig& cfg);

// A's equilibrium payoff implied by a certified multiplier pair.
double stage2_value(const KappaSolution& kappa, const PreAllocation& p, const GameConfig& cfg);

// Stage-two equilibrium payoffs for a given pre-allocation. Uses the
// closed-form solver and falls back to the numeric one. R_A = 0 is
// supported only for the proportional split p = w * P (payoffs then follow
// the zero-real-time regime; the multiplier fields are left zeroed).
Stage2Outcome stage2_payoff(const PreAllocation& p, const GameConfig& cfg);

}  // namespace lotto
