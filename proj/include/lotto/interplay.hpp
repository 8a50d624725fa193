#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "lotto/errors.hpp"

namespace lotto {

// One iso-payoff curve in the (P, R_A) plane: every sampled pair yields
// equilibrium payoff Pi for A against stage-two budget R_B.
struct LevelCurve {
  double Pi = 0.0;
  double R_B = 0.0;
  double domain_end = 0.0;  // largest P on the curve, R_B / (1 - Pi)
  std::vector<std::pair<double, double>> samples;  // (P, required R_A)
};

enum class InvestmentBranch { Interior, Boundary, Indifferent };

const char* to_string(InvestmentBranch branch) noexcept;

// Optimal split of a monetary budget M_A (pre-allocation costs c_A per
// unit, stage-two budget is the remainder) against stage-two budget R_B.
struct InvestmentPlan {
  double M_A = 0.0;
  double c_A = 0.0;
  double P_star = 0.0;
  double R_A_star = 0.0;
  double pi_opt = 0.0;
  InvestmentBranch branch = InvestmentBranch::Interior;
  // Indifferent only: every P in [0, indifference_end] is optimal and
  // P_star reports the canonical choice 0.
  double indifference_end = 0.0;
};

// Stage-two budget R_A needed to reach payoff Pi at pre-allocation P, or
// nullopt when P alone already exceeds the target (no budget required
// beyond the curve's domain). Pi = 1 returns +infinity for every P.
std::optional<double> level_curve_value(double Pi, double R_B, double P);

// Evenly samples one level curve over [0, domain_end]. Rejects Pi = 1
// (unbounded domain) with NumericUnsupported.
LevelCurve sample_level_curve(double Pi, double R_B, int samples = 100);

// Payoff-equivalent pre-allocation per unit of stage-two budget: the E
// with spe_payoff(E * R_A, 0, R_B) = hart_baseline(R_A, R_B). Always >= 2,
// exactly 2 when R_A >= R_B.
double effectiveness_ratio(double R_A, double R_B);

// E(R_A, R_B) * R_A, the pre-allocation matching R_A's baseline payoff.
double equivalent_preallocation(double R_A, double R_B);

// Maximizes spe_payoff(P, M_A - c_A P, R_B) over the budget line. The
// optimum is interior iff c_A < min{1, M_A / R_B}; at equality every point
// of [0, indifference_end] ties.
InvestmentPlan optimal_investment(double M_A, double c_A, double R_B);

}  // namespace lotto
