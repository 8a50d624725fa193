#include "lotto/interplay.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "lotto/core.hpp"

namespace lotto {

namespace {

void require_target(double Pi, double R_B) {
  if (!(R_B > 0.0) || !std::isfinite(R_B))
    throw Error(Err::NonPositiveValue, "R_B must be positive");
  if (!(Pi >= 0.0 && Pi <= 1.0))
    throw Error(Err::NonPositiveValue, "target payoff must lie in [0, 1]");
}

}  // namespace

const char* to_string(InvestmentBranch branch) noexcept {
  switch (branch) {
    case InvestmentBranch::Interior: return "Interior";
    case InvestmentBranch::Boundary: return "Boundary";
    case InvestmentBranch::Indifferent: return "Indifferent";
  }
  return "Unknown";
}

std::optional<double> level_curve_value(double Pi, double R_B, double P) {
  require_target(Pi, R_B);
  if (P < 0.0 || !std::isfinite(P))
    throw Error(Err::NegativeBudget, "P must be nonnegative");
  if (Pi == 1.0) return std::numeric_limits<double>::infinity();
  const double P_max = R_B / (1.0 - Pi);
  if (P > P_max) return std::nullopt;
  // Below payoff 1/2 the curve starts linear (budget-constrained regime)
  // and switches to the quadratic branch; at and above 1/2 it is quadratic
  // throughout. The two branches agree at the switch point.
  if (Pi < 0.5 && P < (1.0 - 2.0 * Pi) * R_B / (1.0 - Pi))
    return 2.0 * Pi * (R_B - P);
  const double r = R_B - (1.0 - Pi) * P;
  return r * r / (2.0 * R_B * (1.0 - Pi));
}

LevelCurve sample_level_curve(double Pi, double R_B, int samples) {
  require_target(Pi, R_B);
  if (Pi == 1.0)
    throw Error(Err::NumericUnsupported, "payoff 1 needs unbounded budget; curve cannot be sampled");
  if (samples < 2) throw Error(Err::NonPositiveValue, "need at least 2 samples");
  LevelCurve out;
  out.Pi = Pi;
  out.R_B = R_B;
  out.domain_end = R_B / (1.0 - Pi);
  out.samples.reserve(static_cast<std::size_t>(samples));
  for (int i = 0; i < samples; ++i) {
    const double P = out.domain_end * static_cast<double>(i) / (samples - 1);
    const auto R = level_curve_value(Pi, R_B, P);
    out.samples.emplace_back(P, R ? *R : 0.0);  // endpoint needs no budget
  }
  return out;
}

double effectiveness_ratio(double R_A, double R_B) {
  if (!(R_A > 0.0) || !(R_B > 0.0) || !std::isfinite(R_A) || !std::isfinite(R_B))
    throw Error(Err::NonPositiveValue, "budgets must be positive");
  if (R_A >= R_B) return 2.0;
  return 2.0 * R_B * R_B / (R_A * (2.0 * R_B - R_A));
}

double equivalent_preallocation(double R_A, double R_B) {
  if (!(R_A > 0.0) || !(R_B > 0.0) || !std::isfinite(R_A) || !std::isfinite(R_B))
    throw Error(Err::NonPositiveValue, "budgets must be positive");
  return R_A >= R_B ? 2.0 * R_A : 2.0 * R_B * R_B / (2.0 * R_B - R_A);
}

InvestmentPlan optimal_investment(double M_A, double c_A, double R_B) {
  if (!(M_A > 0.0) || !(R_B > 0.0) || !std::isfinite(M_A) || !std::isfinite(R_B))
    throw Error(Err::NonPositiveValue, "M_A and R_B must be positive");
  if (!(c_A > 0.0) || !std::isfinite(c_A))
    throw Error(Err::NonPositiveValue, "c_A must be positive");

  InvestmentPlan out;
  out.M_A = M_A;
  out.c_A = c_A;
  const double t = std::min(1.0, M_A / R_B);
  const double interior_P = (2.0 * (1.0 - c_A) / (2.0 - c_A)) * (M_A / c_A);

  if (c_A < t) {
    out.branch = InvestmentBranch::Interior;
    out.P_star = interior_P;
    out.R_A_star = M_A - c_A * out.P_star;
    out.pi_opt = 1.0 - (R_B / (2.0 * M_A)) * c_A * (2.0 - c_A);
  } else if (c_A > t) {
    // Pre-allocation too expensive: spend everything in stage two.
    out.branch = InvestmentBranch::Boundary;
    out.P_star = 0.0;
    out.R_A_star = M_A;
    out.pi_opt = hart_baseline(M_A, R_B);
  } else {
    // Every split on [0, interior_P] achieves the same payoff.
    out.branch = InvestmentBranch::Indifferent;
    out.P_star = 0.0;
    out.R_A_star = M_A;
    out.pi_opt = hart_baseline(M_A, R_B);
    out.indifference_end = interior_P;
  }
  return out;
}

}  // namespace lotto
