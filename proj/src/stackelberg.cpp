#include "lotto/stackelberg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace lotto {

namespace {

void require_params(const MonetaryParams& mp) {
  if (!(mp.M_A > 0.0) || !(mp.M_B > 0.0) || !std::isfinite(mp.M_A) || !std::isfinite(mp.M_B))
    throw Error(Err::NonPositiveValue, "monetary budgets must be positive");
  if (!(mp.c_A > 0.0 && mp.c_A < 1.0) || !(mp.c_B > 0.0 && mp.c_B < 1.0))
    throw Error(Err::NonPositiveValue, "unit costs must lie in (0, 1)");
}

double check_budget(double p, double M, double c, const char* who) {
  const double cap = M / c;
  if (!(p >= 0.0) || !std::isfinite(p))
    throw Error(Err::OutOfBudget, std::string(who) + " pre-allocation must be nonnegative");
  if (p > cap * (1.0 + 1e-12))
    throw Error(Err::OutOfBudget, std::string(who) + " pre-allocation exceeds the budget cap");
  return std::max(0.0, M - c * p);  // stage-two remainder
}

// Case threshold on the favored side's opponent budget; see classify_regime.
double case_threshold(double gap, double R_opp) {
  if (R_opp <= gap) return 0.0;
  const double d = R_opp - gap;
  return 2.0 * d * d / (gap + 2.0 * d);
}

// Payoff share of the player who is NOT favored by the pre-allocation gap,
// in the regime where the favored side (gap, R_fav) is dominant.
double unfavored_share(double gap, double R_fav, double R_opp) {
  if (R_fav == 0.0) {
    if (gap == 0.0) return 1.0;  // any positive bid beats an empty field
    return std::min(R_opp / gap, 1.0);
  }
  const double f = R_fav + std::sqrt(R_fav * (R_fav + 2.0 * gap));
  const double ratio = f / (gap + f);
  return (R_opp / (2.0 * R_fav)) * ratio * ratio;
}

struct Phi {  // follower's fold-vs-match payoff gap at a given p_A
  const MonetaryParams& mp;
  double operator()(double p_A) const {
    const double fold = follower_payoff(p_A, 0.0, mp).first;
    const double match = follower_payoff(p_A, hat_pB(p_A, mp.M_B, mp.c_B), mp).first;
    return fold - match;
  }
};

}  // namespace

const char* to_string(FollowerRegion region) noexcept {
  switch (region) {
    case FollowerRegion::R1A: return "R1A";
    case FollowerRegion::R2A: return "R2A";
    case FollowerRegion::R1B: return "R1B";
    case FollowerRegion::R2B: return "R2B";
  }
  return "Unknown";
}

const char* to_string(StackelbergCase c) noexcept {
  switch (c) {
    case StackelbergCase::WeakFollower: return "WeakFollower";
    case StackelbergCase::MiddleInterior: return "MiddleInterior";
    case StackelbergCase::MiddleIndifferent: return "MiddleIndifferent";
    case StackelbergCase::StrongFollower: return "StrongFollower";
  }
  return "Unknown";
}

std::pair<double, FollowerRegion> follower_payoff(double p_A, double p_B,
                                                  const MonetaryParams& mp) {
  require_params(mp);
  const double R_A = check_budget(p_A, mp.M_A, mp.c_A, "leader");
  const double R_B = check_budget(p_B, mp.M_B, mp.c_B, "follower");

  if (p_A >= p_B) {
    const double gap = p_A - p_B;
    if (R_A >= case_threshold(gap, R_B))
      return {unfavored_share(gap, R_A, R_B), FollowerRegion::R1A};
    return {1.0 - R_A / (2.0 * (R_B - gap)), FollowerRegion::R2A};
  }
  const double gap = p_B - p_A;
  if (R_B >= case_threshold(gap, R_A))
    return {1.0 - unfavored_share(gap, R_B, R_A), FollowerRegion::R1B};
  return {R_B / (2.0 * (R_A - gap)), FollowerRegion::R2B};
}

double hat_pB(double p_A, double M_B, double c_B) {
  if (!(M_B > 0.0) || !(c_B > 0.0 && c_B < 1.0))
    throw Error(Err::NonPositiveValue, "need M_B > 0 and c_B in (0, 1)");
  if (p_A < 0.0) throw Error(Err::NegativeBudget, "p_A must be nonnegative");
  if (!(M_B > c_B * p_A))
    throw Error(Err::OutOfBudget, "stationary point needs M_B > c_B * p_A");
  return M_B / c_B - (M_B - c_B * p_A) / (2.0 - c_B);
}

std::optional<std::pair<double, double>> roots_r_pm(double p_A, double R_A, double M_B,
                                                    double c_B) {
  if (!(M_B > 0.0) || !(c_B > 0.0 && c_B < 1.0))
    throw Error(Err::NonPositiveValue, "need M_B > 0 and c_B in (0, 1)");
  if (p_A < 0.0 || R_A < 0.0)
    throw Error(Err::NegativeBudget, "p_A and R_A must be nonnegative");
  const double tA = R_A + p_A;
  const double a = 2.0 - c_B;
  const double b = M_B + c_B * (tA + R_A) - 4.0 * tA;
  const double c = 2.0 * tA * tA - M_B * (tA + R_A);
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) return std::nullopt;
  const double sq = std::sqrt(disc);
  return std::make_pair((-b - sq) / (2.0 * a), (-b + sq) / (2.0 * a));
}

double pB_1B(double p_A, double R_A, double M_B, double c_B) {
  const auto roots = roots_r_pm(p_A, R_A, M_B, c_B);
  if (!roots) throw Error(Err::NoRootInInterval, "boundary quadratic has complex roots");
  const double tA = R_A + p_A;
  const double tol = 1e-9 * std::max(1.0, tA);
  for (double r : {roots->first, roots->second}) {
    if (r >= p_A - tol && r < tA) return r;
  }
  throw Error(Err::NoRootInInterval, "no root of the boundary quadratic lies in [p_A, p_A + R_A)");
}

double pB_1A(double p_A, double R_A, double M_B, double c_B) {
  if (!(M_B > 0.0) || !(c_B > 0.0 && c_B < 1.0))
    throw Error(Err::NonPositiveValue, "need M_B > 0 and c_B in (0, 1)");
  if (p_A < 0.0 || R_A < 0.0)
    throw Error(Err::NegativeBudget, "p_A and R_A must be nonnegative");
  // G(p_B) compares R_A against the case threshold of the shrunk game; it
  // rises from 0 on [lo, p_A], so a sign change brackets the boundary.
  auto G = [&](double p_B) {
    const double num = M_B + (1.0 - c_B) * p_B - p_A;  // = R_B(p_B) - gap
    const double den = num + (M_B - c_B * p_B);
    return 2.0 * num * num / den;
  };
  const double lo = std::max(0.0, (p_A - M_B) / (1.0 - c_B));
  const double hi = p_A;
  if (hi <= lo || G(lo) > R_A || G(hi) < R_A)
    throw Error(Err::NoRootInInterval, "no folding-side boundary in [0, p_A]");
  double xl = lo, xr = hi;
  for (int it = 0; it < 200 && (xr - xl) > 1e-15 * std::max(1.0, xr); ++it) {
    const double xm = 0.5 * (xl + xr);
    (G(xm) < R_A ? xl : xr) = xm;
  }
  return 0.5 * (xl + xr);
}

double threshold_h(double R_A, double p_A, double c_B) {
  if (!(c_B > 0.0 && c_B < 1.0))
    throw Error(Err::NonPositiveValue, "c_B must lie in (0, 1)");
  if (R_A < 0.0 || p_A < 0.0)
    throw Error(Err::NegativeBudget, "R_A and p_A must be nonnegative");
  if (R_A == 0.0 && p_A == 0.0) return 0.0;
  // s is exact when p_A = 0, which keeps h(R_A, 0, c_B) = R_A bitwise.
  const double s = p_A == 0.0 ? R_A : std::sqrt(R_A * (R_A + 2.0 * p_A));
  const double tA = R_A + p_A;
  const double K2 = 2.0 / (tA + s);  // follower's fold payoff is (M_B/2) K2
  const double K1 = c_B * (2.0 - c_B) / 2.0;
  const double B = (K2 / 2.0) * c_B * p_A + 1.0;
  const double inner = std::max(0.0, B * B - 2.0 * K2 * (c_B * p_A + K1 * R_A));
  return (B - std::sqrt(inner)) / (c_B * K2);
}

BestResponse best_response_B(double p_A, const MonetaryParams& mp) {
  require_params(mp);
  const double R_A = check_budget(p_A, mp.M_A, mp.c_A, "leader");
  const double x = mp.M_B / mp.c_B;
  const double h = threshold_h(R_A, p_A, mp.c_B);
  BestResponse out;
  if (std::abs(x - h) <= 1e-12 * std::max(1.0, x)) {
    out.indifferent = true;
    out.p_B_star = 0.0;
    out.p_B_alt = hat_pB(p_A, mp.M_B, mp.c_B);
  } else {
    out.p_B_star = x < h ? 0.0 : hat_pB(p_A, mp.M_B, mp.c_B);
  }
  out.u_B = follower_payoff(p_A, out.p_B_star, mp).first;
  return out;
}

double pA_dagger(const MonetaryParams& mp) {
  require_params(mp);
  const Phi phi{mp};
  const double lo = 0.0;
  const double hi = std::min(mp.M_B / mp.c_B * (1.0 - 1e-9), mp.M_A / mp.c_A);
  const double f_lo = phi(lo), f_hi = phi(hi);
  if (!(f_lo < 0.0) || !(f_hi > 0.0))
    throw Error(Err::BracketFailure,
                "fold-match gap does not change sign; parameters are outside the middle regime");
  double xl = lo, xr = hi;
  for (int it = 0; it < 200 && (xr - xl) > 1e-15 * std::max(1.0, xr); ++it) {
    const double xm = 0.5 * (xl + xr);
    (phi(xm) < 0.0 ? xl : xr) = xm;
  }
  const double root = 0.5 * (xl + xr);
  if (std::abs(phi(root)) > 1e-10)
    throw Error(Err::ConvergenceFailure, "indifference gap above 1e-10 after bisection");
  return root;
}

StackelbergOutcome stackelberg_equilibrium(const MonetaryParams& mp) {
  require_params(mp);
  StackelbergOutcome out;
  const double x = mp.M_B / mp.c_B;   // follower's maximal pre-allocation
  const double cap_A = mp.M_A / mp.c_A;
  const double interior_P = (2.0 * (1.0 - mp.c_A) / (2.0 - mp.c_A)) * cap_A;

  if (x <= mp.M_A) {
    // Follower can never out-invest the leader's stage-two budget: the
    // leader plays the unconstrained optimum and the follower folds.
    out.case_tag = StackelbergCase::WeakFollower;
    out.p_A_star = interior_P;
    out.p_B_star = 0.0;
    out.u_A = 1.0 - (mp.M_B / (2.0 * mp.M_A)) * mp.c_A * (2.0 - mp.c_A);
  } else if (x <= cap_A * (1.0 + 1e-12)) {
    if (std::abs(x - cap_A) <= 1e-12 * std::max(1.0, cap_A)) {
      // Knife edge: deterrence consumes the whole budget.
      out.case_tag = StackelbergCase::MiddleIndifferent;
      out.p_A_dagger = cap_A;
      out.p_A_star = cap_A;
      out.p_B_star = 0.0;
      out.u_A = 1.0 - mp.c_B;
      out.p_B_alt = cap_A;  // the follower's tying match is the same level
    } else {
      const double dag = pA_dagger(mp);
      out.p_A_dagger = dag;
      if (dag < interior_P) {
        // Deterrence is cheap: the unconstrained optimum already deters.
        out.case_tag = StackelbergCase::MiddleInterior;
        out.p_A_star = interior_P;
        out.p_B_star = 0.0;
        out.u_A = 1.0 - (mp.M_B / (2.0 * mp.M_A)) * mp.c_A * (2.0 - mp.c_A);
      } else {
        // Leader must overshoot to exactly the indifference level.
        out.case_tag = StackelbergCase::MiddleIndifferent;
        out.p_A_star = dag;
        out.p_B_star = 0.0;
        out.u_A = (mp.c_A * (2.0 - mp.c_B) / 2.0) * (cap_A - dag) / (x - dag);
        out.p_B_alt = hat_pB(dag, mp.M_B, mp.c_B);
      }
    }
  } else {
    // Follower is too strong to deter: leader concedes pre-allocation.
    out.case_tag = StackelbergCase::StrongFollower;
    out.p_A_star = 0.0;
    out.p_B_star = hat_pB(0.0, mp.M_B, mp.c_B);
    out.u_A = (mp.c_B * (2.0 - mp.c_B) / 2.0) * (mp.M_A / mp.M_B);
  }
  out.u_B = 1.0 - out.u_A;
  return out;
}

}  // namespace lotto
