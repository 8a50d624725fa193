#include "lotto/favoritism.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <string>

namespace lotto {

namespace {

constexpr double kResidualGate = 1e-10;   // scaled by max(1, budget)
constexpr double kMembershipTol = 1e-9;   // scaled by max(1, kappa)

struct Problem {
  const std::vector<double>* p;
  const std::vector<double>* w;
  double P;    // total pre-allocation
  double R_A;  // effective stage-two budgets (q already folded in)
  double R_B;
  int n;
};

Problem validate(const PreAllocation& pre, const GameConfig& cfg) {
  if (cfg.w.empty() || pre.p.empty())
    throw Error(Err::NonPositiveValue, "empty battlefield list");
  if (pre.p.size() != cfg.w.size())
    throw Error(Err::NonPositiveValue, "pre-allocation and w dimension mismatch");
  double wsum = 0.0;
  for (double v : cfg.w) {
    if (!(v > 0.0) || !std::isfinite(v))
      throw Error(Err::NonPositiveValue, "battlefield values must be positive");
    wsum += v;
  }
  if (std::abs(wsum - 1.0) > 1e-9)
    throw Error(Err::NonPositiveValue, "w must sum to 1 (run normalize_config first)");
  double psum = 0.0;
  for (double v : pre.p) {
    if (v < 0.0 || !std::isfinite(v))
      throw Error(Err::NegativeBudget, "pre-allocation entries must be nonnegative");
    psum += v;
  }
  if (std::abs(psum - pre.P) > 1e-9 * std::max(1.0, std::abs(pre.P)))
    throw Error(Err::NonPositiveValue, "pre-allocation total is inconsistent with its entries");
  if (!(cfg.q > 0.0) || !std::isfinite(cfg.q))
    throw Error(Err::NonPositiveValue, "q must be positive");
  const double rb = cfg.R_B * cfg.q;
  if (!(rb > 0.0) || !std::isfinite(rb))
    throw Error(Err::NonPositiveValue, "R_B must be positive");
  if (cfg.R_A < 0.0 || !std::isfinite(cfg.R_A))
    throw Error(Err::NegativeBudget, "R_A must be nonnegative");
  return Problem{&pre.p, &cfg.w, psum, cfg.R_A, rb, static_cast<int>(cfg.w.size())};
}

std::pair<double, double> residuals(const Problem& pb, double kA, double kB) {
  double res_A = 0.0, res_B = 0.0;
  for (int b = 0; b < pb.n; ++b) {
    const double wb = (*pb.w)[b];
    const double p = (*pb.p)[b];
    const double h = std::min(wb * kB, wb * kA + p);
    res_A += (h - p) * (h - p) / (2.0 * wb * kB);
    res_B += (h * h - p * p) / (2.0 * wb * kA);
  }
  return {res_A - pb.R_A, res_B - pb.R_B};
}

bool residuals_pass(const Problem& pb, double rA, double rB) {
  return std::abs(rA) <= kResidualGate * std::max(1.0, pb.R_A) &&
         std::abs(rB) <= kResidualGate * std::max(1.0, pb.R_B);
}

// Partition induced by a multiplier pair; ties go to B1.
void split_by_rule(const Problem& pb, double kA, double kB,
                   std::vector<int>& B1, std::vector<int>& B2) {
  B1.clear();
  B2.clear();
  const double diff = kB - kA;
  const double tol = kMembershipTol * std::max({1.0, kA, kB});
  for (int b = 0; b < pb.n; ++b) {
    const double ratio = (*pb.p)[b] / (*pb.w)[b];
    (ratio >= diff - tol ? B1 : B2).push_back(b);
  }
}

// Checks a multiplier pair against positivity, the membership inequalities
// for a prescribed partition, and the budget residual certificate.
std::optional<KappaSolution> certify(const Problem& pb, double kA, double kB,
                                     const std::vector<int>& B1, const std::vector<int>& B2,
                                     SolveMethod method) {
  if (!std::isfinite(kA) || !std::isfinite(kB) || kA <= 0.0 || kB <= 0.0) return std::nullopt;
  const double diff = kB - kA;
  const double tol = kMembershipTol * std::max({1.0, kA, kB});
  for (int b : B1) {
    if ((*pb.p)[b] / (*pb.w)[b] < diff - tol) return std::nullopt;
  }
  for (int b : B2) {
    if ((*pb.p)[b] / (*pb.w)[b] > diff + tol) return std::nullopt;
  }
  auto [rA, rB] = residuals(pb, kA, kB);
  if (!residuals_pass(pb, rA, rB)) return std::nullopt;
  KappaSolution out;
  out.kappa_A = kA;
  out.kappa_B = kB;
  out.partition_B1 = B1;
  out.partition_B2 = B2;
  out.residual_A = rA;
  out.residual_B = rB;
  out.method = method;
  return out;
}

// Candidate contested sets: upper sets of the ratio p_b/w_b, i.e. prefixes
// of the battlefields sorted by ratio descending, with ties kept together.
std::vector<std::vector<int>> candidate_partitions(const Problem& pb) {
  std::vector<int> order(pb.n);
  std::iota(order.begin(), order.end(), 0);
  auto ratio = [&](int b) { return (*pb.p)[b] / (*pb.w)[b]; };
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return ratio(a) > ratio(b); });
  std::vector<std::vector<int>> groups;
  for (int b : order) {
    if (!groups.empty() &&
        std::abs(ratio(groups.back().front()) - ratio(b)) <=
            1e-12 * std::max(1.0, std::abs(ratio(b)))) {
      groups.back().push_back(b);
    } else {
      groups.push_back({b});
    }
  }
  std::vector<std::vector<int>> candidates;  // largest contested set first
  for (int k = static_cast<int>(groups.size()); k >= 0; --k) {
    std::vector<int> B1;
    for (int g = 0; g < k; ++g) B1.insert(B1.end(), groups[g].begin(), groups[g].end());
    std::sort(B1.begin(), B1.end());
    candidates.push_back(std::move(B1));
  }
  return candidates;
}

// Closed-form multiplier pair(s) for one candidate contested set B1.
// With W1, P1, Q1 the contested totals (W2, P2 the rest), C1 = R_A + P1 and
// C2 = R_B - P2, kappa_B solves
//   (W1 C2^2 + W2 C1^2) u^2 - 2 C1 H2 u + Q1 H2 = 0,  H2 = C2^2 + W2 Q1,
// and kappa_A satisfies both C2 kappa_A = C1 kappa_B - Q1 (linear) and
// W2 kappa_A^2 = 2 C1 u - W1 u^2 - Q1 (the A-budget identity). Both
// quadratic roots can be admissible depending on the sign of C2, so both
// are handed to the certificate ("+" first). kappa_A is recovered from the
// quadratic identity, not the linear one: the linear form divides a
// cancellation-prone difference by C2 and loses the certificate whenever
// C2 is small against Q1/u. When B2 is empty the division by W2 is
// unavailable, and the linear form is rewritten cancellation-free via
// C1 u - Q1 = sign * sqrt(H1) * u on that branch.
std::optional<KappaSolution> try_candidate(const Problem& pb, const std::vector<int>& B1) {
  std::vector<int> B2;
  {
    std::vector<char> in1(pb.n, 0);
    for (int b : B1) in1[b] = 1;
    for (int b = 0; b < pb.n; ++b)
      if (!in1[b]) B2.push_back(b);
  }
  double W1 = 0.0, P1 = 0.0, Q1 = 0.0;
  for (int b : B1) {
    W1 += (*pb.w)[b];
    P1 += (*pb.p)[b];
    Q1 += (*pb.p)[b] * (*pb.p)[b] / (*pb.w)[b];
  }
  // Sum the complement directly: W2 and P2 must vanish exactly when B2 is
  // empty, or their roundoff (scaled by C1^2 in den and H2) wrecks u when
  // C2 is tiny.
  double W2 = 0.0, P2 = 0.0;
  for (int b : B2) {
    W2 += (*pb.w)[b];
    P2 += (*pb.p)[b];
  }
  const double C1 = pb.R_A + P1;  // > 0 since R_A > 0
  const double C2 = pb.R_B - P2;

  double H1 = C1 * C1 - W1 * Q1;
  const double H2 = C2 * C2 + W2 * Q1;
  if (H1 < 0.0) {
    if (H1 < -1e-12 * C1 * C1) return std::nullopt;
    H1 = 0.0;
  }

  if (std::abs(C2) <= 1e-14 * std::max({1.0, pb.R_B, std::abs(P2)})) {
    // Degenerate linear relation: the quadratic has the double root Q1/C1.
    if (W2 <= 0.0 || C1 <= 0.0 || Q1 <= 0.0) return std::nullopt;
    const double u = Q1 / C1;
    const double val = 2.0 * C1 * u - Q1 - W1 * u * u;
    if (val <= 0.0) return std::nullopt;
    return certify(pb, std::sqrt(val / W2), u, B1, B2, SolveMethod::ClosedFormPartition);
  }

  const double den = W1 * C2 * C2 + W2 * C1 * C1;
  if (!(den > 0.0)) return std::nullopt;
  const double sqH1 = std::sqrt(H1);
  const double sq = std::abs(C2) * sqH1 * std::sqrt(H2);
  for (double sign : {1.0, -1.0}) {
    const double u = (C1 * H2 + sign * sq) / den;
    const double kA_lin = (C1 * u - Q1) / C2;
    if (auto sol = certify(pb, kA_lin, u, B1, B2, SolveMethod::ClosedFormPartition)) return sol;
    double kA_alt;
    if (W2 > 0.0) {
      const double val = (2.0 * C1 - W1 * u) * u - Q1;
      if (!(val > 0.0)) continue;
      kA_alt = std::sqrt(val / W2);
    } else {
      kA_alt = sign * sqH1 * u / C2;
    }
    if (auto sol = certify(pb, kA_alt, u, B1, B2, SolveMethod::ClosedFormPartition)) return sol;
  }
  return std::nullopt;
}

// Equilibrium payoff of A given a certified multiplier pair.
double payoff_from_kappa(const Problem& pb, const KappaSolution& k) {
  double pi = 0.0;
  for (int b : k.partition_B1) {
    const double wb = (*pb.w)[b];
    const double z = (*pb.p)[b] / (wb * k.kappa_B);
    pi += wb * (1.0 - (k.kappa_B / (2.0 * k.kappa_A)) * (1.0 - z * z));
  }
  for (int b : k.partition_B2) pi += (*pb.w)[b] * k.kappa_A / (2.0 * k.kappa_B);
  return pi;
}

// ---- numeric path -------------------------------------------------------

struct NewtonResult {
  double kA = 0.0, kB = 0.0;
  bool ok = false;
};

// Damped Newton on (log kappa_A, log kappa_B) with a finite-difference
// Jacobian. Stops once both residuals are safely inside the certificate.
NewtonResult newton_from(const Problem& pb, double kA0, double kB0) {
  NewtonResult out;
  if (!(kA0 > 0.0) || !(kB0 > 0.0) || !std::isfinite(kA0) || !std::isfinite(kB0)) return out;
  double a = std::log(kA0), b = std::log(kB0);
  const double gateA = 0.5 * kResidualGate * std::max(1.0, pb.R_A);
  const double gateB = 0.5 * kResidualGate * std::max(1.0, pb.R_B);
  for (int iter = 0; iter < 120; ++iter) {
    auto [rA, rB] = residuals(pb, std::exp(a), std::exp(b));
    const double norm = std::hypot(rA, rB);
    if (std::abs(rA) <= gateA && std::abs(rB) <= gateB) {
      out.kA = std::exp(a);
      out.kB = std::exp(b);
      out.ok = true;
      return out;
    }
    const double h = 1e-7;
    auto [rA_ap, rB_ap] = residuals(pb, std::exp(a + h), std::exp(b));
    auto [rA_am, rB_am] = residuals(pb, std::exp(a - h), std::exp(b));
    auto [rA_bp, rB_bp] = residuals(pb, std::exp(a), std::exp(b + h));
    auto [rA_bm, rB_bm] = residuals(pb, std::exp(a), std::exp(b - h));
    const double J00 = (rA_ap - rA_am) / (2.0 * h), J01 = (rA_bp - rA_bm) / (2.0 * h);
    const double J10 = (rB_ap - rB_am) / (2.0 * h), J11 = (rB_bp - rB_bm) / (2.0 * h);
    const double det = J00 * J11 - J01 * J10;
    if (!std::isfinite(det) || std::abs(det) < 1e-300) return out;
    const double da = (rA * J11 - rB * J01) / det;
    const double db = (rB * J00 - rA * J10) / det;
    double t = 1.0;
    bool stepped = false;
    while (t >= 1e-10) {
      const double na = std::clamp(a - t * da, -60.0, 60.0);
      const double nb = std::clamp(b - t * db, -60.0, 60.0);
      auto [nrA, nrB] = residuals(pb, std::exp(na), std::exp(nb));
      if (std::hypot(nrA, nrB) < (1.0 - 1e-4 * t) * norm) {
        a = na;
        b = nb;
        stepped = true;
        break;
      }
      t *= 0.5;
    }
    if (!stepped) return out;
  }
  return out;
}

// For fixed kappa_A, the B-budget residual is nondecreasing in kappa_B: each
// battlefield term grows until kappa_B = kappa_A + p_b/w_b and then stays at
// p_b + w_b kappa_A / 2, so the residual saturates at P + kappa_A/2 - R_B.
// A root in kappa_B therefore exists iff that cap is positive, it is unique,
// and [tiny, kappa_A + max_b p_b/w_b] brackets it.
std::optional<double> inner_kappa_B(const Problem& pb, double kA) {
  const double cap = pb.P + 0.5 * kA - pb.R_B;
  if (!(cap > 0.0)) return std::nullopt;
  double max_pw = 0.0;
  for (int b = 0; b < pb.n; ++b) max_pw = std::max(max_pw, (*pb.p)[b] / (*pb.w)[b]);
  double hi = kA + max_pw;
  if (residuals(pb, kA, hi).second < 0.0) return std::nullopt;  // cap lost to rounding
  double lo = 1e-18 * std::max(1.0, hi);
  if (residuals(pb, kA, lo).second >= 0.0) return lo;
  for (int it = 0; it < 200; ++it) {
    const double mid = std::sqrt(lo * hi);
    if (residuals(pb, kA, mid).second < 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return std::sqrt(lo * hi);
}

// Nested-bisection fallback. Outer variable: kappa_A, offset from the
// saturation threshold 2(R_B - P) so the inner root always exists on the
// scanned ray. Every sign change of the A-budget residual along the ray is
// bisected and the resulting pair is polished and checked; the exact
// threshold point itself (nothing contested) is handled by the structured
// candidates in solve_numeric.
NewtonResult nested_bisection(const Problem& pb) {
  NewtonResult out;
  const double scale = std::max({1.0, pb.R_A, pb.R_B, pb.P});
  const double base = std::max(0.0, 2.0 * (pb.R_B - pb.P));
  const double t_lo = 1e-12 * scale, t_hi = 1e10 * scale;
  const int grid_points = 220;
  auto psi = [&](double t) -> std::optional<double> {
    auto kB = inner_kappa_B(pb, base + t);
    if (!kB) return std::nullopt;
    return residuals(pb, base + t, *kB).first;
  };
  double best_score = std::numeric_limits<double>::infinity();
  auto consider = [&](double t) {
    const double kA = base + t;
    auto kB = inner_kappa_B(pb, kA);
    if (!kB) return false;
    auto polished = newton_from(pb, kA, *kB);
    if (polished.ok) {
      out = polished;
      return true;
    }
    auto [rA, rB] = residuals(pb, kA, *kB);
    if (residuals_pass(pb, rA, rB)) {
      out.kA = kA;
      out.kB = *kB;
      out.ok = true;
      return true;
    }
    const double score = std::max(std::abs(rA) / std::max(1.0, pb.R_A),
                                  std::abs(rB) / std::max(1.0, pb.R_B));
    if (score < best_score) {  // remember the least-bad pair for diagnostics
      best_score = score;
      out.kA = kA;
      out.kB = *kB;
    }
    return false;
  };
  double prev_t = 0.0;
  double prev_f = std::numeric_limits<double>::quiet_NaN();
  for (int i = 0; i <= grid_points; ++i) {
    const double t = t_lo * std::pow(t_hi / t_lo, static_cast<double>(i) / grid_points);
    const auto f = psi(t);
    if (!f) {
      prev_f = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    if (*f == 0.0 && consider(t)) return out;
    if (std::isfinite(prev_f) && (prev_f < 0.0) != (*f < 0.0)) {
      double tl = prev_t, tr = t, fl = prev_f;
      for (int it = 0; it < 140; ++it) {
        const double tm = std::sqrt(tl * tr);
        const auto fm = psi(tm);
        if (!fm) break;
        if ((*fm < 0.0) == (fl < 0.0)) {
          tl = tm;
          fl = *fm;
        } else {
          tr = tm;
        }
      }
      if (consider(std::sqrt(tl * tr))) return out;
    }
    prev_t = t;
    prev_f = *f;
  }
  return out;  // ok stays false; kA/kB hold the least-bad pair if any
}

KappaSolution finish_numeric(const Problem& pb, double kA, double kB) {
  std::vector<int> B1, B2;
  split_by_rule(pb, kA, kB, B1, B2);
  auto [rA, rB] = residuals(pb, kA, kB);
  KappaSolution out;
  out.kappa_A = kA;
  out.kappa_B = kB;
  out.partition_B1 = std::move(B1);
  out.partition_B2 = std::move(B2);
  out.residual_A = rA;
  out.residual_B = rB;
  out.method = SolveMethod::NumericRootFind;
  return out;
}

}  // namespace

const char* to_string(SolveMethod method) noexcept {
  switch (method) {
    case SolveMethod::ClosedFormPartition: return "ClosedFormPartition";
    case SolveMethod::NumericRootFind: return "NumericRootFind";
  }
  return "Unknown";
}

double h_threshold(double kappa_A, double kappa_B, double p_b, double w_b) {
  if (!(w_b > 0.0) || !(kappa_A > 0.0) || !(kappa_B > 0.0))
    throw Error(Err::NonPositiveValue, "h_threshold needs positive w_b and multipliers");
  if (p_b < 0.0) throw Error(Err::NegativeBudget, "p_b must be nonnegative");
  return std::min(w_b * kappa_B, w_b * kappa_A + p_b);
}

std::pair<double, double> soe_residuals(double kappa_A, double kappa_B,
                                        const PreAllocation& p, const GameConfig& cfg) {
  const Problem pb = validate(p, cfg);
  if (!(kappa_A > 0.0) || !(kappa_B > 0.0))
    throw Error(Err::NonPositiveValue, "multipliers must be positive");
  if (pb.R_A == 0.0)
    throw Error(Err::ZeroRealTimeA, "residual system requires R_A > 0");
  return residuals(pb, kappa_A, kappa_B);
}

KappaSolution solve_partition_closed(const PreAllocation& p, const GameConfig& cfg) {
  const Problem pb = validate(p, cfg);
  if (pb.R_A == 0.0)
    throw Error(Err::ZeroRealTimeA, "closed-form solve requires R_A > 0");
  for (const auto& B1 : candidate_partitions(pb)) {
    if (auto sol = try_candidate(pb, B1)) return *sol;
  }
  throw Error(Err::NoConsistentPartition,
              "no contested set passed the residual certificate (n = " +
                  std::to_string(pb.n) + ")");
}

KappaSolution solve_numeric(const PreAllocation& p, const GameConfig& cfg) {
  const Problem pb = validate(p, cfg);
  if (pb.R_A == 0.0)
    throw Error(Err::ZeroRealTimeA, "numeric solve requires R_A > 0");

  // Starting guesses: closed-form solutions of the two extreme contested
  // sets, plus a neutral point.
  std::vector<std::pair<double, double>> starts;
  {
    double Q1 = 0.0;
    for (int b = 0; b < pb.n; ++b) Q1 += (*pb.p)[b] * (*pb.p)[b] / (*pb.w)[b];
    const double C = pb.R_A + pb.P;  // everything contested: kB = C + sqrt(C^2 - Q1)
    const double H1 = C * C - Q1;
    if (H1 >= 0.0) {
      const double u = C + std::sqrt(H1);
      starts.emplace_back((C * u - Q1) / pb.R_B, u);
    }
    if (pb.R_B > pb.P) {
      const double kA = 2.0 * (pb.R_B - pb.P);  // nothing contested
      starts.emplace_back(kA, kA * kA / (2.0 * pb.R_A));
    }
    starts.emplace_back(2.0 * pb.R_A, 2.0 * pb.R_B);
  }

  NewtonResult best;
  for (auto [kA0, kB0] : starts) {
    // The two extreme contested sets solve the system exactly when they are
    // the equilibrium partition; accept such a start outright.
    if (kA0 > 0.0 && kB0 > 0.0 && std::isfinite(kA0) && std::isfinite(kB0)) {
      auto [rA0, rB0] = residuals(pb, kA0, kB0);
      if (residuals_pass(pb, rA0, rB0)) return finish_numeric(pb, kA0, kB0);
    }
    best = newton_from(pb, kA0, kB0);
    if (best.ok) break;
  }
  if (!best.ok) best = nested_bisection(pb);
  if (best.ok) {
    auto polished = newton_from(pb, best.kA, best.kB);
    if (polished.ok) best = polished;
  }
  if (best.ok) {
    auto [rA, rB] = residuals(pb, best.kA, best.kB);
    if (residuals_pass(pb, rA, rB)) return finish_numeric(pb, best.kA, best.kB);
  }
  auto [rA, rB] = (best.kA > 0.0 && best.kB > 0.0)
                      ? residuals(pb, best.kA, best.kB)
                      : std::pair<double, double>{std::numeric_limits<double>::quiet_NaN(),
                                                  std::numeric_limits<double>::quiet_NaN()};
  throw Error(Err::ConvergenceFailure,
              "numeric solve missed the residual certificate (best residuals " +
                  std::to_string(rA) + ", " + std::to_string(rB) + ")");
}

double stage2_value(const KappaSolution& kappa, const PreAllocation& p, const GameConfig& cfg) {
  const Problem pb = validate(p, cfg);
  if (!(kappa.kappa_A > 0.0) || !(kappa.kappa_B > 0.0))
    throw Error(Err::NonPositiveValue, "multipliers must be positive");
  return payoff_from_kappa(pb, kappa);
}

Stage2Outcome stage2_payoff(const PreAllocation& p, const GameConfig& cfg) {
  const Problem pb = validate(p, cfg);
  Stage2Outcome out;

  if (pb.R_A == 0.0) {
    // Only the value-proportional split has a clean zero-real-time limit.
    for (int b = 0; b < pb.n; ++b) {
      if (std::abs((*pb.p)[b] - (*pb.w)[b] * pb.P) > 1e-9 * std::max(1.0, pb.P))
        throw Error(Err::NumericUnsupported,
                    "R_A = 0 is supported only for the proportional pre-allocation");
    }
    out.pi_A = spe_payoff(pb.P, 0.0, pb.R_B).pi_A;
    out.pi_B = 1.0 - out.pi_A;
    return out;  // multipliers stay zeroed; they are not defined here
  }

  try {
    out.kappa = solve_partition_closed(p, cfg);
  } catch (const Error& e) {
    if (e.code() != Err::NoConsistentPartition) throw;
    out.kappa = solve_numeric(p, cfg);
  }
  out.pi_A = payoff_from_kappa(pb, out.kappa);
  out.pi_B = 1.0 - out.pi_A;
  return out;
}

}  // namespace lotto
