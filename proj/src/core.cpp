#include "lotto/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace lotto {

namespace {

void require_budgets(double P, double R_A, double R_B) {
  if (!(R_B > 0.0) || !std::isfinite(R_B))
    throw Error(Err::NonPositiveValue, "R_B must be positive, got " + std::to_string(R_B));
  if (P < 0.0 || !std::isfinite(P))
    throw Error(Err::NegativeBudget, "P must be nonnegative, got " + std::to_string(P));
  if (R_A < 0.0 || !std::isfinite(R_A))
    throw Error(Err::NegativeBudget, "R_A must be nonnegative, got " + std::to_string(R_A));
}

// Case1/Case2 threshold on R_A; zero once P covers R_B.
double case_threshold(double P, double R_B) {
  if (R_B <= P) return 0.0;
  const double d = R_B - P;
  return 2.0 * d * d / (P + 2.0 * d);
}

}  // namespace

PreAllocation make_preallocation(std::vector<double> p) {
  if (p.empty()) throw Error(Err::NonPositiveValue, "pre-allocation must have at least one battlefield");
  for (double v : p) {
    if (v < 0.0 || !std::isfinite(v))
      throw Error(Err::NegativeBudget, "pre-allocation entries must be nonnegative");
  }
  PreAllocation out;
  out.P = std::accumulate(p.begin(), p.end(), 0.0);
  out.p = std::move(p);
  return out;
}

const char* to_string(RegimeTag tag) noexcept {
  switch (tag) {
    case RegimeTag::Case1: return "Case1";
    case RegimeTag::Case2: return "Case2";
    case RegimeTag::Case3_ZeroRealTime: return "Case3_ZeroRealTime";
  }
  return "Unknown";
}

GameConfig normalize_config(const GameConfig& raw) {
  if (raw.w.empty()) throw Error(Err::NonPositiveValue, "w must have at least one battlefield");
  double total = 0.0;
  for (double v : raw.w) {
    if (!(v > 0.0) || !std::isfinite(v))
      throw Error(Err::NonPositiveValue, "battlefield values must be positive");
    total += v;
  }
  if (!(raw.q > 0.0) || !std::isfinite(raw.q))
    throw Error(Err::NonPositiveValue, "q must be positive, got " + std::to_string(raw.q));
  require_budgets(raw.P, raw.R_A, raw.R_B * raw.q);

  GameConfig cfg = raw;
  for (double& v : cfg.w) v /= total;
  cfg.R_B = raw.R_B * raw.q;
  cfg.q = 1.0;
  return cfg;
}

SpeRegime classify_regime(double P, double R_A, double R_B) {
  require_budgets(P, R_A, R_B);
  SpeRegime out;
  out.boundary_distance = R_A - case_threshold(P, R_B);
  if (R_A == 0.0)
    out.tag = RegimeTag::Case3_ZeroRealTime;
  else
    out.tag = out.boundary_distance >= 0.0 ? RegimeTag::Case1 : RegimeTag::Case2;
  return out;
}

SpeResult spe_payoff(double P, double R_A, double R_B) {
  return spe_payoff(P, R_A, R_B, std::vector<double>{1.0});
}

SpeResult spe_payoff(double P, double R_A, double R_B, const std::vector<double>& w) {
  GameConfig cfg;
  cfg.w = w;
  cfg.P = P;
  cfg.R_A = R_A;
  cfg.R_B = R_B;
  cfg = normalize_config(cfg);

  SpeResult out;
  out.regime = classify_regime(P, R_A, R_B);

  if (R_A == 0.0) {
    if (P == 0.0) {
      out.pi_A = 0.0;
      out.degenerate = true;
    } else {
      out.pi_A = 1.0 - std::min(R_B / P, 1.0);
    }
  } else if (P == 0.0) {
    // No pre-allocation: the aggregate game is the one-shot bidding game.
    out.pi_A = hart_baseline(R_A, R_B);
  } else if (out.regime.tag == RegimeTag::Case1) {
    const double f = R_A + std::sqrt(R_A * (R_A + 2.0 * P));
    const double ratio = f / (P + f);
    out.pi_A = 1.0 - (R_B / (2.0 * R_A)) * ratio * ratio;
  } else {
    out.pi_A = R_A / (2.0 * (R_B - P));
  }

  out.pi_B = 1.0 - out.pi_A;
  out.p_star.p.resize(cfg.w.size());
  for (std::size_t b = 0; b < cfg.w.size(); ++b) out.p_star.p[b] = cfg.w[b] * P;
  out.p_star.P = P;
  return out;
}

double hart_baseline(double R_A, double R_B) {
  if (!(R_B > 0.0) || !std::isfinite(R_B))
    throw Error(Err::NonPositiveValue, "R_B must be positive, got " + std::to_string(R_B));
  if (R_A < 0.0 || !std::isfinite(R_A))
    throw Error(Err::NegativeBudget, "R_A must be nonnegative, got " + std::to_string(R_A));
  return R_A < R_B ? R_A / (2.0 * R_B) : 1.0 - R_B / (2.0 * R_A);
}

}  // namespace lotto
