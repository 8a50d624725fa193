#pragma once

#include <string>
#include <utility>
#include <vector>

#include "lotto/core.hpp"
#include "lotto/favoritism.hpp"
#include "lotto/interplay.hpp"
#include "lotto/stackelberg.hpp"

namespace lotto::oracle {

// Shared knobs for the brute-force searches and the check suite. seed
// fixes every random draw, so identical calls give identical reports.
struct GridSpec {
  int resolution = 100;
  unsigned seed = 0;
};

struct VerificationReport {
  std::string check_name;
  long instances_run = 0;
  double max_violation = 0.0;  // worst observed defect, reported even when passing
  double tolerance = 0.0;
  bool pass = false;
  std::string worst_case_input;  // JSON description of the worst instance
};

// Exhaustive lattice search for the best pre-allocation of cfg.P over the
// battlefields (steps of P / resolution). Independent of the closed-form
// optimum; used to confirm it. At most 4 battlefields.
std::pair<PreAllocation, double> grid_search_preallocation(const GameConfig& cfg,
                                                           const GridSpec& grid);

// Scans the budget line P -> (P, M_A - c_A P) and returns the best (P, payoff).
std::pair<double, double> budget_line_scan(double M_A, double c_A, double R_B,
                                           const GridSpec& grid);

// Scans the follower's feasible pre-allocations against a fixed p_A and
// returns the best (p_B, u_B).
std::pair<double, double> follower_scan(double p_A, const MonetaryParams& mp,
                                        const GridSpec& grid);

// Names of every registered consistency check, in execution order.
std::vector<std::string> registered_checks();

// Runs the named checks ("all" or an empty list runs everything).
// Unknown names throw UnknownCheck.
std::vector<VerificationReport> run_suite(const std::vector<std::string>& checks,
                                          const GridSpec& grid);

}  // namespace lotto::oracle
