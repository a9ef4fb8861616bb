#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wmrs/local_search.hpp"
#include "wmrs/mechanism.hpp"

namespace wmrs {

struct IntegralOptResult {
  double value = 0.0;
  Allocation allocation;
};

// Exhaustive integral welfare maximum over all assignments of each item to a
// bidder or to nobody. Refuses instances with more than 10^7 assignments.
IntegralOptResult integral_opt(const AuctionInstance& instance);

// Near-ground-truth optimum of the surrogate objective over the polytope,
// certified to additive accuracy tau: ascend with exact gradients until the
// best linear improvement over the polytope is at most tau, which by
// concavity bounds the remaining gap. Deterministic.
double range_opt(const AuctionInstance& instance, double tau);

struct MisreportRow {
  std::string description;
  WMRSValuation report;
  bool truthful = false;
};

// Weight scalings of the truth, the all-items-worthless report, and a
// single-matroid swap. Contains exactly one row flagged truthful.
std::vector<MisreportRow> default_misreport_family(const WMRSValuation& truth);

struct RegretRow {
  std::string description;
  bool truthful = false;
  double mean_utility = 0.0;
  double std_error = 0.0;
  std::int64_t trials = 0;
};

struct RegretReport {
  std::vector<RegretRow> rows;
  int truthful_index = -1;
  int best_index = -1;
  double epsilon_emp = 0.0;  // 1 - truthful_mean / best_mean, 0 when truthful is best
};

// Monte-Carlo utility of each report in the family, measured with the
// bidder's true valuation. With paired_seeds, trial t of every row replays
// the same mechanism randomness, which cancels common noise across rows.
RegretReport regret_experiment(const AuctionInstance& instance_true, int bidder,
                               const std::vector<MisreportRow>& family,
                               const MechanismConfig& config, std::int64_t trials,
                               bool paired_seeds = true);

}  // namespace wmrs
