#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "wmrs/local_search.hpp"

namespace wmrs {

struct MechanismConfig {
  double epsilon = 0.1;  // forwarded to the allocation rule
  GradientMode gradient_mode = GradientMode::Exact;
  double eta = 0.01;  // forwarded for sampled gradients
  std::optional<std::int64_t> welfare_sample_count;
  std::uint64_t rng_seed = 0;

  // Default sample count targets a standard error of about V_i / (100 m n^2)
  // per estimate, capped at one million samples.
  std::int64_t resolved_welfare_samples(int num_bidders, int num_items) const;
  bool sample_cap_applies(int num_bidders, int num_items) const;
};

struct BidderStats {
  double ground_value = 0.0;         // V_i, from the reported valuation
  double expected_value = 0.0;       // O_i, estimate of bidder i's collected value
  double welfare_without = 0.0;      // O'_{-i}, welfare estimate without bidder i
  double expected_value_std_error = 0.0;
  double welfare_without_std_error = 0.0;
  bool relevant = false;
  bool active = false;
};

enum class MechanismBranch { Vcg, Lottery };

struct MechanismOutcome {
  MechanismBranch branch = MechanismBranch::Vcg;
  int lottery_bidder = -1;  // only for the lottery branch
  Allocation allocation;
  std::vector<double> payments;
  std::vector<BidderStats> stats;
  double welfare_estimate = 0.0;  // O, the sum of the per-bidder estimates
  std::int64_t welfare_samples_used = 0;
  bool sample_cap_applied = false;
};

// The fractional solutions behind one reported instance: the full-instance
// solve plus one solve per removed bidder. Deterministic with exact
// gradients; the n+1 solves run concurrently on derived seeds.
struct MechanismSolves {
  FractionalPoint full;
  std::vector<FractionalPoint> without;
};

MechanismSolves compute_solves(const AuctionInstance& instance, const MechanismConfig& config);

// Per-bidder ground values, welfare estimates, and the relevance/activity
// classification. Requires at least two bidders.
std::pair<std::vector<BidderStats>, double> estimate_stats(const AuctionInstance& instance,
                                                           const MechanismConfig& config);

// One full run: fresh welfare estimates, the branch draw, the allocation and
// the payments. All randomness derives from config.rng_seed.
MechanismOutcome run_mechanism(const AuctionInstance& instance, const MechanismConfig& config);

// Same, reusing precomputed solves (exact-gradient solves do not depend on
// the seed, so repeated-run experiments share them).
MechanismOutcome run_mechanism_with_solves(const AuctionInstance& instance,
                                           const MechanismConfig& config,
                                           const MechanismSolves& solves,
                                           std::uint64_t run_seed);

struct UtilityEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};

// Monte-Carlo expected utility of bidder i reporting `reported` while the
// others report instance_true's valuations; utility is measured with the
// bidder's true valuation. Trial t uses randomness derived from
// (config.rng_seed, t).
UtilityEstimate utility_of_report(const AuctionInstance& instance_true, int bidder,
                                  const WMRSValuation& reported, const MechanismConfig& config,
                                  std::int64_t trials);

// Per-trial utilities behind utility_of_report, for stream-level checks.
std::vector<double> utility_samples(const AuctionInstance& instance_true, int bidder,
                                    const WMRSValuation& reported, const MechanismConfig& config,
                                    std::int64_t trials);

}  // namespace wmrs
