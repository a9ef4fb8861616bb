#include "wmrs/mechanism.hpp"

#include <cmath>
#include <future>

#include "row_tables.hpp"

namespace wmrs {

namespace {

constexpr std::uint64_t kSolveTag = 0x534f4c56;
constexpr std::uint64_t kEstimateTag = 0x45535449;
constexpr std::uint64_t kBranchTag = 0x4252414e;
constexpr std::uint64_t kAllocTag = 0x414c4c4f;
constexpr std::uint64_t kTrialTag = 0x54524941;
constexpr std::uint64_t kStatsTag = 0x53544154;

void require_mechanism_instance(const AuctionInstance& instance) {
  if (instance.num_bidders() < 2)
    throw ValidationError("mechanism: at least two bidders required");
}

LocalSearchConfig search_config(const MechanismConfig& config, std::uint64_t seed) {
  LocalSearchConfig sc;
  sc.epsilon = config.epsilon;
  sc.gradient_mode = config.gradient_mode;
  sc.eta = config.eta;
  sc.rng_seed = seed;
  return sc;
}

// Everything one reported instance needs for repeated mechanism runs: value
// lookups and the rounding distributions of the n+1 solves. Reused across
// trials; all per-run randomness comes in through run seeds.
struct RunContext {
  const AuctionInstance& instance;
  const MechanismConfig& config;
  detail::ValueLookup lookup;
  PoissonRounder full_rounder;
  std::vector<PoissonRounder> removed_rounders;
  std::int64_t samples;

  RunContext(const AuctionInstance& inst, const MechanismConfig& cfg,
             const MechanismSolves& solves)
      : instance(inst), config(cfg), lookup(inst), full_rounder(solves.full) {
    for (const auto& x : solves.without) removed_rounders.emplace_back(x);
    samples = cfg.resolved_welfare_samples(inst.num_bidders(), inst.num_items);
  }
};

struct EstimateBatch {
  std::vector<double> per_bidder_mean;
  std::vector<double> per_bidder_std_error;
  double welfare_mean = 0.0;
  double welfare_std_error = 0.0;
};

// Mean collected value per bidder (and total welfare) over repeated
// roundings, evaluated with the reported valuations.
EstimateBatch estimate_welfare(const RunContext& context, const PoissonRounder& rounder,
                               Rng& rng) {
  const int n = context.instance.num_bidders();
  std::vector<double> sum(n, 0.0), sum_sq(n, 0.0);
  double welfare_sum = 0.0, welfare_sum_sq = 0.0;
  std::vector<ItemSet> masks(n, 0);
  for (std::int64_t s = 0; s < context.samples; ++s) {
    rounder.round_masks(rng, masks);
    double welfare = 0.0;
    for (int i = 0; i < n; ++i) {
      const double v = context.lookup.value(i, masks[i]);
      sum[i] += v;
      sum_sq[i] += v * v;
      welfare += v;
    }
    welfare_sum += welfare;
    welfare_sum_sq += welfare * welfare;
  }

  const double count = static_cast<double>(context.samples);
  auto std_error = [count](double total, double total_sq) {
    if (count < 2.0) return 0.0;
    const double mean = total / count;
    const double var = std::max(0.0, (total_sq - count * mean * mean) / (count - 1.0));
    return std::sqrt(var / count);
  };

  EstimateBatch batch;
  batch.per_bidder_mean.resize(n);
  batch.per_bidder_std_error.resize(n);
  for (int i = 0; i < n; ++i) {
    batch.per_bidder_mean[i] = sum[i] / count;
    batch.per_bidder_std_error[i] = std_error(sum[i], sum_sq[i]);
  }
  batch.welfare_mean = welfare_sum / count;
  batch.welfare_std_error = std_error(welfare_sum, welfare_sum_sq);
  return batch;
}

std::pair<std::vector<BidderStats>, double> estimate_with(const RunContext& context,
                                                          std::uint64_t run_seed) {
  const int n = context.instance.num_bidders();

  Rng full_rng(derive_seed(run_seed, kEstimateTag));
  const EstimateBatch full = estimate_welfare(context, context.full_rounder, full_rng);

  std::vector<BidderStats> stats(n);
  double welfare_estimate = 0.0;
  for (int i = 0; i < n; ++i) {
    stats[i].ground_value = context.instance.valuations[i].ground_value();
    stats[i].expected_value = full.per_bidder_mean[i];
    stats[i].expected_value_std_error = full.per_bidder_std_error[i];
    welfare_estimate += stats[i].expected_value;
  }

  for (int i = 0; i < n; ++i) {
    Rng rng(derive_seed(run_seed, kEstimateTag + 1 + static_cast<std::uint64_t>(i)));
    const EstimateBatch removed = estimate_welfare(context, context.removed_rounders[i], rng);
    stats[i].welfare_without = removed.welfare_mean;
    stats[i].welfare_without_std_error = removed.welfare_std_error;
  }

  const double nd = static_cast<double>(n);
  const double n2 = nd * nd;
  const double n4 = n2 * n2;
  const double n7 = n4 * n2 * nd;
  for (int i = 0; i < n; ++i) {
    double others_ground = 0.0;
    for (int j = 0; j < n; ++j)
      if (j != i) others_ground += stats[j].ground_value;
    stats[i].relevant = stats[i].ground_value > others_ground / n7;
    stats[i].active =
        stats[i].relevant &&
        (1.0 - 1.0 / nd) * (welfare_estimate - stats[i].welfare_without) +
                stats[i].ground_value / (2.0 * n2) >
            stats[i].welfare_without / n4;
  }
  return {std::move(stats), welfare_estimate};
}

MechanismOutcome run_with(const RunContext& context, std::uint64_t run_seed) {
  const int n = context.instance.num_bidders();
  const int m = context.instance.num_items;

  MechanismOutcome outcome;
  auto [stats, welfare_estimate] = estimate_with(context, run_seed);
  outcome.stats = std::move(stats);
  outcome.welfare_estimate = welfare_estimate;
  outcome.welfare_samples_used = context.samples;
  outcome.sample_cap_applied = context.config.sample_cap_applies(n, m);
  outcome.payments.assign(n, 0.0);
  outcome.allocation = Allocation::none(m);

  const double nd = static_cast<double>(n);
  Rng branch_rng(derive_seed(run_seed, kBranchTag));

  if (branch_rng.next_double() < 1.0 - 1.0 / nd) {
    outcome.branch = MechanismBranch::Vcg;
    Rng alloc_rng(derive_seed(run_seed, kAllocTag));
    outcome.allocation = context.full_rounder.round(alloc_rng);
    for (int j = 0; j < m; ++j) {
      const int owner = outcome.allocation.owner[j];
      if (owner >= 0 && !outcome.stats[owner].active) outcome.allocation.owner[j] = -1;
    }
    for (int i = 0; i < n; ++i) {
      if (!outcome.stats[i].active) continue;
      double others = 0.0;
      for (int j = 0; j < n; ++j)
        if (j != i) others += outcome.stats[j].expected_value;
      outcome.payments[i] = outcome.stats[i].welfare_without - others;
    }
    return outcome;
  }

  outcome.branch = MechanismBranch::Lottery;
  const int chosen = branch_rng.next_index(n);
  outcome.lottery_bidder = chosen;
  if (outcome.stats[chosen].active) {
    for (int j = 0; j < m; ++j) outcome.allocation.owner[j] = chosen;
    outcome.payments[chosen] = outcome.stats[chosen].welfare_without / (nd * nd);
  } else if (branch_rng.bernoulli(0.5)) {
    for (int j = 0; j < m; ++j) outcome.allocation.owner[j] = chosen;
  }
  return outcome;
}

}  // namespace

std::int64_t MechanismConfig::resolved_welfare_samples(int num_bidders, int num_items) const {
  if (welfare_sample_count) {
    if (*welfare_sample_count < 1)
      throw ValidationError("mechanism: welfare_sample_count must be at least 1");
    return *welfare_sample_count;
  }
  const double target = 100.0 * num_items * num_bidders * num_bidders;
  const double raw = std::ceil(target * target * std::log(2.0 * num_bidders / 0.01) / 2.0);
  return static_cast<std::int64_t>(std::min(raw, 1e6));
}

bool MechanismConfig::sample_cap_applies(int num_bidders, int num_items) const {
  if (welfare_sample_count) return false;
  const double target = 100.0 * num_items * num_bidders * num_bidders;
  return target * target * std::log(2.0 * num_bidders / 0.01) / 2.0 > 1e6;
}

MechanismSolves compute_solves(const AuctionInstance& instance, const MechanismConfig& config) {
  require_mechanism_instance(instance);
  const int n = instance.num_bidders();

  // Independent solves; run concurrently on pre-derived seeds so the result
  // does not depend on scheduling.
  std::vector<std::future<FractionalPoint>> futures;
  futures.push_back(std::async(std::launch::async, [&instance, &config] {
    return local_search(instance, search_config(config, derive_seed(config.rng_seed, kSolveTag))).x;
  }));
  for (int i = 0; i < n; ++i) {
    futures.push_back(std::async(std::launch::async, [&instance, &config, i] {
      const AuctionInstance removed = instance.with_bidder_removed(i);
      const auto seed = derive_seed(config.rng_seed, kSolveTag + 1 + static_cast<std::uint64_t>(i));
      return local_search(removed, search_config(config, seed)).x;
    }));
  }

  MechanismSolves solves;
  solves.full = futures[0].get();
  for (int i = 0; i < n; ++i) solves.without.push_back(futures[1 + i].get());
  return solves;
}

std::pair<std::vector<BidderStats>, double> estimate_stats(const AuctionInstance& instance,
                                                           const MechanismConfig& config) {
  require_mechanism_instance(instance);
  const MechanismSolves solves = compute_solves(instance, config);
  const RunContext context(instance, config, solves);
  return estimate_with(context, derive_seed(config.rng_seed, kStatsTag));
}

MechanismOutcome run_mechanism(const AuctionInstance& instance, const MechanismConfig& config) {
  require_mechanism_instance(instance);
  const MechanismSolves solves = compute_solves(instance, config);
  const RunContext context(instance, config, solves);
  return run_with(context, derive_seed(config.rng_seed, kStatsTag));
}

MechanismOutcome run_mechanism_with_solves(const AuctionInstance& instance,
                                           const MechanismConfig& config,
                                           const MechanismSolves& solves,
                                           std::uint64_t run_seed) {
  require_mechanism_instance(instance);
  const RunContext context(instance, config, solves);
  return run_with(context, run_seed);
}

std::vector<double> utility_samples(const AuctionInstance& instance_true, int bidder,
                                    const WMRSValuation& reported, const MechanismConfig& config,
                                    std::int64_t trials) {
  require_mechanism_instance(instance_true);
  if (bidder < 0 || bidder >= instance_true.num_bidders())
    throw ValidationError("utility_of_report: bidder index out of range");
  if (reported.num_items() != instance_true.num_items)
    throw ValidationError("utility_of_report: reported valuation has the wrong item count");
  if (trials < 1) throw ValidationError("utility_of_report: trials must be at least 1");

  AuctionInstance instance_reported = instance_true;
  instance_reported.valuations[bidder] = reported;

  const MechanismSolves solves = compute_solves(instance_reported, config);
  const RunContext context(instance_reported, config, solves);
  const WMRSValuation& truth = instance_true.valuations[bidder];

  std::vector<double> utilities;
  utilities.reserve(trials);
  for (std::int64_t t = 0; t < trials; ++t) {
    const auto run_seed = derive_seed(config.rng_seed, kTrialTag + static_cast<std::uint64_t>(t));
    const MechanismOutcome outcome = run_with(context, run_seed);
    utilities.push_back(truth.value(outcome.allocation.items_of(bidder)) -
                        outcome.payments[bidder]);
  }
  return utilities;
}

UtilityEstimate utility_of_report(const AuctionInstance& instance_true, int bidder,
                                  const WMRSValuation& reported, const MechanismConfig& config,
                                  std::int64_t trials) {
  const std::vector<double> utilities =
      utility_samples(instance_true, bidder, reported, config, trials);
  const double count = static_cast<double>(utilities.size());
  double sum = 0.0;
  for (double u : utilities) sum += u;
  const double mean = sum / count;
  double ss = 0.0;
  for (double u : utilities) ss += (u - mean) * (u - mean);
  const double std_error = utilities.size() > 1 ? std::sqrt(ss / (count - 1.0) / count) : 0.0;
  return UtilityEstimate{mean, std_error};
}

}  // namespace wmrs
