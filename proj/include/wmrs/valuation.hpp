#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "wmrs/matroid.hpp"

namespace wmrs {

struct WeightedMatroid {
  double weight = 0.0;
  MatroidSpec matroid;
  bool operator==(const WeightedMatroid&) const = default;
};

// Nonnegative weighted sum of matroid rank functions over a shared ground
// set of items. Monotone and submodular; v(empty) = 0.
class WMRSValuation {
 public:
  WMRSValuation(int num_items, std::vector<WeightedMatroid> components);

  static WMRSValuation zero(int num_items) { return WMRSValuation(num_items, {}); }

  int num_items() const { return num_items_; }
  const std::vector<WeightedMatroid>& components() const { return components_; }
  bool is_zero() const { return components_.empty(); }

  // The value-oracle query: sum of weight * rank over components.
  double value(ItemSet subset) const;

  // Value of the full item set.
  double ground_value() const { return value(full_set(num_items_)); }

  bool operator==(const WMRSValuation&) const = default;

 private:
  int num_items_;
  std::vector<WeightedMatroid> components_;
};

struct AuctionInstance {
  int num_items = 0;
  std::vector<WMRSValuation> valuations;  // one per bidder

  AuctionInstance(int num_items, std::vector<WMRSValuation> valuations);

  int num_bidders() const { return static_cast<int>(valuations.size()); }

  // Same instance with bidder i's valuation replaced by the zero valuation.
  // Keeps the item set and bidder indexing, so per-bidder quantities stay
  // comparable with the full instance.
  AuctionInstance with_bidder_removed(int bidder) const;

  bool operator==(const AuctionInstance&) const = default;
};

// Expected value of v over independent per-item inclusion with the given
// probabilities, by exhaustive enumeration of all item subsets. Refuses
// more than 20 items.
double exact_lottery_value(const WMRSValuation& v, std::span<const double> probs);

struct SampledValue {
  double estimate = 0.0;
  double std_error = 0.0;
};

// Unbiased Monte-Carlo estimate of the same lottery value, with the sample
// standard error. Deterministic given (seed, num_samples); sample s is drawn
// from a stream derived from (seed, s), so any partition of the sample range
// across workers reproduces the same draws.
SampledValue sampled_lottery_value(const WMRSValuation& v, std::span<const double> probs,
                                   std::int64_t num_samples, std::uint64_t seed);

}  // namespace wmrs
