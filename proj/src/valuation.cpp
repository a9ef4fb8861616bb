#include "wmrs/valuation.hpp"

#include <cmath>

#include "wmrs/rng.hpp"

namespace wmrs {

namespace {

// Chunked sample streams: sample s draws from the stream for chunk s/kChunk,
// so any chunk-aligned partition across workers reproduces the same values.
constexpr std::int64_t kSampleChunk = 4096;

void validate_probs(const WMRSValuation& v, std::span<const double> probs) {
  if (static_cast<int>(probs.size()) != v.num_items())
    throw ValidationError("lottery value: probability vector length must equal num_items");
  for (double p : probs) {
    if (!(p >= 0.0 && p <= 1.0))
      throw ValidationError("lottery value: probabilities must lie in [0, 1]");
  }
}

}  // namespace

WMRSValuation::WMRSValuation(int num_items, std::vector<WeightedMatroid> components)
    : num_items_(num_items), components_(std::move(components)) {
  if (num_items < 1 || num_items > 64)
    throw ValidationError("valuation: num_items must be in [1, 64]");
  for (const auto& c : components_) {
    if (!(c.weight >= 0.0))
      throw ValidationError("valuation: component weights must be nonnegative");
    if (c.matroid.ground_size() != num_items)
      throw ValidationError("valuation: component ground size must equal num_items");
  }
}

double WMRSValuation::value(ItemSet subset) const {
  if (subset & ~full_set(num_items_))
    throw ValidationError("value: element index out of range");
  double total = 0.0;
  for (const auto& c : components_) total += c.weight * c.matroid.rank(subset);
  return total;
}

AuctionInstance::AuctionInstance(int num_items_in, std::vector<WMRSValuation> valuations_in)
    : num_items(num_items_in), valuations(std::move(valuations_in)) {
  if (num_items < 1) throw ValidationError("instance: num_items must be at least 1");
  if (valuations.empty()) throw ValidationError("instance: at least one bidder required");
  for (const auto& v : valuations) {
    if (v.num_items() != num_items)
      throw ValidationError("instance: all valuations must share num_items");
  }
}

AuctionInstance AuctionInstance::with_bidder_removed(int bidder) const {
  if (bidder < 0 || bidder >= num_bidders())
    throw ValidationError("with_bidder_removed: bidder index out of range");
  auto copy = *this;
  copy.valuations[bidder] = WMRSValuation::zero(num_items);
  return copy;
}

double exact_lottery_value(const WMRSValuation& v, std::span<const double> probs) {
  validate_probs(v, probs);
  const int m = v.num_items();
  if (m > 20) throw BudgetError("exact_lottery_value: more than 20 items");

  double total = 0.0;
  const ItemSet limit = 1ULL << m;
  for (ItemSet s = 0; s < limit; ++s) {
    double w = 1.0;
    for (int j = 0; j < m; ++j) w *= set_contains(s, j) ? probs[j] : 1.0 - probs[j];
    if (w != 0.0) total += w * v.value(s);
  }
  return total;
}

SampledValue sampled_lottery_value(const WMRSValuation& v, std::span<const double> probs,
                                   std::int64_t num_samples, std::uint64_t seed) {
  validate_probs(v, probs);
  if (num_samples < 1)
    throw ValidationError("sampled_lottery_value: num_samples must be at least 1");
  const int m = v.num_items();

  double sum = 0.0, sum_sq = 0.0;
  for (std::int64_t chunk_start = 0; chunk_start < num_samples; chunk_start += kSampleChunk) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(chunk_start / kSampleChunk)));
    const std::int64_t chunk_end = std::min(num_samples, chunk_start + kSampleChunk);
    for (std::int64_t s = chunk_start; s < chunk_end; ++s) {
      ItemSet drawn = 0;
      for (int j = 0; j < m; ++j)
        if (rng.bernoulli(probs[j])) drawn |= 1ULL << j;
      const double x = v.value(drawn);
      sum += x;
      sum_sq += x * x;
    }
  }

  const double n = static_cast<double>(num_samples);
  const double mean = sum / n;
  double std_error = 0.0;
  if (num_samples > 1) {
    const double var = std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0));
    std_error = std::sqrt(var / n);
  }
  return SampledValue{mean, std_error};
}

}  // namespace wmrs
