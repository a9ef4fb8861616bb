#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "wmrs/extension.hpp"
#include "wmrs/rng.hpp"

namespace wmrs {

struct LocalSearchConfig {
  double epsilon = 0.1;  // in (0, 1)
  GradientMode gradient_mode = GradientMode::Exact;
  double eta = 0.01;  // total confidence budget for sampled gradients
  std::uint64_t rng_seed = 0;
  std::optional<std::int64_t> iteration_cap_override;

  // Step size, derived from epsilon and the instance shape; never stored.
  double step_size(int num_bidders, int num_items) const;
  std::int64_t iteration_cap(int num_bidders, int num_items) const;
};

enum class TerminationReason { Converged, CapReached };

struct IterationRecord {
  double gap = 0.0;        // (y - x) . g, the improvement lower bound
  bool accepted = false;   // false only for the terminating test
  double fexp_after = 0.0; // exact mode only; NaN in sampled mode
};

struct SearchTrace {
  std::vector<IterationRecord> iterations;
  TerminationReason reason = TerminationReason::Converged;
  std::int64_t accepted_steps = 0;
  double final_fexp = 0.0;  // exact mode only; NaN in sampled mode
};

// Partial assignment of items to bidders; -1 marks an unallocated item.
struct Allocation {
  std::vector<int> owner;

  static Allocation none(int num_items) { return Allocation{std::vector<int>(num_items, -1)}; }
  int num_items() const { return static_cast<int>(owner.size()); }
  ItemSet items_of(int bidder) const;
  bool operator==(const Allocation&) const = default;
};

double allocation_welfare(const AuctionInstance& instance, const Allocation& a);

// Largest value any bidder assigns to any single item.
double singleton_max(const AuctionInstance& instance);

// Vertex of the fractional-allocation polytope maximizing y . g: per item,
// full mass on the lowest-index maximizing bidder when that gradient entry
// is positive, otherwise an empty column. Exact because the polytope is a
// product of per-item simplices.
FractionalPoint best_direction(const GradientEstimate& g);

struct LocalSearchResult {
  FractionalPoint x;
  SearchTrace trace;
};

// Gradient ascent over the surrogate objective inside the polytope: start at
// zero, step x += delta (y - x) toward the best direction while the
// improvement bound exceeds half of epsilon times the singleton maximum.
LocalSearchResult local_search(const AuctionInstance& instance, const LocalSearchConfig& config);

// Independent per-item rounding of x: item j goes to bidder i with
// probability 1 - exp(-x_ij), and stays unallocated with the leftover mass.
// Expected welfare equals the surrogate objective at x.
Allocation poisson_round(const FractionalPoint& x, std::uint64_t seed);
Allocation poisson_round(const FractionalPoint& x, Rng& rng);

// Rounding distribution of a fixed point, with the per-item probabilities
// precomputed. Draws consume exactly one uniform per item.
class PoissonRounder {
 public:
  explicit PoissonRounder(const FractionalPoint& x);

  Allocation round(Rng& rng) const;
  // Per-bidder item masks of one draw, written into masks (size num_bidders).
  void round_masks(Rng& rng, std::vector<ItemSet>& masks) const;

  int num_bidders() const { return probs_.num_bidders; }
  int num_items() const { return probs_.num_items; }

 private:
  FractionalPoint probs_;  // 1 - exp(-x), column-checked at construction
};

}  // namespace wmrs
