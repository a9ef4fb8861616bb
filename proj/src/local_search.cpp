#include "wmrs/local_search.hpp"

#include <cmath>
#include <limits>

#include "row_tables.hpp"

namespace wmrs {

using detail::RowTables;

namespace {

constexpr std::uint64_t kGradientTag = 0x67726164;

}  // namespace

double LocalSearchConfig::step_size(int num_bidders, int num_items) const {
  const double m = static_cast<double>(num_items);
  const double n = static_cast<double>(num_bidders);
  return epsilon / (8.0 * m * m * n * n);
}

std::int64_t LocalSearchConfig::iteration_cap(int num_bidders, int num_items) const {
  if (iteration_cap_override) return *iteration_cap_override;
  const double m = static_cast<double>(num_items);
  const double n = static_cast<double>(num_bidders);
  return static_cast<std::int64_t>(std::ceil(64.0 * m * m * m * n * n / (epsilon * epsilon)));
}

ItemSet Allocation::items_of(int bidder) const {
  ItemSet s = 0;
  for (int j = 0; j < num_items(); ++j)
    if (owner[j] == bidder) s |= 1ULL << j;
  return s;
}

double allocation_welfare(const AuctionInstance& instance, const Allocation& a) {
  if (a.num_items() != instance.num_items)
    throw ValidationError("allocation_welfare: item count mismatch");
  double total = 0.0;
  for (int i = 0; i < instance.num_bidders(); ++i)
    total += instance.valuations[i].value(a.items_of(i));
  return total;
}

double singleton_max(const AuctionInstance& instance) {
  double best = 0.0;
  for (const auto& v : instance.valuations)
    for (int j = 0; j < instance.num_items; ++j)
      best = std::max(best, v.value(1ULL << j));
  return best;
}

FractionalPoint best_direction(const GradientEstimate& g) {
  FractionalPoint y(g.g.num_bidders, g.g.num_items);
  for (int j = 0; j < g.g.num_items; ++j) {
    int best = -1;
    double best_value = 0.0;
    for (int i = 0; i < g.g.num_bidders; ++i) {
      if (g.g.at(i, j) > best_value) {
        best = i;
        best_value = g.g.at(i, j);
      }
    }
    if (best >= 0) y.at(best, j) = 1.0;
  }
  return y;
}

LocalSearchResult local_search(const AuctionInstance& instance, const LocalSearchConfig& config) {
  if (!(config.epsilon > 0.0 && config.epsilon < 1.0))
    throw ValidationError("local_search: epsilon must be in (0, 1)");
  const int n = instance.num_bidders();
  const int m = instance.num_items;
  const bool exact = config.gradient_mode == GradientMode::Exact;
  const double nan = std::numeric_limits<double>::quiet_NaN();

  LocalSearchResult result;
  result.x = FractionalPoint(n, m);
  result.trace.final_fexp = exact ? 0.0 : nan;

  const double big_m = singleton_max(instance);
  if (big_m == 0.0) return result;  // threshold and gradient are both zero

  std::optional<RowTables> tables;
  if (exact) tables.emplace(instance);

  const double delta = config.step_size(n, m);
  const std::int64_t cap = config.iteration_cap(n, m);
  const double threshold = 0.5 * config.epsilon * big_m;
  // Per-iteration share of the confidence budget, over the iteration cap.
  const double eta_per_iter = config.eta / static_cast<double>(cap);

  for (std::int64_t iter = 0; iter < cap; ++iter) {
    GradientEstimate g =
        exact ? tables->gradient(result.x)
              : sampled_grad_Fexp(instance, result.x, delta, big_m, eta_per_iter,
                                  derive_seed(config.rng_seed, kGradientTag + iter));
    const FractionalPoint y = best_direction(g);

    double gap = 0.0;
    for (std::size_t c = 0; c < y.cells.size(); ++c)
      gap += (y.cells[c] - result.x.cells[c]) * g.g.cells[c];

    IterationRecord record;
    record.gap = gap;
    if (gap <= threshold) {
      record.accepted = false;
      record.fexp_after = exact ? tables->fexp(result.x) : nan;
      result.trace.iterations.push_back(record);
      result.trace.reason = TerminationReason::Converged;
      result.trace.final_fexp = record.fexp_after;
      return result;
    }

    for (std::size_t c = 0; c < result.x.cells.size(); ++c)
      result.x.cells[c] = (1.0 - delta) * result.x.cells[c] + delta * y.cells[c];
    record.accepted = true;
    record.fexp_after = exact ? tables->fexp(result.x) : nan;
    result.trace.iterations.push_back(record);
    ++result.trace.accepted_steps;
  }

  result.trace.reason = TerminationReason::CapReached;
  result.trace.final_fexp = exact ? tables->fexp(result.x) : nan;
  return result;
}

PoissonRounder::PoissonRounder(const FractionalPoint& x) {
  if (!x.in_polytope(1e-9))
    throw ValidationError("poisson_round: point outside the fractional-allocation polytope");
  probs_ = FractionalPoint(x.num_bidders, x.num_items);
  for (std::size_t c = 0; c < x.cells.size(); ++c)
    probs_.cells[c] = 1.0 - std::exp(-x.cells[c]);
}

Allocation PoissonRounder::round(Rng& rng) const {
  Allocation a = Allocation::none(probs_.num_items);
  for (int j = 0; j < probs_.num_items; ++j) {
    double u = rng.next_double();
    for (int i = 0; i < probs_.num_bidders; ++i) {
      const double p = probs_.at(i, j);
      if (u < p) {
        a.owner[j] = i;
        break;
      }
      u -= p;
    }
  }
  return a;
}

void PoissonRounder::round_masks(Rng& rng, std::vector<ItemSet>& masks) const {
  masks.assign(probs_.num_bidders, 0);
  for (int j = 0; j < probs_.num_items; ++j) {
    double u = rng.next_double();
    for (int i = 0; i < probs_.num_bidders; ++i) {
      const double p = probs_.at(i, j);
      if (u < p) {
        masks[i] |= 1ULL << j;
        break;
      }
      u -= p;
    }
  }
}

Allocation poisson_round(const FractionalPoint& x, Rng& rng) {
  return PoissonRounder(x).round(rng);
}

Allocation poisson_round(const FractionalPoint& x, std::uint64_t seed) {
  Rng rng(seed);
  return poisson_round(x, rng);
}

}  // namespace wmrs
