#pragma once

#include <cstdint>
#include <vector>

#include "wmrs/valuation.hpp"

namespace wmrs {

// Dense bidders-by-items grid of reals. Carries fractional allocations
// (column sums at most 1), box points in [0,1], and gradient payloads.
struct FractionalPoint {
  int num_bidders = 0;
  int num_items = 0;
  std::vector<double> cells;  // row-major

  FractionalPoint() = default;
  FractionalPoint(int bidders, int items, double fill = 0.0)
      : num_bidders(bidders), num_items(items),
        cells(static_cast<std::size_t>(bidders) * items, fill) {}

  double& at(int bidder, int item) { return cells[static_cast<std::size_t>(bidder) * num_items + item]; }
  double at(int bidder, int item) const { return cells[static_cast<std::size_t>(bidder) * num_items + item]; }

  // Membership in the fractional-allocation polytope: coordinates in [0,1]
  // and per-item column sums at most 1, up to tol.
  bool in_polytope(double tol = 1e-12) const;

  bool operator==(const FractionalPoint&) const = default;
};

enum class GradientMode { Exact, Sampled };

struct GradientEstimate {
  FractionalPoint g;
  GradientMode mode = GradientMode::Exact;
  double claimed_error = 0.0;  // additive, per coordinate; 0 for exact
};

// Multilinear extension of the aggregate valuation at box point y: the sum
// over bidders of the exact lottery value of their row. Exhaustive; refuses
// more than 20 items.
double exact_F(const AuctionInstance& instance, const FractionalPoint& y);

// The surrogate objective: exact_F evaluated at y = 1 - exp(-x).
double exact_Fexp(const AuctionInstance& instance, const FractionalPoint& x);

// Exact gradient of the surrogate. Coordinate (i,j) is
// exp(-x_ij) * (F_i(row with y_j <- 1) - F_i(row with y_j <- 0)).
GradientEstimate exact_grad_Fexp(const AuctionInstance& instance, const FractionalPoint& x);

// Monte-Carlo gradient estimate. Each coordinate averages
// ceil(ln(2nm/eta) / (2 delta^2)) marginal-value samples, so by Hoeffding
// over the [0, M] sample range all coordinates land within delta*M of the
// exact gradient with probability at least 1 - eta.
GradientEstimate sampled_grad_Fexp(const AuctionInstance& instance, const FractionalPoint& x,
                                   double target_delta, double singleton_max, double eta,
                                   std::uint64_t seed);

std::int64_t gradient_sample_count(int num_bidders, int num_items, double target_delta,
                                   double eta);

}  // namespace wmrs
