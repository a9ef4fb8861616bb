#pragma once

// Internal: per-bidder tables of v(S) over all item subsets, built once per
// solve so inner loops avoid repeated rank queries. Table-based evaluations
// use the same mask and summation order as the public exhaustive operations,
// so results agree bit for bit.

#include <cmath>
#include <optional>
#include <vector>

#include "wmrs/extension.hpp"

namespace wmrs::detail {

struct RowTables {
  int num_bidders = 0;
  int num_items = 0;
  std::vector<std::vector<double>> values;

  explicit RowTables(const AuctionInstance& instance)
      : num_bidders(instance.num_bidders()), num_items(instance.num_items) {
    const ItemSet limit = 1ULL << num_items;
    values.resize(num_bidders);
    for (int i = 0; i < num_bidders; ++i) {
      values[i].resize(limit);
      for (ItemSet s = 0; s < limit; ++s) values[i][s] = instance.valuations[i].value(s);
    }
  }

  double lottery(int bidder, const std::vector<double>& probs) const {
    const ItemSet limit = 1ULL << num_items;
    double total = 0.0;
    for (ItemSet s = 0; s < limit; ++s) {
      double w = 1.0;
      for (int j = 0; j < num_items; ++j)
        w *= set_contains(s, j) ? probs[j] : 1.0 - probs[j];
      if (w != 0.0) total += w * values[bidder][s];
    }
    return total;
  }

  double fexp(const FractionalPoint& x) const {
    std::vector<double> row(num_items);
    double total = 0.0;
    for (int i = 0; i < num_bidders; ++i) {
      for (int j = 0; j < num_items; ++j) row[j] = 1.0 - std::exp(-x.at(i, j));
      total += lottery(i, row);
    }
    return total;
  }

  GradientEstimate gradient(const FractionalPoint& x) const {
    GradientEstimate out;
    out.g = FractionalPoint(num_bidders, num_items);
    out.mode = GradientMode::Exact;
    std::vector<double> row(num_items);
    for (int i = 0; i < num_bidders; ++i) {
      for (int j = 0; j < num_items; ++j) row[j] = 1.0 - std::exp(-x.at(i, j));
      for (int j = 0; j < num_items; ++j) {
        const double saved = row[j];
        row[j] = 1.0;
        const double with_item = lottery(i, row);
        row[j] = 0.0;
        const double without_item = lottery(i, row);
        row[j] = saved;
        out.g.at(i, j) = std::exp(-x.at(i, j)) * (with_item - without_item);
      }
    }
    return out;
  }
};

// Value lookups that fall back to the oracle when the item count makes
// tables infeasible.
struct ValueLookup {
  const AuctionInstance* instance;
  std::optional<RowTables> tables;

  explicit ValueLookup(const AuctionInstance& inst) : instance(&inst) {
    if (inst.num_items <= 20) tables.emplace(inst);
  }

  double value(int bidder, ItemSet s) const {
    if (tables) return tables->values[bidder][s];
    return instance->valuations[bidder].value(s);
  }
};

}  // namespace wmrs::detail
