#include "wmrs/extension.hpp"

#include <cmath>
#include <span>

#include "wmrs/rng.hpp"

namespace wmrs {

namespace {

void require_shape(const AuctionInstance& instance, const FractionalPoint& p,
                   const char* where) {
  if (p.num_bidders != instance.num_bidders() || p.num_items != instance.num_items)
    throw ValidationError(std::string(where) + ": point shape does not match the instance");
}

void require_enumerable(const AuctionInstance& instance, const char* where) {
  if (instance.num_items > 20)
    throw BudgetError(std::string(where) + ": more than 20 items");
}

}  // namespace

bool FractionalPoint::in_polytope(double tol) const {
  for (double v : cells)
    if (!(v >= -tol && v <= 1.0 + tol)) return false;
  for (int j = 0; j < num_items; ++j) {
    double col = 0.0;
    for (int i = 0; i < num_bidders; ++i) col += at(i, j);
    if (col > 1.0 + tol) return false;
  }
  return true;
}

double exact_F(const AuctionInstance& instance, const FractionalPoint& y) {
  require_shape(instance, y, "exact_F");
  require_enumerable(instance, "exact_F");
  const int m = instance.num_items;
  double total = 0.0;
  for (int i = 0; i < instance.num_bidders(); ++i) {
    std::span<const double> row(y.cells.data() + static_cast<std::size_t>(i) * m, m);
    total += exact_lottery_value(instance.valuations[i], row);
  }
  return total;
}

double exact_Fexp(const AuctionInstance& instance, const FractionalPoint& x) {
  require_shape(instance, x, "exact_Fexp");
  FractionalPoint y(x.num_bidders, x.num_items);
  for (std::size_t c = 0; c < x.cells.size(); ++c) y.cells[c] = 1.0 - std::exp(-x.cells[c]);
  return exact_F(instance, y);
}

GradientEstimate exact_grad_Fexp(const AuctionInstance& instance, const FractionalPoint& x) {
  require_shape(instance, x, "exact_grad_Fexp");
  require_enumerable(instance, "exact_grad_Fexp");
  const int n = instance.num_bidders();
  const int m = instance.num_items;

  GradientEstimate out;
  out.g = FractionalPoint(n, m);
  out.mode = GradientMode::Exact;
  out.claimed_error = 0.0;

  std::vector<double> row(m);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) row[j] = 1.0 - std::exp(-x.at(i, j));
    for (int j = 0; j < m; ++j) {
      const double saved = row[j];
      row[j] = 1.0;
      const double with_item = exact_lottery_value(instance.valuations[i], row);
      row[j] = 0.0;
      const double without_item = exact_lottery_value(instance.valuations[i], row);
      row[j] = saved;
      out.g.at(i, j) = std::exp(-x.at(i, j)) * (with_item - without_item);
    }
  }
  return out;
}

std::int64_t gradient_sample_count(int num_bidders, int num_items, double target_delta,
                                   double eta) {
  if (!(target_delta > 0.0)) throw ValidationError("gradient samples: target_delta must be positive");
  if (!(eta > 0.0 && eta < 1.0)) throw ValidationError("gradient samples: eta must be in (0, 1)");
  const double n = std::log(2.0 * num_bidders * num_items / eta) / (2.0 * target_delta * target_delta);
  return static_cast<std::int64_t>(std::ceil(n));
}

GradientEstimate sampled_grad_Fexp(const AuctionInstance& instance, const FractionalPoint& x,
                                   double target_delta, double singleton_max, double eta,
                                   std::uint64_t seed) {
  require_shape(instance, x, "sampled_grad_Fexp");
  const int n = instance.num_bidders();
  const int m = instance.num_items;
  const std::int64_t samples = gradient_sample_count(n, m, target_delta, eta);

  GradientEstimate out;
  out.g = FractionalPoint(n, m);
  out.mode = GradientMode::Sampled;
  out.claimed_error = target_delta * singleton_max;

  std::vector<double> row(m);
  for (int i = 0; i < n; ++i) {
    const auto& v = instance.valuations[i];
    for (int j = 0; j < m; ++j) row[j] = 1.0 - std::exp(-x.at(i, j));
    for (int j = 0; j < m; ++j) {
      Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i) * m + j));
      double sum = 0.0;
      for (std::int64_t s = 0; s < samples; ++s) {
        ItemSet drawn = 0;
        for (int l = 0; l < m; ++l)
          if (rng.bernoulli(row[l])) drawn |= 1ULL << l;
        // Marginal of item j; independent of whether j itself was drawn.
        sum += v.value(drawn | (1ULL << j)) - v.value(drawn & ~(1ULL << j));
      }
      out.g.at(i, j) = std::exp(-x.at(i, j)) * (sum / static_cast<double>(samples));
    }
  }
  return out;
}

}  // namespace wmrs
