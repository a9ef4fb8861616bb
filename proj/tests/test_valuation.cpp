#include "wmrs/valuation.hpp"

#include <cmath>
#include <vector>

#include "doctest.h"
#include "wmrs/corpus.hpp"
#include "wmrs/rng.hpp"

using namespace wmrs;

namespace {

WMRSValuation two_component_valuation() {
  return WMRSValuation(3, {{1.0, MatroidSpec::uniform(3, 2)},
                           {0.5, MatroidSpec::partition({{0}, {1, 2}}, {1, 1})}});
}

}  // namespace

TEST_CASE("value sums weighted ranks") {
  WMRSValuation v(3, {{2.0, MatroidSpec::uniform(3, 1)}});
  CHECK(v.value(0b101) == doctest::Approx(2.0));
  CHECK(v.value(0) == 0.0);
  CHECK(two_component_valuation().value(0b110) == doctest::Approx(2.5));
}

TEST_CASE("ground_value") {
  WMRSValuation v(3, {{1.0, MatroidSpec::uniform(3, 2)}});
  CHECK(v.ground_value() == doctest::Approx(2.0));
  CHECK(WMRSValuation::zero(4).ground_value() == 0.0);
  CHECK(two_component_valuation().ground_value() == doctest::Approx(3.0));
}

TEST_CASE("valuation construction validation") {
  CHECK_THROWS_AS(WMRSValuation(3, {{-1.0, MatroidSpec::uniform(3, 1)}}), ValidationError);
  CHECK_THROWS_AS(WMRSValuation(3, {{1.0, MatroidSpec::uniform(4, 1)}}), ValidationError);
  CHECK_THROWS_AS(WMRSValuation(0, {}), ValidationError);
}

TEST_CASE("exact lottery value") {
  WMRSValuation v(2, {{1.0, MatroidSpec::uniform(2, 1)}});
  std::vector<double> ones{1.0, 1.0}, zeros{0.0, 0.0}, half{0.5, 0.5};
  CHECK(exact_lottery_value(v, ones) == doctest::Approx(v.ground_value()));
  CHECK(exact_lottery_value(v, zeros) == 0.0);
  CHECK(exact_lottery_value(v, half) == doctest::Approx(0.75));

  std::vector<double> bad{0.5};
  CHECK_THROWS_AS(exact_lottery_value(v, bad), ValidationError);
  std::vector<double> out_of_range{0.5, 1.5};
  CHECK_THROWS_AS(exact_lottery_value(v, out_of_range), ValidationError);

  WMRSValuation big(21, {{1.0, MatroidSpec::uniform(21, 2)}});
  std::vector<double> p21(21, 0.5);
  CHECK_THROWS_AS(exact_lottery_value(big, p21), BudgetError);
}

TEST_CASE("sampled lottery value on degenerate probabilities is exact") {
  WMRSValuation v(3, {{1.5, MatroidSpec::uniform(3, 2)}});
  std::vector<double> ones{1.0, 1.0, 1.0}, zeros{0.0, 0.0, 0.0};
  auto at_ones = sampled_lottery_value(v, ones, 1000, 42);
  CHECK(at_ones.estimate == doctest::Approx(v.ground_value()));
  CHECK(at_ones.std_error == 0.0);
  auto at_zeros = sampled_lottery_value(v, zeros, 1000, 42);
  CHECK(at_zeros.estimate == 0.0);
  CHECK(at_zeros.std_error == 0.0);
}

TEST_CASE("sampled lottery value is deterministic given the seed") {
  WMRSValuation v(2, {{1.0, MatroidSpec::uniform(2, 1)}});
  std::vector<double> half{0.5, 0.5};
  auto a = sampled_lottery_value(v, half, 50000, 9);
  auto b = sampled_lottery_value(v, half, 50000, 9);
  CHECK(a.estimate == b.estimate);
  CHECK(a.std_error == b.std_error);
  auto c = sampled_lottery_value(v, half, 50000, 10);
  CHECK(a.estimate != c.estimate);
}

TEST_CASE("sampled lottery value converges to the exact value") {
  WMRSValuation v(2, {{1.0, MatroidSpec::uniform(2, 1)}});
  std::vector<double> half{0.5, 0.5};
  auto s = sampled_lottery_value(v, half, 100000, 1234);
  CHECK(std::abs(s.estimate - 0.75) <= 4.0 * s.std_error);
}

TEST_CASE("sampled lottery value tracks the exact oracle over random instances") {
  Rng rng(2026);
  int within = 0;
  const int kInstances = 50;
  for (int t = 0; t < kInstances; ++t) {
    auto v = random_valuation(rng, /*num_items=*/1 + rng.next_index(4));
    std::vector<double> probs(v.num_items());
    for (auto& p : probs) p = rng.next_double();
    const double exact = exact_lottery_value(v, probs);
    auto s = sampled_lottery_value(v, probs, 20000, rng.next_u64());
    if (std::abs(s.estimate - exact) <= 5.0 * std::max(s.std_error, 1e-12)) ++within;
  }
  CHECK(within >= kInstances - 1);
}

TEST_CASE("every WMRS valuation is monotone and submodular") {
  Rng rng(11);
  for (int t = 0; t < 12; ++t) {
    auto v = random_valuation(rng, 1 + rng.next_index(5));
    const int m = v.num_items();
    const ItemSet all = full_set(m);
    std::vector<double> table(1ULL << m);
    for (ItemSet s = 0; s <= all; ++s) table[s] = v.value(s);
    for (ItemSet s = 0; s <= all; ++s) {
      for (int e = 0; e < m; ++e) {
        if (set_contains(s, e)) continue;
        REQUIRE(table[s | (1ULL << e)] >= table[s] - 1e-12);
        for (int f = 0; f < m; ++f) {
          if (f == e || set_contains(s, f)) continue;
          // Marginal of e shrinks when f is added first.
          REQUIRE(table[s | (1ULL << e)] - table[s] >=
                  table[s | (1ULL << e) | (1ULL << f)] - table[s | (1ULL << f)] - 1e-9);
        }
      }
    }
  }
}

TEST_CASE("with_bidder_removed zeroes one row and keeps indexing") {
  AuctionInstance inst(2, {two_component_valuation().num_items() == 2
                               ? two_component_valuation()
                               : WMRSValuation(2, {{1.0, MatroidSpec::uniform(2, 1)}}),
                           WMRSValuation(2, {{2.0, MatroidSpec::uniform(2, 2)}})});
  auto removed = inst.with_bidder_removed(1);
  CHECK(removed.num_bidders() == 2);
  CHECK(removed.valuations[1].is_zero());
  CHECK(removed.valuations[0] == inst.valuations[0]);
  CHECK_THROWS_AS(inst.with_bidder_removed(2), ValidationError);
}
