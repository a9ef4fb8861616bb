#include "wmrs/corpus.hpp"

#include <algorithm>
#include <numeric>

namespace wmrs {

namespace {

Graph random_even_graph(Rng& rng, int num_edges) {
  int v = 2 + 2 * rng.next_index(std::max(1, num_edges));
  v = std::min(v, 8);
  Graph g{v, {}};
  for (int e = 0; e < num_edges; ++e) {
    int a = rng.next_index(v);
    int b = rng.next_index(v);
    while (b == a) b = rng.next_index(v);
    g.edges.emplace_back(a, b);
  }
  return g;
}

Graph four_cycle() { return Graph{4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}}}; }

Graph complete_graph(int n) {
  Graph g{n, {}};
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) g.edges.emplace_back(a, b);
  return g;
}

}  // namespace

MatroidSpec random_matroid(Rng& rng, int ground_size) {
  const bool paving_ok = ground_size >= 2 && ground_size % 2 == 0 && ground_size <= 16;
  const int kinds = paving_ok ? 4 : 3;
  switch (rng.next_index(kinds)) {
    case 0:
      return MatroidSpec::uniform(ground_size, rng.next_index(ground_size + 1));
    case 1: {
      // Random ordered split of the ground set into 1..3 blocks.
      std::vector<int> elems(ground_size);
      std::iota(elems.begin(), elems.end(), 0);
      for (int i = ground_size - 1; i > 0; --i)
        std::swap(elems[i], elems[rng.next_index(i + 1)]);
      const int num_blocks = 1 + rng.next_index(std::min(3, ground_size));
      std::vector<std::vector<int>> blocks(num_blocks);
      for (int i = 0; i < ground_size; ++i)
        blocks[i % num_blocks].push_back(elems[i]);
      std::vector<int> caps;
      for (const auto& b : blocks)
        caps.push_back(1 + rng.next_index(static_cast<int>(b.size())));
      return MatroidSpec::partition(blocks, caps);
    }
    case 2: {
      const int v = 2 + rng.next_index(ground_size + 1);
      Graph g{v, {}};
      for (int e = 0; e < ground_size; ++e)
        g.edges.emplace_back(rng.next_index(v), rng.next_index(v));
      return MatroidSpec::graphic(g);
    }
    default:
      return MatroidSpec::paving_from_graph(random_even_graph(rng, ground_size / 2));
  }
}

WMRSValuation random_valuation(Rng& rng, int num_items) {
  const int num_components = 1 + rng.next_index(3);
  std::vector<WeightedMatroid> components;
  for (int c = 0; c < num_components; ++c) {
    const double weight = 0.1 + 1.9 * rng.next_double();
    components.push_back({weight, random_matroid(rng, num_items)});
  }
  return WMRSValuation(num_items, std::move(components));
}

AuctionInstance random_instance(Rng& rng, int max_bidders, int max_items) {
  const int n = 1 + rng.next_index(max_bidders);
  const int m = 1 + rng.next_index(max_items);
  std::vector<WMRSValuation> valuations;
  for (int i = 0; i < n; ++i) valuations.push_back(random_valuation(rng, m));
  return AuctionInstance(m, std::move(valuations));
}

std::vector<MatroidSpec> verification_matroid_corpus() {
  std::vector<MatroidSpec> specs;

  specs.push_back(MatroidSpec::uniform(4, 2));
  specs.push_back(MatroidSpec::uniform(3, 0));
  specs.push_back(MatroidSpec::uniform(6, 6));
  specs.push_back(MatroidSpec::uniform(8, 3));
  specs.push_back(MatroidSpec::uniform(1, 1));

  specs.push_back(MatroidSpec::partition({{0}, {1, 2}}, {1, 1}));
  specs.push_back(MatroidSpec::partition({{0, 1, 2}, {3, 4, 5}}, {2, 1}));
  specs.push_back(MatroidSpec::partition({{0, 3}, {1, 4}, {2, 5}}, {1, 1, 1}));
  specs.push_back(MatroidSpec::partition({{0, 1, 2, 3, 4, 5, 6, 7}}, {4}));

  specs.push_back(MatroidSpec::graphic(Graph{3, {{0, 1}, {1, 2}, {2, 0}}}));
  specs.push_back(MatroidSpec::graphic(four_cycle()));
  specs.push_back(MatroidSpec::graphic(complete_graph(4)));
  specs.push_back(MatroidSpec::graphic(Graph{4, {{0, 1}, {0, 1}, {2, 3}}}));
  specs.push_back(MatroidSpec::graphic(Graph{5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}}}));

  specs.push_back(MatroidSpec::paving_from_graph(four_cycle()));
  specs.push_back(MatroidSpec::paving_from_graph(Graph{4, {{0, 1}, {2, 3}}}));
  specs.push_back(MatroidSpec::paving_from_graph(Graph{2, {{0, 1}, {0, 1}, {0, 1}}}));
  specs.push_back(MatroidSpec::paving_explicit(4, 2, {0b0011, 0b1100}));
  specs.push_back(MatroidSpec::paving_explicit(3, 2, {}));

  specs.push_back(MatroidSpec::explicit_family(3, {0b000, 0b001, 0b010, 0b100, 0b011, 0b101, 0b110}));
  specs.push_back(MatroidSpec::explicit_family(2, {0b00, 0b01, 0b10}));

  Rng rng(20260811);
  for (int t = 0; t < 4; ++t) specs.push_back(random_matroid(rng, 4 + rng.next_index(5)));

  // Pair constructions used by the matching-count pipeline.
  specs.push_back(MatroidSpec::paving_from_graph(complete_graph(4)));  // ground size 12
  return specs;
}

std::vector<AuctionInstance> verification_instance_corpus() {
  std::vector<AuctionInstance> instances;

  // Degenerate: one worthless bidder alongside a real one.
  instances.push_back(AuctionInstance(
      2, {WMRSValuation::zero(2), WMRSValuation(2, {{1.0, MatroidSpec::uniform(2, 1)}})}));

  // Symmetric identical bidders.
  instances.push_back(AuctionInstance(2, {WMRSValuation(2, {{1.0, MatroidSpec::uniform(2, 1)}}),
                                          WMRSValuation(2, {{1.0, MatroidSpec::uniform(2, 1)}})}));

  // Single bidder, single item.
  instances.push_back(AuctionInstance(1, {WMRSValuation(1, {{1.0, MatroidSpec::uniform(1, 1)}})}));

  Rng rng(987654321);
  while (instances.size() < 20) instances.push_back(random_instance(rng, 3, 3));
  return instances;
}

}  // namespace wmrs
