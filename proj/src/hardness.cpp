#include "wmrs/hardness.hpp"

#include <stdexcept>
#include <vector>

namespace wmrs {

std::uint64_t rank_sum_over_subsets(const MatroidSpec& spec) {
  const int n = spec.ground_size();
  if (n > 16) throw BudgetError("rank_sum_over_subsets: ground size above 16");
  std::uint64_t total = 0;
  const ItemSet limit = 1ULL << n;
  for (ItemSet s = 0; s < limit; ++s) total += static_cast<std::uint64_t>(spec.rank(s));
  return total;
}

double avg_rank_exact(const MatroidSpec& spec) {
  const double count = static_cast<double>(1ULL << spec.ground_size());
  return static_cast<double>(rank_sum_over_subsets(spec)) / count;
}

std::int64_t count_matchings_via_rank(const Graph& g) {
  const MatroidSpec spec = MatroidSpec::paving_from_graph(g);
  const int m = g.num_edges();
  if (2 * m > 16)
    throw BudgetError("count_matchings_via_rank: more than 8 edges");
  const int two_k = g.num_vertices;  // 2k with k = num_vertices / 2

  // Rank sum of the same construction with an empty forbidden family.
  const int ground = 2 * m;
  std::vector<std::uint64_t> binomial(ground + 1, 0);
  binomial[0] = 1;
  for (int row = 1; row <= ground; ++row)
    for (int col = row; col >= 1; --col) binomial[col] += binomial[col - 1];
  std::uint64_t free_sum = 0;
  for (int size = 0; size <= ground; ++size)
    free_sum += binomial[size] * static_cast<std::uint64_t>(std::min(size, two_k));

  const std::uint64_t actual = rank_sum_over_subsets(spec);
  if (actual > free_sum)
    throw std::logic_error("count_matchings_via_rank: rank sum exceeds the free construction");
  const std::uint64_t deficit = free_sum - actual;

  std::uint64_t family_cap = 1;  // C(m, k), the largest possible family
  const int k = two_k / 2;
  if (k > m) family_cap = 0;
  else
    for (int r = 1; r <= k; ++r)
      family_cap = family_cap * static_cast<std::uint64_t>(m - k + r) / static_cast<std::uint64_t>(r);
  if (deficit > family_cap)
    throw std::logic_error("count_matchings_via_rank: deficit exceeds the possible family size");
  return static_cast<std::int64_t>(deficit);
}

std::int64_t count_matchings_direct(const Graph& g) {
  validate_graph(g);
  const int m = g.num_edges();
  if (m > 24) throw BudgetError("count_matchings_direct: more than 24 edges");

  std::int64_t count = 0;
  std::vector<int> degree(g.num_vertices);
  const std::uint64_t limit = 1ULL << m;
  for (std::uint64_t mask = 0; mask < limit; ++mask) {
    for (int v = 0; v < g.num_vertices; ++v) degree[v] = 0;
    for (int e = 0; e < m; ++e) {
      if (!((mask >> e) & 1ULL)) continue;
      ++degree[g.edges[e].first];
      ++degree[g.edges[e].second];
    }
    bool perfect = true;
    for (int v = 0; v < g.num_vertices && perfect; ++v) perfect = degree[v] == 1;
    if (perfect) ++count;
  }
  return count;
}

}  // namespace wmrs
