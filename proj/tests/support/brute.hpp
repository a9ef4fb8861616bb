#pragma once

// Definition-level brute-force oracles used to cross-check the library.
// These deliberately avoid the library's rank shortcuts: independence is
// tested straight from each matroid class's definition and rank is the size
// of the largest independent subset.

#include <algorithm>
#include <vector>

#include "wmrs/matroid.hpp"

namespace wmrs::brute {

inline bool independent(const MatroidSpec& spec, ItemSet s) {
  if (const auto* u = std::get_if<MatroidSpec::Uniform>(&spec.data()))
    return set_size(s) <= u->k;

  if (const auto* p = std::get_if<MatroidSpec::Partition>(&spec.data())) {
    for (std::size_t b = 0; b < p->block_masks.size(); ++b)
      if (set_size(s & p->block_masks[b]) > p->capacities[b]) return false;
    return true;
  }

  if (const auto* g = std::get_if<MatroidSpec::Graphic>(&spec.data())) {
    // Acyclic iff every connected subgraph on the selected edges is a tree:
    // grow components edge by edge, reject an edge closing a cycle. Uses a
    // plain component-label array rather than union-find.
    std::vector<int> comp(g->graph.num_vertices);
    for (int v = 0; v < g->graph.num_vertices; ++v) comp[v] = v;
    for (int e = 0; e < g->graph.num_edges(); ++e) {
      if (!set_contains(s, e)) continue;
      auto [a, b] = g->graph.edges[e];
      if (comp[a] == comp[b]) return false;
      const int from = comp[a], to = comp[b];
      for (int v = 0; v < g->graph.num_vertices; ++v)
        if (comp[v] == from) comp[v] = to;
    }
    return true;
  }

  if (const auto* p = std::get_if<MatroidSpec::Paving>(&spec.data())) {
    const int size = set_size(s);
    const int two_k = 2 * p->k;
    if (size < two_k) return true;
    if (size > two_k) return false;
    ItemSet pair_indices = 0;
    for (int i = 0; i < p->num_pairs; ++i) {
      const unsigned bits = (s >> (2 * i)) & 3ULL;
      if (bits == 3ULL) pair_indices |= 1ULL << i;
      else if (bits != 0ULL) return true;
    }
    if (p->membership_graph) {
      const Graph& mg = *p->membership_graph;
      std::vector<int> degree(mg.num_vertices, 0);
      for (int i = 0; i < p->num_pairs; ++i) {
        if (!set_contains(pair_indices, i)) continue;
        ++degree[mg.edges[i].first];
        ++degree[mg.edges[i].second];
      }
      for (int d : degree)
        if (d != 1) return true;
      return false;
    }
    return !std::binary_search(p->family.begin(), p->family.end(), pair_indices);
  }

  const auto& ex = std::get<MatroidSpec::Explicit>(spec.data());
  return std::binary_search(ex.independent_sets.begin(), ex.independent_sets.end(), s);
}

// Largest independent subset of s, by enumeration over all subsets of s.
inline int rank(const MatroidSpec& spec, ItemSet s) {
  int best = 0;
  ItemSet sub = s;
  while (true) {
    if (independent(spec, sub)) best = std::max(best, set_size(sub));
    if (sub == 0) break;
    sub = (sub - 1) & s;
  }
  return best;
}

}  // namespace wmrs::brute
