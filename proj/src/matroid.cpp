#include "wmrs/matroid.hpp"

#include <algorithm>
#include <sstream>

namespace wmrs {

namespace {

int find_root(std::vector<int>& parent, int v) {
  while (parent[v] != v) {
    parent[v] = parent[parent[v]];
    v = parent[v];
  }
  return v;
}

std::string set_to_string(ItemSet s) {
  std::ostringstream out;
  out << "{";
  bool first = true;
  for (int e = 0; e < 64; ++e) {
    if (!set_contains(s, e)) continue;
    if (!first) out << ",";
    out << e;
    first = false;
  }
  out << "}";
  return out.str();
}

void require_ground_size(int ground_size) {
  if (ground_size < 0 || ground_size > 64)
    throw ValidationError("matroid: ground size must be in [0, 64]");
}

}  // namespace

void validate_graph(const Graph& g, bool forbid_self_loops) {
  if (g.num_vertices < 0) throw ValidationError("graph: negative vertex count");
  for (const auto& [u, v] : g.edges) {
    if (u < 0 || v < 0 || u >= g.num_vertices || v >= g.num_vertices)
      throw ValidationError("graph: edge endpoint out of range");
    if (forbid_self_loops && u == v) throw ValidationError("graph: self-loop");
  }
}

MatroidSpec MatroidSpec::uniform(int ground_size, int k) {
  require_ground_size(ground_size);
  if (k < 0 || k > ground_size)
    throw ValidationError("uniform matroid: k must be in [0, ground_size]");
  return MatroidSpec(Uniform{ground_size, k});
}

MatroidSpec MatroidSpec::partition(const std::vector<std::vector<int>>& blocks,
                                   const std::vector<int>& capacities) {
  if (blocks.size() != capacities.size())
    throw ValidationError("partition matroid: one capacity per block required");
  int ground_size = 0;
  for (const auto& b : blocks) ground_size += static_cast<int>(b.size());
  require_ground_size(ground_size);

  Partition p;
  p.ground_size = ground_size;
  p.blocks = blocks;
  p.capacities = capacities;
  ItemSet seen = 0;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    ItemSet mask = 0;
    for (int e : blocks[b]) {
      if (e < 0 || e >= ground_size)
        throw ValidationError("partition matroid: element out of range");
      if (set_contains(seen, e))
        throw ValidationError("partition matroid: blocks are not disjoint");
      seen |= 1ULL << e;
      mask |= 1ULL << e;
    }
    if (capacities[b] < 0 || capacities[b] > static_cast<int>(blocks[b].size()))
      throw ValidationError("partition matroid: capacity must be in [0, block size]");
    p.block_masks.push_back(mask);
  }
  if (seen != full_set(ground_size))
    throw ValidationError("partition matroid: blocks must cover the ground set");
  return MatroidSpec(std::move(p));
}

MatroidSpec MatroidSpec::graphic(Graph g) {
  validate_graph(g, /*forbid_self_loops=*/false);
  require_ground_size(g.num_edges());
  return MatroidSpec(Graphic{std::move(g)});
}

MatroidSpec MatroidSpec::paving_from_graph(Graph membership_graph) {
  validate_graph(membership_graph);
  if (membership_graph.num_vertices % 2 != 0)
    throw ValidationError("paving matroid: membership graph needs an even vertex count");
  if (membership_graph.num_vertices < 2)
    throw ValidationError("paving matroid: membership graph needs at least 2 vertices");
  const int m = membership_graph.num_edges();
  if (m < 1) throw ValidationError("paving matroid: membership graph needs at least one edge");
  if (m > 16) throw ValidationError("paving matroid: at most 16 pairs supported");
  Paving p;
  p.num_pairs = m;
  p.k = membership_graph.num_vertices / 2;
  p.membership_graph = std::move(membership_graph);
  return MatroidSpec(std::move(p));
}

MatroidSpec MatroidSpec::paving_explicit(int num_pairs, int k, std::vector<ItemSet> family) {
  if (num_pairs < 1 || num_pairs > 16)
    throw ValidationError("paving matroid: num_pairs must be in [1, 16]");
  if (k < 1) throw ValidationError("paving matroid: k must be at least 1");
  for (ItemSet f : family) {
    if (f & ~full_set(num_pairs))
      throw ValidationError("paving matroid: family member outside pair index range");
    if (set_size(f) != k)
      throw ValidationError("paving matroid: family members must have exactly k pairs");
  }
  std::sort(family.begin(), family.end());
  family.erase(std::unique(family.begin(), family.end()), family.end());
  Paving p;
  p.num_pairs = num_pairs;
  p.k = k;
  p.family = std::move(family);
  return MatroidSpec(std::move(p));
}

MatroidSpec MatroidSpec::explicit_family(int ground_size, std::vector<ItemSet> independent_sets) {
  require_ground_size(ground_size);
  for (ItemSet s : independent_sets) {
    if (s & ~full_set(ground_size))
      throw ValidationError("explicit matroid: independent set outside ground set");
  }
  std::sort(independent_sets.begin(), independent_sets.end());
  independent_sets.erase(std::unique(independent_sets.begin(), independent_sets.end()),
                         independent_sets.end());
  return MatroidSpec(Explicit{ground_size, std::move(independent_sets)});
}

int MatroidSpec::ground_size() const {
  return std::visit(
      [](const auto& d) -> int {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, Uniform>) return d.ground_size;
        if constexpr (std::is_same_v<T, Partition>) return d.ground_size;
        if constexpr (std::is_same_v<T, Graphic>) return d.graph.num_edges();
        if constexpr (std::is_same_v<T, Paving>) return 2 * d.num_pairs;
        if constexpr (std::is_same_v<T, Explicit>) return d.ground_size;
      },
      data_);
}

std::string MatroidSpec::kind_name() const {
  return std::visit(
      [](const auto& d) -> std::string {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, Uniform>) return "uniform";
        if constexpr (std::is_same_v<T, Partition>) return "partition";
        if constexpr (std::is_same_v<T, Graphic>) return "graphic";
        if constexpr (std::is_same_v<T, Paving>) return "paving";
        if constexpr (std::is_same_v<T, Explicit>) return "explicit";
      },
      data_);
}

int MatroidSpec::rank(ItemSet subset) const {
  if (subset & ~full_set(ground_size()))
    throw ValidationError("rank: element index out of range");

  if (const auto* u = std::get_if<Uniform>(&data_)) {
    return std::min(set_size(subset), u->k);
  }

  if (const auto* p = std::get_if<Partition>(&data_)) {
    int r = 0;
    for (std::size_t b = 0; b < p->block_masks.size(); ++b)
      r += std::min(set_size(subset & p->block_masks[b]), p->capacities[b]);
    return r;
  }

  if (const auto* g = std::get_if<Graphic>(&data_)) {
    std::vector<int> parent(g->graph.num_vertices);
    for (int v = 0; v < g->graph.num_vertices; ++v) parent[v] = v;
    int r = 0;
    for (int e = 0; e < g->graph.num_edges(); ++e) {
      if (!set_contains(subset, e)) continue;
      const auto& [a, b] = g->graph.edges[e];
      int ra = find_root(parent, a);
      int rb = find_root(parent, b);
      if (ra != rb) {
        parent[ra] = rb;
        ++r;
      }
    }
    return r;
  }

  if (const auto* p = std::get_if<Paving>(&data_)) {
    const int size = set_size(subset);
    const int two_k = 2 * p->k;
    if (size != two_k) return std::min(size, two_k);
    // |S| = 2k: rank drops to 2k-1 exactly when S is a union of pairs whose
    // index set lies in the forbidden family.
    ItemSet pair_indices = 0;
    for (int i = 0; i < p->num_pairs; ++i) {
      const unsigned bits = (subset >> (2 * i)) & 3ULL;
      if (bits == 3ULL) pair_indices |= 1ULL << i;
      else if (bits != 0ULL) return two_k;  // not a union of pairs
    }
    bool forbidden;
    if (p->membership_graph) {
      const Graph& mg = *p->membership_graph;
      std::vector<int> degree(mg.num_vertices, 0);
      for (int i = 0; i < p->num_pairs; ++i) {
        if (!set_contains(pair_indices, i)) continue;
        ++degree[mg.edges[i].first];
        ++degree[mg.edges[i].second];
      }
      forbidden = std::all_of(degree.begin(), degree.end(), [](int d) { return d == 1; });
    } else {
      forbidden = std::binary_search(p->family.begin(), p->family.end(), pair_indices);
    }
    return forbidden ? two_k - 1 : two_k;
  }

  const auto& ex = std::get<Explicit>(data_);
  int best = 0;
  for (ItemSet ind : ex.independent_sets) {
    if ((ind & subset) == ind) best = std::max(best, set_size(ind));
  }
  return best;
}

AxiomReport check_matroid_axioms(const MatroidSpec& spec) {
  const int n = spec.ground_size();
  if (n > 16)
    throw BudgetError("check_matroid_axioms: ground size above 16 not supported");

  auto fail = [](std::string axiom, ItemSet a, ItemSet b, std::string detail) {
    AxiomReport report;
    report.pass = false;
    report.violation = AxiomViolation{std::move(axiom), a, b, std::move(detail)};
    return report;
  };

  const std::size_t count = 1ULL << n;
  std::vector<std::uint8_t> r(count);
  for (std::size_t s = 0; s < count; ++s) r[s] = static_cast<std::uint8_t>(spec.rank(s));

  if (r[0] != 0) return fail("empty_rank", 0, 0, "r(empty) != 0");

  for (std::size_t s = 0; s < count; ++s) {
    if (r[s] > set_size(s))
      return fail("rank_bound", s, 0, "r" + set_to_string(s) + " exceeds |S|");
    for (int e = 0; e < n; ++e) {
      if (set_contains(s, e)) continue;
      const std::size_t t = s | (1ULL << e);
      if (r[t] < r[s])
        return fail("monotonicity", s, t,
                    "r" + set_to_string(t) + " < r" + set_to_string(s));
      if (r[t] > r[s] + 1)
        return fail("unit_increment", s, t,
                    "r" + set_to_string(t) + " > r" + set_to_string(s) + " + 1");
    }
  }

  if (const auto* ex = std::get_if<MatroidSpec::Explicit>(&spec.data())) {
    const auto& family = ex->independent_sets;
    auto member = [&](ItemSet s) {
      return std::binary_search(family.begin(), family.end(), s);
    };
    if (!member(0)) return fail("family_empty_set", 0, 0, "family does not contain the empty set");
    for (ItemSet ind : family) {
      for (int e = 0; e < n; ++e) {
        if (!set_contains(ind, e)) continue;
        if (!member(ind & ~(1ULL << e)))
          return fail("downward_closure", ind, ind & ~(1ULL << e),
                      set_to_string(ind & ~(1ULL << e)) + " missing below " + set_to_string(ind));
      }
    }
    for (ItemSet a : family) {
      for (ItemSet b : family) {
        if (set_size(a) >= set_size(b)) continue;
        bool extended = false;
        for (int e = 0; e < n && !extended; ++e) {
          if (set_contains(b, e) && !set_contains(a, e) && member(a | (1ULL << e)))
            extended = true;
        }
        if (!extended)
          return fail("exchange", a, b,
                      "no element of " + set_to_string(b) + " extends " + set_to_string(a));
      }
    }
  }

  for (std::size_t a = 0; a < count; ++a) {
    for (std::size_t b = a; b < count; ++b) {
      if (r[a] + r[b] < r[a | b] + r[a & b])
        return fail("submodularity", a, b,
                    "r" + set_to_string(a) + " + r" + set_to_string(b) + " < r(union) + r(intersection)");
    }
  }

  return AxiomReport{};
}

}  // namespace wmrs
