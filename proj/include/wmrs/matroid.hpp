#pragma once

#include <bit>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "wmrs/errors.hpp"

namespace wmrs {

// Subsets of a ground set of at most 64 elements, as bit patterns.
using ItemSet = std::uint64_t;

inline int set_size(ItemSet s) { return std::popcount(s); }
inline ItemSet full_set(int n) { return n >= 64 ? ~0ULL : ((1ULL << n) - 1ULL); }
inline bool set_contains(ItemSet s, int e) { return (s >> e) & 1ULL; }

// Undirected graph on vertices 0..num_vertices-1.
struct Graph {
  int num_vertices = 0;
  std::vector<std::pair<int, int>> edges;

  int num_edges() const { return static_cast<int>(edges.size()); }
  bool operator==(const Graph&) const = default;
};

void validate_graph(const Graph& g, bool forbid_self_loops = true);

// Rank oracle over one of five matroid classes. Pure and read-only after
// construction; rank() may be called concurrently.
class MatroidSpec {
 public:
  struct Uniform {
    int ground_size = 0;
    int k = 0;
    bool operator==(const Uniform&) const = default;
  };
  struct Partition {
    int ground_size = 0;
    std::vector<std::vector<int>> blocks;
    std::vector<int> capacities;
    std::vector<ItemSet> block_masks;  // derived from blocks
    bool operator==(const Partition&) const = default;
  };
  struct Graphic {
    Graph graph;  // one ground element per edge
    bool operator==(const Graphic&) const = default;
  };
  // Ground set of 2*num_pairs elements partitioned into pairs {2i, 2i+1}.
  // A set of size 2k that is a union of k pairs whose index set lies in the
  // forbidden family has rank 2k-1; every other set has rank min(|S|, 2k).
  // The family is given either as the perfect matchings of membership_graph
  // (tested by membership, never enumerated) or as an explicit list of
  // pair-index masks (testing only).
  struct Paving {
    int num_pairs = 0;
    int k = 0;
    std::optional<Graph> membership_graph;
    std::vector<ItemSet> family;  // sorted pair-index masks, when no graph
    bool operator==(const Paving&) const = default;
  };
  struct Explicit {
    int ground_size = 0;
    std::vector<ItemSet> independent_sets;  // sorted; validity is not checked
    bool operator==(const Explicit&) const = default;
  };

  using Data = std::variant<Uniform, Partition, Graphic, Paving, Explicit>;

  static MatroidSpec uniform(int ground_size, int k);
  static MatroidSpec partition(const std::vector<std::vector<int>>& blocks,
                               const std::vector<int>& capacities);
  static MatroidSpec graphic(Graph g);
  static MatroidSpec paving_from_graph(Graph membership_graph);
  static MatroidSpec paving_explicit(int num_pairs, int k, std::vector<ItemSet> family);
  static MatroidSpec explicit_family(int ground_size, std::vector<ItemSet> independent_sets);

  int ground_size() const;
  std::string kind_name() const;
  const Data& data() const { return data_; }

  // Rank of the given subset. Bits outside the ground set are a domain error.
  int rank(ItemSet subset) const;

  bool operator==(const MatroidSpec&) const = default;

 private:
  explicit MatroidSpec(Data data) : data_(std::move(data)) {}
  Data data_;
};

struct AxiomViolation {
  std::string axiom;
  ItemSet set_a = 0;
  ItemSet set_b = 0;
  std::string detail;
};

struct AxiomReport {
  bool pass = true;
  std::optional<AxiomViolation> violation;
};

// Exhaustive rank-axiom check: empty rank, monotone unit increments, and
// submodularity over all pairs of subsets. Explicit specs additionally get
// their family checked for the empty set, downward closure and exchange.
// Refuses ground sets larger than 16 elements.
AxiomReport check_matroid_axioms(const MatroidSpec& spec);

}  // namespace wmrs
