#pragma once

#include <cstdint>

#include "wmrs/matroid.hpp"

namespace wmrs {

// Exact integer sum of rank(S) over every subset of the ground set.
// Refuses ground sets larger than 16 elements.
std::uint64_t rank_sum_over_subsets(const MatroidSpec& spec);

// Expected rank of a uniformly random subset. The rank sum is integral and
// the divisor is a power of two, so the result is exact in a double.
double avg_rank_exact(const MatroidSpec& spec);

// Number of perfect matchings of g, extracted from the average rank of the
// pair construction: every subset has rank min(|S|, 2k) except the matched
// pair unions, each short by exactly one, so the deficit of the rank sum
// against the free count equals the matching count. Integer arithmetic
// throughout; an out-of-range result signals a rank-oracle bug.
std::int64_t count_matchings_via_rank(const Graph& g);

// Independent oracle: exhaustive scan of edge subsets covering every vertex
// exactly once. Refuses more than 24 edges.
std::int64_t count_matchings_direct(const Graph& g);

}  // namespace wmrs
