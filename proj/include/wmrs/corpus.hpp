#pragma once

#include <vector>

#include "wmrs/rng.hpp"
#include "wmrs/valuation.hpp"

namespace wmrs {

// Seeded generators for desk-scale random inputs. Used by the verification
// suite and by tests; deterministic given the stream.
MatroidSpec random_matroid(Rng& rng, int ground_size);
WMRSValuation random_valuation(Rng& rng, int num_items);
AuctionInstance random_instance(Rng& rng, int max_bidders, int max_items);

// Fixed matroid corpus for axiom verification: at least 20 specs across all
// variants with ground size <= 8, plus the pair constructions from the
// 4-cycle and K4.
std::vector<MatroidSpec> verification_matroid_corpus();

// Fixed desk-scale auction corpus (bidders, items <= 3) for the invariant
// suites, including degenerate and symmetric cases.
std::vector<AuctionInstance> verification_instance_corpus();

}  // namespace wmrs
