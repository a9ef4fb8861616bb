#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace wmrs {

struct VerifyCheck {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct VerifyReport {
  std::vector<VerifyCheck> checks;
  bool all_pass() const;
};

// Desk-scale invariant suite over the built-in corpus: matroid axioms,
// concavity and gradient-range probes, the ascent guarantees, welfare
// retention of rounding, and the matching-count cross-check.
VerifyReport run_verification_suite(std::uint64_t seed);

}  // namespace wmrs
