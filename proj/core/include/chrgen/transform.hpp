#pragma once

#include <string>
#include <vector>

#include "chrgen/miner.hpp"

namespace chrgen {

/// One candidate E tried for a propagation rule C ⇒ D.
struct TransformAttempt {
  std::size_t rule = 0;  // index into the input rule set
  Constraints e;
  bool accepted = false;
  /// "valid", "contains base", "does not imply lhs", "depth exceeded" or
  /// "dnf blowup".
  std::string reason;
};

struct TransformResult {
  RuleSet rules;
  std::vector<TransformAttempt> log;
  MinerStats stats;
};

/// Rewrites each propagation rule C ⇒ D into C ⇔ D ∪ E for the smallest
/// proper subset E of C not containing all of `base` such that D ∪ E ⇒ C is
/// valid (equal sizes: first in the order of C). Rules without such an E,
/// and all other kinds of rules, are kept unchanged.
TransformResult to_simplification(const RuleSet& rules, const Goal& base, const Program& program,
                                  const MinerOptions& options = {});

std::string to_string(const TransformAttempt& attempt, const RuleSet& rules);

}  // namespace chrgen
