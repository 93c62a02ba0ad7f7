#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "chrgen/constraint.hpp"

namespace chrgen {

enum class RuleKind { Failure, Propagation, Splitting, Simplification };

std::string_view to_string(RuleKind kind);
std::optional<RuleKind> rule_kind_from_name(std::string_view name);

/// lhs ⇒ rhs. A failure rule has an empty rhs; a splitting rule has exactly
/// two primitive disjuncts in rhs.
struct Rule {
  RuleKind kind = RuleKind::Propagation;
  Constraints lhs;
  Constraints rhs;
  /// Goal evaluations that established the rule, one line each.
  std::vector<std::string> justification;
};

using RuleSet = std::vector<Rule>;

/// Same rule up to variable renaming and constraint order.
std::string canonical_key(const Rule& rule);
bool same_rule(const Rule& a, const Rule& b);

/// Renames variables whose display name is unusable or ambiguous to _1, _2, ...
Rule printable(const Rule& rule);

/// One rule in text form, e.g. `append(X,Y,Z), Y = [] ==> X = Z.`
/// Variables without a usable name are printed as _1, _2, ...
std::string to_string(const Rule& rule);

/// Text format: one rule per line.
std::string format_rules(const RuleSet& rules);
/// Machine format: a JSON document with one record per rule.
std::string format_rules_json(const RuleSet& rules, std::string_view generator);

/// Reads either format; JSON is recognised by a leading '{'. The text reader
/// also accepts guarded rules (`H <=> G | B.`) and skips `:-` directives, so
/// emitted CHR files can be read back.
RuleSet parse_rules(std::string_view text);

}  // namespace chrgen
