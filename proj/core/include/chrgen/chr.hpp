#pragma once

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "chrgen/program.hpp"
#include "chrgen/rule.hpp"
#include "chrgen/store.hpp"

namespace chrgen {

/// A rule in CHR shape: head atoms, guard and body. A splitting body holds
/// the two disjuncts; a failure body is empty.
struct ChrRule {
  RuleKind kind = RuleKind::Propagation;
  Constraints head;
  Constraints guard;
  Constraints body;
};

struct EncodingError : std::runtime_error {
  EncodingError(const std::string& message, Rule rule)
      : std::runtime_error(message), rule(std::move(rule)) {}
  Rule rule;
};

std::set<Relation> all_relations();

/// Inlines the lhs equalities into both sides and moves the remaining lhs
/// primitives into the guard. Returns nullopt when the lhs equalities do not
/// unify (the rule can never fire). Throws EncodingError for an lhs
/// primitive that is neither an equality nor in `builtins`.
std::optional<ChrRule> direct_form(const Rule& rule, const std::set<Relation>& builtins);

/// The rule that direct_form() encodes, guard back in the lhs.
Rule to_rule(const ChrRule& r);

std::string to_string(const ChrRule& r);

struct EmitResult {
  std::string text;
  std::vector<ChrRule> rules;
  std::vector<std::string> warnings;
};

/// CHR source for `rules`, one rule per line after the `header` comment
/// lines (each printed behind "% ").
EmitResult emit(const RuleSet& rules, const std::set<Relation>& builtins,
                const std::vector<std::string>& header = {});

struct StepLimitExceeded : std::runtime_error {
  explicit StepLimitExceeded(std::size_t steps)
      : std::runtime_error("CHR run exceeded " + std::to_string(steps) + " rule applications") {}
};

/// A final state of a CHR run: the remaining user constraints and the
/// built-in store.
struct ChrLeaf {
  Constraints user;
  Store store;

  /// User constraints and simplified store, variables resolved.
  Constraints constraints() const;
};

struct ChrRun {
  std::vector<ChrLeaf> leaves;  // consistent final states only
  std::size_t steps = 0;
};

/// Applies `rules` (lhs = head atoms plus guard) to `goal` until no rule
/// fires. A propagation rule fires at most once per rule and tuple of
/// constraints; a splitting rule forks the state. Throws StepLimitExceeded
/// after `step_limit` applications over all branches.
ChrRun run(const RuleSet& rules, const Goal& goal, std::size_t step_limit = 10000);

}  // namespace chrgen
