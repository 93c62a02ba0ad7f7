#pragma once

#include <string>
#include <vector>

#include "chrgen/program.hpp"
#include "chrgen/rule.hpp"
#include "chrgen/tabling.hpp"

namespace chrgen {

struct MinerOptions {
  int depth = 200;
  bool tabling = true;
  std::size_t node_budget = 200000;
  /// Skip C ∪ {not d} ⇒ false once C ⇒ d is known.
  bool opt1 = true;
  /// Skip every lhs containing C ∪ {d} once C ⇒ d is known.
  bool opt2 = true;
  /// Reuse the verdict of a goal evaluated before (one failed goal
  /// C ∪ {d1, not d2} justifies both C ∪ {d1} ⇒ d2 and C ∪ {not d2} ⇒ not d1).
  bool opt3 = true;
  std::size_t dnf_cap = kDefaultDnfCap;
  std::size_t answers_cap = 64;
  unsigned jobs = 1;
};

struct MinerStats {
  std::size_t evaluations = 0;
  std::size_t depth_exceeded = 0;
  std::size_t cache_hits = 0;
  std::size_t skipped_opt1 = 0;
  std::size_t skipped_opt2 = 0;
  std::size_t skipped_redundant = 0;
  /// Goals not evaluated because their primitive constraints are unsatisfiable.
  std::size_t unsat_goals = 0;
  std::size_t blowups = 0;
  std::vector<std::string> evaluated_goals;
  std::vector<std::string> depth_exceeded_goals;

  void merge(const MinerStats& other);
};

struct MineResult {
  RuleSet rules;
  MinerStats stats;
};

/// Failure and primitive propagation rules base ∪ C ⇒ {d...} for subsets C
/// of cand_lhs and d in cand_rhs, validated by finite failure of
/// base ∪ C ∪ {not d}. Requires a primitive cand_rhs.
MineResult mine_primitive(const Program& program, const CandidateSpec& spec,
                          const MinerOptions& options = {});

/// Splitting rules base ∪ C ⇒ d1 ∨ d2, validated by failure of
/// base ∪ C ∪ {not d1, not d2}. Pairs already implied through `prior` are
/// skipped without evaluation.
MineResult mine_splitting(const Program& program, const CandidateSpec& spec, const RuleSet& prior,
                          const MinerOptions& options = {});

/// Propagation rules with arbitrary rhs candidates, validated by comparing
/// the answer sets of base ∪ C and base ∪ C ∪ {d}.
MineResult mine_general(const Program& program, const CandidateSpec& spec,
                        const MinerOptions& options = {});

enum class Mode { Primitive, Splitting, General, All };

/// Runs the miners selected by `mode` and simplifies the result: primitive
/// and general rules first, then splitting rules filtered against them.
MineResult mine(const Program& program, const CandidateSpec& spec, Mode mode,
                const MinerOptions& options = {});

enum class Validity { Valid, Invalid, DepthExceeded, Blowup };
std::string_view to_string(Validity v);

/// Answer-set validity test of lhs ⇒ rhs: the rule holds when
/// (a_1 ∨ … ∨ a_n) ∧ ¬(b_1 ∨ … ∨ b_m) is unsatisfiable, a_i the answers of
/// lhs and b_j those of lhs ∪ rhs.
Validity check_general_rule(const Program& program, const Constraints& lhs, const Constraints& rhs,
                            const MinerOptions& options = {}, MinerStats* stats = nullptr);
/// check_general_rule without rhs locals: the variables of rhs that do not
/// occur in lhs are universally quantified as well.
Validity check_closed_rule(const Program& program, const Constraints& lhs, const Constraints& rhs,
                           const MinerOptions& options = {}, MinerStats* stats = nullptr);

/// Orders rules most general lhs first, simplifies every propagation rhs
/// against the solver and the rules kept before it, and drops rules that
/// become empty or that the kept rules already imply.
RuleSet simplify_ruleset(const RuleSet& rules);

/// User atoms and store obtained from `lhs` by firing `rules` to a fixpoint.
struct RuleContext {
  Constraints atoms;
  std::optional<Store> store;  // nullopt: the context is inconsistent

  bool consistent() const { return store.has_value(); }
  bool entails(const Constraint& c) const;
};
RuleContext saturate(const Constraints& lhs, const RuleSet& rules);

}  // namespace chrgen
