#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "chrgen/program.hpp"
#include "chrgen/rule.hpp"

namespace chrgen {

/// Truth of a ground primitive constraint. Numerals compare by value; other
/// ground terms by the standard term order.
bool ground_holds(Relation rel, const Term& left, const Term& right);

/// Least Herbrand model of a program restricted to a finite universe,
/// computed bottom-up. Works without the constraint store and without
/// resolution so it can serve as an independent reference.
class GroundModel {
 public:
  GroundModel(const Program& program, std::vector<Term> universe);

  /// The constants plus every proper list over them of length <= list_depth.
  static std::vector<Term> make_universe(const std::vector<Term>& constants, int list_depth);

  const std::vector<Term>& universe() const { return universe_; }
  bool in_universe(const Term& t) const { return members_.count(t) > 0; }

  /// Ground tuples of a predicate ("name/arity").
  const std::set<std::vector<Term>>& relation(const std::string& sig) const;
  std::size_t fact_count() const;

  bool holds(const Constraint& ground) const;

  /// Enumerates the assignments over the universe of the variables of `conj`
  /// and of `extra` (not already bound in `partial`) that make every
  /// constraint of `conj` true. Stops early when `visit` returns false.
  void solve(std::span<const Constraint> conj, const Bindings& partial,
             const std::function<bool(const Bindings&)>& visit,
             std::span<const VarId> extra = {}) const;
  bool satisfiable(std::span<const Constraint> conj, const Bindings& partial = {}) const;

 private:
  bool solve_rec(Constraints remaining, Bindings b, std::span<const VarId> extra,
                 const std::function<bool(const Bindings&)>& visit) const;

  std::vector<Term> universe_;
  std::set<Term> members_;
  std::map<std::string, std::set<std::vector<Term>>> relations_;
};

/// A ground instantiation violating the rule, or nullopt when the rule holds
/// on the model: for failure rules the lhs has no solution; for propagation
/// rules every lhs solution extends to a rhs solution; for splitting rules
/// to one of the disjuncts; simplification rules are checked both ways, the
/// lhs primitives being kept on the rhs as for a guard.
std::optional<Bindings> find_counterexample(const GroundModel& model, const Rule& rule);

}  // namespace chrgen
