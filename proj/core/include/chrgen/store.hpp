#pragma once

#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <vector>

#include "chrgen/constraint.hpp"

namespace chrgen {

/// A satisfiable set of primitive constraints, projected or not.
using Answer = Constraints;

/// Conjunction of primitive constraints kept in solved form.
///
/// Equalities live in an idempotent substitution. Disequalities are kept
/// applied and reduced; order constraints form a graph whose closure is
/// recomputed on every assertion. A Store value is always consistent as far
/// as the propagation can tell; inconsistency is reported by returning
/// std::nullopt from assert_constraint.
class Store {
 public:
  Store() = default;

  static std::optional<Store> of(std::span<const Constraint> cs);

  const Substitution& substitution() const { return subst_; }
  Term apply(const Term& t) const { return subst_.apply(t); }
  Constraint apply(const Constraint& c) const { return chrgen::apply(c, subst_); }

  struct Edge {
    Term from, to;
    bool strict = false;
  };
  const std::vector<std::pair<Term, Term>>& disequalities() const { return neqs_; }
  const std::vector<Edge>& edges() const { return edges_; }

  /// Every constraint held by the store, bindings first.
  Constraints constraints() const;
  /// Variable term for an id seen by this store.
  std::optional<Term> variable(VarId v) const;

  /// Equivalent store once the variables outside `keep` are existentially
  /// quantified: their bindings are dropped and a kept variable takes over
  /// as representative of a class whose representative is local. Unlike
  /// project() this neither re-solves nor simplifies.
  Store restricted(const std::set<VarId>& keep) const;

  /// Adds c in place; false when the store became inconsistent, in which
  /// case its contents are unspecified.
  bool add(const Constraint& c);

 private:
  friend std::optional<Store> assert_constraint(const Store& s, const Constraint& c);
  friend Constraints simplify(const Store& s);
  bool propagate();
  bool close_order(bool& changed);

  Substitution subst_;
  std::vector<std::pair<Term, Term>> neqs_;
  std::vector<Edge> edges_;
};

/// s ∧ c, or nullopt when the propagation detects inconsistency.
std::optional<Store> assert_constraint(const Store& s, const Constraint& c);
std::optional<Store> assert_all(const Store& s, std::span<const Constraint> cs);

/// Sound entailment: true only if every solution of s satisfies c.
bool entails(const Store& s, const Constraint& c);
bool entails_all(const Store& s, std::span<const Constraint> cs);

/// Equivalent non-redundant constraint set in canonical order. Bindings come
/// first, oriented with the older variable on the left.
Constraints simplify(const Store& s);

/// simplify() after existentially quantifying every variable outside `keep`
/// that can be eliminated exactly (bound variables).
Constraints project(const Store& s, const std::set<VarId>& keep);

struct BlowupExceeded : std::runtime_error {
  explicit BlowupExceeded(std::size_t conjuncts)
      : std::runtime_error("DNF expansion needs " + std::to_string(conjuncts) + " conjuncts"),
        conjuncts(conjuncts) {}
  std::size_t conjuncts;
};

constexpr std::size_t kDefaultDnfCap = 10000;

/// Satisfiability of (pos_1 ∨ … ∨ pos_n) ∧ ¬neg_1 ∧ … ∧ ¬neg_m where each
/// answer is a conjunction. Variables occurring only in a negated answer are
/// treated as free, which can only make the result more often true.
/// Throws BlowupExceeded when the expanded DNF has more than `cap` conjuncts.
bool dnf_satisfiable(std::span<const Answer> pos, std::span<const Answer> neg,
                     std::size_t cap = kDefaultDnfCap);

}  // namespace chrgen
