#pragma once

#include <functional>
#include <mutex>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "chrgen/term.hpp"

namespace chrgen {

enum class Relation : std::uint8_t { Eq, Neq, Le, Lt, Ge, Gt };

/// Complementary relation: Eq<->Neq, Le<->Gt, Lt<->Ge.
Relation negate(Relation r);
/// Relation obtained by swapping the arguments: Le<->Ge, Lt<->Gt.
Relation converse(Relation r);
bool is_order(Relation r);
/// Short name used on the command line and in machine output: eq, neq, le, lt, ge, gt.
std::string_view relation_name(Relation r);
std::optional<Relation> relation_from_name(std::string_view name);

/// A primitive constraint (relation over two terms) or a user-defined atom.
class Constraint {
 public:
  static Constraint primitive(Relation rel, Term left, Term right);
  static Constraint user(std::string predicate, std::vector<Term> args);

  bool is_primitive() const { return primitive_; }
  bool is_user() const { return !primitive_; }
  Relation relation() const { return relation_; }
  /// Predicate name; for primitives the relation name.
  const std::string& predicate() const { return predicate_; }
  const std::vector<Term>& args() const { return args_; }
  const Term& left() const { return args_[0]; }
  const Term& right() const { return args_[1]; }

  Constraint map_terms(const std::function<Term(const Term&)>& f) const;

  /// Representative of the class of equivalent spellings: Ge/Gt are turned
  /// into Le/Lt and the arguments of Eq/Neq are put in term order.
  Constraint normalized() const;

  friend bool operator==(const Constraint& a, const Constraint& b) {
    return a.primitive_ == b.primitive_ && a.relation_ == b.relation_ &&
           a.predicate_ == b.predicate_ && a.args_ == b.args_;
  }

 private:
  bool primitive_ = false;
  Relation relation_ = Relation::Eq;
  std::string predicate_;
  std::vector<Term> args_;
};

using Constraints = std::vector<Constraint>;

/// not(c) for a primitive constraint. Throws std::invalid_argument for user atoms.
Constraint negate(const Constraint& c);

/// Same constraint up to the spellings identified by normalized().
bool same_constraint(const Constraint& a, const Constraint& b);
bool contains(std::span<const Constraint> set, const Constraint& c);

enum class Syntax { Clp, Chr };
/// Clp: `X #=< Y`, `X \= Y`, `X = Y`; Chr: `X=<Y`, `X\=Y`, `X=Y`.
std::string to_string(const Constraint& c, Syntax syntax = Syntax::Clp);
std::string to_string(std::span<const Constraint> cs, Syntax syntax = Syntax::Clp);

Constraint substitute(const Constraint& c, const Bindings& b);
Constraints substitute(std::span<const Constraint> cs, const Bindings& b);
Constraint apply(const Constraint& c, const Substitution& s);

std::vector<VarId> vars_of(std::span<const Constraint> cs);
std::set<VarId> var_set(std::span<const Constraint> cs);

/// Replaces every variable by a fresh one, preserving sharing. The renaming
/// used is written to `renaming` when given.
Constraints rename_apart(std::span<const Constraint> cs, Bindings* renaming = nullptr);
/// Renames only the variables outside `keep`.
Constraints rename_apart_except(std::span<const Constraint> cs, const std::set<VarId>& keep);

/// Variable-insensitive key: constraints sorted by shape, variables numbered
/// by first occurrence. Equal keys imply the two sets are variants.
std::string canonical_key(std::span<const Constraint> cs);
/// Joint key of several constraint sets sharing variables (e.g. rule sides).
std::string canonical_key(std::span<const Constraints> sections);

/// Matches `pattern` onto `target` (one-way), accepting the equivalent
/// spellings of symmetric and converse primitives.
std::vector<Bindings> match_constraint(const Constraint& pattern, const Constraint& target,
                                       const Bindings& b);

/// True iff some substitution s maps every constraint of `a` into `b`.
bool theta_subsumes(std::span<const Constraint> a, std::span<const Constraint> b);
/// Witness of theta_subsumes, if any.
std::optional<Bindings> theta_subsumption_witness(std::span<const Constraint> a,
                                                  std::span<const Constraint> b);
bool variants(std::span<const Constraint> a, std::span<const Constraint> b);
/// Each section of `a` is, under one shared injective variable renaming, the
/// matching section of `b` (as sets).
bool variants(std::span<const Constraints> a, std::span<const Constraints> b);

/// theta_subsumes with a memo keyed on the canonical form of the pair.
class SubsumptionCache {
 public:
  bool subsumes(std::span<const Constraint> a, std::span<const Constraint> b);
  std::size_t hits() const { return hits_; }

 private:
  std::mutex mutex_;
  std::unordered_map<std::string, bool> memo_;
  std::size_t hits_ = 0;
};

}  // namespace chrgen
