#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace chrgen {

using VarId = std::uint32_t;

/// Immutable first-order term: a variable, a constant or a compound.
///
/// Lists use the functor "cons"/2 terminated by the constant "nil". Terms
/// share structure through reference counting, so copies are cheap and
/// values are safe to hand across threads.
class Term {
 public:
  enum class Kind : std::uint8_t { Var, Const, Compound };

  Term();  // the constant nil

  static Term var(VarId id, std::string name);
  static Term constant(std::string name);
  static Term number(long long value);
  static Term compound(std::string functor, std::vector<Term> args);
  static Term nil();
  static Term cons(Term head, Term tail);
  static Term list(std::span<const Term> items, std::optional<Term> tail = std::nullopt);

  /// New variable with a process-wide unique id.
  static Term fresh(std::string_view hint = {});

  Kind kind() const;
  bool is_var() const { return kind() == Kind::Var; }
  bool is_const() const { return kind() == Kind::Const; }
  bool is_compound() const { return kind() == Kind::Compound; }
  bool is_nil() const;
  bool is_cons() const;
  bool is_ground() const;
  /// False when v certainly does not occur in the term.
  bool may_contain(VarId v) const;
  /// Bloom signature of the variables inside: bit (id % 64) per variable.
  std::uint64_t var_signature() const;
  static std::uint64_t var_signature_of(VarId v) { return std::uint64_t{1} << (v % 64); }
  /// Same shared node (implies equality).
  bool identical(const Term& o) const { return node_ == o.node_; }

  /// Integer value of a numeral constant; numerals are the ordered sort.
  std::optional<long long> as_number() const;
  bool is_number() const { return as_number().has_value(); }

  VarId var_id() const;
  /// Variable display name, constant name, or functor.
  const std::string& name() const;
  std::span<const Term> args() const;
  std::size_t arity() const { return args().size(); }

  std::size_t hash() const;

  friend bool operator==(const Term& a, const Term& b);
  friend std::strong_ordering operator<=>(const Term& a, const Term& b);

 private:
  struct Node;
  explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

std::string to_string(const Term& t);

bool occurs(VarId v, const Term& t);
void collect_vars(const Term& t, std::vector<VarId>& out);  // first-occurrence order, no duplicates
void collect_vars(const Term& t, std::set<VarId>& out);

/// A simultaneous variable-to-term map, used for matching and renaming.
using Bindings = std::map<VarId, Term>;

Term substitute(const Term& t, const Bindings& b);

/// One-way matching: extends `b` so that substitute(pattern, b) == target.
/// Variables of `target` are treated as constants.
std::optional<Bindings> match(const Term& pattern, const Term& target, Bindings b);

/// Substitution built by unification, stored in triangular form: a range
/// may mention variables bound elsewhere, and apply() resolves them. There
/// are no cycles (unify performs the occurs check). Variable-to-variable
/// bindings always point from the younger (larger id) to the older variable.
class Substitution {
 public:
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  const Term* lookup(VarId v) const;
  /// Fully resolved image of t.
  Term apply(const Term& t) const;
  /// Bindings with every range fully resolved.
  std::map<VarId, Term> solved() const;

  /// The variable term of a bound id.
  const Term* variable(VarId v) const;

  /// Adds var -> t. Caller guarantees var is unbound and does not occur in apply(t).
  void bind(const Term& var, const Term& t);

 private:
  struct Entry {
    VarId id;
    Term var;
    Term range;
  };
  const Entry* find(VarId v) const;

  std::vector<Entry> entries_;  // sorted by id
  std::uint64_t domain_ = 0;    // signature of the bound variables
};

/// Most general unifier of t1 and t2 extending s, with occurs check.
std::optional<Substitution> unify(const Term& t1, const Term& t2, Substitution s);
/// In-place unify; on failure `s` is left partially extended.
bool unify_into(const Term& t1, const Term& t2, Substitution& s);

}  // namespace chrgen

template <>
struct std::hash<chrgen::Term> {
  std::size_t operator()(const chrgen::Term& t) const noexcept { return t.hash(); }
};
