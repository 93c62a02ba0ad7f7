#include "chrgen/chr.hpp"

#include <algorithm>
#include <functional>

#include "chrgen/oracle.hpp"

namespace chrgen {

std::set<Relation> all_relations() {
  return {Relation::Eq, Relation::Neq, Relation::Le, Relation::Lt, Relation::Ge, Relation::Gt};
}

namespace {

bool ground_primitive(const Constraint& c) { return c.left().is_ground() && c.right().is_ground(); }

bool trivially_true(const Constraint& c) {
  if (!c.is_primitive()) return false;
  if (c.relation() == Relation::Eq && c.left() == c.right()) return true;
  return ground_primitive(c) && ground_holds(c.relation(), c.left(), c.right());
}

}  // namespace

std::optional<ChrRule> direct_form(const Rule& rule, const std::set<Relation>& builtins) {
  Substitution s;
  Constraints rest;
  for (const auto& c : rule.lhs) {
    if (c.is_primitive() && c.relation() == Relation::Eq) {
      if (!unify_into(c.left(), c.right(), s)) return std::nullopt;
    } else {
      rest.push_back(c);
    }
  }
  ChrRule out;
  out.kind = rule.kind;
  for (const auto& c0 : rest) {
    Constraint c = apply(c0, s);
    if (c.is_user()) {
      out.head.push_back(std::move(c));
      continue;
    }
    if (!builtins.count(c.relation())) {
      throw EncodingError("cannot encode lhs constraint " + to_string(c0) + " as a guard", rule);
    }
    if (trivially_true(c) || contains(out.guard, c)) continue;
    if (ground_primitive(c)) return std::nullopt;  // a false guard
    out.guard.push_back(std::move(c));
  }
  if (out.head.empty()) throw EncodingError("rule without user-defined head constraint", rule);
  for (const auto& c0 : rule.rhs) {
    Constraint c = apply(c0, s);
    if (rule.kind != RuleKind::Splitting) {
      if (trivially_true(c) || contains(out.guard, c) || contains(out.body, c)) continue;
    }
    out.body.push_back(std::move(c));
  }
  return out;
}

Rule to_rule(const ChrRule& r) {
  Rule out;
  out.kind = r.kind;
  out.lhs = r.head;
  out.lhs.insert(out.lhs.end(), r.guard.begin(), r.guard.end());
  out.rhs = r.body;
  return out;
}

std::string to_string(const ChrRule& r0) {
  Rule named = printable(to_rule(r0));
  std::span<const Constraint> head(named.lhs.data(), r0.head.size());
  std::span<const Constraint> guard(named.lhs.data() + r0.head.size(), r0.guard.size());
  std::string out = to_string(head, Syntax::Chr);
  out += r0.kind == RuleKind::Simplification ? " <=> " : " ==> ";
  if (!guard.empty()) out += to_string(guard, Syntax::Chr) + " | ";
  switch (r0.kind) {
    case RuleKind::Failure:
      out += "false";
      break;
    case RuleKind::Splitting:
      out += to_string(named.rhs[0], Syntax::Chr) + " ; " + to_string(named.rhs[1], Syntax::Chr);
      break;
    default:
      out += named.rhs.empty() ? std::string("true") : to_string(named.rhs, Syntax::Chr);
  }
  return out + ".";
}

EmitResult emit(const RuleSet& rules, const std::set<Relation>& builtins,
                const std::vector<std::string>& header) {
  EmitResult result;
  for (const auto& line : header) result.text += "% " + line + "\n";
  for (const auto& rule : rules) {
    auto encoded = direct_form(rule, builtins);
    if (!encoded) {
      result.warnings.push_back("dropped rule with unsatisfiable lhs: " + to_string(rule));
      continue;
    }
    result.text += to_string(*encoded) + "\n";
    result.rules.push_back(std::move(*encoded));
  }
  return result;
}

Constraints ChrLeaf::constraints() const {
  Constraints out;
  for (const auto& c : user) out.push_back(store.apply(c));
  Constraints prims = simplify(store);
  out.insert(out.end(), prims.begin(), prims.end());
  return out;
}

namespace {

struct PreparedRule {
  RuleKind kind;
  Constraints head;
  Constraints guard;
  Constraints body;
};

/// Rule in head/guard/body shape with the lhs equalities inlined, so that an
/// lhs equality introducing a variable (Z = [A]) binds it by matching.
/// nullopt for a rule whose lhs can never hold.
std::optional<PreparedRule> prepare(const Rule& rule) {
  ChrRule shaped{rule.kind, {}, {}, rule.rhs};
  for (const auto& c : rule.lhs) (c.is_user() ? shaped.head : shaped.guard).push_back(c);
  if (!shaped.head.empty()) {
    auto inlined = direct_form(rule, all_relations());
    if (!inlined) return std::nullopt;
    shaped = std::move(*inlined);
  }
  Constraints all = shaped.head;
  all.insert(all.end(), shaped.guard.begin(), shaped.guard.end());
  all.insert(all.end(), shaped.body.begin(), shaped.body.end());
  all = rename_apart(all);
  auto at = [&](std::size_t from, std::size_t n) {
    return Constraints(all.begin() + static_cast<std::ptrdiff_t>(from),
                       all.begin() + static_cast<std::ptrdiff_t>(from + n));
  };
  std::size_t h = shaped.head.size(), g = shaped.guard.size();
  return PreparedRule{rule.kind, at(0, h), at(h, g), at(h + g, shaped.body.size())};
}

struct State {
  std::vector<std::pair<std::size_t, Constraint>> user;  // (id, constraint)
  Store store;
  std::set<std::vector<std::size_t>> history;
  std::size_t next_id = 0;

  /// False when the store became inconsistent.
  bool add(const Constraint& c) {
    if (c.is_primitive()) return store.add(c);
    Constraint applied = store.apply(c);
    for (const auto& [_, u] : user) {
      if (store.apply(u) == applied) return true;
    }
    user.emplace_back(next_id++, c);
    return true;
  }
};

struct Firing {
  std::size_t rule;
  std::vector<std::size_t> slots;  // positions in State::user, one per head atom
  Bindings bindings;
};

/// First rule application in rule order, then in order of constraint tuples.
std::optional<Firing> find_firing(const std::vector<PreparedRule>& rules, const State& st) {
  std::vector<Constraint> applied;
  applied.reserve(st.user.size());
  for (const auto& [_, u] : st.user) applied.push_back(st.store.apply(u));
  for (std::size_t r = 0; r < rules.size(); ++r) {
    const PreparedRule& rule = rules[r];
    std::vector<std::size_t> slots;
    std::optional<Firing> found;
    std::function<void(std::size_t, const Bindings&)> extend = [&](std::size_t k,
                                                                    const Bindings& b) {
      if (found) return;
      if (k == rule.head.size()) {
        if (rule.kind != RuleKind::Simplification) {
          std::vector<std::size_t> key{r};
          for (std::size_t s : slots) key.push_back(st.user[s].first);
          if (st.history.count(key)) return;
        }
        for (const auto& g : rule.guard) {
          if (!entails(st.store, substitute(g, b))) return;
        }
        found = Firing{r, slots, b};
        return;
      }
      for (std::size_t s = 0; s < applied.size(); ++s) {
        if (std::find(slots.begin(), slots.end(), s) != slots.end()) continue;
        for (const auto& m : match_constraint(rule.head[k], applied[s], b)) {
          slots.push_back(s);
          extend(k + 1, m);
          slots.pop_back();
          if (found) return;
        }
      }
    };
    extend(0, {});
    if (found) return found;
  }
  return std::nullopt;
}

}  // namespace

ChrRun run(const RuleSet& rules, const Goal& goal, std::size_t step_limit) {
  std::vector<PreparedRule> prepared;
  prepared.reserve(rules.size());
  for (const auto& r : rules) {
    if (auto p = prepare(r)) prepared.push_back(std::move(*p));
  }

  ChrRun result;
  State initial;
  for (const auto& c : goal) {
    if (!initial.add(c)) return result;
  }
  std::vector<State> pending{std::move(initial)};
  std::set<std::vector<std::string>> seen;  // forks often reach the same final state
  while (!pending.empty()) {
    State st = std::move(pending.back());
    pending.pop_back();
    while (true) {
      auto firing = find_firing(prepared, st);
      if (!firing) {
        ChrLeaf leaf{{}, st.store};
        for (const auto& [_, u] : st.user) leaf.user.push_back(u);
        std::vector<std::string> key;
        for (const auto& c : leaf.constraints()) key.push_back(to_string(c));
        std::sort(key.begin(), key.end());
        if (seen.insert(std::move(key)).second) result.leaves.push_back(std::move(leaf));
        break;
      }
      if (++result.steps > step_limit) throw StepLimitExceeded(step_limit);
      const PreparedRule& rule = prepared[firing->rule];
      if (rule.kind == RuleKind::Failure) break;
      // body variables not bound by the head are fresh
      Bindings b = firing->bindings;
      for (VarId v : vars_of(rule.body)) {
        if (!b.count(v)) b.emplace(v, Term::fresh());
      }
      Constraints body = substitute(rule.body, b);
      if (rule.kind == RuleKind::Simplification) {
        std::vector<std::size_t> slots = firing->slots;
        std::sort(slots.rbegin(), slots.rend());
        for (std::size_t s : slots) st.user.erase(st.user.begin() + static_cast<std::ptrdiff_t>(s));
      } else {
        std::vector<std::size_t> key{firing->rule};
        for (std::size_t s : firing->slots) key.push_back(st.user[s].first);
        st.history.insert(std::move(key));
      }
      if (rule.kind == RuleKind::Splitting) {
        State other = st;
        if (other.add(body[1])) pending.push_back(std::move(other));
        if (!st.add(body[0])) break;
        continue;
      }
      bool ok = true;
      for (const auto& c : body) {
        if (!(ok = st.add(c))) break;
      }
      if (!ok) break;
    }
  }
  return result;
}

}  // namespace chrgen
