#include "chrgen/store.hpp"

#include <algorithm>
#include <functional>

namespace chrgen {

namespace {

std::pair<Term, Term> ordered_pair(Term a, Term b) {
  if (b < a) std::swap(a, b);
  return {std::move(a), std::move(b)};
}

enum Rel : std::uint8_t { kNone = 0, kLe = 1, kLt = 2 };

}  // namespace

std::optional<Store> Store::of(std::span<const Constraint> cs) { return assert_all(Store{}, cs); }

std::optional<Term> Store::variable(VarId v) const {
  const Term* t = subst_.variable(v);
  if (!t) return std::nullopt;
  return *t;
}

Store Store::restricted(const std::set<VarId>& keep) const {
  const Bindings solved = subst_.solved();
  Bindings rep;
  for (const auto& [v, t] : solved) {
    if (keep.count(v) && t.is_var() && !keep.count(t.var_id()) && !rep.count(t.var_id())) {
      rep.emplace(t.var_id(), variable(v).value_or(Term::var(v, "")));
    }
  }
  Store out;
  for (const auto& [v, t] : solved) {
    if (!keep.count(v)) continue;
    Term value = substitute(t, rep);
    if (value.is_var() && value.var_id() == v) continue;
    out.subst_.bind(*subst_.variable(v), value);
  }
  for (const auto& [a, b] : neqs_) {
    out.neqs_.push_back(ordered_pair(substitute(a, rep), substitute(b, rep)));
  }
  for (const auto& e : edges_) {
    out.edges_.push_back({substitute(e.from, rep), substitute(e.to, rep), e.strict});
  }
  return out;
}

Constraints Store::constraints() const {
  Constraints out;
  for (const auto& [v, t] : subst_.solved()) {
    Term var = *subst_.variable(v);
    if (t.is_var()) {
      out.push_back(Constraint::primitive(Relation::Eq, t, var));
    } else {
      out.push_back(Constraint::primitive(Relation::Eq, var, t));
    }
  }
  for (const auto& [a, b] : neqs_) out.push_back(Constraint::primitive(Relation::Neq, a, b));
  for (const auto& e : edges_) {
    out.push_back(Constraint::primitive(e.strict ? Relation::Lt : Relation::Le, e.from, e.to));
  }
  return out;
}

bool Store::close_order(bool& changed) {
  std::vector<Term> nodes;
  auto index = [&](const Term& t) {
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (nodes[i] == t) return i;
    }
    nodes.push_back(t);
    return nodes.size() - 1;
  };
  for (const auto& e : edges_) {
    index(e.from);
    index(e.to);
  }
  const std::size_t n = nodes.size();
  if (n == 0) return true;
  std::vector<std::vector<std::uint8_t>> rel(n, std::vector<std::uint8_t>(n, kNone));
  for (const auto& e : edges_) {
    auto& r = rel[index(e.from)][index(e.to)];
    r = std::max<std::uint8_t>(r, e.strict ? kLt : kLe);
  }
  // numerals compare by value; other constants have no fixed relative order
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && nodes[i].is_number() && nodes[j].is_number() && nodes[i] < nodes[j]) {
        rel[i][j] = kLt;
      }
    }
  }
  std::vector<std::pair<std::size_t, std::size_t>> distinct;
  for (const auto& [a, b] : neqs_) {
    auto ia = std::find(nodes.begin(), nodes.end(), a);
    auto ib = std::find(nodes.begin(), nodes.end(), b);
    if (ia != nodes.end() && ib != nodes.end()) {
      distinct.emplace_back(ia - nodes.begin(), ib - nodes.begin());
    }
  }
  for (bool again = true; again;) {
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t i = 0; i < n; ++i) {
        if (!rel[i][k]) continue;
        for (std::size_t j = 0; j < n; ++j) {
          if (!rel[k][j]) continue;
          std::uint8_t via = std::max(rel[i][k], rel[k][j]);
          if (via > rel[i][j]) rel[i][j] = via;
        }
      }
    }
    again = false;
    for (auto [a, b] : distinct) {
      if (rel[a][b] == kLe) {
        rel[a][b] = kLt;
        again = true;
      }
      if (rel[b][a] == kLe) {
        rel[b][a] = kLt;
        again = true;
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (rel[i][i] == kLt) return false;
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (rel[i][j] && rel[j][i]) {
        if (!unify_into(nodes[i], nodes[j], subst_)) return false;
        changed = true;
        return true;
      }
    }
  }
  return true;
}

bool Store::propagate() {
  for (bool changed = true; changed;) {
    changed = false;
    std::vector<std::pair<Term, Term>> neqs;
    for (const auto& [a0, b0] : neqs_) {
      Term a = subst_.apply(a0);
      Term b = subst_.apply(b0);
      if (a == b) return false;
      auto mgu = unify(a, b, Substitution{});
      if (!mgu) continue;  // can never be equal
      if (mgu->size() == 1 && !(a.is_var() || b.is_var())) {
        // a = b exactly when the single binding holds
        auto [v, t] = *mgu->solved().begin();
        a = *mgu->variable(v);
        b = t;
      }
      auto p = ordered_pair(a, b);
      if (std::find(neqs.begin(), neqs.end(), p) == neqs.end()) neqs.push_back(std::move(p));
    }
    neqs_ = std::move(neqs);

    std::vector<Edge> edges;
    for (const auto& e0 : edges_) {
      Edge e{subst_.apply(e0.from), subst_.apply(e0.to), e0.strict};
      if (e.from == e.to) {
        if (e.strict) return false;
        continue;
      }
      auto same = std::find_if(edges.begin(), edges.end(), [&](const Edge& x) {
        return x.from == e.from && x.to == e.to;
      });
      if (same == edges.end()) {
        edges.push_back(std::move(e));
      } else {
        same->strict = same->strict || e.strict;
      }
    }
    edges_ = std::move(edges);

    if (!close_order(changed)) return false;
  }
  return true;
}

bool Store::add(const Constraint& c) {
  if (!c.is_primitive()) {
    throw std::invalid_argument("assert_constraint: not a primitive constraint: " + to_string(c));
  }
  if (c.relation() == Relation::Eq) {
    if (!unify_into(c.left(), c.right(), subst_)) return false;
    return neqs_.empty() && edges_.empty() ? true : propagate();
  }
  Term l = subst_.apply(c.left());
  Term r = subst_.apply(c.right());
  switch (c.relation()) {
    case Relation::Neq:
      neqs_.push_back(ordered_pair(l, r));
      break;
    case Relation::Le:
    case Relation::Lt:
      edges_.push_back({l, r, c.relation() == Relation::Lt});
      break;
    default:
      edges_.push_back({r, l, c.relation() == Relation::Gt});
      break;
  }
  return propagate();
}

std::optional<Store> assert_constraint(const Store& s, const Constraint& c) {
  Store out = s;
  if (!out.add(c)) return std::nullopt;
  return out;
}

std::optional<Store> assert_all(const Store& s, std::span<const Constraint> cs) {
  Store out = s;
  for (const auto& c : cs) {
    if (!out.add(c)) return std::nullopt;
  }
  return out;
}

bool entails(const Store& s, const Constraint& c) {
  if (c.relation() == Relation::Eq && s.apply(c.left()) == s.apply(c.right())) return true;
  return !assert_constraint(s, negate(c)).has_value();
}

bool entails_all(const Store& s, std::span<const Constraint> cs) {
  return std::all_of(cs.begin(), cs.end(), [&](const Constraint& c) { return entails(s, c); });
}

Constraints simplify(const Store& s) {
  Constraints bindings;
  for (const auto& [v, t] : s.subst_.solved()) {
    Term var = s.variable(v).value_or(Term::var(v, ""));
    if (t.is_var()) {
      bindings.push_back(Constraint::primitive(Relation::Eq, t, var));
    } else {
      bindings.push_back(Constraint::primitive(Relation::Eq, var, t));
    }
  }
  // older (smaller id) variable first
  auto binding_key = [](const Constraint& c) {
    return c.right().is_var() && c.left().is_var() ? c.right().var_id() : c.left().var_id();
  };
  std::stable_sort(bindings.begin(), bindings.end(),
                   [&](const Constraint& a, const Constraint& b) {
                     return binding_key(a) < binding_key(b);
                   });

  Constraints residual;
  for (const auto& [a, b] : s.neqs_) residual.push_back(Constraint::primitive(Relation::Neq, a, b));
  for (const auto& e : s.edges_) {
    residual.push_back(
        Constraint::primitive(e.strict ? Relation::Lt : Relation::Le, e.from, e.to));
  }
  std::sort(residual.begin(), residual.end(), [](const Constraint& a, const Constraint& b) {
    if (a.relation() != b.relation()) return a.relation() < b.relation();
    if (!(a.left() == b.left())) return a.left() < b.left();
    return a.right() < b.right();
  });

  Store solved;
  solved.subst_ = s.subst_;
  for (std::size_t i = 0; i < residual.size();) {
    Constraints rest;
    for (std::size_t j = 0; j < residual.size(); ++j) {
      if (j != i) rest.push_back(residual[j]);
    }
    auto without = assert_all(solved, rest);
    if (without && entails(*without, residual[i])) {
      residual.erase(residual.begin() + static_cast<std::ptrdiff_t>(i));
    } else {
      ++i;
    }
  }
  bindings.insert(bindings.end(), residual.begin(), residual.end());
  return bindings;
}

Constraints project(const Store& s, const std::set<VarId>& keep) {
  const auto bound = s.substitution().solved();
  // let a kept variable represent its class when the representative is local
  Bindings rep;
  for (const auto& [v, t] : bound) {
    if (keep.count(v) && t.is_var() && !keep.count(t.var_id()) && !rep.count(t.var_id())) {
      rep.emplace(t.var_id(), s.variable(v).value_or(Term::var(v, "")));
    }
  }
  Constraints kept;
  for (const auto& [v, t] : bound) {
    if (!keep.count(v)) continue;  // no other constraint mentions a bound variable
    Term var = s.variable(v).value_or(Term::var(v, ""));
    Term value = substitute(t, rep);
    if (!(value == var)) kept.push_back(Constraint::primitive(Relation::Eq, var, value));
  }
  for (const auto& [a, b] : s.disequalities()) {
    kept.push_back(Constraint::primitive(Relation::Neq, substitute(a, rep), substitute(b, rep)));
  }
  for (const auto& e : s.edges()) {
    kept.push_back(Constraint::primitive(e.strict ? Relation::Lt : Relation::Le,
                                         substitute(e.from, rep), substitute(e.to, rep)));
  }
  auto st = Store::of(kept);
  return st ? simplify(*st) : kept;
}

namespace {

struct DnfSearch {
  std::span<const Answer> neg;

  bool search(const Store& s, std::size_t j) const {
    if (j == neg.size()) return true;
    for (const auto& c : neg[j]) {
      auto next = assert_constraint(s, negate(c));
      if (next && search(*next, j + 1)) return true;
    }
    return false;
  }
};

}  // namespace

bool dnf_satisfiable(std::span<const Answer> pos, std::span<const Answer> neg, std::size_t cap) {
  std::size_t count = pos.size();
  for (const auto& b : neg) {
    if (b.empty()) return false;  // ¬true
    if (count > cap / b.size() + 1) throw BlowupExceeded(count * b.size());
    count *= b.size();
  }
  if (count > cap) throw BlowupExceeded(count);
  DnfSearch search{neg};
  for (const auto& a : pos) {
    auto s = Store::of(a);
    if (s && search.search(*s, 0)) return true;
  }
  return false;
}

}  // namespace chrgen
