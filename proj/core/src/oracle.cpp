#include "chrgen/oracle.hpp"

#include <algorithm>

namespace chrgen {

bool ground_holds(Relation rel, const Term& left, const Term& right) {
  auto cmp = left <=> right;
  switch (rel) {
    case Relation::Eq: return cmp == 0;
    case Relation::Neq: return cmp != 0;
    case Relation::Le: return cmp <= 0;
    case Relation::Lt: return cmp < 0;
    case Relation::Ge: return cmp >= 0;
    case Relation::Gt: return cmp > 0;
  }
  return false;
}

std::vector<Term> GroundModel::make_universe(const std::vector<Term>& constants, int list_depth) {
  std::vector<Term> out = constants;
  if (list_depth < 0) return out;
  std::vector<Term> layer{Term::nil()};
  if (std::find(out.begin(), out.end(), Term::nil()) == out.end()) out.push_back(Term::nil());
  for (int len = 1; len <= list_depth; ++len) {
    std::vector<Term> next;
    for (const auto& c : constants) {
      if (c.is_nil()) continue;
      for (const auto& tail : layer) next.push_back(Term::cons(c, tail));
    }
    out.insert(out.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  return out;
}

GroundModel::GroundModel(const Program& program, std::vector<Term> universe)
    : universe_(std::move(universe)), members_(universe_.begin(), universe_.end()) {
  for (const auto& sig : program.predicates()) relations_[sig];
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& clause : program.clauses) {
      std::vector<VarId> head_vars;
      for (const auto& a : clause.head.args()) collect_vars(a, head_vars);
      std::vector<std::vector<Term>> derived;
      solve(
          clause.body, {},
          [&](const Bindings& b) {
            std::vector<Term> tuple;
            for (const auto& a : clause.head.args()) {
              Term t = substitute(a, b);
              if (!t.is_ground() || !in_universe(t)) return true;
              tuple.push_back(std::move(t));
            }
            derived.push_back(std::move(tuple));
            return true;
          },
          head_vars);
      auto& rel = relations_[signature(clause.head)];
      for (auto& t : derived) changed = rel.insert(std::move(t)).second || changed;
    }
  }
}

const std::set<std::vector<Term>>& GroundModel::relation(const std::string& sig) const {
  static const std::set<std::vector<Term>> kEmpty;
  auto it = relations_.find(sig);
  return it == relations_.end() ? kEmpty : it->second;
}

std::size_t GroundModel::fact_count() const {
  std::size_t n = 0;
  for (const auto& [_, rel] : relations_) n += rel.size();
  return n;
}

bool GroundModel::holds(const Constraint& c) const {
  if (c.is_primitive()) return ground_holds(c.relation(), c.left(), c.right());
  return relation(signature(c)).count(c.args()) > 0;
}

namespace {

bool bound_values_in(const GroundModel& m, const Bindings& before, const Bindings& after) {
  for (const auto& [v, t] : after) {
    if (!before.count(v) && !m.in_universe(t)) return false;
  }
  return true;
}

}  // namespace

bool GroundModel::solve_rec(Constraints remaining, Bindings b, std::span<const VarId> extra,
                            const std::function<bool(const Bindings&)>& visit) const {
  for (auto& c : remaining) c = substitute(c, b);
  // ground literals are simply checked
  for (std::size_t i = 0; i < remaining.size();) {
    const auto& args = remaining[i].args();
    bool ground = std::all_of(args.begin(), args.end(), [](const Term& t) { return t.is_ground(); });
    if (!ground) {
      ++i;
      continue;
    }
    if (!holds(remaining[i])) return true;
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(i));
  }
  if (remaining.empty()) {
    for (VarId v : extra) {
      if (b.count(v)) continue;
      for (const auto& value : universe_) {
        Bindings next = b;
        next.emplace(v, value);
        if (!solve_rec({}, std::move(next), extra, visit)) return false;
      }
      return true;
    }
    return visit(b);
  }
  // an equality with a ground side determines the other side by matching
  for (std::size_t i = 0; i < remaining.size(); ++i) {
    const Constraint& c = remaining[i];
    if (!c.is_primitive() || c.relation() != Relation::Eq) continue;
    for (int side = 0; side < 2; ++side) {
      if (!c.args()[side].is_ground()) continue;
      auto m = match(c.args()[1 - side], c.args()[side], b);
      if (!m || !bound_values_in(*this, b, *m)) return true;
      Constraints rest = remaining;
      rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(i));
      return solve_rec(std::move(rest), std::move(*m), extra, visit);
    }
  }
  // join a user atom against its relation
  for (std::size_t i = 0; i < remaining.size(); ++i) {
    const Constraint& c = remaining[i];
    if (c.is_primitive()) continue;
    Constraints rest = remaining;
    rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(i));
    for (const auto& tuple : relation(signature(c))) {
      std::optional<Bindings> m = b;
      for (std::size_t k = 0; k < tuple.size() && m; ++k) m = match(c.args()[k], tuple[k], std::move(*m));
      if (!m || !bound_values_in(*this, b, *m)) continue;
      if (!solve_rec(rest, std::move(*m), extra, visit)) return false;
    }
    return true;
  }
  // otherwise enumerate one variable
  std::vector<VarId> vars = vars_of(remaining);
  VarId v = vars.front();
  for (const auto& value : universe_) {
    Bindings next = b;
    next.emplace(v, value);
    if (!solve_rec(remaining, std::move(next), extra, visit)) return false;
  }
  return true;
}

void GroundModel::solve(std::span<const Constraint> conj, const Bindings& partial,
                        const std::function<bool(const Bindings&)>& visit,
                        std::span<const VarId> extra) const {
  solve_rec(Constraints(conj.begin(), conj.end()), partial, extra, visit);
}

bool GroundModel::satisfiable(std::span<const Constraint> conj, const Bindings& partial) const {
  bool found = false;
  solve(conj, partial, [&](const Bindings&) {
    found = true;
    return false;
  });
  return found;
}

std::optional<Bindings> find_counterexample(const GroundModel& model, const Rule& rule) {
  std::optional<Bindings> witness;
  auto forward = [&](const Bindings& b) {
    bool ok = false;
    switch (rule.kind) {
      case RuleKind::Failure:
        ok = false;
        break;
      case RuleKind::Splitting:
        ok = model.satisfiable(std::span(rule.rhs).subspan(0, 1), b) ||
             model.satisfiable(std::span(rule.rhs).subspan(1, 1), b);
        break;
      default:
        ok = model.satisfiable(rule.rhs, b);
    }
    if (!ok) witness = b;
    return ok;
  };
  model.solve(rule.lhs, {}, forward);
  if (witness || rule.kind != RuleKind::Simplification) return witness;
  // rhs ⇒ lhs, the variables of lhs being universally quantified; the lhs
  // primitives hold on both sides, as the guard of a CHR rule does
  std::vector<VarId> lhs_vars = vars_of(rule.lhs);
  Constraints backward = rule.rhs;
  for (const auto& c : rule.lhs) {
    if (c.is_primitive()) backward.push_back(c);
  }
  model.solve(
      backward, {},
      [&](const Bindings& b) {
        Bindings head;
        for (VarId v : lhs_vars) head.emplace(v, b.at(v));
        bool ok = model.satisfiable(rule.lhs, head);
        if (!ok) witness = b;
        return ok;
      },
      lhs_vars);
  return witness;
}

}  // namespace chrgen
