#include "chrgen/constraint.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace chrgen {

Relation negate(Relation r) {
  switch (r) {
    case Relation::Eq: return Relation::Neq;
    case Relation::Neq: return Relation::Eq;
    case Relation::Le: return Relation::Gt;
    case Relation::Gt: return Relation::Le;
    case Relation::Lt: return Relation::Ge;
    case Relation::Ge: return Relation::Lt;
  }
  return r;
}

Relation converse(Relation r) {
  switch (r) {
    case Relation::Le: return Relation::Ge;
    case Relation::Ge: return Relation::Le;
    case Relation::Lt: return Relation::Gt;
    case Relation::Gt: return Relation::Lt;
    default: return r;
  }
}

bool is_order(Relation r) { return r != Relation::Eq && r != Relation::Neq; }

std::string_view relation_name(Relation r) {
  switch (r) {
    case Relation::Eq: return "eq";
    case Relation::Neq: return "neq";
    case Relation::Le: return "le";
    case Relation::Lt: return "lt";
    case Relation::Ge: return "ge";
    case Relation::Gt: return "gt";
  }
  return "?";
}

std::optional<Relation> relation_from_name(std::string_view name) {
  for (Relation r : {Relation::Eq, Relation::Neq, Relation::Le, Relation::Lt, Relation::Ge,
                     Relation::Gt}) {
    if (relation_name(r) == name) return r;
  }
  return std::nullopt;
}

namespace {

std::string_view clp_symbol(Relation r) {
  switch (r) {
    case Relation::Eq: return "=";
    case Relation::Neq: return "\\=";
    case Relation::Le: return "#=<";
    case Relation::Lt: return "#<";
    case Relation::Ge: return "#>=";
    case Relation::Gt: return "#>";
  }
  return "?";
}

std::string_view chr_symbol(Relation r) {
  switch (r) {
    case Relation::Eq: return "=";
    case Relation::Neq: return "\\=";
    case Relation::Le: return "=<";
    case Relation::Lt: return "<";
    case Relation::Ge: return ">=";
    case Relation::Gt: return ">";
  }
  return "?";
}

}  // namespace

Constraint Constraint::primitive(Relation rel, Term left, Term right) {
  Constraint c;
  c.primitive_ = true;
  c.relation_ = rel;
  c.predicate_ = std::string(relation_name(rel));
  c.args_ = {std::move(left), std::move(right)};
  return c;
}

Constraint Constraint::user(std::string predicate, std::vector<Term> args) {
  Constraint c;
  c.primitive_ = false;
  c.predicate_ = std::move(predicate);
  c.args_ = std::move(args);
  return c;
}

Constraint Constraint::map_terms(const std::function<Term(const Term&)>& f) const {
  Constraint c = *this;
  for (auto& a : c.args_) a = f(a);
  return c;
}

Constraint Constraint::normalized() const {
  if (!primitive_) return *this;
  switch (relation_) {
    case Relation::Ge:
    case Relation::Gt:
      return primitive(converse(relation_), right(), left());
    case Relation::Eq:
    case Relation::Neq:
      if (right() < left()) return primitive(relation_, right(), left());
      return *this;
    default:
      return *this;
  }
}

Constraint negate(const Constraint& c) {
  if (!c.is_primitive()) {
    throw std::invalid_argument("negate: user-defined constraint " + to_string(c) +
                                " has no primitive negation");
  }
  return Constraint::primitive(negate(c.relation()), c.left(), c.right());
}

bool same_constraint(const Constraint& a, const Constraint& b) {
  if (a.is_primitive() != b.is_primitive()) return false;
  return a.normalized() == b.normalized();
}

bool contains(std::span<const Constraint> set, const Constraint& c) {
  return std::any_of(set.begin(), set.end(),
                     [&](const Constraint& x) { return same_constraint(x, c); });
}

std::string to_string(const Constraint& c, Syntax syntax) {
  if (c.is_primitive()) {
    std::string out = to_string(c.left());
    if (syntax == Syntax::Clp) {
      out += ' ';
      out += clp_symbol(c.relation());
      out += ' ';
    } else {
      out += chr_symbol(c.relation());
    }
    out += to_string(c.right());
    return out;
  }
  std::string out = c.predicate();
  if (c.args().empty()) return out;
  out += '(';
  for (std::size_t i = 0; i < c.args().size(); ++i) {
    if (i) out += ',';
    out += to_string(c.args()[i]);
  }
  out += ')';
  return out;
}

std::string to_string(std::span<const Constraint> cs, Syntax syntax) {
  std::string out;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    if (i) out += ", ";
    out += to_string(cs[i], syntax);
  }
  return out;
}

Constraint substitute(const Constraint& c, const Bindings& b) {
  if (b.empty()) return c;
  return c.map_terms([&](const Term& t) { return substitute(t, b); });
}

Constraints substitute(std::span<const Constraint> cs, const Bindings& b) {
  Constraints out;
  out.reserve(cs.size());
  for (const auto& c : cs) out.push_back(substitute(c, b));
  return out;
}

Constraint apply(const Constraint& c, const Substitution& s) {
  if (s.empty()) return c;
  return c.map_terms([&](const Term& t) { return s.apply(t); });
}

std::vector<VarId> vars_of(std::span<const Constraint> cs) {
  std::vector<VarId> out;
  for (const auto& c : cs) {
    for (const auto& a : c.args()) collect_vars(a, out);
  }
  return out;
}

std::set<VarId> var_set(std::span<const Constraint> cs) {
  std::set<VarId> out;
  for (const auto& c : cs) {
    for (const auto& a : c.args()) collect_vars(a, out);
  }
  return out;
}

namespace {

void name_index(const Term& t, std::map<VarId, Term>& renaming,
                const std::set<VarId>* keep) {
  if (t.is_ground()) return;
  if (t.is_var()) {
    if (keep && keep->count(t.var_id())) return;
    if (!renaming.count(t.var_id())) renaming.emplace(t.var_id(), Term::fresh(t.name()));
    return;
  }
  for (const auto& a : t.args()) name_index(a, renaming, keep);
}

Constraints rename_impl(std::span<const Constraint> cs, Bindings& renaming,
                        const std::set<VarId>* keep) {
  for (const auto& c : cs) {
    for (const auto& a : c.args()) name_index(a, renaming, keep);
  }
  return substitute(cs, renaming);
}

}  // namespace

Constraints rename_apart(std::span<const Constraint> cs, Bindings* renaming) {
  Bindings local;
  Bindings& r = renaming ? *renaming : local;
  return rename_impl(cs, r, nullptr);
}

Constraints rename_apart_except(std::span<const Constraint> cs, const std::set<VarId>& keep) {
  Bindings r;
  return rename_impl(cs, r, &keep);
}

namespace {

void shape(const Term& t, const std::map<VarId, int>* numbering, std::string& out) {
  switch (t.kind()) {
    case Term::Kind::Var:
      if (numbering) {
        auto it = numbering->find(t.var_id());
        out += "_" + std::to_string(it == numbering->end() ? -1 : it->second);
      } else {
        out += '_';
      }
      return;
    case Term::Kind::Const:
      out += t.name();
      return;
    case Term::Kind::Compound:
      out += t.name();
      out += '(';
      for (std::size_t i = 0; i < t.arity(); ++i) {
        if (i) out += ',';
        shape(t.args()[i], numbering, out);
      }
      out += ')';
      return;
  }
}

/// Orientation used by canonical_key: converse order relations flipped, the
/// arguments of symmetric relations ordered by shape.
Constraint key_oriented(const Constraint& c) {
  if (!c.is_primitive()) return c;
  if (c.relation() == Relation::Ge || c.relation() == Relation::Gt) {
    return Constraint::primitive(converse(c.relation()), c.right(), c.left());
  }
  if (c.relation() == Relation::Eq || c.relation() == Relation::Neq) {
    std::string l, r;
    shape(c.left(), nullptr, l);
    shape(c.right(), nullptr, r);
    if (r < l) return Constraint::primitive(c.relation(), c.right(), c.left());
  }
  return c;
}

std::string shape_of(const Constraint& c, const std::map<VarId, int>* numbering) {
  std::string out = c.is_primitive() ? "$" : "";
  out += c.predicate();
  out += '(';
  for (std::size_t i = 0; i < c.args().size(); ++i) {
    if (i) out += ',';
    shape(c.args()[i], numbering, out);
  }
  out += ')';
  return out;
}

void number_vars(const Term& t, std::map<VarId, int>& numbering) {
  if (t.is_ground()) return;
  if (t.is_var()) {
    numbering.emplace(t.var_id(), static_cast<int>(numbering.size()));
    return;
  }
  for (const auto& a : t.args()) number_vars(a, numbering);
}

}  // namespace

std::string canonical_key(std::span<const Constraints> sections) {
  std::vector<std::vector<Constraint>> oriented(sections.size());
  std::vector<std::vector<std::size_t>> orders(sections.size());
  for (std::size_t s = 0; s < sections.size(); ++s) {
    for (const auto& c : sections[s]) oriented[s].push_back(key_oriented(c));
    std::vector<std::string> shapes;
    for (const auto& c : oriented[s]) shapes.push_back(shape_of(c, nullptr));
    orders[s].resize(oriented[s].size());
    std::iota(orders[s].begin(), orders[s].end(), 0);
    std::stable_sort(orders[s].begin(), orders[s].end(),
                     [&](std::size_t a, std::size_t b) { return shapes[a] < shapes[b]; });
  }
  std::map<VarId, int> numbering;
  for (std::size_t s = 0; s < sections.size(); ++s) {
    for (std::size_t i : orders[s]) {
      for (const auto& a : oriented[s][i].args()) number_vars(a, numbering);
    }
  }
  std::string key;
  for (std::size_t s = 0; s < sections.size(); ++s) {
    if (s) key += '|';
    for (std::size_t i : orders[s]) {
      key += shape_of(oriented[s][i], &numbering);
      key += ';';
    }
  }
  return key;
}

std::string canonical_key(std::span<const Constraint> cs) {
  const Constraints single(cs.begin(), cs.end());
  return canonical_key(std::span<const Constraints>(&single, 1));
}

std::vector<Bindings> match_constraint(const Constraint& pattern, const Constraint& target,
                                       const Bindings& b) {
  std::vector<Bindings> out;
  if (pattern.is_primitive() != target.is_primitive()) return out;
  auto match_args = [&](std::span<const Term> pa, std::span<const Term> ta) {
    if (pa.size() != ta.size()) return;
    std::optional<Bindings> cur = b;
    for (std::size_t i = 0; i < pa.size() && cur; ++i) cur = match(pa[i], ta[i], std::move(*cur));
    if (cur) out.push_back(std::move(*cur));
  };
  if (!pattern.is_primitive()) {
    if (pattern.predicate() == target.predicate()) match_args(pattern.args(), target.args());
    return out;
  }
  auto orient = [](const Constraint& c) {
    if (c.relation() == Relation::Ge || c.relation() == Relation::Gt) {
      return Constraint::primitive(converse(c.relation()), c.right(), c.left());
    }
    return c;
  };
  Constraint p = orient(pattern);
  Constraint t = orient(target);
  if (p.relation() != t.relation()) return out;
  match_args(p.args(), t.args());
  if (p.relation() == Relation::Eq || p.relation() == Relation::Neq) {
    std::vector<Term> swapped{t.right(), t.left()};
    std::size_t before = out.size();
    match_args(p.args(), swapped);
    if (out.size() == before + 1 && before == 1 && out[0] == out[1]) out.pop_back();
  }
  return out;
}

namespace {

bool subsume_from(std::span<const Constraint> a, std::span<const Constraint> b, std::size_t i,
                  const Bindings& current, Bindings* witness) {
  if (i == a.size()) {
    if (witness) *witness = current;
    return true;
  }
  for (const auto& target : b) {
    for (auto& next : match_constraint(a[i], target, current)) {
      if (subsume_from(a, b, i + 1, next, witness)) return true;
    }
  }
  return false;
}

}  // namespace

std::optional<Bindings> theta_subsumption_witness(std::span<const Constraint> a,
                                                  std::span<const Constraint> b) {
  // most selective constraints first: fewest candidate targets
  std::vector<Constraint> ordered(a.begin(), a.end());
  auto candidates = [&](const Constraint& c) {
    return std::count_if(b.begin(), b.end(), [&](const Constraint& t) {
      return t.is_primitive() == c.is_primitive() &&
             (c.is_primitive() ? c.normalized().relation() == t.normalized().relation()
                               : c.predicate() == t.predicate());
    });
  };
  std::stable_sort(ordered.begin(), ordered.end(), [&](const Constraint& x, const Constraint& y) {
    return candidates(x) < candidates(y);
  });
  Bindings witness;
  if (subsume_from(ordered, b, 0, {}, &witness)) return witness;
  return std::nullopt;
}

bool theta_subsumes(std::span<const Constraint> a, std::span<const Constraint> b) {
  return theta_subsumption_witness(a, b).has_value();
}

namespace {

bool injective_renaming(const Bindings& b) {
  std::set<VarId> targets;
  for (const auto& [v, t] : b) {
    if (!t.is_var() || !targets.insert(t.var_id()).second) return false;
  }
  return true;
}

bool variant_from(std::span<const Constraints> a, std::span<const Constraints> b,
                  std::size_t section, std::size_t i, std::vector<std::vector<bool>>& used,
                  const Bindings& current) {
  if (section == a.size()) return injective_renaming(current);
  if (i == a[section].size()) return variant_from(a, b, section + 1, 0, used, current);
  for (std::size_t j = 0; j < b[section].size(); ++j) {
    if (used[section][j]) continue;
    for (auto& next : match_constraint(a[section][i], b[section][j], current)) {
      if (!injective_renaming(next)) continue;
      used[section][j] = true;
      bool ok = variant_from(a, b, section, i + 1, used, next);
      used[section][j] = false;
      if (ok) return true;
    }
  }
  return false;
}

}  // namespace

bool variants(std::span<const Constraints> a, std::span<const Constraints> b) {
  if (a.size() != b.size()) return false;
  std::vector<std::vector<bool>> used;
  for (std::size_t s = 0; s < a.size(); ++s) {
    if (a[s].size() != b[s].size()) return false;
    used.emplace_back(b[s].size(), false);
  }
  if (canonical_key(a) == canonical_key(b)) return true;
  return variant_from(a, b, 0, 0, used, {});
}

bool variants(std::span<const Constraint> a, std::span<const Constraint> b) {
  const Constraints sa(a.begin(), a.end()), sb(b.begin(), b.end());
  return variants(std::span<const Constraints>(&sa, 1), std::span<const Constraints>(&sb, 1));
}

bool SubsumptionCache::subsumes(std::span<const Constraint> a, std::span<const Constraint> b) {
  // joint key: a and b may share variables
  Constraints joint(a.begin(), a.end());
  joint.push_back(Constraint::user("|", {}));
  joint.insert(joint.end(), b.begin(), b.end());
  std::string key;
  for (const auto& c : joint) key += to_string(c) + ";";
  {
    std::lock_guard lock(mutex_);
    if (auto it = memo_.find(key); it != memo_.end()) {
      ++hits_;
      return it->second;
    }
  }
  bool result = theta_subsumes(a, b);
  std::lock_guard lock(mutex_);
  memo_.emplace(std::move(key), result);
  return result;
}

}  // namespace chrgen
