#include "chrgen/term.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <stdexcept>

namespace chrgen {

struct Term::Node {
  Kind kind = Kind::Const;
  VarId id = 0;
  std::string name;
  std::vector<Term> args;
  std::optional<long long> number;
  bool ground = true;
  std::uint64_t var_mask = 0;  // bit id % 64 for every variable inside
  std::size_t hash = 0;
};

namespace {

std::atomic<VarId> g_next_var{1};

std::uint64_t var_bit(VarId id) { return std::uint64_t{1} << (id % 64); }

std::size_t mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

std::optional<long long> parse_number(const std::string& s) {
  if (s.empty()) return std::nullopt;
  long long value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

const std::string kNil = "nil";
const std::string kCons = "cons";

}  // namespace

Term::Term() : Term(nil()) {}

Term Term::var(VarId id, std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Var;
  n->id = id;
  n->name = name.empty() ? "_G" + std::to_string(id) : std::move(name);
  n->ground = false;
  n->var_mask = var_bit(id);
  n->hash = mix(0x51ed27, id);
  // keep the global counter ahead of explicitly chosen ids
  VarId cur = g_next_var.load();
  while (cur <= id && !g_next_var.compare_exchange_weak(cur, id + 1)) {
  }
  return Term(std::move(n));
}

Term Term::constant(std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Const;
  n->number = parse_number(name);
  n->hash = std::hash<std::string>{}(name);
  n->name = std::move(name);
  return Term(std::move(n));
}

Term Term::number(long long value) { return constant(std::to_string(value)); }

Term Term::compound(std::string functor, std::vector<Term> args) {
  if (args.empty()) return constant(std::move(functor));
  auto n = std::make_shared<Node>();
  n->kind = Kind::Compound;
  std::size_t h = std::hash<std::string>{}(functor);
  for (const auto& a : args) {
    n->ground = n->ground && a.is_ground();
    n->var_mask |= a.node_->var_mask;
    h = mix(h, a.hash());
  }
  n->hash = mix(h, args.size());
  n->name = std::move(functor);
  n->args = std::move(args);
  return Term(std::move(n));
}

Term Term::nil() {
  static const Term kNilTerm = [] {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Const;
    n->name = kNil;
    n->hash = std::hash<std::string>{}(kNil);
    return Term(std::move(n));
  }();
  return kNilTerm;
}

Term Term::cons(Term head, Term tail) { return compound(kCons, {std::move(head), std::move(tail)}); }

Term Term::list(std::span<const Term> items, std::optional<Term> tail) {
  Term result = tail ? *tail : nil();
  for (auto it = items.rbegin(); it != items.rend(); ++it) result = cons(*it, result);
  return result;
}

Term Term::fresh(std::string_view hint) {
  VarId id = g_next_var.fetch_add(1);
  std::string name = hint.empty() ? "_G" + std::to_string(id) : std::string(hint);
  auto n = std::make_shared<Node>();
  n->kind = Kind::Var;
  n->id = id;
  n->name = std::move(name);
  n->ground = false;
  n->var_mask = var_bit(id);
  n->hash = mix(0x51ed27, id);
  return Term(std::move(n));
}

Term::Kind Term::kind() const { return node_->kind; }
bool Term::is_nil() const { return node_->kind == Kind::Const && node_->name == kNil; }
bool Term::is_cons() const {
  return node_->kind == Kind::Compound && node_->args.size() == 2 && node_->name == kCons;
}
bool Term::is_ground() const { return node_->ground; }
std::optional<long long> Term::as_number() const { return node_->number; }

VarId Term::var_id() const {
  if (node_->kind != Kind::Var) throw std::logic_error("var_id() on non-variable term");
  return node_->id;
}

const std::string& Term::name() const { return node_->name; }
std::span<const Term> Term::args() const { return node_->args; }
std::size_t Term::hash() const { return node_->hash; }

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  if (a.node_->hash != b.node_->hash || a.node_->kind != b.node_->kind) return false;
  switch (a.node_->kind) {
    case Term::Kind::Var:
      return a.node_->id == b.node_->id;
    case Term::Kind::Const:
      return a.node_->name == b.node_->name;
    case Term::Kind::Compound:
      return a.node_->name == b.node_->name && a.node_->args == b.node_->args;
  }
  return false;
}

std::strong_ordering operator<=>(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  if (auto c = a.node_->kind <=> b.node_->kind; c != 0) return c;
  switch (a.node_->kind) {
    case Term::Kind::Var:
      return a.node_->id <=> b.node_->id;
    case Term::Kind::Const: {
      const auto& na = a.node_->number;
      const auto& nb = b.node_->number;
      if (na && nb) return *na <=> *nb;
      if (na) return std::strong_ordering::less;
      if (nb) return std::strong_ordering::greater;
      return a.node_->name <=> b.node_->name;
    }
    case Term::Kind::Compound: {
      if (auto c = a.arity() <=> b.arity(); c != 0) return c;
      if (auto c = a.node_->name <=> b.node_->name; c != 0) return c;
      for (std::size_t i = 0; i < a.arity(); ++i) {
        if (auto c = a.node_->args[i] <=> b.node_->args[i]; c != 0) return c;
      }
      return std::strong_ordering::equal;
    }
  }
  return std::strong_ordering::equal;
}

namespace {

void print(const Term& t, std::string& out) {
  switch (t.kind()) {
    case Term::Kind::Var:
    case Term::Kind::Const:
      out += t.is_nil() ? std::string("[]") : t.name();
      return;
    case Term::Kind::Compound:
      break;
  }
  if (t.is_cons()) {
    out += '[';
    Term cur = t;
    bool first = true;
    while (cur.is_cons()) {
      if (!first) out += ',';
      first = false;
      print(cur.args()[0], out);
      cur = cur.args()[1];
    }
    if (!cur.is_nil()) {
      out += '|';
      print(cur, out);
    }
    out += ']';
    return;
  }
  out += t.name();
  out += '(';
  for (std::size_t i = 0; i < t.arity(); ++i) {
    if (i) out += ',';
    print(t.args()[i], out);
  }
  out += ')';
}

}  // namespace

std::string to_string(const Term& t) {
  std::string out;
  print(t, out);
  return out;
}

bool Term::may_contain(VarId v) const { return (node_->var_mask & var_bit(v)) != 0; }
std::uint64_t Term::var_signature() const { return node_->var_mask; }

bool occurs(VarId v, const Term& t) {
  if (!t.may_contain(v)) return false;
  if (t.is_var()) return t.var_id() == v;
  for (const auto& a : t.args()) {
    if (occurs(v, a)) return true;
  }
  return false;
}

void collect_vars(const Term& t, std::vector<VarId>& out) {
  if (t.is_ground()) return;
  if (t.is_var()) {
    for (VarId v : out) {
      if (v == t.var_id()) return;
    }
    out.push_back(t.var_id());
    return;
  }
  for (const auto& a : t.args()) collect_vars(a, out);
}

void collect_vars(const Term& t, std::set<VarId>& out) {
  if (t.is_ground()) return;
  if (t.is_var()) {
    out.insert(t.var_id());
    return;
  }
  for (const auto& a : t.args()) collect_vars(a, out);
}

namespace {

/// Rebuilds t with f applied to its arguments, sharing t when nothing changes.
template <typename F>
Term map_args(const Term& t, F&& f) {
  auto args = t.args();
  std::vector<Term> out;
  bool changed = false;
  for (std::size_t i = 0; i < args.size(); ++i) {
    Term a = f(args[i]);
    if (!changed) {
      if (a.identical(args[i])) continue;
      changed = true;
      out.reserve(args.size());
      out.assign(args.begin(), args.begin() + static_cast<std::ptrdiff_t>(i));
    }
    out.push_back(std::move(a));
  }
  return changed ? Term::compound(t.name(), std::move(out)) : t;
}

Term substitute_masked(const Term& t, const Bindings& b, std::uint64_t domain) {
  if (t.is_ground() || !(t.var_signature() & domain)) return t;
  if (t.is_var()) {
    auto it = b.find(t.var_id());
    return it == b.end() ? t : it->second;
  }
  return map_args(t, [&](const Term& a) { return substitute_masked(a, b, domain); });
}

}  // namespace

Term substitute(const Term& t, const Bindings& b) {
  if (t.is_ground() || b.empty()) return t;
  std::uint64_t domain = 0;
  for (const auto& [v, _] : b) domain |= var_bit(v);
  return substitute_masked(t, b, domain);
}

namespace {

bool match_into(const Term& pattern, const Term& target, Bindings& b) {
  if (pattern.is_var()) {
    auto [it, inserted] = b.emplace(pattern.var_id(), target);
    return inserted || it->second == target;
  }
  if (pattern.kind() != target.kind() || pattern.name() != target.name() ||
      pattern.arity() != target.arity()) {
    return false;
  }
  if (pattern.is_ground()) return pattern == target;
  for (std::size_t i = 0; i < pattern.arity(); ++i) {
    if (!match_into(pattern.args()[i], target.args()[i], b)) return false;
  }
  return true;
}

}  // namespace

std::optional<Bindings> match(const Term& pattern, const Term& target, Bindings b) {
  if (!match_into(pattern, target, b)) return std::nullopt;
  return b;
}

const Substitution::Entry* Substitution::find(VarId v) const {
  if (!(domain_ & var_bit(v))) return nullptr;
  auto it = std::lower_bound(entries_.begin(), entries_.end(), v,
                             [](const Entry& e, VarId id) { return e.id < id; });
  return it != entries_.end() && it->id == v ? &*it : nullptr;
}

const Term* Substitution::lookup(VarId v) const {
  const Entry* e = find(v);
  return e ? &e->range : nullptr;
}

Term Substitution::apply(const Term& t) const {
  if (t.is_ground() || !(t.var_signature() & domain_)) return t;
  if (t.is_var()) {
    const Term* bound = lookup(t.var_id());
    return bound ? apply(*bound) : t;
  }
  return map_args(t, [&](const Term& a) { return apply(a); });
}

std::map<VarId, Term> Substitution::solved() const {
  std::map<VarId, Term> out;
  for (const auto& e : entries_) out.emplace_hint(out.end(), e.id, apply(e.range));
  return out;
}

const Term* Substitution::variable(VarId v) const {
  const Entry* e = find(v);
  return e ? &e->var : nullptr;
}

void Substitution::bind(const Term& var, const Term& t) {
  VarId v = var.var_id();
  domain_ |= var_bit(v);
  auto it = std::lower_bound(entries_.begin(), entries_.end(), v,
                             [](const Entry& e, VarId id) { return e.id < id; });
  if (it != entries_.end() && it->id == v) {
    it->range = t;
  } else {
    entries_.insert(it, Entry{v, var, t});
  }
}

bool unify_into(const Term& t1, const Term& t2, Substitution& s) {
  std::vector<std::pair<Term, Term>> work{{t1, t2}};
  while (!work.empty()) {
    auto [a, b] = std::move(work.back());
    work.pop_back();
    // only the root is dereferenced; subterms are visited as they come
    auto deref = [&](Term& t) {
      while (t.is_var()) {
        const Term* bound = s.lookup(t.var_id());
        if (!bound) return;
        t = *bound;
      }
    };
    deref(a);
    deref(b);
    if (a.identical(b)) continue;
    if (a.is_var() && b.is_var()) {
      if (a.var_id() == b.var_id()) continue;
      // younger variable points at the older one
      if (a.var_id() < b.var_id()) std::swap(a, b);
      s.bind(a, b);
      continue;
    }
    if (b.is_var()) std::swap(a, b);
    if (a.is_var()) {
      b = s.apply(b);
      if (occurs(a.var_id(), b)) return false;
      s.bind(a, b);
      continue;
    }
    if (a.kind() != b.kind() || a.name() != b.name() || a.arity() != b.arity()) return false;
    for (std::size_t i = 0; i < a.arity(); ++i) work.emplace_back(a.args()[i], b.args()[i]);
  }
  return true;
}

std::optional<Substitution> unify(const Term& t1, const Term& t2, Substitution s) {
  if (!unify_into(t1, t2, s)) return std::nullopt;
  return s;
}

}  // namespace chrgen
