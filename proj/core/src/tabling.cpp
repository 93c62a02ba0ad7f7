#include "chrgen/tabling.hpp"

#include <deque>
#include <functional>

namespace chrgen {

std::string_view to_string(Outcome::Kind kind) {
  switch (kind) {
    case Outcome::Kind::Fails: return "fails";
    case Outcome::Kind::Answers: return "answers";
    case Outcome::Kind::DepthExceeded: return "depth_exceeded";
  }
  return "?";
}

namespace {

Constraints applied(std::span<const Constraint> cs, const Store& s) {
  Constraints out;
  out.reserve(cs.size());
  for (const auto& c : cs) out.push_back(s.apply(c));
  return out;
}

/// Residual constraints of the store that a subsuming call must respect.
Constraints call_constraints(const Store& s, std::span<const Constraint> norm_atoms) {
  return project(s, var_set(norm_atoms));
}

bool match_atoms(std::span<const Constraint> pattern, std::span<const Constraint> target,
                 std::size_t i, std::vector<bool>& used, const Bindings& b,
                 const std::function<bool(const Bindings&)>& accept) {
  if (i == pattern.size()) return accept(b);
  for (std::size_t j = 0; j < target.size(); ++j) {
    if (used[j]) continue;
    for (const auto& next : match_constraint(pattern[i], target[j], b)) {
      used[j] = true;
      bool done = match_atoms(pattern, target, i + 1, used, next, accept);
      used[j] = false;
      if (done) return true;
    }
  }
  return false;
}

std::optional<Bindings> subsuming_match(std::span<const Constraint> tabled_norm,
                                        std::span<const Constraint> tabled_call,
                                        std::span<const Constraint> current_norm,
                                        const Store& current_store) {
  if (tabled_norm.size() != current_norm.size()) return std::nullopt;
  std::vector<bool> used(current_norm.size(), false);
  std::optional<Bindings> witness;
  match_atoms(tabled_norm, current_norm, 0, used, {}, [&](const Bindings& sigma) {
    std::set<VarId> keep;
    for (const auto& [v, t] : sigma) keep.insert(v);
    Constraints required = substitute(rename_apart_except(tabled_call, keep), sigma);
    if (!entails_all(current_store, required)) return false;
    witness = sigma;
    return true;
  });
  return witness;
}

/// Variant-insensitive key for an answer: variables outside `vars` are
/// numbered by first occurrence.
std::string answer_key(const Answer& a, const std::set<VarId>& vars) {
  Bindings names;
  int locals = 0;
  for (VarId v : vars_of(a)) {
    names.emplace(v, Term::constant(vars.count(v) ? "$V" + std::to_string(v)
                                                   : "$L" + std::to_string(locals++)));
  }
  return to_string(substitute(a, names));
}

void var_terms(const Term& t, std::map<VarId, Term>& out) {
  if (t.is_ground()) return;
  if (t.is_var()) {
    out.emplace(t.var_id(), t);
    return;
  }
  for (const auto& a : t.args()) var_terms(a, out);
}

/// Fresh copy of a clause; variables are named `<name>_<step>` so traces
/// stay readable and deterministic.
Clause rename_clause(const Clause& clause, std::size_t step) {
  std::map<VarId, Term> vars;
  for (const auto& a : clause.head.args()) var_terms(a, vars);
  for (const auto& c : clause.body) {
    for (const auto& a : c.args()) var_terms(a, vars);
  }
  Bindings b;
  for (const auto& [v, t] : vars) b.emplace(v, Term::fresh(t.name() + "_" + std::to_string(step)));
  Clause out = clause;
  out.head = substitute(clause.head, b);
  out.body = substitute(clause.body, b);
  return out;
}

std::optional<Store> resolve_head(const Store& s, const Constraint& atom, const Clause& clause,
                                  bool with_body_prims) {
  Store out = s;
  for (std::size_t i = 0; i < atom.args().size(); ++i) {
    if (!out.add(Constraint::primitive(Relation::Eq, atom.args()[i], clause.head.args()[i]))) {
      return std::nullopt;
    }
  }
  if (with_body_prims) {
    for (const auto& c : clause.body_prim()) {
      if (!out.add(c)) return std::nullopt;
    }
  }
  return out;
}

struct AnswerTable {
  std::vector<Answer> answers;
  std::vector<int> depth;  // resolution steps below the table entry
  std::set<std::string> keys;

  bool add(Answer a, int d, const std::set<VarId>& vars) {
    std::string key = answer_key(a, vars);
    if (keys.count(key)) return false;
    if (var_set(a).size() == vars_in(a, vars)) {
      auto sa = Store::of(a);
      for (const auto& b : answers) {
        if (var_set(b).size() != vars_in(b, vars)) continue;
        auto sb = Store::of(b);
        if (sa && sb && entails_all(*sa, b) && entails_all(*sb, a)) return false;
      }
    }
    keys.insert(std::move(key));
    answers.push_back(std::move(a));
    depth.push_back(d);
    return true;
  }

  static std::size_t vars_in(const Answer& a, const std::set<VarId>& vars) {
    std::size_t n = 0;
    for (VarId v : var_set(a)) n += vars.count(v);
    return n;
  }
};

class TabledEngine {
 public:
  TabledEngine(const Program& program, const EvalOptions& options)
      : program_(program), options_(options) {}

  Outcome run(const Goal& goal) {
    Constraints prims, atoms;
    for (const auto& c : goal) (c.is_primitive() ? prims : atoms).push_back(c);
    auto store = Store::of(prims);
    if (!store) {
      log("goal store inconsistent");
      return finish();
    }
    std::set<VarId> goal_vars = var_set(goal);
    root_vars_ = goal_vars;
    new_generator(atoms, *store, 0, goal_vars);
    if (atoms.empty()) {
      add_answer(0, project(*store, goal_vars), 0);
      return finish();
    }
    while (!queue_.empty() && !stop_) {
      std::size_t g = queue_.front();
      queue_.pop_front();
      expand(g);
      if (options_.mode == EvalMode::Exists && !stop_) fixpoint();
    }
    if (!stop_) fixpoint();
    return finish();
  }

 private:
  struct Generator {
    Constraints atoms;
    Store store;
    int depth = 0;
    std::set<VarId> vars;
    Constraints norm_atoms;
    Constraints call;
    AnswerTable table;
  };

  struct Edge {
    std::size_t parent;
    std::size_t target;
    std::optional<Bindings> sigma;  // nullopt: the target is the child itself
    Store store;
    int depth;
    std::size_t consumed = 0;
  };

  void log(const std::string& line) {
    if (options_.trace) options_.trace->push_back(line);
  }

  std::string label(std::size_t g) const { return "G" + std::to_string(g + 1); }

  std::string describe(std::span<const Constraint> atoms, const Store& s) const {
    // only renamings are resolved, so bound arguments stay visible in the store
    Bindings renaming;
    for (VarId v : var_set(atoms)) {
      const Term* t = s.substitution().lookup(v);
      if (!t || !t->is_var()) continue;
      while (const Term* next = s.substitution().lookup(t->var_id())) {
        if (!next->is_var()) break;
        t = next;
      }
      renaming.emplace(v, *t);
    }
    Constraints resolved = substitute(atoms, renaming);
    std::string out = to_string(resolved);
    std::set<VarId> shown = root_vars_;
    for (VarId v : var_set(resolved)) shown.insert(v);
    Constraints cs = project(s, shown);
    if (!cs.empty()) out += " | " + to_string(cs);
    return out;
  }

  std::set<VarId> shown_vars(std::size_t g) const {
    std::set<VarId> out = root_vars_;
    out.insert(gens_[g].vars.begin(), gens_[g].vars.end());
    return out;
  }

  std::size_t new_generator(const Constraints& atoms, const Store& s, int depth,
                            std::optional<std::set<VarId>> vars = std::nullopt) {
    Generator g;
    g.atoms = atoms;
    g.store = s;
    g.depth = depth;
    g.norm_atoms = applied(atoms, s);
    g.vars = vars ? *vars : var_set(g.norm_atoms);
    g.call = call_constraints(s, g.norm_atoms);
    gens_.push_back(std::move(g));
    std::size_t id = gens_.size() - 1;
    queue_.push_back(id);
    log("call " + label(id) + ": " + describe(atoms, s));
    return id;
  }

  void exceed(const std::string& why) {
    if (reason_.empty()) reason_ = why;
  }

  bool add_answer(std::size_t g, Answer a, int rel_depth) {
    Generator& gen = gens_[g];
    if (gen.depth + rel_depth > options_.depth) {
      exceed("depth");
      return false;
    }
    if (!gen.table.add(std::move(a), rel_depth, gen.vars)) return false;
    log("answer " + label(g) + ": " + to_string(gen.table.answers.back()));
    if (options_.max_answers && gen.table.answers.size() > options_.max_answers) {
      exceed("answer cap");
      stop_ = true;
    }
    if (g == 0 && options_.mode == EvalMode::Exists) stop_ = true;
    return true;
  }

  void expand(std::size_t g) {
    const Constraint atom = gens_[g].atoms.front();
    const Constraints rest(gens_[g].atoms.begin() + 1, gens_[g].atoms.end());
    const int depth = gens_[g].depth + 1;
    if (depth > options_.depth) {
      exceed("depth");
      log("depth bound reached at " + label(g));
      return;
    }
    auto clauses = program_.clauses_for(atom);
    for (std::size_t k = 0; k < clauses.size(); ++k) {
      if (++steps_ > options_.node_budget) {
        exceed("node budget");
        stop_ = true;
        return;
      }
      Clause clause = rename_clause(*clauses[k], steps_);
      std::string head = "resolve " + label(g) + " " + to_string(atom) + " with clause " +
                         std::to_string(k + 1) + " -> ";
      auto s = resolve_head(gens_[g].store, atom, clause, true);
      if (!s) {
        log(head + "false");
        continue;
      }
      Constraints atoms = clause.body_user();
      atoms.insert(atoms.end(), rest.begin(), rest.end());
      // only the variables of this generator and of the new atoms matter below
      std::set<VarId> keep = gens_[g].vars;
      for (VarId v : var_set(atoms)) keep.insert(v);
      for (VarId v : var_set(applied(atoms, *s))) keep.insert(v);
      s = s->restricted(keep);
      if (atoms.empty()) {
        log(head + "leaf " + to_string(project(*s, shown_vars(g))));
        add_answer(g, project(*s, gens_[g].vars), 1);
        if (stop_) return;
        continue;
      }
      Constraints norm = applied(atoms, *s);
      std::optional<std::size_t> subsumer;
      std::optional<Bindings> sigma;
      for (std::size_t t = 0; t < gens_.size() && !subsumer; ++t) {
        sigma = subsuming_match(gens_[t].norm_atoms, gens_[t].call, norm, *s);
        if (sigma) subsumer = t;
      }
      if (subsumer) {
        log(head + "consumer of " + label(*subsumer) + ": " + describe(atoms, *s));
        edges_.push_back({g, *subsumer, sigma, *s, depth});
        continue;
      }
      log(head + "new table entry");
      std::size_t h = new_generator(atoms, *s, depth);
      edges_.push_back({g, h, std::nullopt, *s, depth});
    }
  }

  void fixpoint() {
    for (bool changed = true; changed && !stop_;) {
      changed = false;
      for (std::size_t i = 0; i < edges_.size() && !stop_; ++i) {
        while (!stop_ && edges_[i].consumed < gens_[edges_[i].target].table.answers.size()) {
          Edge& e = edges_[i];
          const Generator& t = gens_[e.target];
          Answer a = t.table.answers[e.consumed];
          int rel = t.table.depth[e.consumed];
          ++e.consumed;
          if (e.sigma) {
            std::set<VarId> keep;
            for (const auto& [v, _] : *e.sigma) keep.insert(v);
            a = substitute(rename_apart_except(a, keep), *e.sigma);
          }
          auto s = assert_all(e.store, a);
          if (!s) continue;
          const Generator& parent = gens_[e.parent];
          int depth = e.depth - parent.depth + rel;
          if (add_answer(e.parent, project(*s, parent.vars), depth)) changed = true;
        }
      }
    }
  }

  Outcome finish() {
    Outcome out;
    out.resolutions = steps_;
    out.reason = reason_;
    if (!gens_.empty()) out.answers = gens_[0].table.answers;
    if (!out.answers.empty() && (options_.mode == EvalMode::Exists || reason_.empty())) {
      out.kind = Outcome::Kind::Answers;
      if (options_.mode == EvalMode::Exists) out.answers.resize(1);
    } else if (!reason_.empty()) {
      out.kind = Outcome::Kind::DepthExceeded;
    } else {
      out.kind = Outcome::Kind::Fails;
    }
    log("result: " + std::string(to_string(out.kind)) +
        (reason_.empty() ? "" : " (" + reason_ + ")"));
    return out;
  }

  const Program& program_;
  const EvalOptions& options_;
  std::set<VarId> root_vars_;
  std::deque<Generator> gens_;
  std::vector<Edge> edges_;
  std::deque<std::size_t> queue_;
  std::size_t steps_ = 0;
  std::string reason_;
  bool stop_ = false;
};

class PlainEngine {
 public:
  /// Bindings allowed to pile up before the store drops dead variables.
  static constexpr std::size_t kCompactThreshold = 48;

  PlainEngine(const Program& program, const EvalOptions& options)
      : program_(program), options_(options) {}

  Outcome run(const Goal& goal) {
    vars_ = var_set(goal);
    solve(goal, Store{}, 0);
    Outcome out;
    out.resolutions = steps_;
    out.reason = reason_;
    out.answers = table_.answers;
    if (!out.answers.empty() && (options_.mode == EvalMode::Exists || reason_.empty())) {
      out.kind = Outcome::Kind::Answers;
    } else if (!reason_.empty()) {
      out.kind = Outcome::Kind::DepthExceeded;
    } else {
      out.kind = Outcome::Kind::Fails;
    }
    if (options_.trace) {
      options_.trace->push_back("result: " + std::string(to_string(out.kind)) +
                                (reason_.empty() ? "" : " (" + reason_ + ")"));
    }
    return out;
  }

 private:
  void exceed(const std::string& why) {
    if (reason_.empty()) reason_ = why;
  }

  void solve(const Constraints& literals, Store store, int depth) {
    std::size_t pos = 0;
    for (; pos < literals.size() && literals[pos].is_primitive(); ++pos) {
      auto next = assert_constraint(store, literals[pos]);
      if (!next) return;
      store = std::move(*next);
    }
    if (pos == literals.size()) {
      bool report = options_.witness || options_.mode == EvalMode::AllAnswers;
      table_.add(report ? project(store, vars_) : Answer{}, depth, vars_);
      if (options_.mode == EvalMode::Exists) stop_ = true;
      if (options_.max_answers && table_.answers.size() > options_.max_answers) {
        exceed("answer cap");
        stop_ = true;
      }
      return;
    }
    if (depth + 1 > options_.depth) {
      exceed("depth");
      return;
    }
    const Constraint& atom = literals[pos];
    auto clauses = program_.clauses_for(atom);
    for (std::size_t k = 0; k < clauses.size() && !stop_; ++k) {
      if (++steps_ > options_.node_budget) {
        exceed("node budget");
        stop_ = true;
        return;
      }
      Clause clause = rename_clause(*clauses[k], steps_);
      auto s = resolve_head(store, atom, clause, false);
      if (options_.trace) {
        options_.trace->push_back("resolve " + to_string(atom) + " with clause " +
                                  std::to_string(k + 1) + " at depth " +
                                  std::to_string(depth + 1) + (s ? "" : " -> false"));
      }
      if (!s) continue;
      Constraints next = clause.body;
      next.insert(next.end(), literals.begin() + static_cast<std::ptrdiff_t>(pos) + 1,
                  literals.end());
      if (s->substitution().size() > kCompactThreshold) {
        std::set<VarId> keep = var_set(next);
        if (options_.witness || options_.mode == EvalMode::AllAnswers) {
          keep.insert(vars_.begin(), vars_.end());
        }
        s = s->restricted(keep);
      }
      solve(next, std::move(*s), depth + 1);
    }
  }

  const Program& program_;
  const EvalOptions& options_;
  std::set<VarId> vars_;
  AnswerTable table_;
  std::size_t steps_ = 0;
  std::string reason_;
  bool stop_ = false;
};

}  // namespace

Outcome evaluate(const Program& program, const Goal& goal, const EvalOptions& options) {
  if (options.tabling) return TabledEngine(program, options).run(goal);
  return PlainEngine(program, options).run(goal);
}

std::optional<Bindings> call_subsumes(std::span<const Constraint> tabled_atoms,
                                      const Store& tabled_store,
                                      std::span<const Constraint> current_atoms,
                                      const Store& current_store) {
  Constraints tabled_norm = applied(tabled_atoms, tabled_store);
  Constraints current_norm = applied(current_atoms, current_store);
  return subsuming_match(tabled_norm, call_constraints(tabled_store, tabled_norm), current_norm,
                         current_store);
}

}  // namespace chrgen
