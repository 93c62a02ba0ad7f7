#include "chrgen/miner.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <mutex>
#include <thread>

namespace chrgen {

void MinerStats::merge(const MinerStats& o) {
  evaluations += o.evaluations;
  depth_exceeded += o.depth_exceeded;
  cache_hits += o.cache_hits;
  skipped_opt1 += o.skipped_opt1;
  skipped_opt2 += o.skipped_opt2;
  skipped_redundant += o.skipped_redundant;
  unsat_goals += o.unsat_goals;
  blowups += o.blowups;
  evaluated_goals.insert(evaluated_goals.end(), o.evaluated_goals.begin(), o.evaluated_goals.end());
  depth_exceeded_goals.insert(depth_exceeded_goals.end(), o.depth_exceeded_goals.begin(),
                              o.depth_exceeded_goals.end());
}

std::string_view to_string(Validity v) {
  switch (v) {
    case Validity::Valid: return "valid";
    case Validity::Invalid: return "invalid";
    case Validity::DepthExceeded: return "depth_exceeded";
    case Validity::Blowup: return "blowup";
  }
  return "?";
}

namespace {

using Mask = std::uint64_t;

constexpr std::size_t kMaxCandidates = 24;

bool subset_of(Mask a, Mask b) { return (a & ~b) == 0; }

/// All subsets of {0..n-1}, by size, then lexicographically by index list.
std::vector<Mask> subsets_in_order(std::size_t n) {
  if (n > kMaxCandidates) {
    throw std::invalid_argument("too many lhs candidates (" + std::to_string(n) + ", at most " +
                                std::to_string(kMaxCandidates) + ")");
  }
  std::vector<Mask> out;
  std::vector<std::size_t> idx;
  std::function<void(std::size_t, std::size_t, Mask)> rec = [&](std::size_t start, std::size_t left,
                                                                 Mask m) {
    if (left == 0) {
      out.push_back(m);
      return;
    }
    for (std::size_t i = start; i + left <= n; ++i) rec(i + 1, left - 1, m | (Mask{1} << i));
  };
  for (std::size_t k = 0; k <= n; ++k) rec(0, k, 0);
  return out;
}

Constraints members(const Constraints& cands, Mask m) {
  Constraints out;
  for (std::size_t i = 0; i < cands.size(); ++i) {
    if (m & (Mask{1} << i)) out.push_back(cands[i]);
  }
  return out;
}

/// base ∪ parts, without repeating a constraint.
Goal make_goal(const Goal& base, std::initializer_list<std::span<const Constraint>> parts) {
  Goal g = base;
  for (auto part : parts) {
    for (const auto& c : part) {
      if (!contains(g, c)) g.push_back(c);
    }
  }
  return g;
}

std::string var_exact_key(const Term& t) {
  if (t.is_var()) return t.name() + "#" + std::to_string(t.var_id());
  if (t.is_const()) return t.name();
  std::string s = t.name() + "(";
  for (std::size_t i = 0; i < t.arity(); ++i) {
    if (i) s += ",";
    s += var_exact_key(t.args()[i]);
  }
  return s + ")";
}

/// Identity of a goal as a set of constraints over fixed variables.
std::string goal_key(const Goal& g) {
  std::vector<std::string> parts;
  for (const auto& c0 : g) {
    Constraint c = c0.normalized();
    std::string s = (c.is_primitive() ? "$" : "") + c.predicate() + "(";
    for (const auto& a : c.args()) s += var_exact_key(a) + ",";
    parts.push_back(s + ")");
  }
  std::sort(parts.begin(), parts.end());
  parts.erase(std::unique(parts.begin(), parts.end()), parts.end());
  std::string key;
  for (const auto& p : parts) key += p + ";";
  return key;
}

void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& body) {
  if (jobs <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex error_mutex;
  for (unsigned t = 0; t < std::min<std::size_t>(jobs, n); ++t) {
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < n;) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

/// Runs goal evaluations, counting them and optionally remembering verdicts.
class GoalRunner {
 public:
  GoalRunner(const Program& program, const MinerOptions& options, MinerStats& stats)
      : program_(program), options_(options), stats_(stats) {}

  Outcome run(const Goal& goal, EvalMode mode) {
    std::string key = (mode == EvalMode::Exists ? "E:" : "A:") + goal_key(goal);
    if (options_.opt3) {
      std::lock_guard lock(mutex_);
      if (auto it = cache_.find(key); it != cache_.end()) {
        ++stats_.cache_hits;
        return it->second;
      }
    }
    Constraints prims;
    for (const auto& c : goal) {
      if (c.is_primitive()) prims.push_back(c);
    }
    if (!Store::of(prims)) {
      std::lock_guard lock(mutex_);
      ++stats_.unsat_goals;
      return Outcome{};
    }
    EvalOptions eval;
    eval.depth = options_.depth;
    eval.tabling = options_.tabling;
    eval.node_budget = options_.node_budget;
    eval.mode = mode;
    eval.witness = false;
    if (mode == EvalMode::AllAnswers) eval.max_answers = options_.answers_cap;
    Outcome out = evaluate(program_, goal, eval);
    std::lock_guard lock(mutex_);
    ++stats_.evaluations;
    stats_.evaluated_goals.push_back(to_string(goal));
    if (out.exceeded()) {
      ++stats_.depth_exceeded;
      stats_.depth_exceeded_goals.push_back(to_string(goal) + " (" + out.reason + ")");
    }
    if (options_.opt3) cache_.emplace(std::move(key), out);
    return out;
  }

  MinerStats& stats() { return stats_; }
  std::mutex& mutex() { return mutex_; }

 private:
  const Program& program_;
  const MinerOptions& options_;
  MinerStats& stats_;
  std::mutex mutex_;
  std::map<std::string, Outcome> cache_;
};

/// Bookkeeping shared by the primitive and general miners: the failing lhs
/// sets and the rules found so far, for superset pruning and options 1/2.
class LhsSearch {
 public:
  LhsSearch(const Constraints& cand_lhs, const MinerOptions& options)
      : cand_lhs_(cand_lhs), options_(options) {}

  enum class Skip { None, Failing, Opt1, Opt2 };

  Skip check(Mask m) const {
    for (Mask f : failing_) {
      if (subset_of(f, m)) return Skip::Failing;
    }
    if (options_.opt2) {
      for (const auto& [c1, j] : implied_) {
        if (!(c1 & (Mask{1} << j)) && subset_of(c1 | (Mask{1} << j), m)) return Skip::Opt2;
      }
    }
    if (options_.opt1) {
      // C ∪ {not d} with C ⇒ d known: fails without evaluation
      for (std::size_t j = 0; j < cand_lhs_.size(); ++j) {
        Mask bit = Mask{1} << j;
        if (!(m & bit)) continue;
        auto it = rhs_.find(m & ~bit);
        if (it == rhs_.end()) continue;
        for (const auto& d : it->second) {
          if (d.is_primitive() && same_constraint(cand_lhs_[j], negate(d))) return Skip::Opt1;
        }
      }
    }
    return Skip::None;
  }

  void mark_failing(Mask m) { failing_.push_back(m); }

  void record(Mask m, const Constraints& rhs) {
    auto& stored = rhs_[m];
    for (const auto& d : rhs) {
      stored.push_back(d);
      for (std::size_t j = 0; j < cand_lhs_.size(); ++j) {
        if (same_constraint(cand_lhs_[j], d)) implied_.emplace_back(m, j);
      }
    }
  }

 private:
  const Constraints& cand_lhs_;
  const MinerOptions& options_;
  std::vector<Mask> failing_;
  std::map<Mask, Constraints> rhs_;
  std::vector<std::pair<Mask, std::size_t>> implied_;
};

std::vector<Answer> rename_locals(const std::vector<Answer>& answers, const std::set<VarId>& keep) {
  std::vector<Answer> out;
  out.reserve(answers.size());
  for (const auto& a : answers) out.push_back(rename_apart_except(a, keep));
  return out;
}

Validity general_test(GoalRunner& runner, const Constraints& lhs, const Constraints& rhs,
                      const MinerOptions& options, const Outcome* lhs_outcome = nullptr,
                      bool rhs_vars_global = false) {
  Outcome a = lhs_outcome ? *lhs_outcome : runner.run(lhs, EvalMode::AllAnswers);
  if (a.exceeded()) return Validity::DepthExceeded;
  if (a.fails()) return Validity::Valid;
  Outcome b = runner.run(make_goal(lhs, {rhs}), EvalMode::AllAnswers);
  if (b.exceeded()) return Validity::DepthExceeded;
  std::set<VarId> keep = var_set(lhs);
  if (rhs_vars_global) {
    for (VarId v : var_set(rhs)) keep.insert(v);
  }
  try {
    bool sat = dnf_satisfiable(rename_locals(a.answers, keep), rename_locals(b.answers, keep),
                               options.dnf_cap);
    return sat ? Validity::Invalid : Validity::Valid;
  } catch (const BlowupExceeded&) {
    std::lock_guard lock(runner.mutex());
    ++runner.stats().blowups;
    return Validity::Blowup;
  }
}

std::string describe_goal(const Goal& g) { return to_string(g); }

}  // namespace

Validity check_general_rule(const Program& program, const Constraints& lhs, const Constraints& rhs,
                            const MinerOptions& options, MinerStats* stats) {
  MinerStats local;
  GoalRunner runner(program, options, stats ? *stats : local);
  return general_test(runner, lhs, rhs, options);
}

Validity check_closed_rule(const Program& program, const Constraints& lhs, const Constraints& rhs,
                           const MinerOptions& options, MinerStats* stats) {
  MinerStats local;
  GoalRunner runner(program, options, stats ? *stats : local);
  return general_test(runner, lhs, rhs, options, nullptr, true);
}

MineResult mine_primitive(const Program& program, const CandidateSpec& spec,
                          const MinerOptions& options) {
  require_primitive_rhs(spec);
  MineResult result;
  GoalRunner runner(program, options, result.stats);
  LhsSearch search(spec.cand_lhs, options);
  for (Mask m : subsets_in_order(spec.cand_lhs.size())) {
    auto skip = search.check(m);
    if (skip == LhsSearch::Skip::Failing) continue;
    if (skip == LhsSearch::Skip::Opt2) {
      ++result.stats.skipped_opt2;
      continue;
    }
    if (skip == LhsSearch::Skip::Opt1) {
      ++result.stats.skipped_opt1;
      search.mark_failing(m);
      continue;
    }
    Constraints c = members(spec.cand_lhs, m);
    Goal lhs = make_goal(spec.base, {c});
    Outcome out = runner.run(lhs, EvalMode::Exists);
    if (out.fails()) {
      result.rules.push_back({RuleKind::Failure, lhs, {}, {describe_goal(lhs) + ": fails"}});
      search.mark_failing(m);
      continue;
    }
    std::vector<std::optional<std::string>> proof(spec.cand_rhs.size());
    parallel_for(spec.cand_rhs.size(), options.jobs, [&](std::size_t i) {
      const Constraint& d = spec.cand_rhs[i];
      if (contains(c, d)) return;  // trivially implied by the lhs
      Constraint nd = negate(d);
      Goal g = make_goal(lhs, {std::span<const Constraint>(&nd, 1)});
      if (runner.run(g, EvalMode::Exists).fails()) proof[i] = describe_goal(g) + ": fails";
    });
    Rule rule{RuleKind::Propagation, lhs, {}, {}};
    for (std::size_t i = 0; i < proof.size(); ++i) {
      if (!proof[i]) continue;
      rule.rhs.push_back(spec.cand_rhs[i]);
      rule.justification.push_back(*proof[i]);
    }
    if (!rule.rhs.empty()) {
      search.record(m, rule.rhs);
      result.rules.push_back(std::move(rule));
    }
  }
  return result;
}

MineResult mine_general(const Program& program, const CandidateSpec& spec,
                        const MinerOptions& options) {
  MineResult result;
  GoalRunner runner(program, options, result.stats);
  LhsSearch search(spec.cand_lhs, options);
  for (Mask m : subsets_in_order(spec.cand_lhs.size())) {
    auto skip = search.check(m);
    if (skip == LhsSearch::Skip::Failing) continue;
    if (skip == LhsSearch::Skip::Opt2) {
      ++result.stats.skipped_opt2;
      continue;
    }
    if (skip == LhsSearch::Skip::Opt1) {
      ++result.stats.skipped_opt1;
      search.mark_failing(m);
      continue;
    }
    Constraints c = members(spec.cand_lhs, m);
    Goal lhs = make_goal(spec.base, {c});
    Outcome a = runner.run(lhs, EvalMode::AllAnswers);
    if (a.fails()) {
      result.rules.push_back({RuleKind::Failure, lhs, {}, {describe_goal(lhs) + ": no answers"}});
      search.mark_failing(m);
      continue;
    }
    if (a.exceeded()) continue;
    std::vector<Validity> verdict(spec.cand_rhs.size(), Validity::Invalid);
    parallel_for(spec.cand_rhs.size(), options.jobs, [&](std::size_t i) {
      const Constraint& d = spec.cand_rhs[i];
      if (contains(c, d)) return;
      verdict[i] = general_test(runner, lhs, {d}, options, &a);
    });
    Rule rule{RuleKind::Propagation, lhs, {}, {}};
    for (std::size_t i = 0; i < verdict.size(); ++i) {
      if (verdict[i] != Validity::Valid) continue;
      const Constraint& d = spec.cand_rhs[i];
      rule.rhs.push_back(d);
      rule.justification.push_back(describe_goal(lhs) + ": " + std::to_string(a.answers.size()) +
                                   " answers, all covered by " +
                                   describe_goal(make_goal(lhs, {std::span<const Constraint>(&d, 1)})));
    }
    if (!rule.rhs.empty()) {
      search.record(m, rule.rhs);
      result.rules.push_back(std::move(rule));
    }
  }
  return result;
}

bool RuleContext::entails(const Constraint& c) const {
  if (!store) return true;
  if (c.is_primitive()) return chrgen::entails(*store, c);
  Constraint applied = store->apply(c);
  return std::any_of(atoms.begin(), atoms.end(),
                     [&](const Constraint& a) { return store->apply(a) == applied; });
}

namespace {

void match_user_atoms(std::span<const Constraint> pattern, std::span<const Constraint> target,
                      std::size_t i, std::vector<bool>& used, const Bindings& b,
                      std::vector<Bindings>& out) {
  if (i == pattern.size()) {
    out.push_back(b);
    return;
  }
  for (std::size_t j = 0; j < target.size(); ++j) {
    if (used[j]) continue;
    for (const auto& next : match_constraint(pattern[i], target[j], b)) {
      used[j] = true;
      match_user_atoms(pattern, target, i + 1, used, next, out);
      used[j] = false;
    }
  }
}

constexpr int kMaxSaturationRounds = 8;
constexpr std::size_t kMaxContextAtoms = 32;

}  // namespace

RuleContext saturate(const Constraints& lhs, const RuleSet& rules) {
  RuleContext ctx;
  Constraints prims;
  for (const auto& c : lhs) (c.is_primitive() ? prims : ctx.atoms).push_back(c);
  ctx.store = Store::of(prims);
  if (!ctx.store) return ctx;
  for (int round = 0; round < kMaxSaturationRounds; ++round) {
    bool changed = false;
    for (const auto& rule : rules) {
      Constraints both = rule.lhs;
      both.insert(both.end(), rule.rhs.begin(), rule.rhs.end());
      both = rename_apart(both);
      Constraints pat_atoms, pat_prims;
      for (std::size_t i = 0; i < rule.lhs.size(); ++i) {
        (both[i].is_primitive() ? pat_prims : pat_atoms).push_back(both[i]);
      }
      Constraints rhs(both.begin() + static_cast<std::ptrdiff_t>(rule.lhs.size()), both.end());
      Constraints target;
      for (const auto& a : ctx.atoms) target.push_back(ctx.store->apply(a));
      std::vector<Bindings> matches;
      std::vector<bool> used(target.size(), false);
      match_user_atoms(pat_atoms, target, 0, used, {}, matches);
      for (const auto& sigma : matches) {
        bool fires = true;
        for (const auto& p : pat_prims) {
          Constraint inst = substitute(p, sigma);
          std::set<VarId> free = var_set(std::span(&p, 1));
          bool bound = std::all_of(free.begin(), free.end(),
                                   [&](VarId v) { return sigma.count(v) > 0; });
          if (!bound || !chrgen::entails(*ctx.store, inst)) {
            fires = false;
            break;
          }
        }
        if (!fires) continue;
        Constraints out = substitute(rhs, sigma);
        switch (rule.kind) {
          case RuleKind::Failure:
            ctx.store.reset();
            return ctx;
          case RuleKind::Splitting: {
            const Constraint& d1 = out[0];
            const Constraint& d2 = out[1];
            if (ctx.entails(d1) || ctx.entails(d2)) break;
            const Constraint* unit = nullptr;
            if (ctx.entails(negate(d1))) unit = &d2;
            if (ctx.entails(negate(d2))) unit = &d1;
            if (!unit) break;
            ctx.store = assert_constraint(*ctx.store, *unit);
            if (!ctx.store) return ctx;
            changed = true;
            break;
          }
          default:
            for (const auto& c : out) {
              if (ctx.entails(c)) continue;
              if (c.is_primitive()) {
                ctx.store = assert_constraint(*ctx.store, c);
                if (!ctx.store) return ctx;
              } else if (ctx.atoms.size() < kMaxContextAtoms) {
                ctx.atoms.push_back(c);
              }
              changed = true;
            }
        }
      }
    }
    if (!changed) break;
  }
  return ctx;
}

namespace {

bool var_var_equality(const Constraint& c) {
  return c.is_primitive() && c.relation() == Relation::Eq && c.left().is_var() && c.right().is_var();
}

/// Drops rhs constraints implied by the lhs, the kept rules and the rest of rhs.
Constraints simplify_rhs(const Rule& rule, const RuleSet& kept) {
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < rule.rhs.size(); ++i) {
    if (var_var_equality(rule.rhs[i])) order.push_back(i);
  }
  for (std::size_t i = rule.rhs.size(); i-- > 0;) {
    if (!var_var_equality(rule.rhs[i])) order.push_back(i);
  }
  std::vector<bool> removed(rule.rhs.size(), false);
  for (std::size_t i : order) {
    Constraints context = rule.lhs;
    for (std::size_t j = 0; j < rule.rhs.size(); ++j) {
      if (j != i && !removed[j]) context.push_back(rule.rhs[j]);
    }
    RuleContext ctx = saturate(context, kept);
    if (ctx.consistent() && ctx.entails(rule.rhs[i])) removed[i] = true;
  }
  Constraints out;
  for (std::size_t i = 0; i < rule.rhs.size(); ++i) {
    if (!removed[i]) out.push_back(rule.rhs[i]);
  }
  return out;
}

int kind_rank(RuleKind k) {
  switch (k) {
    case RuleKind::Failure: return 0;
    case RuleKind::Simplification: return 1;
    case RuleKind::Propagation: return 2;
    case RuleKind::Splitting: return 3;
  }
  return 4;
}

}  // namespace

RuleSet simplify_ruleset(const RuleSet& rules) {
  RuleSet unique;
  for (const auto& r : rules) {
    if (std::none_of(unique.begin(), unique.end(), [&](const Rule& u) { return same_rule(u, r); })) {
      unique.push_back(r);
    }
  }
  std::vector<std::string> lhs_keys, rule_keys;
  std::vector<std::size_t> order(unique.size());
  for (std::size_t i = 0; i < unique.size(); ++i) {
    order[i] = i;
    lhs_keys.push_back(canonical_key(unique[i].lhs));
    rule_keys.push_back(canonical_key(unique[i]));
  }
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const Rule& x = unique[a];
    const Rule& y = unique[b];
    if (x.lhs.size() != y.lhs.size()) return x.lhs.size() < y.lhs.size();
    if (lhs_keys[a] != lhs_keys[b]) return lhs_keys[a] < lhs_keys[b];
    if (kind_rank(x.kind) != kind_rank(y.kind)) return kind_rank(x.kind) < kind_rank(y.kind);
    return rule_keys[a] < rule_keys[b];
  });
  RuleSet sorted;
  for (std::size_t i : order) sorted.push_back(unique[i]);
  // a strictly more general lhs must come first
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    for (std::size_t j = i + 1; j < sorted.size(); ++j) {
      if (theta_subsumes(sorted[j].lhs, sorted[i].lhs) &&
          !theta_subsumes(sorted[i].lhs, sorted[j].lhs)) {
        std::rotate(sorted.begin() + static_cast<std::ptrdiff_t>(i),
                    sorted.begin() + static_cast<std::ptrdiff_t>(j),
                    sorted.begin() + static_cast<std::ptrdiff_t>(j) + 1);
        j = i;
      }
    }
  }

  // splitting rules are filtered against the others, never the reverse
  RuleSet kept, kept_plain;
  for (const auto& rule : sorted) {
    bool splitting = rule.kind == RuleKind::Splitting;
    RuleContext ctx = saturate(rule.lhs, splitting ? kept : kept_plain);
    if (!ctx.consistent()) continue;
    switch (rule.kind) {
      case RuleKind::Failure:
      case RuleKind::Simplification:
        kept.push_back(rule);
        kept_plain.push_back(rule);
        break;
      case RuleKind::Splitting:
        if (ctx.entails(rule.rhs[0]) || ctx.entails(rule.rhs[1])) break;
        kept.push_back(rule);
        break;
      case RuleKind::Propagation: {
        Rule r = rule;
        r.rhs = simplify_rhs(rule, kept_plain);
        if (!r.rhs.empty()) {
          kept.push_back(r);
          kept_plain.push_back(std::move(r));
        }
        break;
      }
    }
  }
  return kept;
}

MineResult mine_splitting(const Program& program, const CandidateSpec& spec, const RuleSet& prior,
                          const MinerOptions& options) {
  require_primitive_rhs(spec);
  MineResult result;
  GoalRunner runner(program, options, result.stats);
  struct Found {
    Mask lhs;
    std::size_t i, j;
  };
  std::vector<Found> found;
  const std::size_t n = spec.cand_rhs.size();
  for (Mask m : subsets_in_order(spec.cand_lhs.size())) {
    Constraints c = members(spec.cand_lhs, m);
    Goal lhs = make_goal(spec.base, {c});
    RuleContext ctx = saturate(lhs, prior);
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const Constraint& d1 = spec.cand_rhs[i];
        const Constraint& d2 = spec.cand_rhs[j];
        if (same_constraint(d1, d2) || same_constraint(d1, negate(d2))) continue;
        bool known = std::any_of(found.begin(), found.end(), [&](const Found& f) {
          return f.i == i && f.j == j && subset_of(f.lhs, m);
        });
        if (known || !ctx.consistent() || ctx.entails(d1) || ctx.entails(d2)) {
          ++result.stats.skipped_redundant;
          continue;
        }
        pairs.emplace_back(i, j);
      }
    }
    std::vector<std::optional<std::string>> proof(pairs.size());
    parallel_for(pairs.size(), options.jobs, [&](std::size_t k) {
      const Constraint nots[] = {negate(spec.cand_rhs[pairs[k].first]),
                                 negate(spec.cand_rhs[pairs[k].second])};
      Goal g = make_goal(lhs, {std::span<const Constraint>(nots)});
      if (runner.run(g, EvalMode::Exists).fails()) proof[k] = describe_goal(g) + ": fails";
    });
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      if (!proof[k]) continue;
      auto [i, j] = pairs[k];
      found.push_back({m, i, j});
      result.rules.push_back(
          {RuleKind::Splitting, lhs, {spec.cand_rhs[i], spec.cand_rhs[j]}, {*proof[k]}});
    }
  }
  return result;
}

namespace {

/// Joins propagation rules with the same lhs.
RuleSet merge_same_lhs(const RuleSet& rules) {
  RuleSet out;
  for (const auto& r : rules) {
    auto it = std::find_if(out.begin(), out.end(), [&](const Rule& o) {
      return o.kind == r.kind && o.lhs.size() == r.lhs.size() &&
             std::all_of(r.lhs.begin(), r.lhs.end(), [&](const Constraint& c) { return contains(o.lhs, c); });
    });
    if (it == out.end() || r.kind != RuleKind::Propagation) {
      if (it == out.end()) out.push_back(r);
      continue;
    }
    for (std::size_t i = 0; i < r.rhs.size(); ++i) {
      if (contains(it->rhs, r.rhs[i])) continue;
      it->rhs.push_back(r.rhs[i]);
      if (i < r.justification.size()) it->justification.push_back(r.justification[i]);
    }
  }
  return out;
}

CandidateSpec primitive_part(const CandidateSpec& spec) {
  CandidateSpec out = spec;
  out.cand_rhs.clear();
  for (const auto& c : spec.cand_rhs) {
    if (c.is_primitive()) out.cand_rhs.push_back(c);
  }
  return out;
}

}  // namespace

MineResult mine(const Program& program, const CandidateSpec& spec, Mode mode,
                const MinerOptions& options) {
  MineResult result;
  switch (mode) {
    case Mode::Primitive: {
      result = mine_primitive(program, spec, options);
      result.rules = simplify_ruleset(result.rules);
      return result;
    }
    case Mode::General: {
      result = mine_general(program, spec, options);
      result.rules = simplify_ruleset(result.rules);
      return result;
    }
    case Mode::Splitting: {
      CandidateSpec prim = primitive_part(spec);
      result = mine_primitive(program, prim, options);
      RuleSet prior = simplify_ruleset(result.rules);
      MineResult split = mine_splitting(program, prim, prior, options);
      result.stats.merge(split.stats);
      prior.insert(prior.end(), split.rules.begin(), split.rules.end());
      result.rules = simplify_ruleset(prior);
      return result;
    }
    case Mode::All: {
      CandidateSpec prim = primitive_part(spec);
      result = mine_primitive(program, prim, options);
      MineResult general = mine_general(program, spec, options);
      result.stats.merge(general.stats);
      RuleSet merged = result.rules;
      merged.insert(merged.end(), general.rules.begin(), general.rules.end());
      RuleSet prior = simplify_ruleset(merge_same_lhs(merged));
      MineResult split = mine_splitting(program, prim, prior, options);
      result.stats.merge(split.stats);
      prior.insert(prior.end(), split.rules.begin(), split.rules.end());
      result.rules = simplify_ruleset(prior);
      return result;
    }
  }
  return result;
}

}  // namespace chrgen
