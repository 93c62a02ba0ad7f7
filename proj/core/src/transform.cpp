#include "chrgen/transform.hpp"

#include <algorithm>

namespace chrgen {

namespace {

/// Index sets of {0..n-1} of size k, in lexicographic order.
std::vector<std::vector<std::size_t>> combinations(std::size_t n, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    out.push_back(idx);
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) break;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

/// Base atoms of a rule read back from a file carry other variables, so
/// containment is decided by matching rather than identity.
bool contains_base(const Constraints& e, const Goal& base, const Constraints& lhs) {
  if (base.empty()) return false;
  bool lhs_has_base = std::all_of(base.begin(), base.end(),
                                  [&](const Constraint& b) { return contains(lhs, b); });
  if (lhs_has_base) {
    return std::all_of(base.begin(), base.end(),
                       [&](const Constraint& b) { return contains(e, b); });
  }
  return theta_subsumes(base, e);
}

std::string_view reason_of(Validity v) {
  switch (v) {
    case Validity::Valid: return "valid";
    case Validity::Invalid: return "does not imply lhs";
    case Validity::DepthExceeded: return "depth exceeded";
    case Validity::Blowup: return "dnf blowup";
  }
  return "?";
}

}  // namespace

TransformResult to_simplification(const RuleSet& rules, const Goal& base, const Program& program,
                                  const MinerOptions& options) {
  TransformResult result;
  for (std::size_t r = 0; r < rules.size(); ++r) {
    const Rule& rule = rules[r];
    if (rule.kind != RuleKind::Propagation) {
      result.rules.push_back(rule);
      continue;
    }
    const Constraints& c = rule.lhs;
    std::optional<Rule> replaced;
    for (std::size_t k = 0; k < c.size() && !replaced; ++k) {
      for (const auto& idx : combinations(c.size(), k)) {
        TransformAttempt attempt;
        attempt.rule = r;
        for (std::size_t i : idx) attempt.e.push_back(c[i]);
        if (contains_base(attempt.e, base, c)) {
          attempt.reason = "contains base";
          result.log.push_back(std::move(attempt));
          continue;
        }
        Constraints back = rule.rhs;
        for (const auto& x : attempt.e) {
          if (!contains(back, x)) back.push_back(x);
        }
        Validity v = check_closed_rule(program, back, c, options, &result.stats);
        attempt.accepted = v == Validity::Valid;
        attempt.reason = std::string(reason_of(v));
        result.log.push_back(attempt);
        if (attempt.accepted) {
          Rule s = rule;
          s.kind = RuleKind::Simplification;
          s.rhs = std::move(back);
          s.justification.push_back(to_string(s.rhs) + " implies " + to_string(c));
          replaced = std::move(s);
          break;
        }
      }
    }
    result.rules.push_back(replaced ? std::move(*replaced) : rule);
  }
  return result;
}

std::string to_string(const TransformAttempt& attempt, const RuleSet& rules) {
  std::string out = to_string(rules.at(attempt.rule));
  out += "  E = {" + to_string(attempt.e) + "}: ";
  out += attempt.accepted ? "accepted" : "rejected";
  out += " (" + attempt.reason + ")";
  return out;
}

}  // namespace chrgen
