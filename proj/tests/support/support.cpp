#include "support.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace chrgen::testing {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string sample_path(const std::string& name) { return std::string(CHRGEN_SAMPLES_DIR) + "/" + name; }
std::string golden_path(const std::string& name) { return std::string(CHRGEN_GOLDEN_DIR) + "/" + name; }

Program load_program(const std::string& sample) { return parse_program(read_file(sample_path(sample))); }

CandidateSpec load_spec(const std::string& sample, const Program& program) {
  return parse_spec(read_file(sample_path(sample)), &program);
}

Constraint atom(const std::string& text) { return conj(text).at(0); }

Constraints conj(const std::string& text) {
  auto goals = parse_goals(text + ".");
  if (goals.size() != 1) throw std::runtime_error("expected one conjunction: " + text);
  return goals[0];
}

Rule rule(const std::string& text) {
  RuleSet rs = parse_rules(text);
  if (rs.size() != 1) throw std::runtime_error("expected one rule: " + text);
  return rs[0];
}

std::vector<Term> boolean_universe() { return {Term::number(0), Term::number(1)}; }

std::vector<Term> list_universe() {
  return GroundModel::make_universe({Term::constant("a"), Term::constant("b")}, 3);
}

std::vector<std::string> refuted(const GroundModel& model, const RuleSet& rules) {
  std::vector<std::string> out;
  for (const auto& r : rules) {
    if (find_counterexample(model, r)) out.push_back(to_string(r));
  }
  return out;
}

bool has_rule(const RuleSet& rules, const Rule& r) {
  for (const auto& x : rules) {
    if (same_rule(x, r)) return true;
  }
  return false;
}

namespace {

void subterms(const Term& t, std::vector<Term>& out) {
  if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
  for (const auto& a : t.args()) subterms(a, out);
}

bool same_set_member(const Constraint& c, const Constraints& b) {
  for (const auto& x : b) {
    if (x == c) return true;
  }
  return false;
}

}  // namespace

bool brute_theta_subsumes(const Constraints& a, const Constraints& b) {
  std::vector<VarId> vars = vars_of(a);
  std::vector<Term> pool;
  for (const auto& c : b) {
    for (const auto& t : c.args()) subterms(t, pool);
  }
  Bindings sigma;
  std::function<bool(std::size_t)> go = [&](std::size_t i) {
    if (i == vars.size()) {
      for (const auto& c : a) {
        if (!same_set_member(substitute(c, sigma), b)) return false;
      }
      return true;
    }
    for (const auto& t : pool) {
      sigma[vars[i]] = t;
      if (go(i + 1)) return true;
    }
    sigma.erase(vars[i]);
    return false;
  };
  return go(0);
}

}  // namespace chrgen::testing
