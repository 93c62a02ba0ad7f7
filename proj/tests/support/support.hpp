#pragma once

#include <string>
#include <vector>

#include "chrgen/miner.hpp"
#include "chrgen/oracle.hpp"

namespace chrgen::testing {

std::string read_file(const std::string& path);
std::string sample_path(const std::string& name);
std::string golden_path(const std::string& name);

Program load_program(const std::string& sample);
CandidateSpec load_spec(const std::string& sample, const Program& program);

Constraint atom(const std::string& text);
Constraints conj(const std::string& text);
Rule rule(const std::string& text);

/// {0, 1}
std::vector<Term> boolean_universe();
/// Constants a, b and the lists over them up to length 3.
std::vector<Term> list_universe();

/// Rules of `rules` that the ground model refutes, printed.
std::vector<std::string> refuted(const GroundModel& model, const RuleSet& rules);

/// True iff some rule of `rules` is a variant of `r`.
bool has_rule(const RuleSet& rules, const Rule& r);

/// theta_subsumes by brute force: every map from the variables of `a` to the
/// subterms of `b` is tried.
bool brute_theta_subsumes(const Constraints& a, const Constraints& b);

}  // namespace chrgen::testing
