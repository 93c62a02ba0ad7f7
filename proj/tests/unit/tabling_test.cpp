#include <gtest/gtest.h>

#include <random>

#include "support.hpp"

namespace chrgen {
namespace {

using testing::conj;

std::vector<std::string> trace_of(const Program& p, const Goal& g, bool tabling) {
  std::vector<std::string> lines;
  EvalOptions o;
  o.tabling = tabling;
  o.trace = &lines;
  evaluate(p, g, o);
  return lines;
}

std::vector<std::string> golden_lines(const std::string& name) {
  std::vector<std::string> out;
  std::string text = testing::read_file(testing::golden_path(name));
  std::size_t start = 0;
  for (std::size_t nl; (nl = text.find('\n', start)) != std::string::npos; start = nl + 1) {
    out.push_back(text.substr(start, nl - start));
  }
  return out;
}

TEST(Evaluate, MinDerivationTreeFailsOnBothBranches) {
  Program p = testing::load_program("min.clp");
  Goal g = conj("min(X,Y,Z), Y #=< X, Z \\= Y");
  EXPECT_TRUE(evaluate(p, g).fails());
  EXPECT_EQ(trace_of(p, g, true), golden_lines("min_tree.trace"));
  EvalOptions plain;
  plain.tabling = false;
  EXPECT_TRUE(evaluate(p, g, plain).fails());
}

TEST(Evaluate, AppendFailsOnlyWithTabling) {
  Program p = testing::load_program("append.clp");
  Goal g = conj("append(X,Y,Z), Y = [], X \\= Z");
  EXPECT_TRUE(evaluate(p, g).fails());
  EXPECT_EQ(trace_of(p, g, true), golden_lines("append_tree.trace"));
  EvalOptions plain;
  plain.tabling = false;
  Outcome o = evaluate(p, g, plain);
  EXPECT_TRUE(o.exceeded());
  EXPECT_EQ(o.reason, "depth");
}

TEST(Evaluate, XorAnswers) {
  Program p = testing::load_program("xor.clp");
  Goal g = conj("xor(X,Y,Z), Z = 1");
  EvalOptions o;
  o.mode = EvalMode::AllAnswers;
  Outcome out = evaluate(p, g, o);
  ASSERT_EQ(out.kind, Outcome::Kind::Answers);
  ASSERT_EQ(out.answers.size(), 2u);
  std::set<std::string> got{to_string(out.answers[0]), to_string(out.answers[1])};
  EXPECT_EQ(got, (std::set<std::string>{"X = 0, Y = 1, Z = 1", "X = 1, Y = 0, Z = 1"}));
}

TEST(Evaluate, ExistsReturnsOneWitness) {
  Program p = testing::load_program("append.clp");
  Outcome out = evaluate(p, conj("append(X,Y,Z), X = [a], Y = [b]"));
  ASSERT_EQ(out.kind, Outcome::Kind::Answers);
  ASSERT_EQ(out.answers.size(), 1u);
  EXPECT_NE(to_string(out.answers[0]).find("Z = [a,b]"), std::string::npos) << to_string(out.answers[0]);
}

TEST(Evaluate, AnswerCapExceeds) {
  Program p = testing::load_program("append.clp");
  EvalOptions o;
  o.mode = EvalMode::AllAnswers;
  o.max_answers = 5;
  o.depth = 30;
  Outcome out = evaluate(p, conj("append(X,Y,Z)"), o);
  EXPECT_TRUE(out.exceeded());
}

TEST(CallSubsumes, PaperExample) {
  // G1 = append(X,Y,Z), Y = [], X \= Z and its subgoal G2 = append(X1,Y,Z1)
  Constraints g = conj("append(X,Y,Z), Y = [], X \\= Z, X = [H|X1], Z = [H|Z1], append(X1,Y,Z1)");
  Constraints tabled_atoms{g[0]};
  auto tabled = Store::of(std::vector<Constraint>{g[1], g[2]});
  Constraints current_atoms{g[5]};
  auto current = Store::of(std::vector<Constraint>{g[1], g[2], g[3], g[4]});
  ASSERT_TRUE(tabled && current);
  EXPECT_TRUE(call_subsumes(tabled_atoms, *tabled, current_atoms, *current));
  // the two calls are variants once the store is projected
  EXPECT_TRUE(call_subsumes(current_atoms, *current, tabled_atoms, *tabled));
}

TEST(CallSubsumes, IdentityAndSpecificity) {
  Constraints a = conj("p(X), X = a");
  Store s;
  EXPECT_TRUE(call_subsumes(std::span(a).subspan(0, 1), s, std::span(a).subspan(0, 1), s));
  Constraints general = conj("p(X)");
  Constraints specific = conj("p(a)");
  EXPECT_FALSE(call_subsumes(specific, s, general, s));
  EXPECT_TRUE(call_subsumes(general, s, specific, s));
}

/// Goals base ∪ C for random subsets C of the spec's lhs candidates.
std::vector<Goal> random_goals(const CandidateSpec& spec, int count, unsigned seed) {
  std::mt19937 rng(seed);
  std::vector<Goal> out;
  for (int i = 0; i < count; ++i) {
    Goal g = spec.base;
    for (const auto& c : spec.cand_lhs) {
      if (rng() % 4 == 0) g.push_back(c);
    }
    if (rng() % 2) g.push_back(negate(spec.cand_lhs[rng() % spec.cand_lhs.size()]));
    out.push_back(std::move(g));
  }
  return out;
}

TEST(EvaluateProperties, FailureIsSoundOnLists) {
  Program p = testing::load_program("append.clp");
  CandidateSpec spec = testing::load_spec("append.spec", p);
  GroundModel model(p, testing::list_universe());
  int failures = 0;
  for (const auto& g : random_goals(spec, 120, 1)) {
    Outcome o = evaluate(p, g);
    if (!o.fails()) continue;
    ++failures;
    EXPECT_FALSE(model.satisfiable(g)) << to_string(g);
  }
  EXPECT_GT(failures, 10);
}

TEST(EvaluateProperties, FailureIsSoundOnMin) {
  Program p = testing::load_program("min.clp");
  CandidateSpec spec = testing::load_spec("min.spec", p);
  GroundModel model(p, {Term::number(0), Term::number(1), Term::number(2)});
  for (const auto& g : random_goals(spec, 200, 2)) {
    if (evaluate(p, g).fails()) EXPECT_FALSE(model.satisfiable(g)) << to_string(g);
  }
}

/// Ground instances of the answers of `g` over `universe` equal the ground
/// solutions of g in the bottom-up model.
void expect_complete_answers(const Program& p, const Goal& g, const GroundModel& model) {
  EvalOptions o;
  o.mode = EvalMode::AllAnswers;
  Outcome out = evaluate(p, g, o);
  ASSERT_NE(out.kind, Outcome::Kind::DepthExceeded) << to_string(g);
  std::vector<VarId> vars = vars_of(g);
  std::set<std::vector<Term>> expected, got;
  auto collect = [&vars](std::set<std::vector<Term>>* into) {
    return [&vars, into](const Bindings& b) {
      std::vector<Term> row;
      for (VarId v : vars) row.push_back(b.at(v));
      into->insert(row);
      return true;
    };
  };
  model.solve(g, {}, collect(&expected), vars);
  for (const auto& a : out.answers) model.solve(a, {}, collect(&got), vars);
  EXPECT_EQ(got, expected) << to_string(g);
}

TEST(EvaluateProperties, AnswersCompleteOnBooleanPrograms) {
  Program p = testing::load_program("boolean.clp");
  GroundModel model(p, testing::boolean_universe());
  for (const char* text : {"and(X,Y,Z)", "and(X,Y,Z), Z = 0", "xor(X,Y,Z), X = 1", "neg(X,Y)",
                           "xor(X,Y,Z), neg(X,Y)", "and(X,Y,Z), xor(X,Y,Z)", "and(X,X,Z)",
                           "xor(X,Y,Z), Z \\= 1, X \\= Y"}) {
    expect_complete_answers(p, conj(text), model);
  }
}

TEST(EvaluateProperties, TablingAgreesWithPlainWhenPlainTerminates) {
  for (const char* prog : {"append.clp", "min.clp"}) {
    Program p = testing::load_program(prog);
    CandidateSpec spec = testing::load_spec(prog == std::string("append.clp") ? "append.spec" : "min.spec", p);
    EvalOptions plain;
    plain.tabling = false;
    plain.depth = 60;
    int compared = 0;
    for (const auto& g : random_goals(spec, 100, 3)) {
      Outcome a = evaluate(p, g, plain);
      if (a.exceeded()) continue;
      Outcome b = evaluate(p, g);
      ++compared;
      EXPECT_EQ(a.fails(), b.fails()) << to_string(g);
    }
    EXPECT_GT(compared, 10) << prog;
  }
}

}  // namespace
}  // namespace chrgen
