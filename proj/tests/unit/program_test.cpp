#include <gtest/gtest.h>

#include "support.hpp"

namespace chrgen {
namespace {

TEST(ParseProgram, MinProgram) {
  Program p = testing::load_program("min.clp");
  EXPECT_EQ(p.clauses.size(), 2u);
  EXPECT_EQ(p.predicates(), std::set<std::string>{"min/3"});
  EXPECT_TRUE(p.recursive_predicates().empty());
  EXPECT_EQ(to_string(p.clauses[0]), "min(X,Y,Z) :- X #=< Y, Z = X.");
  EXPECT_EQ(p.clauses[0].body_prim().size(), 2u);
  EXPECT_TRUE(p.clauses[0].body_user().empty());
}

TEST(ParseProgram, AppendIsRecursive) {
  Program p = testing::load_program("append.clp");
  EXPECT_EQ(p.clauses.size(), 2u);
  EXPECT_EQ(p.recursive_predicates(), std::set<std::string>{"append/3"});
  EXPECT_EQ(to_string(p.clauses[1]), "append(X,Y,Z) :- X = [H|X1], Z = [H|Z1], append(X1,Y,Z1).");
}

TEST(ParseProgram, EmptyText) {
  EXPECT_TRUE(parse_program("").clauses.empty());
  EXPECT_TRUE(parse_program("% only a comment\n").clauses.empty());
}

TEST(ParseProgram, Diagnostics) {
  try {
    parse_program("p(X) :- q(X).\n");
    FAIL() << "undefined predicate accepted";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line, 1);
  }
  try {
    parse_program("p(X) :- X = a.\np(X) :- X = .\n");
    FAIL() << "syntax error accepted";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line, 2);
    EXPECT_GT(e.column, 1);
  }
  // an order constraint on a list is ill-sorted
  EXPECT_THROW(parse_program("p(X) :- X = [a], X #=< 1.\n"), ParseError);
  EXPECT_NO_THROW(parse_program(":- external(q/1).\np(X) :- q(X).\n"));
}

TEST(ParseProgram, RoundTrip) {
  for (const char* name : {"min.clp", "append.clp", "boolean.clp", "xor.clp"}) {
    Program p = testing::load_program(name);
    std::string once = to_string(p);
    EXPECT_EQ(to_string(parse_program(once)), once) << name;
  }
}

TEST(ParseSpec, AppendSpec) {
  Program p = testing::load_program("append.clp");
  CandidateSpec s = testing::load_spec("append.spec", p);
  EXPECT_EQ(s.base.size(), 1u);
  EXPECT_EQ(s.cand_lhs.size(), 9u);
  EXPECT_EQ(s.cand_rhs, s.cand_lhs);
  // base and candidates share their variables
  EXPECT_EQ(s.base[0].args()[0], s.cand_lhs[0].left());
  std::string once = to_string(s);
  EXPECT_EQ(to_string(parse_spec(once, &p)), once);
}

TEST(ParseSpec, UserAtomInRhsRejectedForPrimitiveMining) {
  Program p = testing::load_program("boolean.clp");
  CandidateSpec s = testing::load_spec("xor_neg.spec", p);
  EXPECT_THROW(require_primitive_rhs(s), ParseError);
  EXPECT_THROW(mine_primitive(p, s), ParseError);
}

TEST(ParseSpec, DuplicatesRemoved) {
  Program p = testing::load_program("min.clp");
  CandidateSpec s = parse_spec("base: min(X,Y,Z).\ncand_lhs: X #=< Y, Z = X, X = Z, X #=< Y, Y #>= X.\n", &p);
  EXPECT_EQ(s.cand_lhs.size(), 2u);
}

TEST(ParseSpec, Errors) {
  Program p = testing::load_program("min.clp");
  EXPECT_THROW(parse_spec("cand_lhs: X = Y.\n", &p), ParseError);
  EXPECT_THROW(parse_spec("base: max(X,Y,Z).\n", &p), ParseError);
  EXPECT_THROW(parse_spec("base: min(X,Y,Z).\nbase: min(X,Y,Z).\n", &p), ParseError);
}

TEST(ParseGoals, SeveralGoals) {
  auto goals = parse_goals("min(X,Y,Z), X = 1.\nmin(1,0,Z).\n");
  ASSERT_EQ(goals.size(), 2u);
  EXPECT_EQ(to_string(goals[0]), "min(X,Y,Z), X = 1");
}

TEST(ProposeCandidates, CoversHeadArgumentPairsAndConstants) {
  Program p = testing::load_program("append.clp");
  Constraints c = propose_candidates(p, testing::atom("append(X,Y,Z)"));
  auto has = [&](const std::string& text) {
    std::string all = to_string(c);
    return all.find(text) != std::string::npos;
  };
  EXPECT_TRUE(has("X = []"));
  EXPECT_TRUE(has("X = Z"));
  EXPECT_TRUE(has("Y \\= []"));
}

}  // namespace
}  // namespace chrgen
