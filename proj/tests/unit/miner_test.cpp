#include <gtest/gtest.h>

#include "support.hpp"

namespace chrgen {
namespace {

using testing::has_rule;
using testing::rule;

RuleSet mined(const char* program, const char* spec, Mode mode, const MinerOptions& o = {}) {
  Program p = testing::load_program(program);
  return mine(p, testing::load_spec(spec, p), mode, o).rules;
}

TEST(MinePrimitive, MinExample) {
  RuleSet rs = mined("min.clp", "min.spec", Mode::Primitive);
  EXPECT_TRUE(has_rule(rs, rule("min(X,Y,Z), Y #=< X ==> Z = Y.")));
  EXPECT_TRUE(has_rule(rs, rule("min(X,Y,Z), X #=< Y ==> Z = X.")));
  EXPECT_TRUE(has_rule(rs, rule("min(X,Y,Z) ==> Z #=< X, Z #=< Y.")));
}

TEST(MinePrimitive, MinEmptyLhsJustifiedByTwoGoals) {
  Program p = testing::load_program("min.clp");
  MineResult r = mine_primitive(p, testing::load_spec("min.spec", p));
  auto it = std::find_if(r.rules.begin(), r.rules.end(),
                         [](const Rule& x) { return x.lhs.size() == 1 && x.kind == RuleKind::Propagation; });
  ASSERT_NE(it, r.rules.end());
  std::string why;
  for (const auto& j : it->justification) why += j + "\n";
  EXPECT_NE(why.find("min(X,Y,Z), Z #> X: fails"), std::string::npos) << why;
  EXPECT_NE(why.find("min(X,Y,Z), Z #> Y: fails"), std::string::npos) << why;
}

TEST(MinePrimitive, AppendRules) {
  RuleSet rs = mined("append.clp", "append.spec", Mode::Primitive);
  for (const char* text : {"append(X,Y,Z), Y = [] ==> X = Z.", "append(X,Y,Z), X = Z ==> Y = [].",
                           "append(X,Y,Z), Y \\= [] ==> X \\= Z.",
                           "append(X,Y,Z), X \\= [] ==> Z \\= []."}) {
    EXPECT_TRUE(has_rule(rs, rule(text))) << text << "\n" << format_rules(rs);
  }
}

TEST(MinePrimitive, AppendWithoutTablingFindsNothing) {
  Program p = testing::load_program("append.clp");
  MinerOptions o;
  o.tabling = false;
  MineResult r = mine_primitive(p, testing::load_spec("append.spec", p), o);
  EXPECT_GE(r.stats.depth_exceeded, 4u);
  for (const char* text : {"append(X,Y,Z), Y = [] ==> X = Z.", "append(X,Y,Z), X = Z ==> Y = [].",
                           "append(X,Y,Z), Y \\= [] ==> X \\= Z.",
                           "append(X,Y,Z), X \\= [] ==> Z \\= []."}) {
    EXPECT_FALSE(has_rule(simplify_ruleset(r.rules), rule(text))) << text;
  }
}

TEST(MinePrimitive, FailureRulesAreAntiMonotone) {
  for (auto [prog, spec] : {std::pair{"append.clp", "append.spec"}, {"min.clp", "min.spec"},
                            {"and.clp", "and.spec"}}) {
    Program p = testing::load_program(prog);
    RuleSet rs = mine_primitive(p, testing::load_spec(spec, p)).rules;
    std::vector<const Rule*> failures;
    for (const auto& r : rs) {
      if (r.kind == RuleKind::Failure) failures.push_back(&r);
    }
    for (const Rule* a : failures) {
      for (const Rule* b : failures) {
        if (a == b) continue;
        bool superset = std::all_of(a->lhs.begin(), a->lhs.end(),
                                    [&](const Constraint& c) { return contains(b->lhs, c); });
        EXPECT_FALSE(superset) << to_string(*a) << " within " << to_string(*b);
      }
    }
  }
}

TEST(MinePrimitive, RejectsUserRhs) {
  Program p = testing::load_program("boolean.clp");
  EXPECT_THROW(mine_primitive(p, testing::load_spec("xor_neg.spec", p)), ParseError);
}

TEST(MineSplitting, AndZeroSplits) {
  RuleSet rs = mined("and.clp", "and.spec", Mode::All);
  EXPECT_TRUE(has_rule(rs, rule("and(X,Y,Z), Z = 0 ==> X = 0 ; Y = 0."))) << format_rules(rs);
}

TEST(MineSplitting, MinSplitsOnEquality) {
  RuleSet rs = mined("min.clp", "min.spec", Mode::All);
  EXPECT_TRUE(has_rule(rs, rule("min(X,Y,Z) ==> Z = X ; Z = Y."))) << format_rules(rs);
}

TEST(MineSplitting, PriorRuleSuppressesEvaluation) {
  Program p = testing::load_program("min.clp");
  CandidateSpec spec = testing::load_spec("min.spec", p);
  RuleSet prior{rule("min(X,Y,Z), X #=< Y ==> Z = X.")};
  MineResult with = mine_splitting(p, spec, prior);
  MineResult without = mine_splitting(p, spec, {});
  EXPECT_GT(with.stats.skipped_redundant, without.stats.skipped_redundant);
  EXPECT_LT(with.stats.evaluations, without.stats.evaluations);
  for (const auto& r : with.rules) {
    bool covered = contains(r.lhs, testing::atom("X #=< Y")) &&
                   (contains(r.rhs, testing::atom("Z = X")) || contains(r.rhs, testing::atom("Z \\= X")));
    EXPECT_FALSE(covered) << to_string(r);
  }
  for (const auto& g : with.stats.evaluated_goals) {
    bool has_lhs = g.find("X #=< Y") != std::string::npos;
    bool has_d = g.find("Z \\= X") != std::string::npos;
    EXPECT_FALSE(has_lhs && has_d) << g;
  }
}

TEST(MineGeneral, XorImpliesNeg) {
  RuleSet rs = mined("boolean.clp", "xor_neg.spec", Mode::General);
  for (const char* text : {"xor(X,Y,Z), Z = 1 ==> neg(X,Y).", "xor(X,Y,Z), Y = 1 ==> neg(X,Z).",
                           "xor(X,Y,Z), X = 1 ==> neg(Y,Z)."}) {
    EXPECT_TRUE(has_rule(rs, rule(text))) << text << "\n" << format_rules(rs);
  }
}

TEST(MineGeneral, AndImpliesMinAndSymmetries) {
  EXPECT_TRUE(has_rule(mined("boolean.clp", "and_min.spec", Mode::General),
                       rule("and(X,Y,Z) ==> min(X,Y,Z).")));
  EXPECT_TRUE(has_rule(mined("boolean.clp", "min_sym.spec", Mode::General),
                       rule("min(X,Y,Z) ==> min(Y,X,Z).")));
  EXPECT_TRUE(has_rule(mined("boolean.clp", "xor_sym.spec", Mode::General),
                       rule("xor(X,Y,Z) ==> xor(Y,X,Z).")));
}

/// lhs and rhs parsed together so that they share variables; `split` is the lhs size.
std::pair<Constraints, Constraints> sides(const char* text, std::size_t split) {
  Constraints all = testing::conj(text);
  return {Constraints(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(split)),
          Constraints(all.begin() + static_cast<std::ptrdiff_t>(split), all.end())};
}

TEST(CheckGeneralRule, Examples) {
  Program p = testing::load_program("boolean.clp");
  auto [l1, r1] = sides("xor(X,Y,Z), Z = 1, neg(X,Y)", 2);
  EXPECT_EQ(check_general_rule(p, l1, r1), Validity::Valid);
  auto [l2, r2] = sides("xor(X,Y,Z), neg(X,Y)", 1);
  EXPECT_EQ(check_general_rule(p, l2, r2), Validity::Invalid);
  auto [l3, r3] = sides("and(X,Y,Z), min(X,Y,Z)", 1);
  EXPECT_EQ(check_general_rule(p, l3, r3), Validity::Valid);
  // Z is global in the closed check: neg(X,Y) does not fix it
  auto [l4, r4] = sides("neg(X,Y), xor(X,Y,Z)", 1);
  EXPECT_EQ(check_closed_rule(p, l4, r4), Validity::Invalid);
  auto [l5, r5] = sides("neg(X,Y), Z = 1, xor(X,Y,Z)", 2);
  EXPECT_EQ(check_closed_rule(p, l5, r5), Validity::Valid);
}

TEST(SimplifyRuleset, RedundancyExample) {
  RuleSet in = parse_rules(
      "p(X) ==> r(X).\n"
      "p(X), q(X) ==> r(X).\n"
      "s(X,Y) ==> X = Y, X = a, Y = a.\n");
  RuleSet out = simplify_ruleset(in);
  EXPECT_EQ(format_rules(out), "p(X) ==> r(X).\ns(X,Y) ==> X = a, Y = a.\n");
}

TEST(SimplifyRuleset, SingletonUnchanged) {
  RuleSet in{rule("min(X,Y,Z), X #=< Y ==> Z = X.")};
  EXPECT_EQ(format_rules(simplify_ruleset(in)), format_rules(in));
}

TEST(SimplifyRuleset, VariantsCollapse) {
  RuleSet in{rule("min(X,Y,Z), X #=< Y ==> Z = X."), rule("min(A,B,C), A #=< B ==> C = A."),
             rule("min(X,Y,Z), Y #>= X ==> X = Z.")};
  EXPECT_EQ(simplify_ruleset(in).size(), 1u);
}

TEST(SimplifyRuleset, SplittingRulesNeverShortenOthers) {
  RuleSet in{rule("and(X,Y,Z) ==> X = 1 ; Z = 0."), rule("and(X,Y,Z), Z = 1 ==> X = 1, Y = 1.")};
  RuleSet out = simplify_ruleset(in);
  EXPECT_TRUE(has_rule(out, in[1])) << format_rules(out);
}

TEST(SimplifyRuleset, SplittingRuleDroppedWhenDisjunctImplied) {
  RuleSet in{rule("min(X,Y,Z), X #=< Y ==> Z = X."), rule("min(X,Y,Z), X #=< Y ==> Z = X ; Z = Y.")};
  EXPECT_EQ(simplify_ruleset(in).size(), 1u);
}

TEST(Mine, Deterministic) {
  Program p = testing::load_program("min.clp");
  CandidateSpec spec = testing::load_spec("min.spec", p);
  std::string first = format_rules(mine(p, spec, Mode::All).rules);
  MinerOptions parallel;
  parallel.jobs = 4;
  EXPECT_EQ(format_rules(mine(p, spec, Mode::All).rules), first);
  EXPECT_EQ(format_rules(mine(p, spec, Mode::All, parallel).rules), first);
}

class OptimizationNeutrality : public ::testing::TestWithParam<std::pair<const char*, const char*>> {};

TEST_P(OptimizationNeutrality, SameRulesFewerEvaluations) {
  auto [prog, spec_name] = GetParam();
  Program p = testing::load_program(prog);
  CandidateSpec spec = testing::load_spec(spec_name, p);
  MinerOptions off;
  off.opt1 = off.opt2 = off.opt3 = false;
  MineResult on = mine(p, spec, Mode::Primitive);
  MineResult none = mine(p, spec, Mode::Primitive, off);
  EXPECT_EQ(format_rules(on.rules), format_rules(none.rules));
  EXPECT_LT(on.stats.evaluations, none.stats.evaluations);
}

INSTANTIATE_TEST_SUITE_P(FiniteDomains, OptimizationNeutrality,
                         ::testing::Values(std::pair{"and.clp", "and.spec"},
                                           std::pair{"min.clp", "min.spec"}));

TEST(MineSoundness, FiniteDomainRulesPassOracle) {
  Program p = testing::load_program("boolean.clp");
  GroundModel model(p, testing::boolean_universe());
  for (const char* spec : {"and.spec", "min.spec"}) {
    RuleSet rs = mine(p, testing::load_spec(spec, p), Mode::All).rules;
    EXPECT_FALSE(rs.empty());
    EXPECT_EQ(testing::refuted(model, rs), std::vector<std::string>{}) << spec;
  }
}

TEST(MineSoundness, ListRulesPassOracle) {
  Program p = testing::load_program("append.clp");
  GroundModel model(p, testing::list_universe());
  RuleSet rs = mine(p, testing::load_spec("append.spec", p), Mode::Primitive).rules;
  EXPECT_EQ(testing::refuted(model, rs), std::vector<std::string>{});
}

}  // namespace
}  // namespace chrgen
