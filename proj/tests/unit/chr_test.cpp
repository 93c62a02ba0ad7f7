#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "support.hpp"
#include "chrgen/chr.hpp"

namespace chrgen {
namespace {

using testing::conj;
using testing::rule;

std::string emitted(const char* text) { return emit({rule(text)}, all_relations()).text; }

TEST(Emit, AndSimplificationInlinesEquality) {
  EXPECT_EQ(emitted("and(X,Y,Z), Z = 1 <=> X = 1, Y = 1, Z = 1."), "and(X,Y,1) <=> X=1, Y=1.\n");
}

TEST(Emit, MinGuard) {
  EXPECT_EQ(emitted("min(X,Y,Z), X #=< Y <=> Z = X, X #=< Y."), "min(X,Y,Z) <=> X=<Y | Z=X.\n");
}

TEST(Emit, AppendSplittingOnSingletonList) {
  EXPECT_EQ(emitted("append(X,Y,Z), Z = [A] ==> X = [A] ; Y = [A]."),
            "append(X,Y,[A]) ==> X=[A] ; Y=[A].\n");
}

TEST(Emit, FailureAndPropagation) {
  EXPECT_EQ(emitted("and(X,Y,Z), X = 0, Z = 1 ==> false."), "and(0,Y,1) ==> false.\n");
  EXPECT_EQ(emitted("append(X,Y,Z), X \\= [] ==> Z \\= []."), "append(X,Y,Z) ==> X\\=[] | Z\\=[].\n");
}

TEST(Emit, HeaderLines) {
  EmitResult r = emit({rule("min(X,Y,Z) ==> Z #=< X.")}, all_relations(), {"generated", "hash 1"});
  EXPECT_EQ(r.text, "% generated\n% hash 1\nmin(X,Y,Z) ==> Z=<X.\n");
}

TEST(Emit, UnencodableGuard) {
  try {
    emit({rule("min(X,Y,Z), X #=< Y ==> Z = X.")}, {Relation::Eq, Relation::Neq});
    FAIL() << "expected EncodingError";
  } catch (const EncodingError& e) {
    EXPECT_TRUE(same_rule(e.rule, rule("min(X,Y,Z), X #=< Y ==> Z = X.")));
  }
}

TEST(Emit, UnsatisfiableLhsDroppedWithWarning) {
  EmitResult r = emit({rule("and(X,Y,Z), Z = 0, Z = 1 ==> false."), rule("and(X,Y,Z) ==> X #=< 1.")},
                      all_relations());
  EXPECT_EQ(r.rules.size(), 1u);
  ASSERT_EQ(r.warnings.size(), 1u);
  EXPECT_NE(r.warnings[0].find("unsatisfiable lhs"), std::string::npos);
}

TEST(DirectForm, InliningOrderDoesNotMatter) {
  std::mt19937 rng(7);
  for (const char* text : {"append(X,Y,Z), Z = [A|T], X = [], Y = Z ==> T = [].",
                           "p(X,Y,Z), X = Y, Y = Z, Z = f(W) ==> W = a.",
                           "p(X,Y), X = [H|T], Y = [H|U], T = U ==> X = Y."}) {
    Rule r = rule(text);
    std::string key = canonical_key(to_rule(*direct_form(r, all_relations())));
    for (int i = 0; i < 20; ++i) {
      Rule shuffled = r;
      std::shuffle(shuffled.lhs.begin(), shuffled.lhs.end(), rng);
      EXPECT_EQ(canonical_key(to_rule(*direct_form(shuffled, all_relations()))), key) << text;
    }
  }
}

std::vector<std::string> leaves(const RuleSet& rules, const char* goal) {
  std::vector<std::string> out;
  for (const auto& leaf : run(rules, conj(goal)).leaves) out.push_back(to_string(leaf.constraints()));
  std::sort(out.begin(), out.end());
  return out;
}

TEST(Runtime, MinOrderRuleBindsResult) {
  RuleSet rules{rule("min(X,Y,Z), Y #=< X <=> Z = Y, Y #=< X."),
                rule("min(X,Y,Z), X #=< Y <=> Z = X, X #=< Y.")};
  ChrRun r = run(rules, conj("min(a,b,M), b #=< a"));
  ASSERT_EQ(r.leaves.size(), 1u);
  EXPECT_EQ(to_string(r.leaves[0].constraints()), "M = b, b #=< a");
}

TEST(Runtime, AndSplittingForks) {
  RuleSet rules{rule("and(X,Y,Z), Z = 0 ==> X = 0 ; Y = 0.")};
  EXPECT_EQ(leaves(rules, "and(X,Y,0)"),
            (std::vector<std::string>{"and(0,Y,0), X = 0", "and(X,0,0), Y = 0"}));
}

TEST(Runtime, EmptyRulesetLeavesGoal) {
  EXPECT_EQ(leaves({}, "min(X,Y,Z), X #=< Y"), (std::vector<std::string>{"min(X,Y,Z), X #=< Y"}));
}

TEST(Runtime, FailureRuleKillsBranch) {
  RuleSet rules{rule("and(X,Y,Z), X = 0, Z = 1 ==> false.")};
  EXPECT_TRUE(run(rules, conj("and(0,Y,1)")).leaves.empty());
  EXPECT_EQ(run(rules, conj("and(1,Y,1)")).leaves.size(), 1u);
}

TEST(Runtime, PropagationFiresOncePerTuple) {
  RuleSet rules{rule("min(X,Y,Z) ==> min(Y,X,Z)."), rule("min(X,Y,Z) ==> Z #=< X.")};
  ChrRun r = run(rules, conj("min(A,B,C)"));
  ASSERT_EQ(r.leaves.size(), 1u);
  EXPECT_EQ(r.leaves[0].user.size(), 2u);
  EXPECT_LE(r.steps, 4u);
}

TEST(Runtime, StepLimit) {
  RuleSet rules{rule("p(X) ==> p(f(X)).")};
  EXPECT_THROW(run(rules, conj("p(a)"), 50), StepLimitExceeded);
}

TEST(Runtime, EncodedRulesAgreeWithOriginals) {
  RuleSet originals{rule("append(X,Y,Z), Z = [A] ==> X = [A] ; Y = [A]."),
                    rule("and(X,Y,Z), Z = 1 <=> X = 1, Y = 1, Z = 1."),
                    rule("min(X,Y,Z), X #=< Y <=> Z = X, X #=< Y.")};
  EmitResult e = emit(originals, all_relations());
  ASSERT_EQ(e.rules.size(), originals.size());
  for (const char* goal : {"append([],[a],[a])", "append([a],[],[a])", "append(X,Y,[b])",
                           "and(X,Y,1)", "and(1,1,1)", "and(0,Y,1)", "min(0,1,Z)", "min(1,0,Z)",
                           "min(1,1,1)"}) {
    for (std::size_t i = 0; i < originals.size(); ++i) {
      EXPECT_EQ(leaves({originals[i]}, goal), leaves({to_rule(e.rules[i])}, goal))
          << goal << " with " << to_string(originals[i]);
    }
  }
  EXPECT_EQ(leaves({originals[0]}, "append(X,Y,[b])"),
            (std::vector<std::string>{"append(X,[b],[b]), Y = [b]", "append([b],Y,[b]), X = [b]"}));
}

TEST(RuntimeProperties, MinedRulesKeepGroundSolutions) {
  Program p = testing::load_program("boolean.clp");
  GroundModel model(p, testing::boolean_universe());
  RuleSet rules = mine(p, testing::load_spec("and.spec", p), Mode::All).rules;
  std::vector<Term> u = testing::boolean_universe();
  std::vector<Term> slot = u;
  slot.push_back(Term::var(9001, "V"));
  for (const auto& x : slot) {
    for (const auto& y : slot) {
      for (const auto& z : slot) {
        Goal g{Constraint::user("and", {x, y, z})};
        bool before = model.satisfiable(g);
        bool after = false;
        for (const auto& leaf : run(rules, g).leaves) after = after || model.satisfiable(leaf.constraints());
        if (before) EXPECT_TRUE(after) << to_string(g);
      }
    }
  }
}

}  // namespace
}  // namespace chrgen
