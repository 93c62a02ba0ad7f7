#include <gtest/gtest.h>

#include <random>

#include "support.hpp"

namespace chrgen {
namespace {

using testing::conj;

TEST(Negate, ComplementaryRelations) {
  EXPECT_EQ(to_string(negate(testing::atom("X = Y"))), "X \\= Y");
  EXPECT_EQ(to_string(negate(testing::atom("Y #=< X"))), "Y #> X");
  EXPECT_EQ(to_string(negate(testing::atom("X #< Y"))), "X #>= Y");
  for (const char* text : {"X = Y", "X \\= a", "X #=< 1", "X #< Y", "X #>= 0", "X #> Y"}) {
    Constraint c = testing::atom(text);
    EXPECT_EQ(negate(negate(c)), c) << text;
  }
  EXPECT_THROW(negate(testing::atom("p(X)")), std::invalid_argument);
}

TEST(AssertConstraint, DetectsPaperContradiction) {
  Constraints cs = conj("Y #=< X, Z = Y, Z \\= Y");
  auto s = Store::of(std::span(cs).subspan(0, 2));
  ASSERT_TRUE(s);
  EXPECT_FALSE(assert_constraint(*s, cs[2]));
}

TEST(AssertConstraint, AntisymmetryEntailsEquality) {
  Constraints cs = conj("X #=< Y, Y #=< X, X = Y");
  auto s = Store::of(std::span(cs).subspan(0, 2));
  ASSERT_TRUE(s);
  EXPECT_TRUE(entails(*s, cs[2]));
}

TEST(AssertConstraint, ListClash) {
  Constraints cs = conj("X = [H|X1], X = []");
  auto s = Store::of(std::span(cs).subspan(0, 1));
  ASSERT_TRUE(s);
  EXPECT_FALSE(assert_constraint(*s, cs[1]));
}

TEST(AssertConstraint, StrictCycleFails) {
  EXPECT_FALSE(Store::of(conj("X #< Y, Y #=< Z, Z #=< X")));
  EXPECT_TRUE(Store::of(conj("X #=< Y, Y #=< Z, Z #=< X")));
  EXPECT_FALSE(Store::of(conj("X #=< 0, X #> 0")));
  EXPECT_FALSE(Store::of(conj("X = 1, X #< 1")));
}

TEST(AssertConstraint, NeqOnCompounds) {
  EXPECT_FALSE(Store::of(conj("[a|T] \\= [a|T]")));
  EXPECT_TRUE(Store::of(conj("X \\= [a|T]")));
  EXPECT_FALSE(Store::of(conj("X \\= [a|T], X = [a|T]")));
  EXPECT_TRUE(Store::of(conj("[a] \\= [b]")));
}

TEST(Entails, Examples) {
  Constraints cs = conj("X = Y, Y = Z, X = Z");
  auto s = Store::of(std::span(cs).subspan(0, 2));
  EXPECT_TRUE(entails(*s, cs[2]));

  Constraints lt = conj("X #< Y, X \\= Y");
  auto s2 = Store::of(std::span(lt).subspan(0, 1));
  EXPECT_TRUE(entails(*s2, lt[1]));
  EXPECT_FALSE(assert_constraint(*s2, negate(lt[1])));

  EXPECT_FALSE(entails(Store{}, testing::atom("X = Y")));
}

TEST(Simplify, Examples) {
  Constraints cs = conj("X = Y, X = a, Y = a");
  auto s = Store::of(cs);
  ASSERT_TRUE(s);
  EXPECT_EQ(to_string(simplify(*s)), "X = a, Y = a");

  auto s2 = Store::of(conj("X #=< Y, Y #=< X"));
  ASSERT_TRUE(s2);
  EXPECT_EQ(to_string(simplify(*s2)), "X = Y");

  EXPECT_TRUE(simplify(Store{}).empty());
}

TEST(DnfSatisfiable, Examples) {
  Answer a1 = conj("X = 1, Y = 0, Z = 1");
  Answer a2 = conj("X = 0, Y = 1, Z = 1");
  std::vector<Answer> pos{a1, a2};
  std::vector<Answer> same{a1, a2};
  EXPECT_FALSE(dnf_satisfiable(pos, same));

  Answer xa = conj("X = a");
  std::vector<Answer> only{xa};
  EXPECT_TRUE(dnf_satisfiable(only, {}));
  Constraints both = conj("X = a, X = b");
  std::vector<Answer> pos_a{{both[0]}};
  std::vector<Answer> neg{{both[1]}};
  EXPECT_TRUE(dnf_satisfiable(pos_a, neg));
}

TEST(DnfSatisfiable, CapThrows) {
  std::vector<Answer> neg;
  Constraints vars = conj("p(A,B,C,D,E,F)");
  for (const auto& v : vars[0].args()) {
    neg.push_back({Constraint::primitive(Relation::Eq, v, Term::number(0)),
                   Constraint::primitive(Relation::Eq, v, Term::number(1)),
                   Constraint::primitive(Relation::Neq, v, Term::number(2))});
  }
  std::vector<Answer> pos{{}};
  EXPECT_THROW(dnf_satisfiable(pos, neg, 100), BlowupExceeded);
}

// Random constraint sets over ordered variables (values 0..2) and Herbrand
// variables (values a, b and short lists), decided by enumeration.
class Fixture {
 public:
  explicit Fixture(unsigned seed) : rng_(seed) {
    Constraints vs = conj("p(A,B,C,X,Y)");
    for (std::size_t i = 0; i < 3; ++i) ordered_.push_back(vs[0].args()[i]);
    for (std::size_t i = 3; i < 5; ++i) herbrand_.push_back(vs[0].args()[i]);
    for (int n = 0; n <= 2; ++n) numbers_.push_back(Term::number(n));
    lists_ = GroundModel::make_universe({Term::constant("a"), Term::constant("b")}, 2);
  }

  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

  Constraint random_constraint() {
    if (pick(2)) {
      auto side = [&] { return pick(3) ? ordered_[pick(3)] : numbers_[pick(3)]; };
      Relation rel = static_cast<Relation>(pick(6));
      return Constraint::primitive(rel, side(), side());
    }
    auto side = [&]() -> Term {
      switch (pick(4)) {
        case 0: return herbrand_[pick(2)];
        case 1: return lists_[pick(static_cast<int>(lists_.size()))];
        case 2: return Term::cons(Term::constant("a"), herbrand_[pick(2)]);
        default: return herbrand_[pick(2)];
      }
    };
    return Constraint::primitive(pick(2) ? Relation::Eq : Relation::Neq, side(), side());
  }

  Constraints random_set(int n) {
    Constraints cs;
    for (int i = 0; i < n; ++i) cs.push_back(random_constraint());
    return cs;
  }

  bool ground_satisfiable(const Constraints& cs) {
    Bindings b;
    return enumerate(cs, b, 0);
  }

 private:
  bool enumerate(const Constraints& cs, Bindings& b, std::size_t i) {
    std::size_t total = ordered_.size() + herbrand_.size();
    if (i == total) {
      for (const auto& c : cs) {
        Constraint g = substitute(c, b);
        if (!ground_holds(g.relation(), g.left(), g.right())) return false;
      }
      return true;
    }
    bool is_ordered = i < ordered_.size();
    const Term& v = is_ordered ? ordered_[i] : herbrand_[i - ordered_.size()];
    for (const auto& value : is_ordered ? numbers_ : lists_) {
      b[v.var_id()] = value;
      if (enumerate(cs, b, i + 1)) return true;
    }
    return false;
  }

  std::mt19937 rng_;
  std::vector<Term> ordered_, herbrand_, numbers_, lists_;
};

TEST(StoreProperties, NeverRejectsGroundSatisfiableSets) {
  Fixture f(3);
  int satisfiable = 0;
  for (int i = 0; i < 1500; ++i) {
    Constraints cs = f.random_set(1 + f.pick(4));
    if (!f.ground_satisfiable(cs)) continue;
    ++satisfiable;
    EXPECT_TRUE(Store::of(cs)) << to_string(cs);
  }
  EXPECT_GT(satisfiable, 300);
}

TEST(StoreProperties, EntailmentMeansNegationFails) {
  Fixture f(5);
  int entailed = 0;
  for (int i = 0; i < 1500; ++i) {
    Constraints cs = f.random_set(1 + f.pick(3));
    auto s = Store::of(cs);
    if (!s) continue;
    Constraint c = f.random_constraint();
    if (!entails(*s, c)) continue;
    ++entailed;
    EXPECT_FALSE(assert_constraint(*s, negate(c))) << to_string(cs) << " |= " << to_string(c);
    Constraints with_neg = cs;
    with_neg.push_back(negate(c));
    EXPECT_FALSE(f.ground_satisfiable(with_neg)) << to_string(cs) << " |= " << to_string(c);
  }
  EXPECT_GT(entailed, 50);
}

TEST(StoreProperties, SimplifiedFormIsEquivalent) {
  Fixture f(9);
  for (int i = 0; i < 800; ++i) {
    Constraints cs = f.random_set(1 + f.pick(4));
    auto s = Store::of(cs);
    if (!s) continue;
    Constraints simp = simplify(*s);
    auto back = Store::of(simp);
    ASSERT_TRUE(back) << to_string(cs);
    for (const auto& c : cs) EXPECT_TRUE(entails(*back, c)) << to_string(cs) << " -> " << to_string(simp);
    for (const auto& c : simp) EXPECT_TRUE(entails(*s, c)) << to_string(cs) << " -> " << to_string(simp);
  }
}

TEST(DnfSatisfiable, AgreesWithEnumerationOnBooleanAnswers) {
  std::mt19937 rng(17);
  Constraints vs = conj("p(X,Y,Z)");
  auto full_answer = [&] {
    Answer a;
    for (const auto& v : vs[0].args()) {
      a.push_back(Constraint::primitive(Relation::Eq, v, Term::number(rng() % 2)));
    }
    return a;
  };
  auto holds = [&](const Answer& a, unsigned bits) {
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i].right().as_number() != static_cast<long long>((bits >> i) & 1u)) return false;
    }
    return true;
  };
  for (int i = 0; i < 300; ++i) {
    std::vector<Answer> pos, neg;
    for (unsigned n = rng() % 4; n > 0; --n) pos.push_back(full_answer());
    for (unsigned n = rng() % 5; n > 0; --n) neg.push_back(full_answer());
    bool expected = false;
    for (unsigned bits = 0; bits < 8 && !expected; ++bits) {
      bool in_pos = std::any_of(pos.begin(), pos.end(), [&](const Answer& a) { return holds(a, bits); });
      bool in_neg = std::any_of(neg.begin(), neg.end(), [&](const Answer& a) { return holds(a, bits); });
      expected = in_pos && !in_neg;
    }
    EXPECT_EQ(dnf_satisfiable(pos, neg), expected);
  }
}

}  // namespace
}  // namespace chrgen
