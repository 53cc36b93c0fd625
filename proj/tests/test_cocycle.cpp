#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "xcoll/cocycle/cochain.hpp"
#include "xcoll/groups/character.hpp"

using namespace xcoll;
using namespace xcoll::cocycle;

namespace {

Cochain2 f2(const std::string& text) { return evaluate_formula(fx::d4xz2(), {text, text, 4, {}}); }
Cochain1 f1(const std::string& text) { return evaluate_formula1(fx::d4xz2(), {text, text, 4, {}}); }

const char* kB1 = "2*m*(k'+l')";
const char* kB2 = "l*k'";
const char* kA1 = "2*m*k'";
const char* kA2 = "l*(k'+2*m')";
const char* kLStated = "2*m*(k'+l') - k*l'";
const char* kTarget = "2*(m*l' + l*m')";
const char* kBetaAppendix = "2*k*l";

Cochain2 etaL() { return multiply(f2(kB1), invert(f2(kB2))); }
Cochain2 etaM() { return multiply(f2(kA1), f2(kA2)); }

int at(const Cochain2& e, const std::string& g, const std::string& h) {
  auto grp = fx::d4xz2();
  return e.at(grp->parse(g), grp->parse(h));
}

::testing::AssertionResult same_table(const Cochain2& a, const Cochain2& b) {
  if (a == b) return ::testing::AssertionSuccess();
  const auto& g = *a.group;
  for (auto x : g.elements())
    for (auto y : g.elements())
      if (a.at(x, y) != b.at(x, y))
        return ::testing::AssertionFailure() << "tables differ at (" << g.render(x) << ", " << g.render(y)
                                             << "): " << a.at(x, y) << " vs " << b.at(x, y);
  return ::testing::AssertionFailure() << "moduli differ";
}

}  // namespace

TEST(Differential, ConstantOneIsTrivial) { EXPECT_TRUE(is_trivial(differential1(constant1(fx::d4xz2(), 4)))); }

// The appendix states d(beta) equals the target for this beta.
TEST(Differential, AppendixBetaGivesTarget) { EXPECT_TRUE(same_table(differential1(f1(kBetaAppendix)), f2(kTarget))); }

TEST(Differential, CorrectedBetaGivesTarget) { EXPECT_TRUE(same_table(differential1(f1("2*l*m")), f2(kTarget))); }

TEST(Differential, CharacterIsTrivial) {
  auto g = fx::d4xz2();
  for (const auto& chi : groups::character_group(groups::Subgroup::whole(g), 4))
    EXPECT_TRUE(is_trivial(differential1(character_cochain(g, chi, 4))));
}

TEST(IsCocycle, Differentials) {
  EXPECT_TRUE(is_cocycle(differential1(f1(kBetaAppendix))));
  EXPECT_TRUE(is_cocycle(differential1(f1("k*l + 3*m"))));
}

TEST(IsCocycle, B1AndA2) {
  EXPECT_TRUE(is_cocycle(f2(kB1)));
  EXPECT_TRUE(is_cocycle(f2(kA2)));
}

TEST(IsCocycle, StatedLVariantIsNot) {
  auto c = check_cocycle(f2(kLStated));
  EXPECT_FALSE(c.cocycle);
  EXPECT_FALSE(c.first_failure.empty());
}

TEST(IsCocycle, CountsAllTriples) { EXPECT_EQ(check_cocycle(f2(kB2)).triples, 16u * 16u * 16u); }

TEST(Multiply, A1A2IsM) { EXPECT_TRUE(same_table(etaM(), f2("2*m*k' + l*(k'+2*m')"))); }

TEST(Multiply, InverseIsTrivial) {
  auto e = f2(kA2);
  EXPECT_TRUE(is_trivial(multiply(e, invert(e))));
  EXPECT_EQ(invert(invert(e)), e);
}

TEST(Multiply, B1OverB2) { EXPECT_TRUE(same_table(etaL(), f2("2*m*(k'+l') - l*k'"))); }

TEST(Multiply, ModulusMismatch) {
  auto a = f2(kB1);
  auto b = evaluate_formula(fx::d4xz2(), {"b", kB1, 2, {}});
  EXPECT_THROW(multiply(a, b), UsageError);
}

TEST(Coboundary, LTimesMHasWitness) {
  auto e = multiply(etaL(), etaM());
  EXPECT_TRUE(same_table(e, f2(kTarget)));
  auto w = is_coboundary(e);
  ASSERT_TRUE(w.has_value());
  EXPECT_TRUE(same_table(differential1(*w), e));
}

TEST(Coboundary, AppendixBetaIsAWitness) {
  auto e = multiply(etaL(), etaM());
  EXPECT_TRUE(same_table(differential1(f1(kBetaAppendix)), e));
}

TEST(Coboundary, TrivialHasZeroWitness) {
  auto w = is_coboundary(trivial2(fx::d4xz2(), 4));
  ASSERT_TRUE(w.has_value());
  EXPECT_EQ(*w, constant1(fx::d4xz2(), 4));
}

TEST(Coboundary, EtaLAloneHasNone) { EXPECT_FALSE(is_coboundary(etaL()).has_value()); }

TEST(Coboundary, RejectsNonCocycle) { EXPECT_THROW(is_coboundary(f2(kLStated)), UsageError); }

TEST(Formula, StatedLAtZX) { EXPECT_EQ(at(f2(kLStated), "z", "x"), 2); }

TEST(Formula, IdentityPair) {
  for (auto t : {kB1, kB2, kA1, kA2, kLStated, kTarget}) EXPECT_EQ(at(f2(t), "1", "1"), 0) << t;
  EXPECT_EQ(at(f2("3 + k*k'"), "1", "1"), 3);
}

TEST(Formula, B2AtYX) { EXPECT_EQ(at(f2(kB2), "y", "x"), 1); }

TEST(Formula, NeedsStandardForm) {
  EXPECT_THROW(evaluate_formula(fx::s4(), {"f", "k", 4, {}}), UsageError);
}

TEST(ClassOrder, Values) {
  EXPECT_EQ(class_order(trivial2(fx::d4xz2(), 4)), 1);
  EXPECT_EQ(class_order(etaL()), 2);
  EXPECT_EQ(class_order(multiply(etaL(), etaM())), 1);
}

TEST(H2, D4xZ2) {
  auto h = h2_invariants(fx::d4xz2(), 4);
  EXPECT_EQ(h.render(), "(Z/2)^6");
  EXPECT_EQ(h.order(), 64);
}
