#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "xcoll/covering/genus.hpp"
#include "xcoll/covering/transport.hpp"

using namespace xcoll;
using namespace xcoll::covering;
using groups::Subgroup;

TEST(ValidateDatum, D4C1Valid) {
  auto c = validate_datum(fx::d4_c1());
  EXPECT_TRUE(c.valid());
}

TEST(ValidateDatum, RepeatedZDoesNotGenerate) {
  auto c = validate_datum(fx::datum(fx::d4xz2(), {"z", "z"}));
  EXPECT_TRUE(c.product_one);
  EXPECT_FALSE(c.generates);
  EXPECT_FALSE(c.valid());
}

TEST(ValidateDatum, G16C2Valid) { EXPECT_TRUE(validate_datum(fx::g16_c2()).valid()); }

TEST(ValidateDatum, AllBundledDataValid) {
  for (const auto& d : {fx::d4_c1(), fx::d4_c2(), fx::g16_c1(), fx::g16_c2(), fx::s4_c1(), fx::s4_c2(), fx::s4z_c1(),
                        fx::s4z_c2()})
    EXPECT_TRUE(validate_datum(d).valid()) << d.render();
}

TEST(ValidateDatum, ProductNotOne) {
  auto c = validate_datum(fx::datum(fx::d4xz2(), {"z", "yz", "xy"}));
  EXPECT_FALSE(c.product_one);
  ASSERT_FALSE(c.reasons.empty());
}

TEST(ValidateDatum, TypeIsMultiset) {
  auto d = fx::d4_c1();
  d.declared_type = parse_type("4,2^3");
  EXPECT_TRUE(validate_datum(d).type_matches);
  d.declared_type = parse_type("2^4");
  EXPECT_FALSE(validate_datum(d).type_matches);
}

TEST(Genus, D4C2Is9) { EXPECT_EQ(curve_genus(fx::d4_c2()), 9); }

TEST(Genus, WholeGroupQuotientIsRational) {
  auto d = fx::d4_c2();
  EXPECT_EQ(quotient_genus(d, Subgroup::whole(d.group)), 0);
}

TEST(Genus, D4C2ModX2ZIsElliptic) {
  auto d = fx::d4_c2();
  EXPECT_EQ(quotient_genus(d, fx::sub(d.group, {"x^2z"})), 1);
}

TEST(Genus, S4C2ModA4Is2) {
  auto d = fx::s4_c2();
  EXPECT_EQ(quotient_genus(d, fx::sub(d.group, {"(123)", "(12)(34)"})), 2);
}

TEST(Genus, S4xZ2C1Is3) { EXPECT_EQ(curve_genus(fx::s4z_c1()), 3); }

TEST(Genus, Table) {
  EXPECT_EQ(curve_genus(fx::d4_c1()), 3);
  EXPECT_EQ(curve_genus(fx::g16_c1()), 5);
  EXPECT_EQ(curve_genus(fx::g16_c2()), 5);
  EXPECT_EQ(curve_genus(fx::s4_c1()), 3);
  EXPECT_EQ(curve_genus(fx::s4_c2()), 13);
  EXPECT_EQ(curve_genus(fx::s4z_c2()), 25);
}

TEST(Fibers, D4C1E4HasFourPoints) {
  auto d = fx::d4_c1();
  auto f = fiber(d, 3, Subgroup::trivial(d.group));
  EXPECT_EQ(f.count_on_curve(), 4u);
  EXPECT_EQ(f.points.size(), 4u);
}

TEST(Fibers, D4C1E1UnderK4) {
  auto d = fx::d4_c1();
  auto f = fiber(d, 0, fx::sub(d.group, {"x^2", "xy"}));
  ASSERT_EQ(f.points.size(), 2u);
  for (const auto& p : f.points) {
    EXPECT_EQ(p.members.size(), 4u);
    EXPECT_EQ(p.local_degree, 1u);
  }
}

TEST(Fibers, S4xZ2C1E3UnderV4IsFree) {
  auto d = fx::s4z_c1();
  auto f = fiber(d, 2, fx::sub(d.group, {"((12)(34),0)", "((13)(24),0)"}));
  ASSERT_EQ(f.points.size(), 2u);
  for (const auto& p : f.points) EXPECT_EQ(p.members.size(), 4u);
}

TEST(Fibers, D4C2E5UnderYX2YIsFree) {
  auto d = fx::d4_c2();
  auto f = fiber(d, 4, fx::sub(d.group, {"y", "x^2y"}));
  ASSERT_EQ(f.points.size(), 2u);
  for (const auto& p : f.points) EXPECT_EQ(p.local_degree, 1u);
}

TEST(Fibers, BranchOutOfRange) {
  auto d = fx::d4_c1();
  EXPECT_THROW(fiber(d, 4, Subgroup::trivial(d.group)), UsageError);
}

TEST(Freeness, BundledPairsAreFree) {
  EXPECT_TRUE(check_free_diagonal(fx::d4_c1(), fx::d4_c2()).free);
  EXPECT_TRUE(check_free_diagonal(fx::g16_c1(), fx::g16_c2()).free);
  EXPECT_TRUE(check_free_diagonal(fx::s4_c1(), fx::s4_c2()).free);
  EXPECT_TRUE(check_free_diagonal(fx::s4z_c1(), fx::s4z_c2()).free);
}

TEST(Freeness, DiagonalOfOneCurveIsNotFree) {
  auto c = check_free_diagonal(fx::d4_c1(), fx::d4_c1());
  EXPECT_FALSE(c.free);
  EXPECT_FALSE(c.shared.empty());
}

namespace {
FreeGroupSubstitution s4_substitution() {
  return {{"s1", "sm1", "s0", "sinf"},
          {"t0", "t1"},
          {{"s1", "t1"}, {"sm1", "t0 t1 t0^-1"}, {"s0", "t0^2"}, {"sinf", "t0^-1 t1^-1 t0^-1 t1^-1"}}};
}
}  // namespace

TEST(Transport, S4Identification) {
  auto g = fx::s4xz2();
  groups::NamedElements a{{"t0", g->parse("((12),0)")}, {"t1", g->parse("((1234),1)")}};
  auto out = transport_monodromy(s4_substitution(), a, *g);
  EXPECT_EQ(g->render(out.at("s1")), g->render(g->parse("((1234),1)")));
  EXPECT_EQ(out.at("sm1"), g->parse("((1342),1)"));
  EXPECT_EQ(out.at("s0"), g->identity());
  EXPECT_EQ(out.at("sinf"), g->parse("((134),0)"));
}

TEST(Transport, RelationRespected) { EXPECT_TRUE(substituted_relation(s4_substitution()).empty()); }

TEST(Transport, IdentitySubstitution) {
  auto g = fx::d4xz2();
  FreeGroupSubstitution id{{"a", "b"}, {"a", "b"}, {{"a", "a"}, {"b", "b"}}};
  groups::NamedElements asg{{"a", g->parse("x")}, {"b", g->parse("yz")}};
  auto out = transport_monodromy(id, asg, *g);
  EXPECT_EQ(out.at("a"), asg.at("a"));
  EXPECT_EQ(out.at("b"), asg.at("b"));
}

TEST(Transport, UndefinedSymbol) {
  auto g = fx::d4xz2();
  FreeGroupSubstitution s{{"a"}, {"t"}, {{"a", "t"}}};
  EXPECT_THROW(transport_monodromy(s, {}, *g), UsageError);
}

TEST(DatumConjugate, S4Example) {
  auto g = fx::s4();
  auto d = fx::datum(g, {"(134)", "(1234)", "(1342)"});
  auto c = datum_conjugate(d, g->parse("(13)(24)"));
  EXPECT_EQ(c, fx::datum(g, {"(123)", "(1234)", "(1243)"}));
}

TEST(DatumConjugate, IdentityUnchanged) {
  auto d = fx::d4_c2();
  EXPECT_EQ(datum_conjugate(d, d.group->identity()), d);
}

TEST(DatumConjugate, Transposition) {
  auto g = fx::s4();
  auto c = datum_conjugate(fx::datum(g, {"(12)", "(12)"}), g->parse("(13)"));
  EXPECT_EQ(c, fx::datum(g, {"(23)", "(23)"}));
}

TEST(ApplyAutomorphism, PhiMapsG16C1ToC2) {
  auto g = fx::g16();
  groups::GroupMorphism phi{g, g, {g->parse("xyz"), g->parse("y"), g->parse("x^2yz")}};
  EXPECT_EQ(apply_automorphism_to_datum(phi, fx::g16_c1()), fx::g16_c2());
}

TEST(ApplyAutomorphism, Identity) {
  auto g = fx::g16();
  groups::GroupMorphism id{g, g, {g->parse("x"), g->parse("y"), g->parse("z")}};
  EXPECT_EQ(apply_automorphism_to_datum(id, fx::g16_c1()), fx::g16_c1());
}

TEST(ApplyAutomorphism, InnerAgreesWithConjugation) {
  auto g = fx::d4xz2();
  auto h = g->parse("xy");
  groups::GroupMorphism inner{g, g, {g->conj(g->parse("x"), h), g->conj(g->parse("y"), h), g->conj(g->parse("z"), h)}};
  EXPECT_EQ(apply_automorphism_to_datum(inner, fx::d4_c2()), datum_conjugate(fx::d4_c2(), h));
}

TEST(ApplyAutomorphism, RejectsNonAutomorphism) {
  auto g = fx::g16();
  groups::GroupMorphism m{g, g, {g->parse("x^2"), g->parse("y"), g->parse("z")}};
  EXPECT_THROW(apply_automorphism_to_datum(m, fx::g16_c1()), UsageError);
}

TEST(SurfaceInvariants, D4AndS4) {
  for (auto [a, b] : {std::pair{fx::d4_c1(), fx::d4_c2()}, std::pair{fx::s4_c1(), fx::s4_c2()}}) {
    auto s = surface_invariants(a, b);
    EXPECT_EQ(s.chiO, 1);
    EXPECT_EQ(s.e, 4);
    EXPECT_EQ(s.Ksquared, 8);
    EXPECT_EQ(s.q, 0);
    EXPECT_EQ(s.pg, 0);
    EXPECT_EQ(s.rankK0, 4);
  }
}

TEST(SurfaceInvariants, SameCurveRejected) { EXPECT_THROW(surface_invariants(fx::d4_c1(), fx::d4_c1()), UsageError); }
