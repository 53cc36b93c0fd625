#include <gtest/gtest.h>

#include "xcoll/beauville/reduction.hpp"
#include "xcoll/cases/catalog.hpp"
#include "xcoll/divlat/expr.hpp"
#include "xcoll/divlat/relations.hpp"

using namespace xcoll;
using namespace xcoll::divlat;
using groups::Subgroup;

namespace {

const cases::CaseBundle& bundle(const std::string& id) {
  static std::map<std::string, cases::CaseBundle> cache;
  auto it = cache.find(id);
  if (it == cache.end()) it = cache.emplace(id, cases::load_case(id)).first;
  return it->second;
}

struct On {
  const cases::Scope& s;
  QuotientCurve q;
  On(const std::string& id, const std::string& curve, const std::string& h = "1")
      : s(bundle(id).main()), q(s.quotient(curve, s.subgroup(curve, h))) {}
  DivisorClass operator()(const std::string& e) const { return evaluate(q, s.ctx, e); }
};

RelationLattice derived(const On& on, const std::vector<Subgroup>& subs) { return RelationLattice(derive_relations(on.q, subs)); }

// derived relations plus the case-declared module on the full curve
const RelationLattice& declared(const On& on, const std::string& curve) {
  static std::map<std::string, std::unique_ptr<beauville::LatticeCache>> caches;
  auto& slot = caches[curve];
  if (!slot) {
    const auto& mod = on.s.declared.at(curve);
    std::vector<Relation> rels;
    for (const auto& g : mod.generators) rels.push_back({on(g), Provenance::CaseDeclared, g, mod.citation});
    slot = std::make_unique<beauville::LatticeCache>(on.s.lattice_subgroups(curve), rels, mod.complete);
  }
  return slot->lattice(on.q);
}

std::vector<DivisorClass> s4_family(const On& on) {
  std::vector<DivisorClass> out;
  for (int i = 1; i <= 6; ++i)
    for (int j = i + 1; j <= 6; ++j)
      for (int k = 1; k <= 6; ++k)
        if (k != i && k != j)
          out.push_back(on("E" + std::to_string(i) + " + E" + std::to_string(j) + " - E" + std::to_string(k)));
  return out;
}

}  // namespace

TEST(Degree, D4C1E1) {
  On c("d4xz2", "C1");
  EXPECT_EQ(c.q.degree(c("E1")), 8);
  EXPECT_EQ(c.q.degree(c("E2")), 8);
  EXPECT_EQ(c.q.degree(c("E3")), 8);
}

TEST(Degree, ZeroClass) {
  On c("d4xz2", "C1");
  EXPECT_EQ(c.q.degree(DivisorClass{}), 0);
}

TEST(Degree, G16L) {
  On c("g16", "C1");
  EXPECT_EQ(c.q.degree(c("L")), 4);
}

TEST(Degree, NamedDivisors) {
  On c1("d4xz2", "C1"), c2("d4xz2", "C2");
  EXPECT_EQ(c1.q.degree(c1("B1")), 4);
  EXPECT_EQ(c1.q.degree(c1("B2")), 2);
  EXPECT_EQ(c1.q.degree(c1("L")), 2);
  EXPECT_EQ(c2.q.degree(c2("N")), 8);
  EXPECT_EQ(c2.q.degree(c2("M")), 0);
}

TEST(Canonical, Degrees) {
  On a("d4xz2", "C1"), b("d4xz2", "C2"), c("g16", "C1");
  EXPECT_EQ(a.q.degree(a.q.canonical_class()), 4);
  EXPECT_EQ(b.q.degree(b.q.canonical_class()), 16);
  EXPECT_EQ(c.q.degree(c.q.canonical_class()), 8);
}

TEST(Relations, D4C2ThreeRationalQuotients) {
  On c("d4xz2", "C2");
  auto lat = derived(c, {c.s.subgroup("C2", "<xyz, x^2, z>"), c.s.subgroup("C2", "<y, x^2, z>"),
                         c.s.subgroup("C2", "<y, xyz, x^2>")});
  EXPECT_TRUE(is_equivalent(c.q, c("E1"), c("E3"), lat).derivable);
  EXPECT_TRUE(is_equivalent(c.q, c("E2"), c("E4"), lat).derivable);
  EXPECT_TRUE(is_equivalent(c.q, c("E5"), c("E6"), lat).derivable);
  EXPECT_TRUE(is_equivalent(c.q, 2 * c("N"), c("K"), lat).derivable);
}

TEST(Relations, EmptyListGivesOnlyBaseRules) {
  On c("d4xz2", "C2");
  auto rs = derive_relations(c.q, {});
  EXPECT_GT(rs.count(Provenance::PullbackOfPoint), 0u);
  EXPECT_EQ(rs.count(Provenance::GenusZeroQuotient), 0u);
  EXPECT_EQ(rs.count(Provenance::RiemannHurwitzCanonical), 0u);
  EXPECT_EQ(rs.count(Provenance::HyperellipticHalves), 0u);
}

TEST(Relations, S4xZ2F3SimF6) {
  On full("s4xz2", "C2"), mid("s4xz2", "C2", "T2");
  auto subs = full.s.lattice_subgroups("C2");
  EXPECT_TRUE(is_equivalent(mid.q, mid("F3"), mid("F6"), derived(mid, subs)).derivable);
  EXPECT_TRUE(is_equivalent(full.q, full("F3"), full("F6"), derived(full, subs)).derivable);
}

TEST(Relations, D4C1E1IsTwiceB1) {
  On c("d4xz2", "C1");
  auto lat = derived(c, {c.s.subgroup("C1", "K4")});
  EXPECT_TRUE(is_equivalent(c.q, c("E1"), c("2*B1"), lat).derivable);
}

TEST(Relations, D4C1CanonicalCrossCheck) {
  On c("d4xz2", "C1");
  EXPECT_TRUE(is_equivalent(c.q, c("K"), c("E1 - 2*B2"), derived(c, c.s.lattice_subgroups("C1"))).derivable);
}

TEST(Relations, AllHaveDegreeZero) {
  for (const auto& [id, curve] : std::vector<std::pair<std::string, std::string>>{
           {"d4xz2", "C1"}, {"d4xz2", "C2"}, {"g16", "C1"}, {"s4xz2", "C1"}, {"s4xz2", "C2"}, {"s4", "C2"}}) {
    On c(id, curve);
    for (const auto& r : derive_relations(c.q, c.s.lattice_subgroups(curve)).relations)
      EXPECT_EQ(c.q.degree(r.cls), 0) << id << " " << curve << " " << r.note;
  }
}

TEST(IsEquivalent, D4Theta) {
  On c("d4xz2", "C1");
  auto lat = derived(c, c.s.lattice_subgroups("C1"));
  EXPECT_TRUE(is_equivalent(c.q, 2 * (c("B1") - c("B2")), c("K"), lat).derivable);
}

TEST(IsEquivalent, Reflexive) {
  On c("d4xz2", "C2");
  RelationLattice empty;
  EXPECT_TRUE(is_equivalent(c.q, c("N"), c("N"), empty).derivable);
}

TEST(IsEquivalent, DegreeMismatch) {
  On c("d4xz2", "C1");
  auto e = is_equivalent(c.q, c("E1"), c("E4"), derived(c, {}));
  EXPECT_FALSE(e.derivable);
  EXPECT_NE(e.reason.find("degrees differ"), std::string::npos);
}

TEST(IsEquivalent, S4ThetaUnderDeclaredModule) {
  On c("s4", "C2");
  EXPECT_TRUE(is_equivalent(c.q, 2 * c("E1 + E2 - E3"), c("K"), declared(c, "C2")).derivable);
}

TEST(CountClasses, S4FamilyHasTen) {
  On c("s4", "C2");
  EXPECT_EQ(count_distinct_classes(s4_family(c), declared(c, "C2")), 10u);
}

TEST(CountClasses, Singleton) {
  On c("s4", "C2");
  EXPECT_EQ(count_distinct_classes({c("E1 + E2 - E3")}, declared(c, "C2")), 1u);
}

TEST(CountClasses, ComplementaryTriples) {
  On c("s4", "C2");
  EXPECT_EQ(count_distinct_classes({c("E1 + E2 - E3"), c("E4 + E5 - E6")}, declared(c, "C2")), 1u);
}

TEST(CountClasses, NeedsCompleteModule) {
  On c("s4", "C2");
  EXPECT_THROW(count_distinct_classes({c("E1")}, derived(c, {})), UsageError);
}

TEST(Clifford, Bounds) {
  EXPECT_EQ(clifford_bound(3, 13), 2);
  EXPECT_EQ(clifford_bound(0, 5), 1);
  for (Int g = 1; g < 10; ++g) EXPECT_EQ(clifford_bound(2 * g - 2, g), g);
  EXPECT_THROW(clifford_bound(9, 3), UsageError);
}

TEST(Expr, UnresolvedReference) {
  On c("d4xz2", "C1");
  EXPECT_THROW(c("E9"), UsageError);
  EXPECT_THROW(c("Q7 + E1"), UsageError);
}
