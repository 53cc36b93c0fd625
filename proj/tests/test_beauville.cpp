#include <gtest/gtest.h>

#include <algorithm>

#include "xcoll/beauville/reduction.hpp"
#include "xcoll/cases/catalog.hpp"

using namespace xcoll;
using namespace xcoll::beauville;
using groups::Subgroup;

namespace {

const cases::CaseBundle& bundle(const std::string& id) {
  static std::map<std::string, cases::CaseBundle> cache;
  auto it = cache.find(id);
  if (it == cache.end()) it = cache.emplace(id, cases::load_case(id)).first;
  return it->second;
}

const cases::ReductionDef& reduction(const cases::CaseBundle& c, const std::string& name) {
  auto it = std::find_if(c.reductions.begin(), c.reductions.end(), [&](const auto& r) { return r.name == name; });
  if (it == c.reductions.end()) throw std::runtime_error("no reduction " + name);
  return *it;
}

struct Env {
  const cases::Scope& s;
  const cases::ReductionDef& rd;
  LatticeCache cache;
  ScriptEvaluator ev;
  Env(const std::string& id, const std::string& red)
      : s(bundle(id).scope(reduction(bundle(id), red).scope)),
        rd(reduction(bundle(id), red)),
        cache(s.lattice_subgroups(rd.script.curve)),
        ev(s.curve(rd.script.curve).datum, s.ctx, cache) {}
  divlat::QuotientCurve full() const { return s.quotient(rd.script.curve, Subgroup::trivial(s.group)); }
};

}  // namespace

TEST(VerifyStep, D4C1SigmaZ) {
  Env e("d4xz2", "L");
  auto r = e.ev.resolve(e.rd.script);
  ASSERT_EQ(r.steps.size(), 1u);
  auto rec = e.ev.verify_step(e.full(), r.L, r.steps[0]);
  EXPECT_TRUE(rec.ok()) << (rec.failures.empty() ? "" : rec.failures[0]);
  EXPECT_TRUE(rec.theta);
  EXPECT_EQ(rec.base_genus, 0);
  EXPECT_EQ(rec.deg_Lprime, -1);
  EXPECT_EQ(rec.deg_L, 2 * rec.deg_Lprime + rec.deg_E);
}

TEST(VerifyStep, D4C2SigmaX2Z) {
  Env e("d4xz2", "N");
  auto r = e.ev.resolve(e.rd.script);
  auto rec = e.ev.verify_step(e.full(), r.L, r.steps[0]);
  EXPECT_TRUE(rec.ok()) << (rec.failures.empty() ? "" : rec.failures[0]);
  EXPECT_EQ(rec.base_genus, 1);
  EXPECT_EQ(rec.deg_Lprime, 0);
  EXPECT_EQ(rec.deg_L, 2 * rec.deg_Lprime + rec.deg_E);
}

TEST(VerifyStep, FreeFiberRejected) {
  Env e("d4xz2", "L");
  auto r = e.ev.resolve(e.rd.script);
  auto step = r.steps[0];
  auto c = e.full();
  step.E = c.reduced_fiber(3);  // z acts freely over the branch point of x
  auto rec = e.ev.verify_step(c, r.L, step);
  EXPECT_FALSE(rec.ok());
  EXPECT_FALSE(rec.E_in_fix);
}

TEST(VerifyStep, NonInvolutionRejected) {
  Env e("d4xz2", "L");
  auto r = e.ev.resolve(e.rd.script);
  auto step = r.steps[0];
  step.sigma = e.s.group->parse("x");
  step.sigma_text = "x";
  auto rec = e.ev.verify_step(e.full(), r.L, step);
  EXPECT_FALSE(rec.involution);
}

TEST(Evaluate, D4L) {
  Env e("d4xz2", "L");
  auto sc = e.ev.evaluate(e.rd.script);
  ASSERT_TRUE(sc.ok);
  EXPECT_EQ(sc.h0, 0);
  EXPECT_EQ(sc.trace, "h0(C1,L) = 2h0(P1,O(-1)) = 0");
}

TEST(Evaluate, D4N) {
  Env e("d4xz2", "N");
  auto sc = e.ev.evaluate(e.rd.script);
  ASSERT_TRUE(sc.ok);
  EXPECT_EQ(sc.h0, 0);
  EXPECT_EQ(sc.trace, "h0(C2,N) = 2h0(C2/<x^2z>,N') = 4h0(P1,O(-1)) = 0");
}

TEST(Evaluate, S4xZ2Chains) {
  Env l("s4xz2", "L"), n("s4xz2", "N");
  auto a = l.ev.evaluate(l.rd.script), b = n.ev.evaluate(n.rd.script);
  ASSERT_TRUE(a.ok);
  ASSERT_TRUE(b.ok) << b.failures[0];
  EXPECT_EQ(a.h0, 0);
  EXPECT_EQ(b.h0, 0);
  EXPECT_EQ(b.trace,
            "h0(C2,N) = 2h0(C2/<((12)(34),1)>,N') = 4h0(C2/<((12)(34),1), ((13)(24),1)>,N'') = 8h0(P1,O(-1)) = 0");
}

TEST(Evaluate, S4LOnAmbientCurve) {
  Env e("s4", "L");
  auto sc = e.ev.evaluate(e.rd.script);
  ASSERT_TRUE(sc.ok);
  EXPECT_EQ(sc.trace, "h0(C1',L) = 2h0(P1,O(-1)) = 0");
}

TEST(Evaluate, G16L) {
  Env e("g16", "L");
  auto sc = e.ev.evaluate(e.rd.script);
  ASSERT_TRUE(sc.ok);
  EXPECT_EQ(sc.trace, "h0(C1,L) = 2h0(C1/<z>,L') = 4h0(P1,O(-1)) = 0");
}

TEST(Evaluate, G16NByTransport) {
  const auto& c = bundle("g16");
  Env src("g16", "L");
  const auto& phi = c.morphisms.at("phi").morphism;
  auto sd = c.main().curve("C1").datum, dd = c.main().curve("C2").datum;
  auto moved = transport_script(phi, sd, dd, src.ev.resolve(src.rd.script), "C2", "N");
  auto subs = transport_subgroups(phi, c.main().lattice_subgroups("C1"));
  LatticeCache cache(subs);
  ScriptEvaluator ev(dd, c.main().ctx, cache);
  auto sc = ev.evaluate(moved);
  ASSERT_TRUE(sc.ok) << sc.failures[0];
  EXPECT_EQ(sc.h0, 0);
  EXPECT_EQ(sc.trace, "h0(C2,N) = 2h0(C2/<x^2yz>,N') = 4h0(P1,O(-1)) = 0");
  // the transported class is the declared N
  auto full = c.main().quotient("C2", Subgroup::trivial(c.main().group));
  EXPECT_EQ(moved.L, divlat::evaluate(full, c.main().ctx, "N"));
}

TEST(Evaluate, RefinedTraceSameCount) {
  Env e("d4xz2", "N");
  auto a = e.ev.evaluate(e.rd.script), b = e.ev.evaluate(e.rd.script, {true});
  EXPECT_EQ(a.h0, b.h0);
  EXPECT_NE(a.trace, b.trace);
  EXPECT_NE(b.trace.find("K-N'"), std::string::npos) << b.trace;
}

TEST(Evaluate, TerminalOnly) {
  Env e("d4xz2", "L");
  ReductionScript s{"O", "C1", "G", "O(0)", {}};
  auto sc = e.ev.evaluate(s);
  ASSERT_TRUE(sc.ok);
  EXPECT_EQ(sc.h0, 1);
}

TEST(Evaluate, EndsOnPositiveGenus) {
  Env e("d4xz2", "N");
  auto s = e.rd.script;
  s.steps.pop_back();
  auto sc = e.ev.evaluate(s);
  EXPECT_FALSE(sc.ok);
  ASSERT_FALSE(sc.failures.empty());
}

TEST(Certificate, D4LAndN) {
  Env l("d4xz2", "L"), n("d4xz2", "N");
  auto a = acyclicity_certificate(l.ev.evaluate(l.rd.script));
  auto b = acyclicity_certificate(n.ev.evaluate(n.rd.script));
  EXPECT_TRUE(a.valid);
  EXPECT_EQ(a.deg, 2);
  EXPECT_EQ(a.genus, 3);
  EXPECT_TRUE(b.valid);
  EXPECT_EQ(b.deg, 8);
  EXPECT_EQ(b.genus, 9);
}

TEST(Certificate, OOnP1Rejected) {
  SectionCount s;
  s.ok = true;
  s.h0 = 1;
  s.deg = 0;
  s.genus = 0;
  auto c = acyclicity_certificate(s);
  EXPECT_FALSE(c.valid);
  EXPECT_EQ(c.reason, "h0 = 1");
}

TEST(Certificate, WrongDegreeRejected) {
  SectionCount s;
  s.ok = true;
  s.h0 = 0;
  s.deg = 1;
  s.genus = 3;
  auto c = acyclicity_certificate(s);
  EXPECT_FALSE(c.valid);
  EXPECT_EQ(c.h1, 1);
}
