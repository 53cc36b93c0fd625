#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "xcoll/divlat/expr.hpp"
#include "xcoll/divlat/relations.hpp"

namespace xcoll::beauville {

using divlat::DivisorClass;
using divlat::QuotientCurve;
using divlat::RelationLattice;
using groups::Element;
using groups::Subgroup;
using intmath::Int;

// Relation lattices per quotient curve, derived from one subgroup list.
class LatticeCache {
 public:
  explicit LatticeCache(std::vector<Subgroup> subgroups, std::vector<divlat::Relation> declared = {},
                        bool declared_complete = false)
      : subgroups_(std::move(subgroups)), declared_(std::move(declared)), complete_(declared_complete) {}

  const RelationLattice& lattice(const QuotientCurve& c) {
    auto key = divlat::element_key(c.acting());
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    divlat::RelationSet rs = divlat::derive_relations(c, subgroups_);
    if (c.acting().is_trivial()) {
      rs.relations.insert(rs.relations.end(), declared_.begin(), declared_.end());
      rs.complete = complete_;
    }
    return cache_.emplace(key, RelationLattice(rs)).first->second;
  }
  const std::vector<Subgroup>& subgroups() const { return subgroups_; }

 private:
  std::vector<Subgroup> subgroups_;
  std::vector<divlat::Relation> declared_;
  bool complete_ = false;
  std::map<std::vector<std::uint32_t>, RelationLattice> cache_;
};

struct StepSpec {
  std::string sigma;   // involution word
  std::string E;       // class expression on the current curve
  std::string Lprime;  // class expression on the quotient curve
};

struct ReductionScript {
  std::string name;    // bundle name, e.g. "N"
  std::string curve;   // e.g. "C2"
  std::string start;   // acting subgroup of the starting curve, "1" for the full curve
  std::string L;       // class expression on the starting curve
  std::vector<StepSpec> steps;
};

struct StepRecord {
  std::string current;  // curve names
  std::string base;
  long long base_genus = 0;
  std::string sigma;
  Int deg_L = 0, deg_Lprime = 0, deg_E = 0;
  bool involution = false;
  bool E_in_fix = false;
  bool identity_derivable = false;
  bool sigma_invariant = false;
  bool theta = false;
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};

struct SectionCount {
  bool ok = false;
  Int h0 = -1;
  Int deg = 0;
  long long genus = 0;
  std::string curve;
  std::string trace;
  std::vector<StepRecord> steps;
  std::vector<std::string> failures;
};

struct AcyclicityCertificate {
  bool valid = false;
  Int h0 = -1, h1 = -1, deg = 0;
  long long genus = 0;
  std::string reason;
};

inline Int h0_p1(Int d) { return d >= 0 ? d + 1 : 0; }
inline Int h1_p1(Int d) { return d <= -2 ? -d - 1 : 0; }

// Curves are named by the base curve name and the acting subgroup; rational quotients print as P1.
inline std::string display_name(const QuotientCurve& c) { return c.genus() == 0 && !c.acting().is_trivial() ? "P1" : c.name(); }

struct EvalOptions {
  bool refined = false;  // spell out h0(B,L') + h0(B,K_B - L') instead of 2h0(B,L')
};

// A script with every expression evaluated; steps act on the chain H, H+sigma1, ...
struct ResolvedStep {
  Element sigma;
  std::string sigma_text;
  DivisorClass E;       // on the current curve
  DivisorClass Lprime;  // on the quotient by sigma
};

struct ResolvedScript {
  std::string name;
  std::string curve;
  Subgroup start;
  DivisorClass L;
  std::vector<ResolvedStep> steps;
};

class ScriptEvaluator {
 public:
  ScriptEvaluator(std::shared_ptr<const covering::RamificationDatum> datum, const divlat::ExprContext& ctx,
                  LatticeCache& lattices)
      : datum_(std::move(datum)), ctx_(ctx), lat_(lattices) {}

  ResolvedScript resolve(const ReductionScript& script) const {
    ResolvedScript r;
    r.name = script.name;
    r.curve = script.curve;
    QuotientCurve full(datum_, Subgroup::trivial(datum_->group), script.curve);
    r.start = divlat::ExprEvaluator(full, ctx_).subgroup(script.start.empty() ? "1" : script.start);
    QuotientCurve cur(datum_, r.start, script.curve);
    r.L = divlat::evaluate(cur, ctx_, script.L);
    for (const auto& st : script.steps) {
      divlat::ExprEvaluator ev(cur, ctx_);
      ResolvedStep rs;
      rs.sigma = ev.element(st.sigma);
      rs.sigma_text = st.sigma;
      rs.E = ev.eval(st.E);
      QuotientCurve base(datum_, cur.acting().join(rs.sigma), script.curve);
      rs.Lprime = divlat::evaluate(base, ctx_, st.Lprime);
      r.steps.push_back(std::move(rs));
      cur = std::move(base);
    }
    return r;
  }

  StepRecord verify_step(const QuotientCurve& cur, const DivisorClass& L, const ResolvedStep& s) {
    StepRecord r;
    r.current = display_name(cur);
    r.sigma = s.sigma_text;
    const auto& g = *datum_->group;
    const Subgroup& h = cur.acting();
    r.involution = !h.contains(s.sigma) && h.contains(g.mul(s.sigma, s.sigma)) && h.is_normalized_by(s.sigma);
    if (!r.involution) {
      r.failures.push_back(s.sigma_text + " is not an involution on " + cur.name());
      return r;
    }
    QuotientCurve base(cur.datum_ptr(), h.join(s.sigma), cur.base_name());
    r.base = display_name(base);
    r.base_genus = base.genus();
    r.deg_L = cur.degree(L);
    r.deg_E = cur.degree(s.E);
    r.deg_Lprime = base.degree(s.Lprime);

    DivisorClass fix;
    for (std::size_t j = 0; j < cur.num_branches(); ++j) fix += divlat::fixed_points(cur, s.sigma, j);
    r.E_in_fix = true;
    for (const auto& [sym, k] : s.E.terms)
      if (sym.kind != divlat::Symbol::Kind::Point || k != 1 || fix.coeff(sym) != 1) r.E_in_fix = false;
    if (!r.E_in_fix) r.failures.push_back("E is not contained in Fix(" + s.sigma_text + ")");

    const auto& lat = lat_.lattice(cur);
    DivisorClass pulled = cur.pullback_from(base, s.Lprime);
    r.identity_derivable = divlat::is_equivalent(cur, L, pulled + s.E, lat).derivable;
    if (!r.identity_derivable) r.failures.push_back("L ~ pullback(L') + E is not derivable on " + cur.name());
    r.sigma_invariant = lat.contains(cur.act(s.sigma, L) - L);
    if (!r.sigma_invariant) r.failures.push_back("class of L is not derivably " + s.sigma_text + "-invariant");
    r.theta = divlat::is_equivalent(cur, 2 * L, cur.canonical_class(), lat).derivable;
    if (!r.theta) r.failures.push_back("2L ~ K is not derivable on " + cur.name());
    return r;
  }

  SectionCount evaluate(const ReductionScript& script, const EvalOptions& opt = {}) {
    return evaluate(resolve(script), opt);
  }

  SectionCount evaluate(const ResolvedScript& script, const EvalOptions& opt = {}) {
    SectionCount out;
    std::optional<QuotientCurve> cur;
    cur.emplace(datum_, script.start, script.curve);
    DivisorClass L = script.L;
    out.curve = display_name(*cur);
    out.deg = cur->degree(L);
    out.genus = cur->genus();
    std::string bundle = script.name;
    out.trace = "h0(" + cur->name() + "," + bundle + ")";

    Int mult = 1;
    for (std::size_t i = 0; i < script.steps.size(); ++i) {
      const std::string tag = "step " + std::to_string(i + 1);
      if (cur->genus() == 0 && !cur->acting().is_trivial()) {
        out.failures.push_back(tag + " starts from a rational curve");
        return out;
      }
      const auto& st = script.steps[i];
      StepRecord rec = verify_step(*cur, L, st);
      out.steps.push_back(rec);
      if (!rec.ok()) {
        for (auto& f : rec.failures) out.failures.push_back(tag + ": " + f);
        return out;
      }
      QuotientCurve base(datum_, cur->acting().join(st.sigma), script.curve);
      const DivisorClass& Lp = st.Lprime;
      bool last = i + 1 == script.steps.size();
      bundle += "'";
      if (base.genus() > 0 && last) {
        out.failures.push_back("script ends on " + base.name() + " of genus " + std::to_string(base.genus()));
        return out;
      }
      if (base.genus() > 0) {
        // the split h0 identity needs the base class to be a theta characteristic as well
        const auto& bl = lat_.lattice(base);
        if (!divlat::is_equivalent(base, base.canonical_class() - Lp, Lp, bl).derivable) {
          out.failures.push_back(tag + ": K - L' ~ L' is not derivable on " + base.name());
          return out;
        }
        mult *= 2;
        if (opt.refined)
          out.trace += " = " + prefix(mult / 2) + "(h0(" + base.name() + "," + bundle + ") + h0(" + base.name() + ",K-" +
                       bundle + "))";
        out.trace += " = " + prefix(mult) + "h0(" + base.name() + "," + bundle + ")";
      } else {
        Int d = base.degree(Lp);
        Int h = h0_p1(d) + h1_p1(d);
        if (d == -1 && !opt.refined)
          out.trace += " = " + prefix(2 * mult) + "h0(P1,O(-1))";
        else
          out.trace += " = " + prefix(mult) + "(h0(P1,O(" + std::to_string(d) + ")) + h1(P1,O(" + std::to_string(d) + ")))";
        out.h0 = mult * h;
        out.trace += " = " + std::to_string(out.h0);
        out.ok = true;
        return out;
      }
      L = Lp;
      cur.emplace(std::move(base));
    }
    // no steps: the starting curve itself must be rational
    if (cur->genus() != 0) {
      out.failures.push_back("terminal curve " + cur->name() + " is not rational");
      return out;
    }
    Int d = cur->degree(L);
    out.h0 = h0_p1(d);
    out.trace = "h0(P1,O(" + std::to_string(d) + ")) = " + std::to_string(out.h0);
    out.ok = true;
    return out;
  }

 private:
  static std::string prefix(Int m) { return m == 1 ? "" : std::to_string(m); }

  std::shared_ptr<const covering::RamificationDatum> datum_;
  const divlat::ExprContext& ctx_;
  LatticeCache& lat_;
};

// Push a resolved script along phi to the curve whose datum is phi(src datum).
inline ResolvedScript transport_script(const groups::GroupMorphism& phi,
                                       std::shared_ptr<const covering::RamificationDatum> src,
                                       std::shared_ptr<const covering::RamificationDatum> dst, const ResolvedScript& s,
                                       const std::string& dst_curve, const std::string& dst_name) {
  auto image = [&](const Subgroup& h) {
    std::vector<Element> img;
    for (auto g : h.generators()) img.push_back(phi.apply(g));
    return Subgroup::generate(dst->group, img);
  };
  ResolvedScript out;
  out.name = dst_name;
  out.curve = dst_curve;
  out.start = image(s.start);
  Subgroup hs = s.start;
  QuotientCurve c0(src, hs, s.curve), d0(dst, out.start, dst_curve);
  out.L = divlat::transport_class(phi, c0, d0, s.L);
  for (const auto& st : s.steps) {
    QuotientCurve cs(src, hs, s.curve), cd(dst, image(hs), dst_curve);
    Subgroup hb = hs.join(st.sigma);
    QuotientCurve bs(src, hb, s.curve), bd(dst, image(hb), dst_curve);
    ResolvedStep r;
    r.sigma = phi.apply(st.sigma);
    r.sigma_text = dst->group->render(r.sigma);
    r.E = divlat::transport_class(phi, cs, cd, st.E);
    r.Lprime = divlat::transport_class(phi, bs, bd, st.Lprime);
    out.steps.push_back(std::move(r));
    hs = hb;
  }
  return out;
}

inline std::vector<Subgroup> transport_subgroups(const groups::GroupMorphism& phi, const std::vector<Subgroup>& hs) {
  std::vector<Subgroup> out;
  for (const auto& h : hs) {
    std::vector<Element> img;
    for (auto g : h.generators()) img.push_back(phi.apply(g));
    out.push_back(Subgroup::generate(phi.target, img));
  }
  return out;
}

inline AcyclicityCertificate acyclicity_certificate(const SectionCount& s) {
  AcyclicityCertificate c;
  c.h0 = s.h0;
  c.deg = s.deg;
  c.genus = s.genus;
  if (!s.ok) {
    c.reason = "section count not established";
    return c;
  }
  Int chi = s.deg - s.genus + 1;
  c.h1 = s.h0 - chi;
  if (s.h0 != 0) {
    c.reason = "h0 = " + std::to_string(s.h0);
    return c;
  }
  if (chi != 0) {
    c.reason = "deg = " + std::to_string(s.deg) + " but g - 1 = " + std::to_string(s.genus - 1) + ", so h1 = " +
               std::to_string(c.h1);
    return c;
  }
  c.valid = true;
  c.reason = "h0 = 0 and deg = g - 1";
  return c;
}

}  // namespace xcoll::beauville
