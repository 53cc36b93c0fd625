#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "xcoll/cases/case.hpp"
#include "xcoll/covering/genus.hpp"
#include "xcoll/groups/character.hpp"
#include "xcoll/surface/collection.hpp"

#ifndef XCOLL_VERSION
#define XCOLL_VERSION "0.0.0"
#endif

namespace xcoll::cases {

enum class Outcome { Pass, Fail, Info, PaperCertified, Discrepancy };

inline const char* outcome_name(Outcome o) {
  switch (o) {
    case Outcome::Pass:
      return "pass";
    case Outcome::Fail:
      return "fail";
    case Outcome::Info:
      return "info";
    case Outcome::PaperCertified:
      return "paper-certified";
    case Outcome::Discrepancy:
      return "discrepancy";
  }
  return "?";
}

struct CheckRecord {
  std::string id;
  std::string section;
  std::string kind;
  Outcome outcome = Outcome::Info;
  std::vector<std::pair<std::string, std::string>> inputs;
  std::string detail;
  std::string trace;
  std::string citation;
};

struct VerificationReport {
  std::string case_id, title, case_path, case_sha256;
  std::string version = XCOLL_VERSION;
  int schema = kSchemaVersion;
  std::vector<std::pair<std::string, long long>> genus;  // main curves in file order
  std::vector<CheckRecord> checks;
  std::optional<surface::ExceptionalSequenceReport> sequence;

  bool pass() const {
    return std::none_of(checks.begin(), checks.end(), [](const CheckRecord& c) { return c.outcome == Outcome::Fail; });
  }
  std::size_t count(Outcome o) const {
    return static_cast<std::size_t>(std::count_if(checks.begin(), checks.end(), [o](const CheckRecord& c) { return c.outcome == o; }));
  }
  std::vector<const CheckRecord*> failures() const {
    std::vector<const CheckRecord*> out;
    for (const auto& c : checks)
      if (c.outcome == Outcome::Fail) out.push_back(&c);
    return out;
  }
  const CheckRecord* find(const std::string& id) const {
    for (const auto& c : checks)
      if (c.id == id) return &c;
    return nullptr;
  }
};

struct RunOptions {
  // replace the established cohomology of a bundle by (h0, h0 - chi); used to probe the verdict
  std::map<std::string, Int> h0_override;
  bool refined_traces = false;
};

namespace detail {

inline std::string join(const std::vector<std::string>& v, const std::string& sep = ", ") {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? sep : "") + v[i];
  return out;
}

inline std::string yaml_text(const YAML::Node& n) {
  if (!n) return {};
  if (n.IsScalar()) return n.as<std::string>();
  YAML::Emitter e;
  e.SetSeqFormat(YAML::Flow);
  e.SetMapFormat(YAML::Flow);
  e << n;
  return e.c_str();
}

}  // namespace detail

class Runner {
 public:
  Runner(const CaseBundle& c, RunOptions opt = {}) : c_(c), opt_(std::move(opt)) {}

  VerificationReport run() {
    rep_ = {};
    rep_.case_id = c_.id;
    rep_.title = c_.title;
    rep_.case_path = c_.path;
    rep_.case_sha256 = c_.sha256;
    rep_.schema = c_.schema;
    const auto& m = c_.main();
    for (const auto& name : m.curve_order) rep_.genus.emplace_back(name, covering::curve_genus(*m.curves.at(name).datum));

    group_checks();
    datum_checks();
    genus_checks();
    fiber_checks();
    freeness_checks();
    invariant_checks();
    relation_checks();
    cocycle_checks();
    reduction_checks();
    identification_checks();
    twist_checks();
    paper_certified_checks();
    sequence_checks();
    return std::move(rep_);
  }

 private:
  using Kind = std::string;

  CheckRecord& add(const std::string& id, const std::string& section, const std::string& kind, Outcome o,
                   std::string detail = {}, std::string citation = {}) {
    CheckRecord r;
    r.id = id;
    r.section = section;
    r.kind = kind;
    r.outcome = o;
    r.detail = std::move(detail);
    r.citation = std::move(citation);
    rep_.checks.push_back(std::move(r));
    return rep_.checks.back();
  }
  static Outcome pf(bool ok) { return ok ? Outcome::Pass : Outcome::Fail; }

  // --- lattices ---------------------------------------------------------------------------

  beauville::LatticeCache& lattices(const Scope& s, const std::string& curve) {
    std::string key = s.key + "/" + curve;
    auto it = lat_.find(key);
    if (it != lat_.end()) return it->second;
    std::vector<divlat::Relation> declared;
    bool complete = false;
    if (auto d = s.declared.find(curve); d != s.declared.end()) {
      auto qc = s.quotient(curve, Subgroup::trivial(s.group));
      for (const auto& g : d->second.generators)
        declared.push_back({divlat::evaluate(qc, s.ctx, g), divlat::Provenance::CaseDeclared, g, d->second.citation});
      complete = d->second.complete;
    }
    return lat_.emplace(key, beauville::LatticeCache(s.lattice_subgroups(curve), declared, complete)).first->second;
  }

  // --- expected entries -------------------------------------------------------------------

  static std::string section_of(const std::string& kind) {
    static const std::map<std::string, std::string> m = {
        {"group_order", "group"},        {"standard_form", "group"},     {"subgroup_order", "group"},
        {"normal", "group"},             {"characters", "group"},        {"genus", "genus"},
        {"fiber_points", "fibers"},      {"orbits", "fibers"},           {"free_action", "fibers"},
        {"ramified_points", "fibers"},   {"degree", "relations"},        {"equivalent", "relations"},
        {"theta", "relations"},          {"invariant", "relations"},     {"count_classes", "relations"},
        {"no_invariant_sections", "relations"}, {"parity", "relations"}, {"clifford", "relations"}};
    auto it = m.find(kind);
    return it == m.end() ? "other" : it->second;
  }

  void expected_for(const std::string& section) {
    for (const auto& e : c_.expected) {
      if (section_of(e.kind) != section) continue;
      CheckRecord r;
      r.id = e.id;
      r.section = section;
      r.kind = e.kind;
      r.citation = e.citation;
      for (auto it = e.node.begin(); it != e.node.end(); ++it) {
        auto k = it->first.as<std::string>();
        if (k != "kind" && k != "citation" && k != "id") r.inputs.emplace_back(k, detail::yaml_text(it->second));
      }
      try {
        evaluate_expected(e, r);
      } catch (const std::exception& ex) {
        r.outcome = Outcome::Fail;
        r.detail = std::string("error: ") + ex.what();
      }
      rep_.checks.push_back(std::move(r));
    }
  }

  static std::string str(const YAML::Node& n, const std::string& key, const std::string& def = {}) {
    return n[key] ? n[key].as<std::string>() : def;
  }

  template <class T>
  static void compare(CheckRecord& r, const T& got, const T& want, const std::string& what) {
    r.outcome = pf(got == want);
    if constexpr (std::is_same_v<T, bool>)
      r.detail = what + " = " + (got ? "true" : "false") + (got == want ? "" : std::string(", expected ") + (want ? "true" : "false"));
    else
      r.detail = what + " = " + std::to_string(got) + (got == want ? "" : ", expected " + std::to_string(want));
  }

  void evaluate_expected(const ExpectedEntry& e, CheckRecord& r) {
    const YAML::Node& n = e.node;
    const std::string& k = e.kind;
    if (k == "clifford") {
      Int d = n["degree"].as<Int>(), g = n["genus"].as<Int>();
      compare<Int>(r, divlat::clifford_bound(d, g), n["value"].as<Int>(), "clifford_bound(" + std::to_string(d) + "," + std::to_string(g) + ")");
      return;
    }
    const Scope& s = n["curve"] ? c_.scope_of_curve(n["curve"].as<std::string>()) : c_.main();
    const auto& g = *s.group;
    auto sub = [&](const std::string& text) {
      const std::string curve = n["curve"] ? n["curve"].as<std::string>() : s.curve_order.front();
      return s.subgroup(curve, text);
    };
    if (k == "group_order") return compare<long long>(r, static_cast<long long>(g.order()), n["value"].as<long long>(), "|G|");
    if (k == "standard_form") {
      Element a = s.element(n["element"].as<std::string>());
      auto got = g.standard_exponents(a);
      auto want = n["value"].as<std::vector<int>>();
      r.outcome = pf(got == want);
      std::vector<std::string> parts;
      for (auto x : got) parts.push_back(std::to_string(x));
      r.detail = n["element"].as<std::string>() + " = " + g.render(a) + ", exponents [" + detail::join(parts) + "]";
      return;
    }
    if (k == "subgroup_order")
      return compare<long long>(r, static_cast<long long>(sub(n["subgroup"].as<std::string>()).order()), n["value"].as<long long>(), "order");
    if (k == "normal") return compare<bool>(r, sub(n["subgroup"].as<std::string>()).is_normal(), n["value"].as<bool>(), "normal");
    if (k == "characters") {
      auto h = sub(n["subgroup"].as<std::string>());
      return compare<long long>(r, static_cast<long long>(groups::character_group(h).size()), n["value"].as<long long>(), "|Hom(H, C^*)|");
    }
    const std::string curve = str(n, "curve");
    const auto& datum = *s.curve(curve).datum;
    Subgroup h = n["subgroup"] ? sub(n["subgroup"].as<std::string>()) : Subgroup::trivial(s.group);
    if (k == "genus") {
      auto q = s.quotient(curve, h);
      return compare<long long>(r, q.genus(), n["value"].as<long long>(), "genus(" + q.name() + ")");
    }
    if (k == "fiber_points") {
      std::size_t j = n["branch"].as<std::size_t>() - 1;
      return compare<long long>(r, static_cast<long long>(covering::fiber(datum, j, Subgroup::trivial(s.group)).count_on_curve()),
                                n["value"].as<long long>(), "|E" + std::to_string(j + 1) + "|");
    }
    if (k == "orbits") {
      std::size_t j = n["branch"].as<std::size_t>() - 1;
      auto f = covering::fiber(datum, j, h);
      long long orbits = static_cast<long long>(f.points.size());
      long long free = 0, ram = 0;
      for (const auto& p : f.points) {
        if (p.local_degree == 1) ++free;
        // points of C fixed by some element of H
        if (p.local_degree > 1) ram += static_cast<long long>(p.members.size());
      }
      bool ok = orbits == n["value"].as<long long>();
      r.detail = "E" + std::to_string(j + 1) + " splits into " + std::to_string(orbits) + " orbits, " + std::to_string(free) + " free";
      if (n["free"]) ok = ok && ((free == orbits) == n["free"].as<bool>());
      if (n["ramified"]) {
        ok = ok && ram == n["ramified"].as<long long>();
        r.detail += ", " + std::to_string(ram) + " ramification points";
      }
      r.outcome = pf(ok);
      return;
    }
    if (k == "free_action") {
      auto stab = covering::stabilizer_union(datum);
      std::vector<std::string> bad;
      for (auto a : h.elements())
        if (a != g.identity() && stab[a.index]) bad.push_back(g.render(a));
      r.outcome = pf(bad.empty());
      r.detail = bad.empty() ? "no nontrivial element of H fixes a point" : "fixing elements: " + detail::join(bad);
      return;
    }
    if (k == "ramified_points") {
      // ramification of C/H -> C/K where K = over (default G)
      Subgroup over = n["over"] ? sub(n["over"].as<std::string>()) : Subgroup::whole(s.group);
      if (!h.subset_of(over)) throw UsageError("subgroup is not contained in 'over'");
      long long count = 0;
      for (std::size_t j = 0; j < datum.size(); ++j) {
        auto fh = covering::fiber(datum, j, h);
        for (const auto& p : fh.points) {
          // ramification index of C/H -> C/over at p
          Subgroup st = covering::point_stabilizer(datum, j, p.rep);
          if (st.intersect(over).order() > st.intersect(h).order()) ++count;
        }
      }
      return compare<long long>(r, count, n["value"].as<long long>(), "ramification points");
    }
    auto q = s.quotient(curve, h);
    auto& lat = lattices(s, curve).lattice(q);
    auto eval = [&](const std::string& text) { return divlat::evaluate(q, s.ctx, text); };
    if (k == "degree") {
      auto d = eval(n["divisor"].as<std::string>());
      return compare<Int>(r, q.degree(d), n["value"].as<Int>(), "deg " + n["divisor"].as<std::string>());
    }
    if (k == "equivalent") {
      auto a = eval(n["lhs"].as<std::string>()), b = eval(n["rhs"].as<std::string>());
      auto eq = divlat::is_equivalent(q, a, b, lat);
      r.outcome = pf(eq.derivable);
      r.detail = n["lhs"].as<std::string>() + " ~ " + n["rhs"].as<std::string>() + (eq.derivable ? " derivable" : ": " + eq.reason);
      r.trace = "lattice rank " + std::to_string(lat.rank()) + " from " + std::to_string(lat.relation_count()) + " relations on " + q.name();
      return;
    }
    if (k == "theta") {
      auto d = eval(n["divisor"].as<std::string>());
      auto eq = divlat::is_equivalent(q, 2 * d, q.canonical_class(), lat);
      r.outcome = pf(eq.derivable);
      r.detail = "2(" + n["divisor"].as<std::string>() + ") ~ K on " + q.name() + (eq.derivable ? " derivable" : ": " + eq.reason);
      return;
    }
    if (k == "invariant") {
      auto d = eval(n["divisor"].as<std::string>());
      std::vector<std::string> bad;
      for (std::size_t i = 0; i < g.num_generators(); ++i)
        if (!lat.contains(q.act(g.generator(i), d) - d)) bad.push_back(g.generator_names()[i]);
      r.outcome = pf(bad.empty());
      r.detail = bad.empty() ? "class fixed by every generator" : "not derivably fixed by " + detail::join(bad);
      return;
    }
    if (k == "count_classes" || k == "no_invariant_sections") {
      std::vector<std::string> texts = family(n);
      std::vector<divlat::DivisorClass> cls;
      for (const auto& t : texts) cls.push_back(eval(t));
      if (k == "count_classes") {
        auto got = static_cast<long long>(divlat::count_distinct_classes(cls, lat));
        compare<long long>(r, got, n["value"].as<long long>(), "distinct classes among " + std::to_string(cls.size()));
        return;
      }
      std::vector<std::string> bad;
      for (std::size_t i = 0; i < cls.size(); ++i)
        if (lat.contains(cls[i])) bad.push_back(texts[i]);
      r.outcome = pf(bad.empty() && lat.complete());
      r.detail = !lat.complete() ? "relation module not declared complete"
                 : bad.empty()   ? "none of " + std::to_string(cls.size()) + " differences is principal"
                                 : "principal: " + detail::join(bad);
      return;
    }
    if (k == "parity") {
      Element sigma = s.element(n["sigma"].as<std::string>());
      auto base = s.quotient(curve, Subgroup::generate(s.group, {sigma}));
      auto d = eval(n["divisor"].as<std::string>());
      Int qd = n["quotient_degree"].as<Int>();
      Int fix = 0;
      for (std::size_t j = 0; j < q.num_branches(); ++j) fix += q.degree(divlat::fixed_points(q, sigma, j));
      Int e = q.degree(d) - 2 * qd;
      if (g.element_order(sigma) != 2 || e < 0 || e > fix) {
        r.outcome = Outcome::Fail;
        r.detail = "no splitting with a degree " + std::to_string(qd) + " bundle on " + base.name();
        return;
      }
      Int c = divlat::clifford_bound(qd, base.genus());
      std::vector<int> got;
      for (Int i = 0; i <= c; ++i) got.push_back(static_cast<int>(2 * i));
      r.outcome = pf(got == n["value"].as<std::vector<int>>());
      std::vector<std::string> parts;
      for (auto x : got) parts.push_back(std::to_string(x));
      r.detail = "h0 = 2h0(A), deg A = " + std::to_string(qd) + " on " + base.name() + " of genus " + std::to_string(base.genus()) +
                 ", h0(A) <= " + std::to_string(c) + ", so h0 in {" + detail::join(parts) + "}";
      return;
    }
    throw UsageError("unknown expected kind '" + k + "'");
  }

  // Instances of a template such as "E{i} + E{j} - E{k}" over distinct indices in 1..range.
  static std::vector<std::string> family(const YAML::Node& n) {
    if (n["list"]) return n["list"].as<std::vector<std::string>>();
    std::string tmpl = n["template"].as<std::string>();
    int range = n["range"].as<int>();
    bool distinct = n["distinct"] && n["distinct"].as<bool>();
    std::vector<std::string> vars;
    for (std::size_t p = tmpl.find('{'); p != std::string::npos; p = tmpl.find('{', p + 1)) {
      std::string v = tmpl.substr(p + 1, tmpl.find('}', p) - p - 1);
      if (std::find(vars.begin(), vars.end(), v) == vars.end()) vars.push_back(v);
    }
    std::vector<std::pair<std::size_t, std::size_t>> ordered;  // symmetric pairs are taken with increasing index
    if (n["symmetric"]) {
      auto sym = n["symmetric"].as<std::vector<std::string>>();
      for (std::size_t i = 0; i + 1 < sym.size(); ++i) {
        auto a = std::find(vars.begin(), vars.end(), sym[i]) - vars.begin();
        auto b = std::find(vars.begin(), vars.end(), sym[i + 1]) - vars.begin();
        ordered.emplace_back(a, b);
      }
    }
    std::vector<std::string> out;
    std::vector<int> val(vars.size(), 1);
    while (true) {
      bool ok = true;
      if (distinct)
        for (std::size_t i = 0; i < val.size(); ++i)
          for (std::size_t j = i + 1; j < val.size(); ++j) ok = ok && val[i] != val[j];
      for (auto [a, b] : ordered) ok = ok && val[a] < val[b];
      if (ok) {
        std::string t = tmpl;
        for (std::size_t i = 0; i < vars.size(); ++i) {
          std::string key = "{" + vars[i] + "}";
          for (std::size_t p = t.find(key); p != std::string::npos; p = t.find(key)) t.replace(p, key.size(), std::to_string(val[i]));
        }
        out.push_back(t);
      }
      std::size_t i = 0;
      while (i < val.size() && ++val[i] > range) val[i++] = 1;
      if (i == val.size()) break;
    }
    return out;
  }

  // --- sections ---------------------------------------------------------------------------

  void group_checks() {
    for (const auto& [key, s] : c_.scopes) {
      const auto& g = *s.group;
      std::string pre = key == "main" ? "group" : "ambient.group";
      auto& r = add(pre + ".realize", "group", "realize", Outcome::Pass, "|G| = " + std::to_string(g.order()), s.citation);
      r.inputs.emplace_back("definition", s.description);
      std::vector<std::string> bad;
      if (g.has_presentation())
        for (std::size_t i = 0; i < g.relators().size(); ++i)
          if (g.eval_letters(g.relators()[i]) != g.identity()) bad.push_back(g.relator_texts()[i]);
      if (!bad.empty()) {
        r.outcome = Outcome::Fail;
        r.detail += "; relators not satisfied: " + detail::join(bad);
      }
    }
    expected_for("group");
  }

  void datum_checks() {
    for (const auto& [key, s] : c_.scopes)
      for (const auto& name : s.curve_order) {
        const auto& cv = s.curves.at(name);
        auto chk = covering::validate_datum(*cv.datum);
        auto& r = add("datum." + name, "data", "validate_datum", pf(chk.valid()),
                      chk.valid() ? "product 1, generates G, type " + covering::render_type(cv.datum->declared_type)
                                  : detail::join(chk.reasons, "; "),
                      cv.citation);
        r.inputs.emplace_back("datum", cv.datum->render());
        r.inputs.emplace_back("type", cv.type_text);
      }
    if (c_.embedding) {
      auto chk = groups::check_morphism(*c_.embedding);
      add("ambient.embedding", "data", "embedding", pf(chk.homomorphism && chk.injective),
          chk.homomorphism && chk.injective ? "injective homomorphism into the ambient group" : chk.reason, c_.embedding_citation);
    }
    for (const auto& [name, m] : c_.morphisms) {
      auto chk = groups::check_morphism(m.morphism);
      bool ok = chk.homomorphism && (!m.automorphism || chk.automorphism);
      add("morphism." + name, "data", "morphism", pf(ok),
          ok ? (chk.automorphism ? "automorphism of G" : "homomorphism") : chk.reason, m.citation);
    }
  }

  void genus_checks() {
    const auto& m = c_.main();
    for (const auto& [key, s] : c_.scopes)
      for (const auto& name : s.curve_order) {
        long long gg = covering::curve_genus(*s.curves.at(name).datum);
        add("genus." + name, "genus", "genus", Outcome::Info, "g(" + name + ") = " + std::to_string(gg));
      }
    if (m.curve_order.size() == 2) {
      long long g1 = rep_.genus[0].second, g2 = rep_.genus[1].second;
      long long n = static_cast<long long>(m.group->order());
      add("genus.product", "genus", "order_identity", pf((g1 - 1) * (g2 - 1) == n),
          "(g1-1)(g2-1) = " + std::to_string((g1 - 1) * (g2 - 1)) + ", |G| = " + std::to_string(n));
    }
    expected_for("genus");
  }

  void fiber_checks() {
    for (const auto& [key, s] : c_.scopes)
      for (const auto& name : s.curve_order) {
        const auto& d = *s.curves.at(name).datum;
        std::vector<std::string> parts;
        for (std::size_t j = 0; j < d.size(); ++j)
          parts.push_back("|E" + std::to_string(j + 1) + "| = " +
                          std::to_string(covering::fiber(d, j, Subgroup::trivial(s.group)).count_on_curve()));
        add("fibers." + name, "fibers", "fiber_table", Outcome::Info, detail::join(parts));
      }
    expected_for("fibers");
  }

  void freeness_checks() {
    const auto& m = c_.main();
    if (m.curve_order.size() != 2) return;
    const auto& d1 = *m.curves.at(m.curve_order[0]).datum;
    const auto& d2 = *m.curves.at(m.curve_order[1]).datum;
    auto f = covering::check_free_diagonal(d1, d2);
    std::vector<std::string> shared;
    for (auto e : f.shared) shared.push_back(m.group->render(e));
    add("freeness", "freeness", "free_diagonal", pf(f.free),
        f.free ? "no nontrivial element fixes points on both curves" : "shared stabilizer elements: " + detail::join(shared));
  }

  void invariant_checks() {
    const auto& m = c_.main();
    if (m.curve_order.size() != 2) return;
    try {
      auto si = covering::surface_invariants(*m.curves.at(m.curve_order[0]).datum, *m.curves.at(m.curve_order[1]).datum);
      surf_ = si;
      bool ok = si.chiO == 1 && si.e == 4 && si.rankK0 == 4 && si.Ksquared == 8 && si.q == 0 && si.pg == 0;
      add("invariants", "invariants", "surface_invariants", pf(ok),
          "chi(O) = " + std::to_string(si.chiO) + ", e = " + std::to_string(si.e) + ", K^2 = " + std::to_string(si.Ksquared) +
              ", q = " + std::to_string(si.q) + ", pg = " + std::to_string(si.pg) + ", rank K0 = " + std::to_string(si.rankK0));
    } catch (const std::exception& e) {
      add("invariants", "invariants", "surface_invariants", Outcome::Fail, e.what());
    }
  }

  void relation_checks() {
    for (const auto& [key, s] : c_.scopes)
      for (const auto& name : s.curve_order) {
        auto qc = s.quotient(name, Subgroup::trivial(s.group));
        auto rs = divlat::derive_relations(qc, s.lattice_subgroups(name));
        std::vector<std::string> bad;
        for (const auto& rel : rs.relations)
          if (qc.degree(rel.cls) != 0) bad.push_back(rel.note);
        std::string detail = std::to_string(rs.relations.size()) + " relations";
        for (auto p : {divlat::Provenance::PullbackOfPoint, divlat::Provenance::GenusZeroQuotient,
                       divlat::Provenance::RiemannHurwitzCanonical, divlat::Provenance::HyperellipticHalves})
          if (rs.count(p)) detail += ", " + std::to_string(rs.count(p)) + " " + divlat::provenance_name(p);
        if (auto d = s.declared.find(name); d != s.declared.end())
          detail += ", " + std::to_string(d->second.generators.size()) + " declared" + (d->second.complete ? " (complete)" : "");
        add("relations." + name, "relations", "derive_relations", pf(bad.empty()),
            bad.empty() ? detail + ", all of degree 0" : "nonzero degree: " + detail::join(bad));
      }
    for (const auto& [key, s] : c_.scopes)
      for (const auto& d : s.divisors) {
        auto qc = s.quotient(d.curve, Subgroup::trivial(s.group));
        auto cls = divlat::evaluate(qc, s.ctx, d.expr);
        auto& r = add("divisor." + d.name + (key == "main" ? "" : "@" + key), "relations", "divisor", Outcome::Info,
                      d.name + " = " + qc.render(cls) + ", degree " + std::to_string(qc.degree(cls)), {});
        r.inputs.emplace_back("expr", d.expr);
        if (!d.note.empty()) r.inputs.emplace_back("choice", d.note);
      }
    expected_for("relations");
  }

  // --- cocycles ----------------------------------------------------------------------------

  void cocycle_checks() {
    if (!c_.cocycles) return;
    const auto& cy = *c_.cocycles;
    auto grp = c_.main().group;
    const auto& g = *grp;
    std::map<std::string, cocycle::Cochain2> tab;
    std::map<std::string, std::string> cites;
    for (const auto& f : cy.formulas) {
      tab.emplace(f.name, cocycle::evaluate_formula(grp, f));
      cites[f.name] = f.citation;
    }
    auto pair_text = [&](std::size_t i) {
      std::size_t n = g.order();
      return "(" + g.render(Element{static_cast<std::uint32_t>(i / n)}) + ", " + g.render(Element{static_cast<std::uint32_t>(i % n)}) + ")";
    };
    for (const auto& f : cy.formulas) {
      if (f.name == cy.variant_stated) continue;
      auto chk = cocycle::check_cocycle(tab.at(f.name));
      auto& r = add("cocycle." + f.name, "cocycles", "is_cocycle", pf(chk.cocycle),
                    chk.cocycle ? "2-cocycle over all " + std::to_string(g.order() * g.order() * g.order()) + " triples" : "identity fails",
                    f.citation);
      r.inputs.emplace_back("exp", f.text);
    }
    for (const auto& [name, factors] : cy.products) {
      auto t = cocycle::trivial2(grp, cy.modulus);
      std::vector<std::string> parts;
      for (const auto& [f, sign] : factors) {
        t = cocycle::multiply(t, sign > 0 ? tab.at(f) : cocycle::invert(tab.at(f)));
        parts.push_back(sign > 0 ? f : f + "^-1");
      }
      tab.emplace(name, t);
      add("cocycle." + name, "cocycles", "product", pf(cocycle::is_cocycle(t)), name + " = " + detail::join(parts, " * "));
    }
    if (cy.target) {
      tab.emplace("target", cocycle::evaluate_formula(grp, *cy.target));
      auto chk = cocycle::check_cocycle(tab.at("target"));
      auto& r = add("cocycle.target", "cocycles", "is_cocycle", pf(chk.cocycle), chk.cocycle ? "2-cocycle" : "identity fails",
                    cy.target->citation);
      r.inputs.emplace_back("exp", cy.target->text);
    }
    if (!cy.identity_product.empty()) {
      auto t = cocycle::trivial2(grp, cy.modulus);
      for (const auto& f : cy.identity_product) t = cocycle::multiply(t, tab.at(f));
      bool eq = t.table == tab.at(cy.identity_equals).table;
      add("cocycle.identity", "cocycles", "table_equality", pf(eq),
          detail::join(cy.identity_product, " * ") + (eq ? " == " : " != ") + cy.identity_equals + " as tables", cy.identity_citation);
    }
    if (cy.beta && cy.target) {
      auto b = cocycle::evaluate_formula1(grp, *cy.beta);
      auto db = cocycle::differential1(b);
      const auto& t = tab.at("target");
      std::optional<std::size_t> first;
      for (std::size_t i = 0; i < t.table.size() && !first; ++i)
        if (db.table[i] != t.table[i]) first = i;
      auto& r = add("cocycle.beta", "cocycles", "stated_witness", first ? Outcome::Discrepancy : Outcome::Pass,
                    first ? "d(beta) differs from the target at " + pair_text(*first) + ": " + std::to_string(db.table[*first]) +
                                " vs " + std::to_string(t.table[*first]) + " (exponents mod " + std::to_string(cy.modulus) + ")"
                          : "d(beta) equals the target",
                    cy.beta->citation);
      r.inputs.emplace_back("beta", cy.beta->text);
    }
    if (!cy.variant_stated.empty()) {
      const auto& stated = tab.at(cy.variant_stated);
      const auto& computed = tab.at(cy.variant_computed);
      const auto& partner = tab.at(cy.variant_partner);
      const auto& target = tab.at(cy.identity_equals.empty() ? "target" : cy.identity_equals);
      bool s_ok = cocycle::multiply(stated, partner).table == target.table;
      bool c_ok = cocycle::multiply(computed, partner).table == target.table;
      bool s_cy = cocycle::is_cocycle(stated);
      add("cocycle." + cy.variant_stated, "cocycles", "variant", Outcome::Discrepancy,
          std::string("stated form ") + (s_cy ? "is" : "is not") + " a 2-cocycle and " + (s_ok ? "satisfies" : "fails") +
              " the identity with " + cy.variant_partner,
          cites[cy.variant_stated]);
      add("cocycle.variants", "cocycles", "variant_selection", pf(c_ok && !s_ok),
          "exactly one variant satisfies " + cy.variant_computed + " * " + cy.variant_partner + " == target: " +
              (c_ok && !s_ok ? cy.variant_computed : (s_ok && !c_ok ? cy.variant_stated : std::string("neither or both"))));
    }
    for (const auto& nm : cy.non_coboundary) {
      auto w = cocycle::is_coboundary(tab.at(nm));
      add("cocycle.noncoboundary." + nm, "cocycles", "is_coboundary", pf(!w), w ? "unexpected witness found" : "no witness");
    }
    for (const auto& prod : cy.coboundary) {
      auto t = cocycle::trivial2(grp, cy.modulus);
      for (const auto& f : prod) t = cocycle::multiply(t, tab.at(f));
      auto w = cocycle::is_coboundary(t);
      bool ok = w && cocycle::differential1(*w).table == t.table;
      auto& r = add("cocycle.coboundary." + detail::join(prod, "*"), "cocycles", "is_coboundary", pf(ok),
                    ok ? "cohomologous to zero; witness reproduces the table" : "no witness");
      if (w) {
        std::vector<std::string> vals;
        for (std::size_t i = 0; i < g.num_generators(); ++i)
          vals.push_back(g.generator_names()[i] + ":" + std::to_string(w->table[g.generator(i).index]));
        r.trace = "beta on generators " + detail::join(vals);
      }
      coboundary_ok_[detail::join(prod, "*")] = ok;
    }
    for (const auto& [nm, want] : cy.class_order) {
      int got = cocycle::class_order(tab.at(nm));
      add("cocycle.order." + nm, "cocycles", "class_order", pf(got == want),
          "order " + std::to_string(got) + (got == want ? "" : ", expected " + std::to_string(want)));
    }
    if (!cy.h2_value.empty()) {
      auto h2 = cocycle::h2_invariants(grp, cy.modulus);
      add("cocycle.h2", "cocycles", "h2", pf(h2.render() == cy.h2_value),
          "H^2(G, Z/" + std::to_string(cy.modulus) + ") = " + h2.render(), cy.h2_citation);
    }
  }

  // --- reductions ---------------------------------------------------------------------------

  void reduction_checks() {
    for (const auto& rd : c_.reductions) {
      const Scope& s = c_.scope(rd.scope);
      std::string id = "reduction." + rd.name;
      CheckRecord r;
      r.id = id;
      r.section = "reductions";
      r.kind = "section_count";
      r.citation = rd.citation;
      r.inputs.emplace_back("curve", rd.script.curve);
      beauville::SectionCount sc;
      try {
        if (!rd.transport_from.empty()) {
          const auto& src = *std::find_if(c_.reductions.begin(), c_.reductions.end(),
                                          [&](const ReductionDef& x) { return x.name == rd.transport_from; });
          const auto& phi = c_.morphisms.at(rd.transport_morphism).morphism;
          const Scope& ss = c_.scope(src.scope);
          auto src_datum = ss.curve(src.script.curve).datum;
          auto dst_datum = s.curve(rd.script.curve).datum;
          beauville::ScriptEvaluator se(src_datum, ss.ctx, lattices(ss, src.script.curve));
          auto resolved = se.resolve(src.script);
          auto moved = beauville::transport_script(phi, src_datum, dst_datum, resolved, rd.script.curve, rd.script.name);
          auto subs = s.lattice_subgroups(rd.script.curve);
          for (auto& h : beauville::transport_subgroups(phi, ss.lattice_subgroups(src.script.curve))) subs.push_back(h);
          beauville::LatticeCache cache(subs);
          beauville::ScriptEvaluator de(dst_datum, s.ctx, cache);
          sc = de.evaluate(moved, {opt_.refined_traces});
          r.inputs.emplace_back("transport", src.name + " along " + rd.transport_morphism);
        } else {
          beauville::ScriptEvaluator se(s.curve(rd.script.curve).datum, s.ctx, lattices(s, rd.script.curve));
          sc = se.evaluate(rd.script, {opt_.refined_traces});
        }
      } catch (const std::exception& e) {
        sc.failures.push_back(e.what());
      }
      r.trace = sc.trace;
      bool ok = sc.ok;
      std::vector<std::string> notes = sc.failures;
      if (ok && rd.expect_h0 && *rd.expect_h0 != sc.h0) {
        ok = false;
        notes.push_back("h0 = " + std::to_string(sc.h0) + ", expected " + std::to_string(*rd.expect_h0));
      }
      if (ok && !rd.expect_trace.empty() && rd.expect_trace != sc.trace) {
        ok = false;
        notes.push_back("trace differs from the expected chain '" + rd.expect_trace + "'");
      }
      for (std::size_t i = 0; i < sc.steps.size(); ++i) {
        const auto& st = sc.steps[i];
        r.inputs.emplace_back("step" + std::to_string(i + 1),
                              st.sigma + ": " + st.current + " -> " + st.base + " (genus " + std::to_string(st.base_genus) +
                                  "), deg L = " + std::to_string(st.deg_L) + ", deg E = " + std::to_string(st.deg_E) +
                                  ", deg L' = " + std::to_string(st.deg_Lprime));
      }
      r.outcome = pf(ok);
      r.detail = ok ? "h0 = " + std::to_string(sc.h0) : detail::join(notes, "; ");
      rep_.checks.push_back(r);
      counts_[rd.name] = sc;

      auto cert = beauville::acyclicity_certificate(sc);
      add(id + ".certificate", "reductions", "acyclicity", pf(ok && cert.valid),
          cert.reason + " (deg " + std::to_string(cert.deg) + ", genus " + std::to_string(cert.genus) + ")", rd.citation);
      certs_[rd.name] = ok && cert.valid;
    }
  }

  // --- identification -----------------------------------------------------------------------

  void identification_checks() {
    if (!c_.identification) return;
    const auto& id = *c_.identification;
    const Scope& amb = c_.scope("ambient");
    const Scope& m = c_.main();
    const auto& G = *amb.group;
    const auto& emb = *c_.embedding;
    bool ok = true;
    std::vector<std::string> notes;
    std::string trace;
    try {
      groups::NamedElements assign;
      for (const auto& [t, w] : id.assignment) assign.emplace(t, amb.element(w));
      auto rel = covering::substituted_relation(id.substitution);
      if (!rel.empty()) {
        ok = false;
        notes.push_back("substituted relation does not reduce to 1");
      }
      auto mono = covering::transport_monodromy(id.substitution, assign, G);
      std::vector<std::string> parts;
      for (const auto& s : id.substitution.source) parts.push_back(s + " -> " + G.render(mono.at(s)));
      trace = detail::join(parts);
      for (const auto& [s, w] : id.expect)
        if (mono.at(s) != amb.element(w)) {
          ok = false;
          notes.push_back(s + " maps to " + G.render(mono.at(s)) + ", expected " + w);
        }
      for (const auto& s : id.trivial)
        if (mono.at(s) != G.identity()) {
          ok = false;
          notes.push_back(s + " is not trivial");
        }
      // pull back along the embedding
      std::map<std::uint32_t, Element> preimage;
      for (auto a : m.group->elements()) preimage.emplace(emb.apply(a).index, a);
      covering::RamificationDatum d;
      d.group = m.group;
      for (const auto& s : id.datum_order) {
        auto it = preimage.find(mono.at(s).index);
        if (it == preimage.end()) {
          ok = false;
          notes.push_back(s + " leaves the embedded subgroup");
          continue;
        }
        d.branch.push_back(it->second);
      }
      if (d.branch.size() == id.datum_order.size()) {
        trace += "; datum " + d.render();
        if (!id.expect_datum.empty()) {
          std::vector<Element> want;
          for (const auto& w : id.expect_datum) want.push_back(m.element(w));
          if (want != d.branch) {
            ok = false;
            notes.push_back("pulled back datum differs from the expected one");
          }
        }
        auto conj = covering::datum_conjugate(d, m.element(id.conjugator));
        trace += "; conjugated by " + id.conjugator + ": " + conj.render();
        if (!id.expect_conjugated.empty()) {
          std::vector<Element> want;
          for (const auto& w : id.expect_conjugated) want.push_back(m.element(w));
          if (want != conj.branch) {
            ok = false;
            notes.push_back("conjugated datum differs from the expected one");
          }
        }
        if (conj.branch != m.curve(id.target).datum->branch) {
          ok = false;
          notes.push_back("conjugated datum is not the datum of " + id.target);
        }
      }
    } catch (const std::exception& e) {
      ok = false;
      notes.push_back(e.what());
    }
    auto& r = add("identification", "identification", "transport", pf(ok),
                  ok ? id.curve + " with the restricted action is " + id.target : detail::join(notes, "; "), id.citation);
    r.trace = trace;
    identified_ = ok;
    for (const auto& rd : c_.reductions) {
      if (rd.certifies_curve.empty()) continue;
      bool good = ok && certs_[rd.name];
      long long gs = covering::curve_genus(*amb.curve(rd.script.curve).datum);
      long long gt = covering::curve_genus(*m.curve(rd.certifies_curve).datum);
      good = good && gs == gt;
      add("reduction." + rd.name + ".transfer", "identification", "certificate_transfer", pf(good),
          good ? "certificate for " + rd.script.name + " on " + rd.script.curve + " holds on " + rd.certifies_curve
               : "certificate does not transfer",
          id.citation);
      transferred_[rd.name] = good;
    }
  }

  void twist_checks() {
    if (!c_.twist) return;
    const auto& t = *c_.twist;
    const auto& m = c_.main();
    const auto& phi = c_.morphisms.at(t.morphism).morphism;
    try {
      auto img = covering::apply_automorphism_to_datum(phi, *m.curve(t.from).datum);
      bool eq = img.branch == m.curve(t.to).datum->branch;
      add("twist", "twist", "automorphism_transport", pf(eq),
          t.morphism + "(" + t.from + ") = " + img.render() + (eq ? " equals " : " differs from ") + t.to, t.citation);
    } catch (const std::exception& e) {
      add("twist", "twist", "automorphism_transport", Outcome::Fail, e.what(), t.citation);
    }
  }

  void paper_certified_checks() {
    for (const auto& p : c_.paper_certified) {
      std::vector<std::string> bad;
      for (const auto& in : p.inputs) {
        if (in.rfind("expected.", 0) != 0) continue;
        const auto* rec = rep_.find(in);
        if (!rec || rec->outcome != Outcome::Pass) bad.push_back(in);
      }
      auto& r = add("paper." + p.id, "paper-certified", "paper_certified", bad.empty() ? Outcome::PaperCertified : Outcome::Fail,
                    bad.empty() ? p.claim : "supporting checks failed: " + detail::join(bad), p.citation);
      for (const auto& in : p.inputs) r.inputs.emplace_back("input", in);
    }
  }

  // --- sequence -----------------------------------------------------------------------------

  bool bundle_acyclic(const BundleDef& b) const {
    if (!b.acyclic_reduction.empty()) {
      auto it = certs_.find(b.acyclic_reduction);
      bool ok = it != certs_.end() && it->second;
      const auto& rd = *std::find_if(c_.reductions.begin(), c_.reductions.end(),
                                     [&](const ReductionDef& x) { return x.name == b.acyclic_reduction; });
      if (rd.script.curve != b.curve) {
        auto t = transferred_.find(rd.name);
        ok = ok && t != transferred_.end() && t->second;
      }
      return ok;
    }
    if (!b.acyclic_paper.empty()) {
      const auto* rec = rep_.find("paper." + b.acyclic_paper);
      return rec && rec->outcome == Outcome::PaperCertified;
    }
    return false;
  }

  // literal G-invariance of the defining divisor
  std::pair<bool, std::string> direct_equivariance(const BundleDef& b) const {
    const auto& m = c_.main();
    if (b.divisor.empty()) return {false, b.name + " has no explicit divisor"};
    auto qc = m.quotient(b.curve, Subgroup::trivial(m.group));
    auto d = divlat::evaluate(qc, m.ctx, b.divisor);
    for (std::size_t i = 0; i < m.group->num_generators(); ++i)
      if (!(qc.act(m.group->generator(i), d) == d))
        return {false, b.name + " = " + qc.render(d) + " is moved by " + m.group->generator_names()[i]};
    return {true, b.name + " = " + qc.render(d) + " is a G-fixed divisor"};
  }

  void sequence_checks() {
    if (c_.sequence.empty()) return;
    const auto& m = c_.main();
    if (m.curve_order.size() != 2 || !surf_) {
      add("sequence", "sequence", "verify_collection", Outcome::Fail, "needs two curves with a free diagonal action");
      return;
    }
    surface::CurveSide side[2];
    for (int i = 0; i < 2; ++i) {
      side[i].curve = m.curve_order[i];
      side[i].genus = rep_.genus[i].second;
    }
    for (const auto& [name, b] : c_.bundles) {
      int i = b.curve == m.curve_order[0] ? 0 : 1;
      if (b.degree) side[i].degrees[name] = *b.degree;
      Int chi = b.degree ? *b.degree - side[i].genus + 1 : 0;
      if (auto it = opt_.h0_override.find(name); it != opt_.h0_override.end()) {
        side[i].tables[name] = {b.curve, name, it->second, it->second - chi, b.degree.value_or(0), side[i].genus};
        add("bundle." + name + ".override", "sequence", "override", Outcome::Info,
            "h0 set to " + std::to_string(it->second) + " for probing");
        continue;
      }
      if (bundle_acyclic(b)) side[i].acyclic[name] = {b.curve, name, 0, 0, b.degree.value_or(0), side[i].genus};
    }
    std::vector<surface::SequenceMember> seq;
    for (const auto& e : c_.sequence) {
      surface::SequenceMember sm;
      sm.label = e.label;
      sm.twist = e.twist;
      for (const auto& [sign, t] : divlat::detail::signed_terms(e.c1)) sm.c1[t] += sign;
      for (const auto& [sign, t] : divlat::detail::signed_terms(e.c2)) sm.c2[t] += sign;
      auto& cert = sm.equivariance;
      std::vector<std::string> parts;
      bool ok = true;
      if (!e.abstract.empty()) {
        cert.kind = surface::Equivariance::AbstractPaired;
        const auto* rec = rep_.find("paper." + e.abstract_paper);
        cert.citation = rec ? rec->citation : std::string();
        ok = ok && rec && rec->outcome == Outcome::PaperCertified;
        parts.push_back(e.abstract + " (paper-certified " + e.abstract_paper + ")");
      } else if (!e.paired.empty()) {
        cert.kind = surface::Equivariance::PairedObstruction;
        auto it = coboundary_ok_.find(detail::join(e.paired, "*"));
        bool good = it != coboundary_ok_.end() && it->second;
        ok = ok && good;
        parts.push_back(e.paired[0] + " * " + e.paired[1] + (good ? " is a coboundary" : " not shown to be a coboundary"));
      }
      for (const auto& d : e.direct) {
        auto [good, why] = direct_equivariance(c_.bundles.at(d));
        ok = ok && good;
        parts.push_back(why);
      }
      cert.verified = ok;
      cert.detail = parts.empty() ? "O is equivariant" : detail::join(parts, "; ");
      seq.push_back(std::move(sm));
    }
    surface::SurfaceData sd{surf_->q, surf_->pg, surf_->chiO};
    auto report = surface::verify_collection(seq, side[0], side[1], sd);
    for (const auto& sm : report.members)
      add("sequence.equivariance." + sm.label, "sequence", surface::equivariance_name(sm.equivariance.kind),
pf(sm.equivariance.verified),
          sm.equivariance.detail, sm.equivariance.citation);
    for (const auto& p : report.pairs) {
      const auto& a = report.members[p.later];
      const auto& b = report.members[p.earlier];
      auto& r = add("sequence.hom." + a.label + "." + b.label, "sequence", "hom_vanishing", pf(p.ok),
                    "Hom(" + a.label + ", " + b.label + ") = H*(" + p.c1 + " x " + p.c2 + "): " + p.reason, c_.sequence_citation);
      if (p.dims)
        r.trace = "(" + std::to_string(p.dims->h0) + "," + std::to_string(p.dims->h1) + "," + std::to_string(p.dims->h2) + ")";
    }
    for (const auto& e : report.endos)
      add("sequence.end." + report.members[e.index].label, "sequence", "endomorphisms", pf(e.ok),
          "Hom*(E, E) = (" + std::to_string(e.dims.h0) + "," + std::to_string(e.dims.h1) + "," + std::to_string(e.dims.h2) + ")");
    add("sequence.verdict", "sequence", "verify_collection", pf(report.verdict),
        report.verdict ? "exceptional sequence of length " + std::to_string(seq.size())
                       : "failing: " + detail::join(report.failing_pairs) +
                             (report.equivariance_failures.empty() ? "" : "; equivariance: " + detail::join(report.equivariance_failures)),
        c_.sequence_citation);
    rep_.sequence = std::move(report);
  }

  const CaseBundle& c_;
  RunOptions opt_;
  VerificationReport rep_;
  std::map<std::string, beauville::LatticeCache> lat_;
  std::map<std::string, beauville::SectionCount> counts_;
  std::map<std::string, bool> certs_, transferred_, coboundary_ok_;
  std::optional<covering::SurfaceInvariants> surf_;
  bool identified_ = false;
};

inline VerificationReport run_all(const CaseBundle& c, const RunOptions& opt = {}) { return Runner(c, opt).run(); }

}  // namespace xcoll::cases

namespace xcoll::cases {

// Every named cochain of a case: formulas, products and the target.
inline std::map<std::string, cocycle::Cochain2> named_cocycles(const CaseBundle& c) {
  std::map<std::string, cocycle::Cochain2> out;
  if (!c.cocycles) return out;
  const auto& cy = *c.cocycles;
  auto grp = c.main().group;
  for (const auto& f : cy.formulas) out.emplace(f.name, cocycle::evaluate_formula(grp, f));
  for (const auto& [name, factors] : cy.products) {
    auto t = cocycle::trivial2(grp, cy.modulus);
    for (const auto& [f, sign] : factors) t = cocycle::multiply(t, sign > 0 ? out.at(f) : cocycle::invert(out.at(f)));
    out.emplace(name, t);
  }
  if (cy.target) out.emplace("target", cocycle::evaluate_formula(grp, *cy.target));
  return out;
}

}  // namespace xcoll::cases
