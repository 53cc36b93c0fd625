#pragma once

#include <openssl/evp.h>
#include <yaml-cpp/yaml.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "xcoll/beauville/reduction.hpp"
#include "xcoll/cocycle/cochain.hpp"
#include "xcoll/covering/transport.hpp"
#include "xcoll/divlat/expr.hpp"

namespace xcoll::cases {

using covering::RamificationDatum;
using groups::Element;
using groups::GroupPtr;
using groups::Subgroup;
using intmath::Int;

inline constexpr int kSchemaVersion = 1;

struct CurveDef {
  std::string name;
  std::shared_ptr<RamificationDatum> datum;
  std::string type_text;
  std::string citation;
};

struct DeclaredModule {
  std::vector<std::string> generators;
  bool complete = false;
  std::string citation;
};

struct DivisorDef {
  std::string name, curve, expr, note;
};

// Everything that lives over one group: the main group of a case, or the ambient group.
struct Scope {
  std::string key;  // "main" or "ambient"
  GroupPtr group;
  std::string description;
  std::string citation;
  divlat::ExprContext ctx;
  std::map<std::string, CurveDef> curves;
  std::vector<std::string> curve_order;
  std::map<std::string, std::vector<Subgroup>> relation_subgroups;
  std::map<std::string, DeclaredModule> declared;
  std::vector<DivisorDef> divisors;

  const CurveDef& curve(const std::string& name) const {
    auto it = curves.find(name);
    if (it == curves.end()) throw UsageError("unresolved curve '" + name + "'");
    return it->second;
  }
  divlat::QuotientCurve quotient(const std::string& curve_name, const Subgroup& h) const {
    return divlat::QuotientCurve(curve(curve_name).datum, h, curve_name);
  }
  Subgroup subgroup(const std::string& curve_name, const std::string& text) const {
    divlat::QuotientCurve c = quotient(curve_name, Subgroup::trivial(group));
    return divlat::ExprEvaluator(c, ctx).subgroup(text);
  }
  Element element(const std::string& text) const { return group->parse(text, &ctx.elements); }
  std::vector<Subgroup> lattice_subgroups(const std::string& curve_name) const {
    auto it = relation_subgroups.find(curve_name);
    return it == relation_subgroups.end() ? std::vector<Subgroup>{} : it->second;
  }
};

struct ReductionDef {
  std::string name;
  std::string scope = "main";
  beauville::ReductionScript script;
  std::string transport_from, transport_morphism;
  std::optional<intmath::Int> expect_h0;
  std::string expect_trace;
  std::string certifies_curve, certifies_via;
  std::string citation;
};

struct CocycleDef {
  int modulus = 4;
  std::vector<cocycle::ObstructionFormula> formulas;
  std::vector<std::pair<std::string, std::vector<std::pair<std::string, int>>>> products;
  std::optional<cocycle::ObstructionFormula> target, beta;
  std::vector<std::string> identity_product;
  std::string identity_equals, identity_citation;
  std::string variant_of, variant_stated, variant_computed, variant_partner;
  std::vector<std::string> non_coboundary;
  std::vector<std::vector<std::string>> coboundary;
  std::vector<std::pair<std::string, int>> class_order;
  std::string h2_value, h2_citation;
};

struct BundleDef {
  std::string name, curve, divisor, citation;
  std::optional<intmath::Int> degree;
  bool abstract = false;
  std::string acyclic_reduction, acyclic_paper;
};

struct SequenceEntry {
  std::string label, c1, c2;
  int twist = 0;
  std::vector<std::string> paired;
  std::vector<std::string> direct;
  std::string abstract;
  std::string abstract_paper;  // paper-certified entry backing an abstract certificate
};

struct PaperCertified {
  std::string id, claim, citation;
  std::vector<std::string> inputs;
};

struct ExpectedEntry {
  std::string id, kind, citation;
  YAML::Node node;
  int line = -1;
};

struct MorphismDef {
  std::string name;
  groups::GroupMorphism morphism;
  bool automorphism = false;
  std::string citation;
};

struct TwistDef {
  std::string morphism, from, to, citation;
};

struct IdentificationDef {
  std::string curve, target;
  covering::FreeGroupSubstitution substitution;
  std::map<std::string, std::string> assignment, expect;
  std::vector<std::string> trivial, datum_order, expect_datum, expect_conjugated;
  std::string conjugator, citation;
};

struct CaseBundle {
  std::string id, title, path, source, sha256;
  int schema = kSchemaVersion;
  std::map<std::string, Scope> scopes;
  std::vector<ReductionDef> reductions;
  std::optional<CocycleDef> cocycles;
  std::map<std::string, BundleDef> bundles;
  std::vector<SequenceEntry> sequence;
  std::string sequence_citation;
  std::vector<PaperCertified> paper_certified;
  std::vector<ExpectedEntry> expected;
  std::map<std::string, MorphismDef> morphisms;
  std::optional<TwistDef> twist;
  std::optional<IdentificationDef> identification;
  std::optional<groups::GroupMorphism> embedding;
  std::string embedding_citation;

  const Scope& main() const { return scopes.at("main"); }
  const Scope& scope(const std::string& k) const {
    auto it = scopes.find(k);
    if (it == scopes.end()) throw UsageError("case has no " + k + " group");
    return it->second;
  }
  // scope owning a curve name
  const Scope& scope_of_curve(const std::string& curve) const {
    for (const auto& [k, s] : scopes)
      if (s.curves.count(curve)) return s;
    throw UsageError("unresolved curve '" + curve + "'");
  }
};

inline std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (!ctx) throw std::runtime_error("EVP_MD_CTX_new failed");
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  EVP_DigestUpdate(ctx, data.data(), data.size());
  EVP_DigestFinal_ex(ctx, md, &len);
  EVP_MD_CTX_free(ctx);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

namespace detail {

inline int line_of(const YAML::Node& n) { return n.Mark().line >= 0 ? n.Mark().line + 1 : -1; }

class Reader {
 public:
  explicit Reader(const YAML::Node& root) : root_(root) {}

  static YAML::Node req(const YAML::Node& n, const std::string& key, const std::string& path) {
    if (!n.IsMap()) throw LoadError("expected a mapping", line_of(n), path);
    YAML::Node v = n[key];
    if (!v) throw LoadError("missing field", line_of(n), path.empty() ? key : path + "." + key);
    return v;
  }
  static std::string str(const YAML::Node& n, const std::string& path) {
    if (!n.IsScalar()) throw LoadError("expected a scalar", line_of(n), path);
    return n.as<std::string>();
  }
  static std::string opt_str(const YAML::Node& n, const std::string& key, const std::string& def = {}) {
    if (!n.IsMap() || !n[key]) return def;
    return n[key].as<std::string>();
  }
  static int integer(const YAML::Node& n, const std::string& path) {
    try {
      return n.as<int>();
    } catch (const YAML::Exception&) {
      throw LoadError("expected an integer", line_of(n), path);
    }
  }
  static std::vector<std::string> strings(const YAML::Node& n, const std::string& path) {
    if (!n) return {};
    if (!n.IsSequence()) throw LoadError("expected a list", line_of(n), path);
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n.size(); ++i) out.push_back(str(n[i], path + "[" + std::to_string(i) + "]"));
    return out;
  }

 private:
  YAML::Node root_;
};

// Runs f, turning usage errors from deeper layers into load errors at node n.
template <class F>
auto at(const YAML::Node& n, const std::string& path, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const LoadError&) {
    throw;
  } catch (const InvariantViolation& e) {
    throw LoadError(std::string("invariant violation: ") + e.what(), line_of(n), path);
  } catch (const std::exception& e) {
    throw LoadError(e.what(), line_of(n), path);
  }
}

inline GroupPtr load_group(const YAML::Node& g, const std::string& path, std::string& description) {
  using R = Reader;
  if (g["presentation"]) {
    YAML::Node p = g["presentation"];
    groups::Presentation pres;
    pres.generators = R::strings(R::req(p, "generators", path + ".presentation"), path + ".presentation.generators");
    pres.relators = R::strings(R::req(p, "relators", path + ".presentation"), path + ".presentation.relators");
    if (p["standard_form"]) {
      for (const auto& e : p["standard_form"]) {
        if (!e.IsSequence() || e.size() != 2) throw LoadError("expected [generator, range]", line_of(e), path + ".standard_form");
        pres.standard_form.emplace_back(e[0].as<std::string>(), e[1].as<int>());
      }
    }
    description = "<" ;
    for (std::size_t i = 0; i < pres.generators.size(); ++i) description += (i ? ", " : "") + pres.generators[i];
    description += " | ";
    for (std::size_t i = 0; i < pres.relators.size(); ++i) description += (i ? ", " : "") + pres.relators[i];
    description += ">";
    return at(p, path + ".presentation", [&] { return groups::FiniteGroup::realize(pres); });
  }
  if (g["permutations"]) {
    YAML::Node p = g["permutations"];
    groups::PermutationSpec spec;
    spec.degree = static_cast<std::size_t>(R::integer(R::req(p, "degree", path + ".permutations"), path + ".permutations.degree"));
    spec.cyclic = p["cyclic"] ? static_cast<std::size_t>(R::integer(p["cyclic"], path + ".permutations.cyclic")) : 1;
    spec.generators = R::strings(R::req(p, "generators", path + ".permutations"), path + ".permutations.generators");
    description = "<";
    for (std::size_t i = 0; i < spec.generators.size(); ++i) description += (i ? ", " : "") + spec.generators[i];
    description += "> in S" + std::to_string(spec.degree) + (spec.cyclic > 1 ? " x Z/" + std::to_string(spec.cyclic) : "");
    return at(p, path + ".permutations", [&] { return groups::FiniteGroup::from_permutations(spec); });
  }
  throw LoadError("group needs a presentation or permutations", line_of(g), path);
}

inline void load_scope_body(Scope& s, const YAML::Node& root, const std::string& prefix) {
  using R = Reader;
  // subgroups before curves so that relation lists resolve
  if (YAML::Node subs = root["subgroups"]) {
    for (auto it = subs.begin(); it != subs.end(); ++it) {
      std::string name = it->first.as<std::string>();
      std::string text = it->second.as<std::string>();
      std::string path = prefix + "subgroups." + name;
      at(it->second, path, [&] {
        std::vector<Element> gens;
        std::string inner = text;
        if (inner.size() >= 2 && inner.front() == '<' && inner.back() == '>') inner = inner.substr(1, inner.size() - 2);
        for (const auto& w : groups::split_top_level(inner)) gens.push_back(s.element(w));
        s.ctx.subgroups.emplace(name, Subgroup::generate(s.group, gens));
        return 0;
      });
    }
  }
  YAML::Node curves = R::req(root, "curves", prefix.empty() ? "" : prefix.substr(0, prefix.size() - 1));
  for (auto it = curves.begin(); it != curves.end(); ++it) {
    CurveDef c;
    c.name = it->first.as<std::string>();
    std::string path = prefix + "curves." + c.name;
    YAML::Node n = it->second;
    auto words = R::strings(R::req(n, "datum", path), path + ".datum");
    c.type_text = R::opt_str(n, "type");
    c.citation = R::opt_str(n, "citation");
    c.datum = std::make_shared<RamificationDatum>();
    c.datum->group = s.group;
    at(n["datum"], path + ".datum", [&] {
      for (const auto& w : words) c.datum->branch.push_back(s.element(w));
      return 0;
    });
    if (!c.type_text.empty())
      at(n["type"], path + ".type", [&] { return c.datum->declared_type = covering::parse_type(c.type_text), 0; });
    auto chk = covering::validate_datum(*c.datum);
    if (!chk.valid()) {
      std::string why;
      for (const auto& r : chk.reasons) why += (why.empty() ? "" : "; ") + r;
      throw InvariantViolation("validate_datum failed for " + path + " (line " + std::to_string(line_of(n["datum"])) +
                               "): " + why);
    }
    s.curve_order.push_back(c.name);
    s.curves.emplace(c.name, std::move(c));
  }
  if (YAML::Node rs = root["relation_subgroups"]) {
    for (auto it = rs.begin(); it != rs.end(); ++it) {
      std::string curve = it->first.as<std::string>();
      std::string path = prefix + "relation_subgroups." + curve;
      if (!s.curves.count(curve)) throw LoadError("unresolved curve '" + curve + "'", line_of(it->first), path);
      auto& list = s.relation_subgroups[curve];
      for (std::size_t i = 0; i < it->second.size(); ++i) {
        std::string text = it->second[i].as<std::string>();
        list.push_back(at(it->second[i], path, [&] { return s.subgroup(curve, text); }));
      }
    }
  }
  if (YAML::Node ds = root["divisors"]) {
    for (auto it = ds.begin(); it != ds.end(); ++it) {
      DivisorDef d;
      d.name = it->first.as<std::string>();
      std::string path = prefix + "divisors." + d.name;
      d.curve = R::str(R::req(it->second, "curve", path), path + ".curve");
      d.expr = R::str(R::req(it->second, "expr", path), path + ".expr");
      d.note = R::opt_str(it->second, "note");
      if (!s.curves.count(d.curve)) throw LoadError("unresolved curve '" + d.curve + "'", line_of(it->second), path);
      s.ctx.divisors[d.name] = d.expr;
      s.divisors.push_back(d);
    }
    // resolve every definition on its own curve
    for (std::size_t i = 0; i < s.divisors.size(); ++i) {
      const auto& d = s.divisors[i];
      YAML::Node n = ds[d.name];
      at(n["expr"], prefix + "divisors." + d.name + ".expr", [&] {
        auto c = s.quotient(d.curve, Subgroup::trivial(s.group));
        return divlat::evaluate(c, s.ctx, d.expr), 0;
      });
    }
  }
}

}  // namespace detail

inline CaseBundle load_case_text(const std::string& text, const std::string& path = {}) {
  using R = detail::Reader;
  using detail::at;
  using detail::line_of;
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw LoadError(e.msg, e.mark.line >= 0 ? e.mark.line + 1 : -1, "yaml");
  }
  if (!root.IsMap()) throw LoadError("case file must be a mapping", 1, "");
  CaseBundle c;
  c.path = path;
  c.source = text;
  c.sha256 = sha256_hex(text);
  c.schema = root["schema"] ? R::integer(root["schema"], "schema") : kSchemaVersion;
  if (c.schema != kSchemaVersion)
    throw LoadError("unsupported schema version " + std::to_string(c.schema), line_of(root["schema"]), "schema");
  c.id = R::str(R::req(root, "id", ""), "id");
  c.title = R::opt_str(root, "title", c.id);

  Scope main;
  main.key = "main";
  YAML::Node g = R::req(root, "group", "");
  main.group = detail::load_group(g, "group", main.description);
  main.citation = R::opt_str(g, "citation");
  detail::load_scope_body(main, root, "");
  c.scopes.emplace("main", std::move(main));

  if (YAML::Node amb = root["ambient"]) {
    Scope s;
    s.key = "ambient";
    s.group = detail::load_group(R::req(amb, "group", "ambient"), "ambient.group", s.description);
    detail::load_scope_body(s, amb, "ambient.");
    if (YAML::Node emb = amb["embedding"]) {
      auto imgs = R::strings(R::req(emb, "images", "ambient.embedding"), "ambient.embedding.images");
      groups::GroupMorphism m{c.main().group, s.group, {}};
      at(emb, "ambient.embedding.images", [&] {
        for (const auto& w : imgs) m.images.push_back(s.element(w));
        if (m.images.size() != c.main().group->num_generators()) throw UsageError("one image per generator is required");
        return 0;
      });
      c.embedding = m;
      c.embedding_citation = R::opt_str(emb, "citation");
    }
    c.scopes.emplace("ambient", std::move(s));
  }

  if (YAML::Node rel = root["relations"]) {
    if (YAML::Node decl = rel["declared"]) {
      for (auto it = decl.begin(); it != decl.end(); ++it) {
        std::string curve = it->first.as<std::string>();
        std::string path = "relations.declared." + curve;
        auto& s = c.scopes.at("main");
        if (!s.curves.count(curve)) throw LoadError("unresolved curve '" + curve + "'", line_of(it->first), path);
        DeclaredModule m;
        m.complete = it->second["complete"] && it->second["complete"].as<bool>();
        m.citation = R::opt_str(it->second, "citation");
        if (m.citation.empty()) throw LoadError("declared relations need a citation", line_of(it->second), path);
        m.generators = R::strings(R::req(it->second, "generators", path), path + ".generators");
        auto qc = s.quotient(curve, Subgroup::trivial(s.group));
        for (std::size_t i = 0; i < m.generators.size(); ++i) {
          auto cls = at(it->second["generators"][i], path + ".generators",
                        [&] { return divlat::evaluate(qc, s.ctx, m.generators[i]); });
          if (qc.degree(cls) != 0)
            throw LoadError("declared relation has nonzero degree", line_of(it->second["generators"][i]), path);
        }
        s.declared.emplace(curve, std::move(m));
      }
    }
  }

  if (YAML::Node ms = root["morphisms"]) {
    for (auto it = ms.begin(); it != ms.end(); ++it) {
      MorphismDef m;
      m.name = it->first.as<std::string>();
      std::string path = "morphisms." + m.name;
      const auto& s = c.main();
      auto imgs = R::strings(R::req(it->second, "images", path), path + ".images");
      m.morphism = {s.group, s.group, {}};
      at(it->second, path, [&] {
        for (const auto& w : imgs) m.morphism.images.push_back(s.element(w));
        if (m.morphism.images.size() != s.group->num_generators()) throw UsageError("one image per generator is required");
        return 0;
      });
      m.automorphism = it->second["automorphism"] && it->second["automorphism"].as<bool>();
      m.citation = R::opt_str(it->second, "citation");
      c.morphisms.emplace(m.name, std::move(m));
    }
  }
  if (YAML::Node tw = root["twist"]) {
    TwistDef t{R::str(R::req(tw, "morphism", "twist"), "twist.morphism"), R::str(R::req(tw, "from", "twist"), "twist.from"),
               R::str(R::req(tw, "to", "twist"), "twist.to"), R::opt_str(tw, "citation")};
    if (!c.morphisms.count(t.morphism)) throw LoadError("unresolved morphism '" + t.morphism + "'", line_of(tw), "twist.morphism");
    for (const auto& cv : {t.from, t.to})
      if (!c.main().curves.count(cv)) throw LoadError("unresolved curve '" + cv + "'", line_of(tw), "twist");
    c.twist = t;
  }

  if (YAML::Node id = root["identification"]) {
    IdentificationDef d;
    const std::string p = "identification";
    d.curve = R::str(R::req(id, "curve", p), p + ".curve");
    d.target = R::str(R::req(id, "target", p), p + ".target");
    YAML::Node sub = R::req(id, "substitution", p);
    d.substitution.source = R::strings(R::req(sub, "source", p + ".substitution"), p + ".substitution.source");
    d.substitution.target = R::strings(R::req(sub, "target", p + ".substitution"), p + ".substitution.target");
    for (auto it = sub["words"].begin(); it != sub["words"].end(); ++it)
      d.substitution.words[it->first.as<std::string>()] = it->second.as<std::string>();
    for (auto it = id["assignment"].begin(); it != id["assignment"].end(); ++it)
      d.assignment[it->first.as<std::string>()] = it->second.as<std::string>();
    if (id["expect"])
      for (auto it = id["expect"].begin(); it != id["expect"].end(); ++it)
        d.expect[it->first.as<std::string>()] = it->second.as<std::string>();
    d.trivial = R::strings(id["trivial"], p + ".trivial");
    d.datum_order = R::strings(R::req(id, "datum_order", p), p + ".datum_order");
    d.expect_datum = R::strings(id["expect_datum"], p + ".expect_datum");
    d.conjugator = R::str(R::req(id, "conjugator", p), p + ".conjugator");
    d.expect_conjugated = R::strings(id["expect_conjugated"], p + ".expect_conjugated");
    d.citation = R::opt_str(id, "citation");
    if (!c.scopes.count("ambient") || !c.embedding)
      throw LoadError("identification needs an ambient group with an embedding", line_of(id), p);
    if (!c.scope("ambient").curves.count(d.curve))
      throw LoadError("unresolved curve '" + d.curve + "'", line_of(id), p + ".curve");
    if (!c.main().curves.count(d.target)) throw LoadError("unresolved curve '" + d.target + "'", line_of(id), p + ".target");
    c.identification = d;
  }

  if (YAML::Node rs = root["reductions"]) {
    for (auto it = rs.begin(); it != rs.end(); ++it) {
      ReductionDef r;
      r.name = it->first.as<std::string>();
      std::string path = "reductions." + r.name;
      YAML::Node n = it->second;
      r.script.name = R::opt_str(n, "bundle", r.name);
      r.script.curve = R::str(R::req(n, "curve", path), path + ".curve");
      r.script.start = R::opt_str(n, "start", "1");
      r.citation = R::opt_str(n, "citation");
      r.scope = at(n["curve"], path + ".curve", [&] { return c.scope_of_curve(r.script.curve).key; });
      const Scope& s = c.scope(r.scope);
      if (YAML::Node tr = n["transport"]) {
        r.transport_from = R::str(R::req(tr, "from", path + ".transport"), path + ".transport.from");
        r.transport_morphism = R::str(R::req(tr, "morphism", path + ".transport"), path + ".transport.morphism");
        if (!c.morphisms.count(r.transport_morphism))
          throw LoadError("unresolved morphism '" + r.transport_morphism + "'", line_of(tr), path + ".transport.morphism");
        bool found = false;
        for (const auto& prev : c.reductions) found = found || prev.name == r.transport_from;
        if (!found) throw LoadError("unresolved reduction '" + r.transport_from + "'", line_of(tr), path + ".transport.from");
      } else {
        r.script.L = R::opt_str(n, "expr", r.script.name);
        auto steps = R::req(n, "steps", path);
        for (std::size_t i = 0; i < steps.size(); ++i) {
          std::string sp = path + ".steps[" + std::to_string(i) + "]";
          r.script.steps.push_back({R::str(R::req(steps[i], "sigma", sp), sp + ".sigma"), R::str(R::req(steps[i], "E", sp), sp + ".E"),
                                    R::str(R::req(steps[i], "Lprime", sp), sp + ".Lprime")});
          at(steps[i], sp, [&] {
            auto qc = s.quotient(r.script.curve, Subgroup::trivial(s.group));
            divlat::ExprEvaluator(qc, s.ctx).element(r.script.steps.back().sigma);
            return 0;
          });
        }
        at(n, path, [&] {
          auto qc = s.quotient(r.script.curve, s.subgroup(r.script.curve, r.script.start));
          return divlat::evaluate(qc, s.ctx, r.script.L), 0;
        });
      }
      if (YAML::Node e = n["expect"]) {
        if (e["h0"]) r.expect_h0 = R::integer(e["h0"], path + ".expect.h0");
        r.expect_trace = R::opt_str(e, "trace");
      }
      if (YAML::Node cf = n["certifies"]) {
        r.certifies_curve = R::str(R::req(cf, "curve", path + ".certifies"), path + ".certifies.curve");
        r.certifies_via = R::str(R::req(cf, "via", path + ".certifies"), path + ".certifies.via");
        if (r.certifies_via != "identification" || !c.identification)
          throw LoadError("certificates can only transfer through an identification", line_of(cf), path + ".certifies.via");
      }
      c.reductions.push_back(std::move(r));
    }
  }

  if (YAML::Node cy = root["cocycles"]) {
    CocycleDef d;
    const std::string p = "cocycles";
    d.modulus = cy["modulus"] ? R::integer(cy["modulus"], p + ".modulus") : 4;
    auto formula = [&](const std::string& name, const YAML::Node& n, const std::string& fp) {
      cocycle::ObstructionFormula f{name, R::str(R::req(n, "exp", fp), fp + ".exp"), d.modulus, R::opt_str(n, "citation")};
      at(n["exp"], fp + ".exp", [&] { return cocycle::Polynomial(f.text), 0; });
      return f;
    };
    std::set<std::string> names;
    if (YAML::Node fs = cy["formulas"])
      for (auto it = fs.begin(); it != fs.end(); ++it) {
        std::string name = it->first.as<std::string>();
        d.formulas.push_back(formula(name, it->second, p + ".formulas." + name));
        names.insert(name);
      }
    if (YAML::Node ps = cy["products"])
      for (auto it = ps.begin(); it != ps.end(); ++it) {
        std::string name = it->first.as<std::string>();
        std::vector<std::pair<std::string, int>> factors;
        for (const auto& f : R::strings(it->second, p + ".products." + name)) {
          int sign = 1;
          std::string nm = f;
          if (!nm.empty() && nm[0] == '-') {
            sign = -1;
            nm = nm.substr(1);
          }
          if (!names.count(nm)) throw LoadError("unresolved cocycle '" + nm + "'", line_of(it->second), p + ".products." + name);
          factors.emplace_back(nm, sign);
        }
        d.products.emplace_back(name, factors);
        names.insert(name);
      }
    if (cy["target"]) d.target = formula("target", cy["target"], p + ".target");
    if (cy["beta"]) d.beta = formula("beta", cy["beta"], p + ".beta");
    names.insert("target");
    auto check_name = [&](const std::string& nm, const YAML::Node& n, const std::string& fp) {
      if (!names.count(nm)) throw LoadError("unresolved cocycle '" + nm + "'", line_of(n), fp);
    };
    if (YAML::Node id = cy["identity"]) {
      d.identity_product = R::strings(R::req(id, "product", p + ".identity"), p + ".identity.product");
      d.identity_equals = R::str(R::req(id, "equals", p + ".identity"), p + ".identity.equals");
      d.identity_citation = R::opt_str(id, "citation");
      for (const auto& nm : d.identity_product) check_name(nm, id, p + ".identity.product");
      check_name(d.identity_equals, id, p + ".identity.equals");
    }
    if (YAML::Node v = cy["variants"]) {
      d.variant_of = R::opt_str(v, "of");
      d.variant_stated = R::str(R::req(v, "stated", p + ".variants"), p + ".variants.stated");
      d.variant_computed = R::str(R::req(v, "computed", p + ".variants"), p + ".variants.computed");
      d.variant_partner = R::str(R::req(v, "partner", p + ".variants"), p + ".variants.partner");
      for (const auto& nm : {d.variant_stated, d.variant_computed, d.variant_partner}) check_name(nm, v, p + ".variants");
    }
    d.non_coboundary = R::strings(cy["non_coboundary"], p + ".non_coboundary");
    for (const auto& nm : d.non_coboundary) check_name(nm, cy["non_coboundary"], p + ".non_coboundary");
    if (YAML::Node cb = cy["coboundary"])
      for (std::size_t i = 0; i < cb.size(); ++i) {
        d.coboundary.push_back(R::strings(cb[i], p + ".coboundary"));
        for (const auto& nm : d.coboundary.back()) check_name(nm, cb[i], p + ".coboundary");
      }
    if (YAML::Node co = cy["class_order"])
      for (auto it = co.begin(); it != co.end(); ++it) {
        check_name(it->first.as<std::string>(), it->first, p + ".class_order");
        d.class_order.emplace_back(it->first.as<std::string>(), it->second.as<int>());
      }
    if (YAML::Node h2 = cy["h2"]) {
      d.h2_value = R::str(R::req(h2, "value", p + ".h2"), p + ".h2.value");
      d.h2_citation = R::opt_str(h2, "citation");
    }
    if (!c.main().group->has_standard_form())
      throw LoadError("cocycle formulas need a group with a standard form", line_of(cy), p);
    c.cocycles = d;
  }

  if (YAML::Node bs = root["bundles"]) {
    for (auto it = bs.begin(); it != bs.end(); ++it) {
      BundleDef b;
      b.name = it->first.as<std::string>();
      std::string path = "bundles." + b.name;
      YAML::Node n = it->second;
      b.curve = R::str(R::req(n, "curve", path), path + ".curve");
      if (!c.main().curves.count(b.curve)) throw LoadError("unresolved curve '" + b.curve + "'", line_of(n), path + ".curve");
      b.divisor = R::opt_str(n, "divisor");
      b.abstract = n["abstract"] && n["abstract"].as<bool>();
      b.citation = R::opt_str(n, "citation");
      if (n["degree"]) b.degree = R::integer(n["degree"], path + ".degree");
      if (b.abstract && b.citation.empty()) throw LoadError("abstract bundles need a citation", line_of(n), path);
      if (!b.divisor.empty()) {
        const auto& s = c.main();
        auto cls = at(n["divisor"], path + ".divisor", [&] {
          return divlat::evaluate(s.quotient(b.curve, Subgroup::trivial(s.group)), s.ctx, b.divisor);
        });
        auto deg = s.quotient(b.curve, Subgroup::trivial(s.group)).degree(cls);
        if (b.degree && *b.degree != deg) throw LoadError("declared degree disagrees with the divisor", line_of(n), path + ".degree");
        b.degree = deg;
      }
      if (YAML::Node a = n["acyclic"]) {
        b.acyclic_reduction = R::opt_str(a, "reduction");
        b.acyclic_paper = R::opt_str(a, "paper_certified");
        if (!b.acyclic_reduction.empty()) {
          bool found = false;
          for (const auto& r : c.reductions) found = found || r.name == b.acyclic_reduction;
          if (!found) throw LoadError("unresolved reduction '" + b.acyclic_reduction + "'", line_of(a), path + ".acyclic");
        }
      }
      c.bundles.emplace(b.name, std::move(b));
    }
  }

  if (YAML::Node pc = root["paper_certified"])
    for (std::size_t i = 0; i < pc.size(); ++i) {
      std::string path = "paper_certified[" + std::to_string(i) + "]";
      PaperCertified p{R::str(R::req(pc[i], "id", path), path + ".id"), R::str(R::req(pc[i], "claim", path), path + ".claim"),
                       R::str(R::req(pc[i], "citation", path), path + ".citation"), R::strings(pc[i]["inputs"], path + ".inputs")};
      c.paper_certified.push_back(std::move(p));
    }
  for (const auto& [name, b] : c.bundles)
    if (!b.acyclic_paper.empty()) {
      bool found = false;
      for (const auto& p : c.paper_certified) found = found || p.id == b.acyclic_paper;
      if (!found) throw LoadError("unresolved paper-certified entry '" + b.acyclic_paper + "'", -1, "bundles." + name);
    }

  if (YAML::Node seq = root["sequence"]) {
    YAML::Node items = seq.IsMap() ? seq["members"] : seq;
    if (seq.IsMap()) c.sequence_citation = R::opt_str(seq, "citation");
    for (std::size_t i = 0; i < items.size(); ++i) {
      std::string path = "sequence[" + std::to_string(i) + "]";
      YAML::Node n = items[i];
      if (n.IsMap() && n["citation"] && !n["label"]) {
        c.sequence_citation = n["citation"].as<std::string>();
        continue;
      }
      SequenceEntry e;
      e.label = R::str(R::req(n, "label", path), path + ".label");
      e.c1 = R::opt_str(n, "c1");
      e.c2 = R::opt_str(n, "c2");
      e.twist = n["twist"] ? R::integer(n["twist"], path + ".twist") : 0;
      YAML::Node eq = R::req(n, "equivariance", path);
      e.paired = R::strings(eq["paired"], path + ".equivariance.paired");
      e.direct = R::strings(eq["direct"], path + ".equivariance.direct");
      e.abstract = R::opt_str(eq, "abstract");
      e.abstract_paper = R::opt_str(eq, "paper_certified");
      if (!e.abstract.empty() && e.abstract_paper.empty())
        throw LoadError("abstract equivariance needs a paper_certified entry", line_of(eq), path + ".equivariance");
      for (const auto& side : {e.c1, e.c2})
        for (const auto& [sign, term] : divlat::detail::signed_terms(side))
          if (!c.bundles.count(term)) throw LoadError("unresolved bundle '" + term + "'", line_of(n), path);
      if (!e.abstract_paper.empty() &&
          std::none_of(c.paper_certified.begin(), c.paper_certified.end(), [&](const PaperCertified& p) { return p.id == e.abstract_paper; }))
        throw LoadError("unresolved paper-certified entry '" + e.abstract_paper + "'", line_of(eq), path + ".equivariance");
      for (const auto& d : e.direct)
        if (!c.bundles.count(d)) throw LoadError("unresolved bundle '" + d + "'", line_of(eq), path + ".equivariance.direct");
      if (!e.paired.empty() && (e.paired.size() != 2 || !c.cocycles))
        throw LoadError("paired equivariance names two cocycles", line_of(eq), path + ".equivariance.paired");
      c.sequence.push_back(std::move(e));
    }
  }

  if (YAML::Node ex = root["expected"]) {
    std::map<std::string, int> counts;
    for (std::size_t i = 0; i < ex.size(); ++i) {
      std::string path = "expected[" + std::to_string(i) + "]";
      ExpectedEntry e;
      e.kind = R::str(R::req(ex[i], "kind", path), path + ".kind");
      e.citation = R::opt_str(ex[i], "citation");
      if (e.citation.empty()) throw LoadError("expected values need a citation", line_of(ex[i]), path + ".citation");
      e.id = R::opt_str(ex[i], "id", "expected." + e.kind + "." + std::to_string(++counts[e.kind]));
      e.node = ex[i];
      e.line = line_of(ex[i]);
      c.expected.push_back(std::move(e));
    }
  }
  return c;
}

inline CaseBundle load_case_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw LoadError("cannot open case file '" + p.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_case_text(ss.str(), p.string());
}

}  // namespace xcoll::cases
