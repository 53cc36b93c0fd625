#include <CLI11.hpp>

#include <fstream>
#include <future>
#include <iostream>
#include <optional>

#include "xcoll/cases/catalog.hpp"
#include "xcoll/cases/report.hpp"

namespace {

using namespace xcoll;
using namespace xcoll::cases;
using J = nlohmann::ordered_json;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct Common {
  std::string cases_dir;
  std::string format = "text";
  std::string out;
  bool quiet = false;
};

void write_doc(const Common& o, const std::string& doc) {
  if (!o.out.empty()) {
    std::ofstream f(o.out, std::ios::binary);
    if (!f) throw UsageError("cannot write '" + o.out + "'");
    f << doc;
  }
  if (!o.quiet && o.out.empty()) std::cout << doc;
}

int cmd_verify(const Common& o, std::vector<std::string> refs, int jobs) {
  Format fmt = parse_format(o.format);
  if (refs.empty())
    for (const auto& [id, path] : list_case_files(case_dirs(o.cases_dir))) refs.push_back(path.string());
  std::vector<CaseBundle> bundles;
  for (const auto& r : refs) bundles.push_back(load_case(r, o.cases_dir));

  std::vector<std::optional<VerificationReport>> reports(bundles.size());
  std::size_t next = 0;
  jobs = std::max(1, jobs);
  while (next < bundles.size()) {
    std::vector<std::future<void>> batch;
    for (int k = 0; k < jobs && next < bundles.size(); ++k, ++next)
      batch.push_back(std::async(std::launch::async, [&, i = next] { reports[i] = run_all(bundles[i]); }));
    for (auto& f : batch) f.get();
  }

  bool pass = true;
  std::string doc;
  if (fmt == Format::Json && reports.size() > 1) {
    J arr = J::array();
    for (const auto& r : reports) arr.push_back(to_json(*r));
    doc = arr.dump(2) + "\n";
  } else {
    for (std::size_t i = 0; i < reports.size(); ++i) doc += (i && fmt == Format::Markdown ? "\n" : "") + emit(*reports[i], fmt);
  }
  for (const auto& r : reports) {
    pass = pass && r->pass();
    for (const auto* f : r->failures()) std::cerr << r->case_id << ": " << f->id << ": " << f->detail << "\n";
  }
  write_doc(o, doc);
  return pass ? kExitPass : kExitFail;
}

int cmd_list(const Common& o) {
  Format fmt = parse_format(o.format);
  J arr = J::array();
  std::string text, md = "| case | group | |G| | genera | file |\n|---|---|---|---|---|\n";
  for (const auto& [id, path] : list_case_files(case_dirs(o.cases_dir))) {
    auto c = load_case_file(path);
    const auto& m = c.main();
    J g = J::object();
    std::string genera;
    for (const auto& name : m.curve_order) {
      long long gg = covering::curve_genus(*m.curves.at(name).datum);
      g[name] = gg;
      genera += (genera.empty() ? "" : ", ") + name + "=" + std::to_string(gg);
    }
    arr.push_back({{"id", c.id}, {"title", c.title}, {"order", m.group->order()}, {"genus", g}, {"path", path.string()}});
    text += c.id + "\t" + c.title + "\t|G|=" + std::to_string(m.group->order()) + "\t" + genera + "\n";
    md += "| " + c.id + " | " + c.title + " | " + std::to_string(m.group->order()) + " | " + genera + " | " + path.string() + " |\n";
  }
  write_doc(o, fmt == Format::Json ? arr.dump(2) + "\n" : fmt == Format::Markdown ? md : text);
  return kExitPass;
}

struct QueryArgs {
  std::string subject, case_ref, curve, subgroup = "1", divisor, name, check = "cocycle";
  int branch = 0;
  int modulus = 0;
};

std::string riemann_hurwitz_text(const divlat::QuotientCurve& q) {
  const auto& d = q.datum();
  long long idx = static_cast<long long>(d.group->order() / q.acting().order());
  std::string out = "2g - 2 = -2*" + std::to_string(idx);
  for (std::size_t j = 0; j < d.size(); ++j) {
    long long contrib = 0;
    for (const auto& p : q.fiber(j).points) contrib += static_cast<long long>(p.ramification) - 1;
    out += " + " + std::to_string(contrib);
  }
  return out;
}

int cmd_query(const Common& o, const QueryArgs& a) {
  Format fmt = parse_format(o.format);
  if (a.case_ref.empty()) throw UsageError("query needs --case");
  CaseBundle c = load_case(a.case_ref, o.cases_dir);
  J j;
  j["subject"] = a.subject;
  j["case"] = c.id;
  std::string value, derivation;
  bool ok = true;

  auto curve_scope = [&]() -> const Scope& {
    if (a.curve.empty()) throw UsageError(a.subject + " needs --curve");
    return c.scope_of_curve(a.curve);
  };
  if (a.subject == "genus") {
    const Scope& s = curve_scope();
    auto q = s.quotient(a.curve, s.subgroup(a.curve, a.subgroup));
    value = std::to_string(q.genus());
    j["curve"] = q.name();
    j["value"] = q.genus();
    derivation = riemann_hurwitz_text(q);
  } else if (a.subject == "orbits") {
    const Scope& s = curve_scope();
    if (a.branch < 1) throw UsageError("orbits needs --branch j (1-based)");
    auto q = s.quotient(a.curve, s.subgroup(a.curve, a.subgroup));
    if (static_cast<std::size_t>(a.branch) > q.num_branches()) throw UsageError("branch index out of range");
    const auto& f = q.fiber(static_cast<std::size_t>(a.branch - 1));
    J rows = J::array();
    for (std::size_t p = 0; p < f.points.size(); ++p) {
      const auto& pt = f.points[p];
      auto stab = covering::point_stabilizer(q.datum(), f.branch, pt.rep).intersect(q.acting());
      rows.push_back({{"point", p + 1}, {"rep", s.group->render(pt.rep)}, {"size", pt.members.size()},
                      {"stabilizer_order", stab.order()}, {"free", stab.order() == 1}});
      value += std::to_string(p + 1) + "\trep " + s.group->render(pt.rep) + "\tsize " + std::to_string(pt.members.size()) +
               "\tstabilizer order " + std::to_string(stab.order()) + "\n";
    }
    j["value"] = f.points.size();
    j["orbits"] = rows;
    derivation = "E" + std::to_string(a.branch) + " has " + std::to_string(f.count_on_curve()) + " points and " +
                 std::to_string(f.points.size()) + " orbits under " + q.acting().render();
    value = std::to_string(f.points.size()) + "\n" + value;
    if (!value.empty() && value.back() == '\n') value.pop_back();
  } else if (a.subject == "degree") {
    const Scope& s = curve_scope();
    if (a.divisor.empty()) throw UsageError("degree needs --divisor");
    auto q = s.quotient(a.curve, s.subgroup(a.curve, a.subgroup));
    auto d = divlat::evaluate(q, s.ctx, a.divisor);
    value = std::to_string(q.degree(d));
    j["value"] = q.degree(d);
    derivation = a.divisor + " = " + q.render(d) + " on " + q.name();
  } else if (a.subject == "cocycle" || a.subject == "coboundary") {
    if (a.name.empty()) throw UsageError(a.subject + " needs --name");
    auto tabs = named_cocycles(c);
    auto it = tabs.find(a.name);
    if (it == tabs.end()) throw UsageError("unknown cocycle '" + a.name + "'");
    std::string check = a.subject == "coboundary" ? "coboundary" : a.check;
    j["name"] = a.name;
    j["check"] = check;
    if (check == "cocycle") {
      ok = cocycle::is_cocycle(it->second);
      value = ok ? "cocycle" : "not a cocycle";
      derivation = "cocycle identity over all triples";
    } else if (check == "coboundary") {
      auto w = cocycle::is_coboundary(it->second);
      ok = w.has_value();
      if (w) {
        const auto& g = *c.main().group;
        std::vector<std::string> parts;
        J wj = J::object();
        for (auto e : g.elements()) {
          parts.push_back(g.render(e) + ":" + std::to_string(w->table[e.index]));
          wj[g.render(e)] = w->table[e.index];
        }
        j["witness"] = wj;
        value = "witness";
        derivation = "beta = {" + detail::join(parts) + "}, d(beta) reproduces the table";
      } else {
        value = "no witness";
        derivation = "linear system d(beta) = eta has no solution mod " + std::to_string(it->second.modulus);
      }
    } else if (check == "order") {
      int n = cocycle::class_order(it->second);
      value = std::to_string(n);
      j["value"] = n;
      derivation = "smallest t with eta^t a coboundary";
    } else {
      throw UsageError("unknown check '" + check + "' (cocycle, coboundary, order)");
    }
    if (!j.contains("value")) j["value"] = value;
  } else if (a.subject == "h2order") {
    int n = a.modulus > 0 ? a.modulus : (c.cocycles ? c.cocycles->modulus : 4);
    auto h = cocycle::h2_invariants(c.main().group, n);
    value = std::to_string(h.order());
    j["value"] = h.order();
    j["structure"] = h.render();
    derivation = "H^2(G, Z/" + std::to_string(n) + ") = " + h.render();
  } else if (a.subject == "invariants") {
    const auto& m = c.main();
    if (m.curve_order.size() != 2) throw UsageError("case does not define two curves");
    auto si = covering::surface_invariants(*m.curves.at(m.curve_order[0]).datum, *m.curves.at(m.curve_order[1]).datum);
    j["value"] = {{"chi", si.chiO}, {"e", si.e}, {"K2", si.Ksquared}, {"q", si.q}, {"pg", si.pg}, {"rankK0", si.rankK0}};
    value = "chi=" + std::to_string(si.chiO) + " e=" + std::to_string(si.e) + " K2=" + std::to_string(si.Ksquared) +
            " q=" + std::to_string(si.q) + " pg=" + std::to_string(si.pg) + " rankK0=" + std::to_string(si.rankK0);
    derivation = "g1 = " + std::to_string(si.g1) + ", g2 = " + std::to_string(si.g2);
  } else {
    throw UsageError("unknown query subject '" + a.subject + "'");
  }
  j["derivation"] = derivation;
  std::string doc;
  if (fmt == Format::Json)
    doc = j.dump(2) + "\n";
  else if (fmt == Format::Markdown)
    doc = "**" + a.subject + "** (" + c.id + "): `" + value + "`\n\n" + derivation + "\n";
  else
    doc = value + "\n# " + derivation + "\n";
  write_doc(o, doc);
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Verify exceptional collections on surfaces isogenous to a higher product"};
  app.set_version_flag("--version", std::string(XCOLL_VERSION));
  app.require_subcommand(1, 1);
  Common o;
  auto common = [&o](CLI::App* sc) {
    sc->add_option("--cases-dir", o.cases_dir, "extra case directory (default $XCOLL_CASES_DIR)");
    sc->add_option("--format", o.format, "json, md or text")->check(CLI::IsMember({"json", "md", "markdown", "text", "txt"}));
    sc->add_option("--out", o.out, "write the document to a file");
    sc->add_flag("--quiet", o.quiet, "no document on stdout");
  };

  std::vector<std::string> refs;
  int jobs = 1;
  auto* verify = app.add_subcommand("verify", "run every check of one or more cases");
  common(verify);
  verify->add_option("--case", refs, "case id or path (repeatable; default all)");
  verify->add_option("--jobs", jobs, "cases verified in parallel")->check(CLI::PositiveNumber);

  QueryArgs q;
  auto* query = app.add_subcommand("query", "compute one quantity");
  common(query);
  query->add_option("subject", q.subject, "genus, orbits, degree, cocycle, coboundary, h2order, invariants")
      ->required()
      ->check(CLI::IsMember({"genus", "orbits", "degree", "cocycle", "coboundary", "h2order", "invariants"}));
  query->add_option("--case", q.case_ref, "case id or path")->required();
  query->add_option("--curve", q.curve);
  query->add_option("--subgroup", q.subgroup, "1, G/all, a name, <gens> or a generator list");
  query->add_option("--branch", q.branch, "branch index, 1-based");
  query->add_option("--divisor", q.divisor, "class expression");
  query->add_option("--name", q.name, "cocycle name");
  query->add_option("--check", q.check, "cocycle, coboundary or order");
  query->add_option("--modulus", q.modulus, "coefficient modulus for h2order");

  auto* list = app.add_subcommand("list", "list available cases");
  common(list);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }
  try {
    if (verify->parsed()) return cmd_verify(o, refs, jobs);
    if (query->parsed()) return cmd_query(o, q);
    return cmd_list(o);
  } catch (const LoadError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}
