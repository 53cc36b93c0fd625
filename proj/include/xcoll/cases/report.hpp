#pragma once

#include <json.hpp>

#include <map>
#include <string>

#include "xcoll/cases/run.hpp"

namespace xcoll::cases {

inline constexpr int kReportSchemaVersion = 1;

enum class Format { Json, Markdown, Text };

inline Format parse_format(const std::string& s) {
  if (s == "json") return Format::Json;
  if (s == "md" || s == "markdown") return Format::Markdown;
  if (s == "text" || s == "txt") return Format::Text;
  throw UsageError("unknown format '" + s + "' (json, md, text)");
}

inline nlohmann::ordered_json to_json(const VerificationReport& r) {
  using J = nlohmann::ordered_json;
  J j;
  j["report_schema"] = kReportSchemaVersion;
  j["case"] = r.case_id;
  j["title"] = r.title;
  j["environment"] = {{"version", r.version}, {"case_schema", r.schema}, {"case_sha256", r.case_sha256}};
  J genus = J::object();
  for (const auto& [name, g] : r.genus) genus[name] = g;
  j["genus"] = genus;
  j["verdict"] = r.pass() ? "pass" : "fail";
  j["summary"] = {{"checks", r.checks.size()},
                  {"pass", r.count(Outcome::Pass)},
                  {"fail", r.count(Outcome::Fail)},
                  {"info", r.count(Outcome::Info)},
                  {"paper_certified", r.count(Outcome::PaperCertified)},
                  {"discrepancy", r.count(Outcome::Discrepancy)}};
  J checks = J::array();
  for (const auto& c : r.checks) {
    J e;
    e["id"] = c.id;
    e["section"] = c.section;
    e["kind"] = c.kind;
    e["outcome"] = outcome_name(c.outcome);
    J in = J::object();
    for (const auto& [k, v] : c.inputs) {
      if (!in.contains(k))
        in[k] = v;
      else if (in[k].is_array())
        in[k].push_back(v);
      else
        in[k] = J::array({in[k], v});
    }
    e["inputs"] = in;
    e["detail"] = c.detail;
    if (!c.trace.empty()) e["trace"] = c.trace;
    if (!c.citation.empty()) e["citation"] = c.citation;
    checks.push_back(std::move(e));
  }
  j["checks"] = checks;
  return j;
}

namespace detail {

inline const char* section_title(const std::string& s) {
  static const std::map<std::string, const char*> m = {
      {"group", "Group"},           {"data", "Ramification data"},     {"genus", "Genus table"},
      {"fibers", "Fibers and orbits"}, {"freeness", "Free diagonal action"}, {"invariants", "Surface invariants"},
      {"relations", "Divisor relations"}, {"cocycles", "Obstruction cocycles"}, {"reductions", "Section counts"},
      {"identification", "Covering identification"}, {"twist", "Twisted action"},
      {"paper-certified", "Paper-certified claims"}, {"sequence", "Exceptional sequence"}};
  auto it = m.find(s);
  return it == m.end() ? "Other" : it->second;
}

inline const char* mark(Outcome o) {
  switch (o) {
    case Outcome::Pass:
      return "PASS";
    case Outcome::Fail:
      return "FAIL";
    case Outcome::Info:
      return "info";
    case Outcome::PaperCertified:
      return "PAPER";
    case Outcome::Discrepancy:
      return "DISCREPANCY";
  }
  return "?";
}

}  // namespace detail

inline std::string to_markdown(const VerificationReport& r) {
  std::string out = "# " + r.title + " (" + r.case_id + ")\n\n";
  out += "Verdict: **" + std::string(r.pass() ? "pass" : "fail") + "**";
  if (r.count(Outcome::PaperCertified)) out += ", conditional on " + std::to_string(r.count(Outcome::PaperCertified)) + " paper-certified entries";
  out += "\n\n";
  out += "- version " + r.version + ", case sha256 `" + r.case_sha256 + "`\n";
  out += "- checks: " + std::to_string(r.checks.size()) + " (" + std::to_string(r.count(Outcome::Pass)) + " pass, " +
         std::to_string(r.count(Outcome::Fail)) + " fail, " + std::to_string(r.count(Outcome::PaperCertified)) + " paper-certified, " +
         std::to_string(r.count(Outcome::Discrepancy)) + " discrepancy)\n";
  if (!r.genus.empty()) {
    out += "- genera:";
    for (const auto& [n, g] : r.genus) out += " " + n + " = " + std::to_string(g);
    out += "\n";
  }
  std::string section;
  for (const auto& c : r.checks) {
    if (c.section != section) {
      section = c.section;
      out += "\n## " + std::string(detail::section_title(section)) + "\n\n";
    }
    if (c.section == "sequence" && c.kind == "hom_vanishing") {
      out += "### " + c.id.substr(std::string("sequence.hom.").size()) + "\n\n";
    }
    std::string tag = c.outcome == Outcome::PaperCertified ? "> **PAPER-CERTIFIED** " : "- **" + std::string(detail::mark(c.outcome)) + "** ";
    out += tag + "`" + c.id + "`: " + c.detail;
    if (!c.citation.empty()) out += " _(" + c.citation + ")_";
    out += "\n";
    if (!c.trace.empty()) out += "\n  `" + c.trace + "`\n\n";
  }
  return out;
}

inline std::string to_text(const VerificationReport& r) {
  std::string out = r.case_id + ": " + (r.pass() ? "PASS" : "FAIL") + " (" + std::to_string(r.checks.size()) + " checks, " +
                    std::to_string(r.count(Outcome::Fail)) + " failed, " + std::to_string(r.count(Outcome::PaperCertified)) +
                    " paper-certified, " + std::to_string(r.count(Outcome::Discrepancy)) + " discrepancies)\n";
  for (const auto& c : r.checks) {
    out += std::string(detail::mark(c.outcome)) + " " + c.id + ": " + c.detail + "\n";
    if (!c.trace.empty()) out += "    " + c.trace + "\n";
  }
  return out;
}

inline std::string emit(const VerificationReport& r, Format f) {
  switch (f) {
    case Format::Json:
      return to_json(r).dump(2) + "\n";
    case Format::Markdown:
      return to_markdown(r);
    case Format::Text:
      return to_text(r);
  }
  throw UsageError("unknown format");
}

}  // namespace xcoll::cases
