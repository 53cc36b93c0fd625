#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "xcoll/groups/morphism.hpp"
#include "xcoll/groups/subgroup.hpp"

namespace xcoll::covering {

using groups::Element;
using groups::GroupPtr;
using groups::Subgroup;

struct RamificationDatum {
  GroupPtr group;
  std::vector<Element> branch;     // g_1, ..., g_n
  std::vector<int> declared_type;  // branch orders; empty when undeclared

  std::size_t size() const { return branch.size(); }
  std::size_t order_at(std::size_t j) const { return group->element_order(branch.at(j)); }
  std::string render() const {
    std::string out = "(";
    for (std::size_t i = 0; i < branch.size(); ++i) {
      if (i) out += ", ";
      out += group->render(branch[i]);
    }
    return out + ")";
  }
  bool operator==(const RamificationDatum& o) const { return group == o.group && branch == o.branch; }
};

// "2^3,4" -> {2,2,2,4}
inline std::vector<int> parse_type(const std::string& text) {
  std::vector<int> out;
  for (const auto& part : groups::split_top_level(text)) {
    auto caret = part.find('^');
    try {
      int m = std::stoi(part.substr(0, caret));
      int k = caret == std::string::npos ? 1 : std::stoi(part.substr(caret + 1));
      if (m < 1 || k < 1) throw UsageError("");
      for (int i = 0; i < k; ++i) out.push_back(m);
    } catch (const std::exception&) {
      throw UsageError("malformed ramification type '" + text + "'");
    }
  }
  return out;
}

inline std::string render_type(std::vector<int> t) {
  std::sort(t.begin(), t.end());
  std::string out;
  for (std::size_t i = 0; i < t.size();) {
    std::size_t j = i;
    while (j < t.size() && t[j] == t[i]) ++j;
    if (!out.empty()) out += ",";
    out += std::to_string(t[i]);
    if (j - i > 1) out += "^" + std::to_string(j - i);
    i = j;
  }
  return out;
}

struct DatumCheck {
  bool product_one = false;
  bool generates = false;
  bool type_matches = false;
  std::vector<std::string> reasons;
  bool valid() const { return product_one && generates && type_matches; }
};

// The declared type is compared as a multiset of orders.
inline DatumCheck validate_datum(const RamificationDatum& d) {
  DatumCheck c;
  const auto& g = *d.group;
  Element p = g.identity();
  for (auto e : d.branch) p = g.mul(p, e);
  c.product_one = p == g.identity();
  if (!c.product_one) c.reasons.push_back("product g1...gn = " + g.render(p) + " is not 1");
  c.generates = Subgroup::generate(d.group, d.branch).is_whole();
  if (!c.generates) c.reasons.push_back("branch elements do not generate the group");
  std::vector<int> orders;
  for (std::size_t j = 0; j < d.size(); ++j) orders.push_back(static_cast<int>(d.order_at(j)));
  if (d.declared_type.empty()) {
    c.type_matches = true;
  } else {
    auto a = orders, b = d.declared_type;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    c.type_matches = a == b;
    if (!c.type_matches)
      c.reasons.push_back("orders (" + render_type(orders) + ") differ from declared type (" + render_type(b) + ")");
  }
  return c;
}

inline RamificationDatum datum_conjugate(const RamificationDatum& d, Element h) {
  RamificationDatum r = d;
  for (auto& e : r.branch) e = d.group->conj(e, h);
  return r;
}

inline RamificationDatum apply_automorphism_to_datum(const groups::GroupMorphism& phi, const RamificationDatum& d) {
  if (phi.source != d.group) throw UsageError("automorphism is not defined on the datum's group");
  auto chk = groups::check_morphism(phi);
  if (!chk.automorphism) throw UsageError("map is not an automorphism: " + chk.reason);
  RamificationDatum r = d;
  for (auto& e : r.branch) e = phi.apply(e);
  return r;
}

}  // namespace xcoll::covering
