#pragma once

#include <memory>
#include <string>
#include <vector>

#include "xcoll/covering/datum.hpp"
#include "xcoll/groups/finite_group.hpp"

namespace fx {

using namespace xcoll;
using groups::Element;
using groups::GroupPtr;
using groups::Subgroup;

inline GroupPtr d4xz2() {
  static GroupPtr g = groups::FiniteGroup::realize(
      {{"x", "y", "z"}, {"x^4", "y^2", "z^2", "[x,z]", "[y,z]", "x^y = x^-1"}, {{"x", 4}, {"y", 2}, {"z", 2}}});
  return g;
}

inline GroupPtr g16() {
  static GroupPtr g = groups::FiniteGroup::realize(
      {{"x", "y", "z"}, {"x^4", "y^2", "z^2", "[x,y]", "[y,z]", "x^z = xy"}, {{"x", 4}, {"y", 2}, {"z", 2}}});
  return g;
}

inline GroupPtr s4() {
  static GroupPtr g = groups::FiniteGroup::from_permutations({4, 1, {"a", "b"}, {"(12)", "(1234)"}});
  return g;
}

inline GroupPtr s4xz2() {
  static GroupPtr g = groups::FiniteGroup::from_permutations({4, 2, {"a", "b", "c"}, {"((12),0)", "((1234),0)", "((),1)"}});
  return g;
}

inline Element el(const GroupPtr& g, const std::string& w) { return g->parse(w); }

inline Subgroup sub(const GroupPtr& g, const std::vector<std::string>& words) {
  std::vector<Element> gens;
  for (const auto& w : words) gens.push_back(g->parse(w));
  return Subgroup::generate(g, gens);
}

inline covering::RamificationDatum datum(const GroupPtr& g, const std::vector<std::string>& words,
                                         const std::string& type = {}) {
  covering::RamificationDatum d;
  d.group = g;
  for (const auto& w : words) d.branch.push_back(g->parse(w));
  if (!type.empty()) d.declared_type = covering::parse_type(type);
  return d;
}

inline auto d4_c1() { return datum(d4xz2(), {"z", "yz", "xy", "x"}, "2^3,4"); }
inline auto d4_c2() { return datum(d4xz2(), {"y", "x^3yz", "x^2y", "x^3yz", "x^2z", "x^2z"}, "2^6"); }
inline auto g16_c1() { return datum(g16(), {"z", "z", "x", "x^-1"}, "2^2,4^2"); }
inline auto g16_c2() { return datum(g16(), {"x^2yz", "x^2yz", "xyz", "x^3z"}, "2^2,4^2"); }
inline auto s4_c1() { return datum(s4(), {"(123)", "(1234)", "(1243)"}, "3,4^2"); }
inline auto s4_c2() { return datum(s4(), {"(12)", "(12)", "(23)", "(23)", "(34)", "(34)"}, "2^6"); }
inline auto s4z_c1() { return datum(s4xz2(), {"((12),0)", "((1234),1)", "((432),1)"}, "2,4,6"); }
inline auto s4z_c2() {
  return datum(s4xz2(), {"((12)(34),1)", "((12),1)", "((34),1)", "((14)(23),1)", "((23),1)", "((14),1)"}, "2^6");
}

}  // namespace fx
