#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "xcoll/covering/datum.hpp"

namespace xcoll::covering {

// Map from source free generators (s-symbols) to words in target free generators (t-symbols).
struct FreeGroupSubstitution {
  std::vector<std::string> source;  // s-symbols in relation order (their product is 1)
  std::vector<std::string> target;  // t-symbols that may appear in the words
  std::map<std::string, std::string> words;
};

// Free reduction of the substituted source relation; empty means the relation is respected.
inline std::vector<std::pair<std::string, int>> substituted_relation(const FreeGroupSubstitution& sub) {
  groups::WordParser parser(sub.target, false);
  std::vector<std::pair<std::string, int>> out;  // (symbol, ±1)
  std::function<void(const groups::WordNode&, int)> expand = [&](const groups::WordNode& w, int sign) {
    using K = groups::WordNode::Kind;
    auto push = [&](const std::string& s, int e) {
      if (!out.empty() && out.back().first == s && out.back().second == -e)
        out.pop_back();
      else
        out.emplace_back(s, e);
    };
    switch (w.kind) {
      case K::Identity:
        return;
      case K::Symbol:
        push(w.text, sign);
        return;
      case K::Product:
        if (sign > 0)
          for (const auto& c : w.children) expand(c, 1);
        else
          for (auto it = w.children.rbegin(); it != w.children.rend(); ++it) expand(*it, -1);
        return;
      case K::Power: {
        int s = w.exponent < 0 ? -sign : sign;
        for (long long i = 0; i < std::llabs(w.exponent); ++i) expand(w.children[0], s);
        return;
      }
      default:
        throw UsageError("substitution words may use only products and powers");
    }
  };
  for (const auto& s : sub.source) {
    auto it = sub.words.find(s);
    if (it == sub.words.end()) throw UsageError("no substitution for symbol '" + s + "'");
    expand(parser.parse(it->second), 1);
  }
  return out;
}

inline std::map<std::string, Element> transport_monodromy(const FreeGroupSubstitution& sub,
                                                          const groups::NamedElements& assignment,
                                                          const groups::FiniteGroup& group) {
  for (const auto& t : sub.target)
    if (!assignment.count(t)) throw UsageError("undefined symbol '" + t + "' in assignment");
  std::map<std::string, Element> out;
  for (const auto& s : sub.source) {
    auto it = sub.words.find(s);
    if (it == sub.words.end()) throw UsageError("undefined symbol '" + s + "' in substitution");
    groups::WordParser parser(sub.target, false);
    out[s] = group.eval(parser.parse(it->second), &assignment);
  }
  return out;
}

}  // namespace xcoll::covering
