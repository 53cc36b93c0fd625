#pragma once

#include <cctype>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "xcoll/divlat/curve.hpp"
#include "xcoll/groups/morphism.hpp"
#include "xcoll/groups/word.hpp"

namespace xcoll::divlat {

// Names an expression may refer to. Named divisors are stored as text and
// re-evaluated on whatever curve the expression is evaluated on.
struct ExprContext {
  groups::NamedElements elements;
  std::map<std::string, Subgroup, std::less<>> subgroups;
  std::map<std::string, std::string, std::less<>> divisors;
};

namespace detail {

inline std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

// Splits "a - 2*b + c" into signed terms at depth 0.
inline std::vector<std::pair<int, std::string>> signed_terms(const std::string& text) {
  std::vector<std::pair<int, std::string>> out;
  int depth = 0, sign = 1;
  std::string cur;
  auto flush = [&] {
    std::string t = trim(cur);
    if (!t.empty()) out.emplace_back(sign, t);
    cur.clear();
  };
  for (char ch : text) {
    if (ch == '(' || ch == '[' || ch == '<') ++depth;
    if (ch == ')' || ch == ']' || ch == '>') --depth;
    if (depth == 0 && (ch == '+' || ch == '-')) {
      if (trim(cur).empty()) {
        if (ch == '-') sign = -sign;
        continue;
      }
      flush();
      sign = ch == '-' ? -1 : 1;
      continue;
    }
    cur += ch;
  }
  if (depth != 0) throw UsageError("unbalanced brackets in divisor expression '" + text + "'");
  flush();
  return out;
}

}  // namespace detail

// Points of E_j (0-based j) on c whose stabilizer grows when sigma joins the acting group.
inline DivisorClass fixed_points(const QuotientCurve& c, Element sigma, std::size_t j) {
  Subgroup k = c.acting().join(sigma);
  DivisorClass d;
  const auto& f = c.fiber(j);
  for (std::size_t p = 0; p < f.points.size(); ++p) {
    Subgroup st = covering::point_stabilizer(c.datum(), j, f.points[p].rep);
    if (st.intersect(k).order() > st.intersect(c.acting()).order()) d.add(c.point_symbol(j, p), 1);
  }
  return d;
}

class ExprEvaluator {
 public:
  ExprEvaluator(const QuotientCurve& curve, const ExprContext& ctx) : c_(curve), ctx_(ctx) {}

  DivisorClass eval(const std::string& text) const {
    if (++depth_ > 32) throw UsageError("divisor definitions are cyclic near '" + text + "'");
    DivisorClass out;
    try {
      for (const auto& [sign, term] : detail::signed_terms(text)) out += static_cast<Int>(sign) * eval_term(term);
    } catch (...) {
      --depth_;
      throw;
    }
    --depth_;
    return out;
  }

  Subgroup subgroup(const std::string& raw) const {
    std::string s = detail::trim(raw);
    const auto& g = c_.datum().group;
    if (s == "1") return Subgroup::trivial(g);
    if (s == "G" || s == "all") return Subgroup::whole(g);
    if (auto it = ctx_.subgroups.find(s); it != ctx_.subgroups.end()) return it->second;
    if (s.size() >= 2 && s.front() == '<' && s.back() == '>') {
      std::vector<Element> gens;
      for (const auto& w : groups::split_top_level(s.substr(1, s.size() - 2))) gens.push_back(element(w));
      return Subgroup::generate(g, gens);
    }
    // bare generator list, e.g. "x^2 z" or "y, x^2"
    try {
      std::vector<Element> gens;
      for (const auto& w : groups::split_top_level(s)) gens.push_back(element(w));
      if (!gens.empty()) return Subgroup::generate(g, gens);
    } catch (const UsageError&) {
    }
    throw UsageError("unresolved subgroup reference '" + s + "'");
  }

  Element element(const std::string& raw) const { return c_.datum().group->parse(detail::trim(raw), &ctx_.elements); }

 private:
  std::size_t branch(const std::string& raw) const {
    std::string s = detail::trim(raw);
    if (!s.empty() && (s[0] == 'E' || s[0] == 'e')) s = s.substr(1);
    std::size_t j = 0;
    try {
      j = std::stoul(s);
    } catch (const std::exception&) {
      throw UsageError("malformed branch index '" + raw + "'");
    }
    if (j < 1 || j > c_.num_branches()) throw UsageError("unresolved reference 'E" + s + "'");
    return j - 1;
  }

  std::vector<std::string> args(const std::string& inner, std::size_t lo, std::size_t hi, const std::string& fn) const {
    auto a = groups::split_top_level(inner);
    if (inner.empty()) a.clear();
    if (a.size() < lo || a.size() > hi) throw UsageError("wrong number of arguments to " + fn + "()");
    return a;
  }

  DivisorClass eval_term(const std::string& term) const {
    // leading integer coefficient: "2*X", "2X", "2 X"
    std::size_t i = 0;
    while (i < term.size() && std::isdigit(static_cast<unsigned char>(term[i]))) ++i;
    if (i > 0 && i < term.size()) {
      std::size_t k = i;
      while (k < term.size() && std::isspace(static_cast<unsigned char>(term[k]))) ++k;
      if (k < term.size() && term[k] == '*') ++k;
      Int coeff = std::stoll(term.substr(0, i));
      return coeff * eval(term.substr(k));
    }
    if (i == term.size()) {
      if (std::stoll(term) != 0) throw UsageError("bare integer '" + term + "' is not a divisor");
      return {};
    }
    if (term.front() == '(' && term.back() == ')') return eval(term.substr(1, term.size() - 2));
    return eval_atom(term);
  }

  DivisorClass eval_atom(const std::string& atom) const {
    auto open = atom.find('(');
    std::string name = detail::trim(atom.substr(0, open));
    if (open == std::string::npos) return eval_bare(name);
    if (atom.back() != ')') throw UsageError("malformed divisor atom '" + atom + "'");
    std::string inner = detail::trim(atom.substr(open + 1, atom.size() - open - 2));
    const auto& grp = *c_.datum().group;

    if (name == "O") {
      if (c_.genus() != 0) throw UsageError("O(d) is only defined on rational curves; " + c_.name() + " has genus " +
                                            std::to_string(c_.genus()));
      return c_.single(c_.generic_symbol(c_.acting()), std::stoll(inner));
    }
    if (name == "generic") {
      auto a = args(inner, 0, 1, name);
      return c_.single(c_.generic_symbol(a.empty() ? c_.whole() : subgroup(a[0])));
    }
    if (name == "pullback") {
      auto a = args(inner, 1, 3, name);
      if (a.size() == 1) return c_.single(c_.generic_symbol(subgroup(a[0])));
      if (a.size() != 3) throw UsageError("pullback() takes (K) or (K, rep, j)");
      return c_.pullback_point(subgroup(a[0]), branch(a[2]), element(a[1]));
    }
    if (name == "point") {
      auto a = args(inner, 2, 2, name);
      std::size_t j = branch(a[1]);
      return c_.single(c_.point_symbol(j, c_.point_of(j, element(a[0]))));
    }
    if (name == "orbit") {
      auto a = args(inner, 3, 3, name);
      Subgroup k = subgroup(a[0]);
      std::size_t j = branch(a[2]);
      Element rep = element(a[1]);
      std::set<std::size_t> pts;
      for (auto x : k.elements()) pts.insert(c_.point_of(j, grp.mul(x, rep)));
      DivisorClass d;
      for (auto p : pts) d.add(c_.point_symbol(j, p), 1);
      return d;
    }
    if (name == "stab") {
      auto a = args(inner, 2, 2, name);
      Subgroup s = subgroup(a[0]);
      std::size_t j = branch(a[1]);
      DivisorClass d;
      const auto& f = c_.fiber(j);
      for (std::size_t p = 0; p < f.points.size(); ++p)
        for (auto coset : f.points[p].members)
          if (covering::point_stabilizer(c_.datum(), j, f.cosets.cosets[coset].front()) == s) {
            d.add(c_.point_symbol(j, p), 1);
            break;
          }
      return d;
    }
    if (name == "fixed") {
      auto a = args(inner, 2, 2, name);
      return fixed_points(c_, element(a[0]), branch(a[1]));
    }
    throw UsageError("unknown divisor function '" + name + "'");
  }

  DivisorClass eval_bare(const std::string& name) const {
    if (name == "generic") return c_.single(c_.generic_symbol(c_.whole()));
    if (name == "canonical" || name == "K") return c_.canonical_class();
    if (auto it = ctx_.divisors.find(name); it != ctx_.divisors.end()) return eval(it->second);
    if (name.size() >= 2 && name[0] == 'E' &&
        std::all_of(name.begin() + 1, name.end(), [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); }))
      return c_.reduced_fiber(branch(name));
    throw UsageError("unresolved reference '" + name + "'");
  }

  const QuotientCurve& c_;
  const ExprContext& ctx_;
  mutable int depth_ = 0;
};

inline DivisorClass evaluate(const QuotientCurve& c, const ExprContext& ctx, const std::string& text) {
  return ExprEvaluator(c, ctx).eval(text);
}

// Transport a class along an automorphism phi from src (C/H) to dst (C'/phi(H)),
// where the datum of dst is phi applied to the datum of src.
inline DivisorClass transport_class(const groups::GroupMorphism& phi, const QuotientCurve& src, const QuotientCurve& dst,
                                    const DivisorClass& cls) {
  const auto& sd = src.datum();
  const auto& dd = dst.datum();
  if (sd.size() != dd.size()) throw UsageError("transport between data of different length");
  for (std::size_t j = 0; j < sd.size(); ++j)
    if (phi.apply(sd.branch[j]) != dd.branch[j]) throw UsageError("target datum is not the image of the source datum");
  std::vector<Element> himg;
  for (auto h : src.acting().generators()) himg.push_back(phi.apply(h));
  if (!(Subgroup::generate(dd.group, himg) == dst.acting())) throw UsageError("target curve is not the image quotient");
  DivisorClass out;
  for (const auto& [s, k] : cls.terms) {
    if (s.kind == Symbol::Kind::Generic) {
      std::vector<Element> img;
      for (auto i : s.subgroup) img.push_back(phi.apply(Element{i}));
      out.add(dst.generic_symbol(Subgroup::generate(dd.group, img)), k);
    } else {
      Element rep = src.fiber(s.branch).points[s.point].rep;
      out.add(dst.point_symbol(s.branch, dst.point_of(s.branch, phi.apply(rep))), k);
    }
  }
  return out;
}

}  // namespace xcoll::divlat
