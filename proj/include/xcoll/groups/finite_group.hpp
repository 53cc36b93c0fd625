#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "xcoll/core/error.hpp"
#include "xcoll/groups/permutation.hpp"
#include "xcoll/groups/todd_coxeter.hpp"
#include "xcoll/groups/word.hpp"

namespace xcoll::groups {

struct Element {
  std::uint32_t index = 0;
  auto operator<=>(const Element&) const = default;
};

using NamedElements = std::map<std::string, Element, std::less<>>;

struct Presentation {
  std::vector<std::string> generators;
  // Words over the generators; "u = v" stands for u v^-1.
  std::vector<std::string> relators;
  // Optional basis for the normal form x^k y^l z^m: generator name and exponent range.
  std::vector<std::pair<std::string, int>> standard_form;
};

struct PermutationSpec {
  std::size_t degree = 0;
  int cyclic = 1;  // order of an extra direct cyclic factor; 1 for a plain permutation group
  std::vector<std::string> generator_names;
  std::vector<std::string> generators;  // literals such as "(1234)" or "((12),1)"
};

class FiniteGroup;
using GroupPtr = std::shared_ptr<const FiniteGroup>;

class FiniteGroup {
 public:
  static constexpr std::size_t kDefaultBound = 10000;
  static constexpr std::size_t kTableLimit = 4096;

  static GroupPtr realize(const Presentation& p, std::size_t bound = kDefaultBound, std::string name = {}) {
    if (p.generators.empty()) throw UsageError("presentation has no generators");
    auto g = std::shared_ptr<FiniteGroup>(new FiniteGroup());
    g->name_ = std::move(name);
    g->gen_names_ = p.generators;
    WordParser parser(p.generators, false);
    std::vector<Letters> rels;
    for (const auto& text : p.relators) {
      auto sides = split_top_level(text, '=');
      if (sides.empty() || sides.size() > 2) throw UsageError("malformed relator: " + text);
      Letters w = g->letters(parser.parse(sides[0]));
      if (sides.size() == 2) {
        Letters r = g->letters(parser.parse(sides[1]));
        for (auto it = r.rbegin(); it != r.rend(); ++it) w.push_back(inverse_letter(*it));
      }
      if (w.empty()) throw UsageError("empty relator: " + text);
      rels.push_back(std::move(w));
    }
    auto cosets = enumerate_cosets(static_cast<int>(p.generators.size()), rels, bound);
    g->build_from_action(cosets.size(), [&](std::uint32_t c, std::size_t s) {
      return static_cast<std::uint32_t>(cosets[c][s]);
    });
    g->relators_ = rels;
    g->relator_texts_ = p.relators;
    g->has_presentation_ = true;
    for (std::size_t i = 0; i < rels.size(); ++i)
      if (g->eval_letters(rels[i]) != g->identity())
        throw InvariantViolation("relator " + p.relators[i] + " fails in the realized group");
    if (!p.standard_form.empty()) g->install_standard_form(p.standard_form);
    return g;
  }

  static GroupPtr from_permutations(const PermutationSpec& spec, std::size_t bound = kDefaultBound,
                                    std::string name = {}) {
    if (spec.degree == 0 || spec.degree > 9) throw UsageError("permutation degree must be in 1..9");
    if (spec.cyclic < 1) throw UsageError("cyclic factor order must be positive");
    if (spec.generators.empty()) throw UsageError("no permutation generators");
    auto g = std::shared_ptr<FiniteGroup>(new FiniteGroup());
    g->name_ = std::move(name);
    g->degree_ = spec.degree;
    g->cyclic_ = spec.cyclic;
    g->gen_names_ = spec.generator_names;
    if (g->gen_names_.empty())
      for (std::size_t i = 0; i < spec.generators.size(); ++i) g->gen_names_.push_back("s" + std::to_string(i + 1));
    if (g->gen_names_.size() != spec.generators.size()) throw UsageError("generator names and literals differ in count");
    std::vector<PermElt> gens;
    for (const auto& lit : spec.generators) gens.push_back(g->parse_perm_literal(lit));
    // breadth-first closure; element order = discovery order
    std::vector<PermElt> elts{PermElt{Perm(spec.degree), 0}};
    std::map<PermElt, std::uint32_t> index{{elts[0], 0}};
    std::vector<std::vector<std::uint32_t>> right;
    for (std::size_t i = 0; i < elts.size(); ++i) {
      right.emplace_back();
      for (const auto& s : gens) {
        PermElt e = g->mul_perm(elts[i], s);
        auto [it, fresh] = index.emplace(e, static_cast<std::uint32_t>(elts.size()));
        if (fresh) {
          if (elts.size() >= bound) throw UsageError("permutation group exceeds bound");
          elts.push_back(e);
        }
        right.back().push_back(it->second);
      }
    }
    g->build_from_action(elts.size(), [&](std::uint32_t c, std::size_t s) { return right[c][s]; });
    g->perm_elts_ = std::move(elts);
    g->perm_index_ = std::move(index);
    return g;
  }

  const std::string& name() const { return name_; }
  std::size_t order() const { return n_; }
  Element identity() const { return Element{0}; }
  std::vector<Element> elements() const {
    std::vector<Element> out(n_);
    for (std::size_t i = 0; i < n_; ++i) out[i] = Element{static_cast<std::uint32_t>(i)};
    return out;
  }
  bool contains(Element a) const { return a.index < n_; }

  std::size_t num_generators() const { return gen_names_.size(); }
  Element generator(std::size_t i) const { return gens_.at(i); }
  const std::vector<std::string>& generator_names() const { return gen_names_; }
  std::optional<Element> generator(std::string_view name) const {
    for (std::size_t i = 0; i < gen_names_.size(); ++i)
      if (gen_names_[i] == name) return gens_[i];
    return std::nullopt;
  }

  Element mul(Element a, Element b) const {
    if (!table_.empty()) return Element{table_[static_cast<std::size_t>(a.index) * n_ + b.index]};
    std::uint32_t c = a.index;
    for (auto s : words_[b.index]) c = right_[c][s];
    return Element{c};
  }
  Element inv(Element a) const { return Element{inv_[a.index]}; }
  Element pow(Element a, long long e) const {
    if (e < 0) return pow(inv(a), -e);
    Element r = identity();
    e %= static_cast<long long>(element_order(a));
    for (long long i = 0; i < e; ++i) r = mul(r, a);
    return r;
  }
  std::size_t element_order(Element a) const {
    std::size_t k = 1;
    for (Element p = a; p != identity(); p = mul(p, a)) ++k;
    return k;
  }
  Element conj(Element h, Element g) const { return mul(mul(g, h), inv(g)); }  // g h g^-1
  Element commutator(Element a, Element b) const { return mul(mul(a, b), mul(inv(a), inv(b))); }
  // right multiplication by generator s
  Element right_generator(Element a, std::size_t s) const { return Element{right_[a.index][s]}; }
  // shortest generator word reaching a (generator indices, applied left to right)
  const std::vector<std::uint8_t>& bfs_word(Element a) const { return words_[a.index]; }

  bool has_presentation() const { return has_presentation_; }
  const std::vector<std::string>& relator_texts() const { return relator_texts_; }
  const std::vector<Letters>& relators() const { return relators_; }
  Element eval_letters(const Letters& w) const {
    Element r = identity();
    for (int c : w) r = mul(r, c % 2 == 0 ? gens_[c / 2] : inv(gens_[c / 2]));
    return r;
  }

  bool is_permutation_group() const { return degree_ > 0; }
  std::size_t degree() const { return degree_; }
  int cyclic_factor() const { return cyclic_; }
  // (permutation, cyclic exponent) of a permutation-model element
  std::pair<Perm, int> permutation_of(Element a) const {
    if (!is_permutation_group()) throw UsageError("group has no permutation model");
    return {perm_elts_[a.index].perm, perm_elts_[a.index].cyc};
  }

  // standard form support
  bool has_standard_form() const { return !sf_basis_.empty(); }
  const std::vector<std::pair<std::string, int>>& standard_basis() const { return sf_basis_; }
  const std::vector<int>& standard_exponents(Element a) const {
    if (!has_standard_form()) throw UsageError("group has no declared standard-form basis");
    return sf_exps_[a.index];
  }
  Element from_standard(const std::vector<int>& exps) const {
    if (!has_standard_form()) throw UsageError("group has no declared standard-form basis");
    Element r = identity();
    for (std::size_t i = 0; i < exps.size(); ++i) r = mul(r, pow(*generator(sf_basis_[i].first), exps[i]));
    return r;
  }

  Element eval(const WordNode& w, const NamedElements* named = nullptr) const {
    using K = WordNode::Kind;
    switch (w.kind) {
      case K::Identity:
        return identity();
      case K::Symbol: {
        if (named) {
          auto it = named->find(w.text);
          if (it != named->end()) return it->second;
        }
        if (auto g = generator(w.text)) return *g;
        throw UsageError("unknown element symbol '" + w.text + "'");
      }
      case K::Literal: {
        if (!is_permutation_group()) throw UsageError("permutation literal in a presented group: " + w.text);
        return lookup_perm(parse_perm_literal(w.text));
      }
      case K::Product: {
        Element r = identity();
        for (const auto& c : w.children) r = mul(r, eval(c, named));
        return r;
      }
      case K::Power:
        return pow(eval(w.children[0], named), w.exponent);
      case K::Conjugate: {  // a^b = b^-1 a b
        Element a = eval(w.children[0], named), b = eval(w.children[1], named);
        return mul(mul(inv(b), a), b);
      }
      case K::Commutator:  // [a,b] = a b a^-1 b^-1
        return commutator(eval(w.children[0], named), eval(w.children[1], named));
    }
    throw InvariantViolation("unhandled word node");
  }

  Element parse(std::string_view text, const NamedElements* named = nullptr) const {
    std::vector<std::string> syms = gen_names_;
    if (named)
      for (const auto& [k, v] : *named) syms.push_back(k);
    WordParser parser(syms, is_permutation_group());
    return eval(parser.parse(text), named);
  }

  std::string render(Element a) const {
    if (is_permutation_group()) {
      const auto& pe = perm_elts_[a.index];
      if (cyclic_ == 1) return pe.perm.cycles();
      return "(" + pe.perm.cycles() + "," + std::to_string(pe.cyc) + ")";
    }
    bool short_names = std::all_of(gen_names_.begin(), gen_names_.end(), [](const auto& s) { return s.size() == 1; });
    std::string sep = short_names ? "" : " ";
    std::vector<std::pair<std::size_t, int>> runs;
    if (has_standard_form()) {
      const auto& ex = sf_exps_[a.index];
      for (std::size_t i = 0; i < ex.size(); ++i)
        if (ex[i] != 0) runs.emplace_back(*gen_index(sf_basis_[i].first), ex[i]);
    } else {
      for (auto s : words_[a.index]) {
        if (!runs.empty() && runs.back().first == s)
          ++runs.back().second;
        else
          runs.emplace_back(s, 1);
      }
    }
    if (runs.empty()) return "1";
    std::string out;
    for (const auto& [s, e] : runs) {
      if (!out.empty()) out += sep;
      out += gen_names_[s];
      if (e != 1) out += "^" + std::to_string(e);
    }
    return out;
  }

 private:
  struct PermElt {
    Perm perm;
    int cyc = 0;
    auto operator<=>(const PermElt&) const = default;
  };

  FiniteGroup() = default;

  PermElt mul_perm(const PermElt& a, const PermElt& b) const { return PermElt{a.perm * b.perm, (a.cyc + b.cyc) % cyclic_}; }

  PermElt parse_perm_literal(std::string_view lit) const {
    std::string s(lit);
    auto inner_of = [](const std::string& t) {
      std::size_t a = t.find_first_not_of(" \t"), b = t.find_last_not_of(" \t");
      return t.substr(a, b - a + 1);
    };
    s = inner_of(s);
    if (cyclic_ > 1 && s.size() >= 2 && s.front() == '(' && s.back() == ')') {
      auto parts = split_top_level(std::string_view(s).substr(1, s.size() - 2));
      if (parts.size() == 2) {
        int c = 0;
        try {
          c = std::stoi(parts[1]);
        } catch (const std::exception&) {
          throw UsageError("bad cyclic component in literal " + s);
        }
        return PermElt{Perm::parse_cycles(parts[0], degree_), ((c % cyclic_) + cyclic_) % cyclic_};
      }
    }
    return PermElt{Perm::parse_cycles(s, degree_), 0};
  }

  Element lookup_perm(const PermElt& e) const {
    auto it = perm_index_.find(e);
    if (it == perm_index_.end()) throw UsageError("permutation literal lies outside the generated group");
    return Element{it->second};
  }

  std::optional<std::size_t> gen_index(std::string_view name) const {
    for (std::size_t i = 0; i < gen_names_.size(); ++i)
      if (gen_names_[i] == name) return i;
    return std::nullopt;
  }

  Letters letters(const WordNode& w) const {
    using K = WordNode::Kind;
    Letters out;
    auto inverse = [](const Letters& l) {
      Letters r;
      for (auto it = l.rbegin(); it != l.rend(); ++it) r.push_back(inverse_letter(*it));
      return r;
    };
    switch (w.kind) {
      case K::Identity:
        break;
      case K::Symbol: {
        auto i = gen_index(w.text);
        if (!i) throw UsageError("unknown generator '" + w.text + "'");
        out.push_back(static_cast<int>(2 * *i));
        break;
      }
      case K::Literal:
        throw UsageError("literal not allowed in a presentation: " + w.text);
      case K::Product:
        for (const auto& c : w.children) {
          auto l = letters(c);
          out.insert(out.end(), l.begin(), l.end());
        }
        break;
      case K::Power: {
        Letters base = letters(w.children[0]);
        if (w.exponent < 0) base = inverse(base);
        for (long long i = 0; i < std::llabs(w.exponent); ++i) out.insert(out.end(), base.begin(), base.end());
        break;
      }
      case K::Conjugate: {
        Letters a = letters(w.children[0]), b = letters(w.children[1]);
        out = inverse(b);
        out.insert(out.end(), a.begin(), a.end());
        out.insert(out.end(), b.begin(), b.end());
        break;
      }
      case K::Commutator: {
        Letters a = letters(w.children[0]), b = letters(w.children[1]);
        out = a;
        out.insert(out.end(), b.begin(), b.end());
        auto ai = inverse(a), bi = inverse(b);
        out.insert(out.end(), ai.begin(), ai.end());
        out.insert(out.end(), bi.begin(), bi.end());
        break;
      }
    }
    // free reduction
    Letters red;
    for (int c : out) {
      if (!red.empty() && red.back() == inverse_letter(c))
        red.pop_back();
      else
        red.push_back(c);
    }
    return red;
  }

  // Canonical indexing: BFS from the identity, right multiplication by generators in order.
  template <class Action>
  void build_from_action(std::size_t count, Action act) {
    std::size_t ng = gen_names_.size();
    std::vector<std::int64_t> renum(count, -1);
    std::vector<std::uint32_t> order{0};
    renum[0] = 0;
    std::vector<std::vector<std::uint8_t>> words{{}};
    std::vector<std::size_t> parents{0};
    for (std::size_t i = 0; i < order.size(); ++i)
      for (std::size_t s = 0; s < ng; ++s) {
        std::uint32_t d = act(order[i], s);
        if (renum[d] < 0) {
          renum[d] = static_cast<std::int64_t>(order.size());
          order.push_back(d);
          auto w = words[i];
          w.push_back(static_cast<std::uint8_t>(s));
          words.push_back(std::move(w));
          parents.push_back(i);
        }
      }
    if (order.size() != count) throw InvariantViolation("generators do not reach every element");
    n_ = count;
    right_.assign(n_, std::vector<std::uint32_t>(ng));
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t s = 0; s < ng; ++s) right_[i][s] = static_cast<std::uint32_t>(renum[act(order[i], s)]);
    words_ = std::move(words);
    gens_.clear();
    for (std::size_t s = 0; s < ng; ++s) gens_.push_back(Element{right_[0][s]});
    if (n_ <= kTableLimit) {
      table_.assign(n_ * n_, 0);
      for (std::size_t a = 0; a < n_; ++a) {
        table_[a * n_] = static_cast<std::uint32_t>(a);
        // a*b = (a*parent(b))*s where s is the last letter of b's word
        for (std::size_t b = 1; b < n_; ++b) {
          table_[a * n_ + b] = right_[table_[a * n_ + parents[b]]][words_[b].back()];
        }
      }
    }
    inv_.assign(n_, 0);
    for (std::size_t a = 0; a < n_; ++a) {
      Element e{static_cast<std::uint32_t>(a)};
      Element p = e, prev = identity();
      while (p != identity()) {
        prev = p;
        p = mul(p, e);
      }
      inv_[a] = prev.index;
      if (a == 0) inv_[a] = 0;
    }
  }

  void install_standard_form(const std::vector<std::pair<std::string, int>>& basis) {
    for (const auto& [g, r] : basis) {
      if (!gen_index(g)) throw UsageError("standard-form basis names unknown generator '" + g + "'");
      if (r <= 0) throw UsageError("standard-form range must be positive");
    }
    sf_basis_ = basis;
    sf_exps_.assign(n_, {});
    std::vector<char> hit(n_, 0);
    std::vector<int> ex(basis.size(), 0);
    std::size_t total = 1;
    for (const auto& b : basis) total *= static_cast<std::size_t>(b.second);
    if (total != n_) throw UsageError("standard-form ranges do not multiply to the group order");
    for (std::size_t k = 0; k < total; ++k) {
      std::size_t rem = k;
      for (std::size_t i = basis.size(); i-- > 0;) {
        ex[i] = static_cast<int>(rem % static_cast<std::size_t>(basis[i].second));
        rem /= static_cast<std::size_t>(basis[i].second);
      }
      Element e = from_standard(ex);
      if (hit[e.index]) throw UsageError("standard form is not unique for this basis");
      hit[e.index] = 1;
      sf_exps_[e.index] = ex;
    }
  }

  std::string name_;
  std::size_t n_ = 0;
  std::vector<std::string> gen_names_;
  std::vector<Element> gens_;
  std::vector<std::vector<std::uint32_t>> right_;
  std::vector<std::vector<std::uint8_t>> words_;
  std::vector<std::uint32_t> table_;
  std::vector<std::uint32_t> inv_;
  bool has_presentation_ = false;
  std::vector<Letters> relators_;
  std::vector<std::string> relator_texts_;
  std::size_t degree_ = 0;
  int cyclic_ = 1;
  std::vector<PermElt> perm_elts_;
  std::map<PermElt, std::uint32_t> perm_index_;
  std::vector<std::pair<std::string, int>> sf_basis_;
  std::vector<std::vector<int>> sf_exps_;
};

}  // namespace xcoll::groups
