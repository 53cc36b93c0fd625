#pragma once

#include <compare>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "xcoll/core/intmath.hpp"
#include "xcoll/covering/genus.hpp"

namespace xcoll::divlat {

using covering::FiberSet;
using covering::RamificationDatum;
using groups::Element;
using groups::Subgroup;
using intmath::Int;

// Point: an H-orbit over branch j on C/H (index into the fiber's points).
// Generic: GP_H(K), the pullback to C/H of a general point of C/K.
struct Symbol {
  enum class Kind : int { Point = 0, Generic = 1 };
  Kind kind = Kind::Point;
  std::size_t branch = 0;
  std::size_t point = 0;
  std::vector<std::uint32_t> subgroup;
  auto operator<=>(const Symbol&) const = default;
};

struct DivisorClass {
  std::map<Symbol, Int> terms;

  bool is_zero() const { return terms.empty(); }
  Int coeff(const Symbol& s) const {
    auto it = terms.find(s);
    return it == terms.end() ? 0 : it->second;
  }
  void add(const Symbol& s, Int c) {
    if (c == 0) return;
    Int v = intmath::add(coeff(s), c);
    if (v == 0)
      terms.erase(s);
    else
      terms[s] = v;
  }
  DivisorClass& operator+=(const DivisorClass& o) {
    for (const auto& [s, c] : o.terms) add(s, c);
    return *this;
  }
  DivisorClass& operator-=(const DivisorClass& o) {
    for (const auto& [s, c] : o.terms) add(s, intmath::mul(c, -1));
    return *this;
  }
  friend DivisorClass operator+(DivisorClass a, const DivisorClass& b) { return a += b; }
  friend DivisorClass operator-(DivisorClass a, const DivisorClass& b) { return a -= b; }
  friend DivisorClass operator*(Int k, const DivisorClass& a) {
    DivisorClass r;
    if (k == 0) return r;
    for (const auto& [s, c] : a.terms) r.terms[s] = intmath::mul(k, c);
    return r;
  }
  bool operator==(const DivisorClass&) const = default;
};

inline std::vector<std::uint32_t> element_key(const Subgroup& k) {
  std::vector<std::uint32_t> out;
  for (auto e : k.elements()) out.push_back(e.index);
  return out;
}

// The quotient curve C/H of a Galois cover C -> P^1 given by a datum.
class QuotientCurve {
 public:
  QuotientCurve(std::shared_ptr<const RamificationDatum> datum, Subgroup h, std::string base_name)
      : datum_(std::move(datum)), h_(std::move(h)), base_name_(std::move(base_name)) {
    if (h_.group() != datum_->group) throw UsageError("acting subgroup lives in another group");
    genus_ = covering::quotient_genus(*datum_, h_);
    for (std::size_t j = 0; j < datum_->size(); ++j) fibers_.push_back(covering::fiber(*datum_, j, h_));
  }

  const std::shared_ptr<const RamificationDatum>& datum_ptr() const { return datum_; }
  const RamificationDatum& datum() const { return *datum_; }
  const Subgroup& acting() const { return h_; }
  const std::string& base_name() const { return base_name_; }
  std::string name() const { return h_.is_trivial() ? base_name_ : base_name_ + "/" + h_.render(); }
  long long genus() const { return genus_; }
  std::size_t num_branches() const { return fibers_.size(); }
  const FiberSet& fiber(std::size_t j) const { return fibers_.at(j); }
  Subgroup whole() const { return Subgroup::whole(datum_->group); }

  std::size_t coset_index(std::size_t j, Element a) const { return fibers_.at(j).cosets.coset_of[a.index]; }
  std::size_t point_of(std::size_t j, Element a) const { return fibers_.at(j).point_of_coset[coset_index(j, a)]; }

  Symbol point_symbol(std::size_t j, std::size_t idx) const { return Symbol{Symbol::Kind::Point, j, idx, {}}; }
  Symbol generic_symbol(const Subgroup& k) const {
    if (!h_.subset_of(k)) throw UsageError("generic fiber of " + k.render() + " does not pull back to " + name());
    return Symbol{Symbol::Kind::Generic, 0, 0, element_key(k)};
  }
  DivisorClass single(const Symbol& s, Int c = 1) const {
    DivisorClass d;
    d.add(s, c);
    return d;
  }

  Int degree(const Symbol& s) const {
    if (s.kind == Symbol::Kind::Point) return 1;
    return static_cast<Int>(s.subgroup.size() / h_.order());
  }
  Int degree(const DivisorClass& c) const {
    Int d = 0;
    for (const auto& [s, k] : c.terms) d = intmath::add(d, intmath::mul(k, degree(s)));
    return d;
  }

  DivisorClass reduced_fiber(std::size_t j) const {
    DivisorClass d;
    for (std::size_t i = 0; i < fibers_.at(j).points.size(); ++i) d.add(point_symbol(j, i), 1);
    return d;
  }

  // -2 GP(G) + sum over points (r - 1) P, r the ramification index over P^1
  DivisorClass canonical_class() const {
    DivisorClass d = single(generic_symbol(whole()), -2);
    for (std::size_t j = 0; j < fibers_.size(); ++j)
      for (std::size_t i = 0; i < fibers_[j].points.size(); ++i)
        d.add(point_symbol(j, i), static_cast<Int>(fibers_[j].points[i].ramification) - 1);
    return d;
  }

  // Pullback along C/H -> C/K of the image of the C-point a<g_j>.
  DivisorClass pullback_point(const Subgroup& k, std::size_t j, Element a) const {
    if (!h_.subset_of(k)) throw UsageError(k.render() + " does not contain the acting subgroup of " + name());
    const auto& g = *datum_->group;
    Subgroup stab = covering::point_stabilizer(*datum_, j, a);
    Int e_k = static_cast<Int>(stab.intersect(k).order());
    DivisorClass d;
    std::vector<char> seen(fibers_[j].points.size(), 0);
    for (auto x : k.elements()) {
      Element b = g.mul(x, a);
      std::size_t p = point_of(j, b);
      if (seen[p]) continue;
      seen[p] = 1;
      Int e_h = static_cast<Int>(covering::point_stabilizer(*datum_, j, b).intersect(h_).order());
      d.add(point_symbol(j, p), e_k / e_h);
    }
    return d;
  }

  // Pullback of a class on the base curve C/K (K containing H).
  DivisorClass pullback_from(const QuotientCurve& base, const DivisorClass& c) const {
    if (base.datum_ != datum_) throw UsageError("pullback between curves of different covers");
    DivisorClass d;
    for (const auto& [s, k] : c.terms) {
      if (s.kind == Symbol::Kind::Generic) {
        d.add(s, k);
        continue;
      }
      Element rep = base.fiber(s.branch).points[s.point].rep;
      d += k * pullback_point(base.acting(), s.branch, rep);
    }
    return d;
  }

  // g.D for g normalizing H.
  DivisorClass act(Element g, const DivisorClass& c) const {
    if (!h_.is_normalized_by(g)) throw UsageError("element does not normalize the acting subgroup of " + name());
    const auto& grp = *datum_->group;
    DivisorClass d;
    for (const auto& [s, k] : c.terms) {
      if (s.kind == Symbol::Kind::Generic) {
        std::vector<Element> elts;
        for (auto i : s.subgroup) elts.push_back(Element{i});
        d.add(generic_symbol(Subgroup::generate(datum_->group, elts).conjugate(g)), k);
      } else {
        Element rep = fibers_[s.branch].points[s.point].rep;
        d.add(point_symbol(s.branch, point_of(s.branch, grp.mul(g, rep))), k);
      }
    }
    return d;
  }

  std::string render(const Symbol& s) const {
    if (s.kind == Symbol::Kind::Generic) {
      std::vector<Element> elts;
      for (auto i : s.subgroup) elts.push_back(Element{i});
      Subgroup k = Subgroup::generate(datum_->group, elts);
      return k.is_whole() ? "GP" : "GP" + k.render();
    }
    const auto& p = fibers_[s.branch].points[s.point];
    return "E" + std::to_string(s.branch + 1) + "[" + datum_->group->render(p.rep) + "]";
  }

  std::string render(const DivisorClass& c) const {
    if (c.is_zero()) return "0";
    std::string out;
    for (const auto& [s, k] : c.terms) {
      Int a = k < 0 ? -k : k;
      if (out.empty())
        out += k < 0 ? "-" : "";
      else
        out += k < 0 ? " - " : " + ";
      if (a != 1) out += std::to_string(a) + "*";
      out += render(s);
    }
    return out;
  }

 private:
  std::shared_ptr<const RamificationDatum> datum_;
  Subgroup h_;
  std::string base_name_;
  long long genus_ = 0;
  std::vector<FiberSet> fibers_;
};

}  // namespace xcoll::divlat
