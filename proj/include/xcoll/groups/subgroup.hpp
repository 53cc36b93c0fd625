#pragma once

#include <algorithm>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "xcoll/groups/finite_group.hpp"

namespace xcoll::groups {

class Subgroup {
 public:
  Subgroup() = default;

  // Redundant generators (already in the closure of earlier ones) are dropped.
  static Subgroup generate(GroupPtr g, const std::vector<Element>& gens) {
    Subgroup h;
    h.group_ = std::move(g);
    h.member_.assign(h.group_->order(), 0);
    h.member_[0] = 1;
    std::vector<Element> elts{h.group_->identity()};
    for (auto s : gens) {
      if (!h.group_->contains(s)) throw UsageError("subgroup generator outside the group");
      if (h.member_[s.index]) continue;
      h.gens_.push_back(s);
      for (std::size_t i = 0; i < elts.size(); ++i)
        for (auto t : h.gens_) {
          Element e = h.group_->mul(elts[i], t);
          if (!h.member_[e.index]) {
            h.member_[e.index] = 1;
            elts.push_back(e);
          }
        }
    }
    std::sort(elts.begin(), elts.end());
    h.elements_ = std::move(elts);
    return h;
  }
  static Subgroup trivial(GroupPtr g) { return generate(std::move(g), {}); }
  static Subgroup whole(GroupPtr g) {
    std::vector<Element> gens;
    for (std::size_t i = 0; i < g->num_generators(); ++i) gens.push_back(g->generator(i));
    return generate(std::move(g), gens);
  }
  static Subgroup from_elements(GroupPtr g, const std::vector<Element>& elts) {
    Subgroup h = generate(std::move(g), elts);
    if (h.order() != std::set<Element>(elts.begin(), elts.end()).size())
      throw UsageError("element set is not a subgroup");
    return h;
  }

  const GroupPtr& group() const { return group_; }
  std::size_t order() const { return elements_.size(); }
  std::size_t index() const { return group_->order() / order(); }
  const std::vector<Element>& elements() const { return elements_; }
  const std::vector<Element>& generators() const { return gens_; }
  bool contains(Element a) const { return member_[a.index] != 0; }
  bool is_trivial() const { return order() == 1; }
  bool is_whole() const { return order() == group_->order(); }

  bool operator==(const Subgroup& o) const { return elements_ == o.elements_; }
  bool operator<(const Subgroup& o) const {
    if (order() != o.order()) return order() < o.order();
    return elements_ < o.elements_;
  }
  bool subset_of(const Subgroup& o) const {
    return std::all_of(elements_.begin(), elements_.end(), [&](Element e) { return o.contains(e); });
  }

  // g H g^-1
  Subgroup conjugate(Element g) const {
    std::vector<Element> gens;
    for (auto s : gens_) gens.push_back(group_->conj(s, g));
    return generate(group_, gens);
  }
  bool is_normalized_by(Element g) const {
    return std::all_of(elements_.begin(), elements_.end(), [&](Element h) { return contains(group_->conj(h, g)); });
  }
  bool is_normal() const {
    for (std::size_t i = 0; i < group_->num_generators(); ++i)
      if (!is_normalized_by(group_->generator(i))) return false;
    return true;
  }
  Subgroup normalizer() const {
    std::vector<Element> n;
    for (auto g : group_->elements())
      if (is_normalized_by(g)) n.push_back(g);
    return generate(group_, n);
  }
  std::vector<Subgroup> conjugates() const {
    std::set<Subgroup> out;
    for (auto g : group_->elements()) out.insert(conjugate(g));
    return {out.begin(), out.end()};
  }
  Subgroup join(const Subgroup& o) const {
    auto gens = gens_;
    gens.insert(gens.end(), o.gens_.begin(), o.gens_.end());
    return generate(group_, gens);
  }
  Subgroup join(Element e) const {
    auto gens = gens_;
    gens.push_back(e);
    return generate(group_, gens);
  }
  Subgroup intersect(const Subgroup& o) const {
    std::vector<Element> e;
    for (auto a : elements_)
      if (o.contains(a)) e.push_back(a);
    return generate(group_, e);
  }
  Subgroup commutator_subgroup() const {
    std::vector<Element> c;
    for (auto a : elements_)
      for (auto b : elements_) c.push_back(group_->commutator(a, b));
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    return generate(group_, c);
  }

  std::string render() const {
    std::string out = "<";
    for (std::size_t i = 0; i < gens_.size(); ++i) {
      if (i) out += ", ";
      out += group_->render(gens_[i]);
    }
    return out + ">";
  }

 private:
  GroupPtr group_;
  std::vector<Element> gens_;
  std::vector<Element> elements_;
  std::vector<char> member_;
};

// Cosets a<g> (left translates by a of the cyclic group), as the orbits of right
// multiplication by g; indexed by ascending minimal element.
struct CosetPartition {
  std::vector<std::vector<Element>> cosets;
  std::vector<std::size_t> coset_of;  // element index -> coset id
};

inline CosetPartition left_cosets(const Subgroup& h) {
  const auto& g = *h.group();
  CosetPartition p;
  p.coset_of.assign(g.order(), SIZE_MAX);
  for (auto a : g.elements()) {
    if (p.coset_of[a.index] != SIZE_MAX) continue;
    std::vector<Element> c;
    for (auto x : h.elements()) c.push_back(g.mul(a, x));
    std::sort(c.begin(), c.end());
    for (auto x : c) p.coset_of[x.index] = p.cosets.size();
    p.cosets.push_back(std::move(c));
  }
  return p;
}

// Cosets H a, indexed by ascending minimal element.
inline CosetPartition right_cosets(const Subgroup& h) {
  const auto& g = *h.group();
  CosetPartition p;
  p.coset_of.assign(g.order(), SIZE_MAX);
  for (auto a : g.elements()) {
    if (p.coset_of[a.index] != SIZE_MAX) continue;
    std::vector<Element> c;
    for (auto x : h.elements()) c.push_back(g.mul(x, a));
    std::sort(c.begin(), c.end());
    for (auto x : c) p.coset_of[x.index] = p.cosets.size();
    p.cosets.push_back(std::move(c));
  }
  return p;
}

// All subgroups, by closing cyclic subgroups under joins (fine for |G| <= a few hundred).
inline std::vector<Subgroup> all_subgroups(const GroupPtr& g) {
  std::set<Subgroup> found;
  std::vector<Subgroup> frontier;
  for (auto e : g->elements()) {
    auto c = Subgroup::generate(g, {e});
    if (found.insert(c).second) frontier.push_back(c);
  }
  std::vector<Subgroup> cyclic = frontier;
  while (!frontier.empty()) {
    std::vector<Subgroup> next;
    for (const auto& h : frontier)
      for (const auto& c : cyclic) {
        if (c.subset_of(h)) continue;
        auto j = h.join(c);
        if (found.insert(j).second) next.push_back(j);
      }
    frontier = std::move(next);
  }
  return {found.begin(), found.end()};
}

}  // namespace xcoll::groups
