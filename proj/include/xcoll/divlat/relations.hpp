#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "xcoll/divlat/curve.hpp"

namespace xcoll::divlat {

enum class Provenance { PullbackOfPoint, GenusZeroQuotient, RiemannHurwitzCanonical, HyperellipticHalves, CaseDeclared };

inline const char* provenance_name(Provenance p) {
  switch (p) {
    case Provenance::PullbackOfPoint:
      return "PullbackOfPoint";
    case Provenance::GenusZeroQuotient:
      return "GenusZeroQuotient";
    case Provenance::RiemannHurwitzCanonical:
      return "RiemannHurwitzCanonical";
    case Provenance::HyperellipticHalves:
      return "HyperellipticHalves";
    case Provenance::CaseDeclared:
      return "CaseDeclared";
  }
  return "?";
}

struct Relation {
  DivisorClass cls;  // asserted ~ 0
  Provenance tag = Provenance::CaseDeclared;
  std::string note;
  std::string citation;
};

struct RelationSet {
  std::vector<Relation> relations;
  bool complete = false;  // declared-complete module: non-derivable means inequivalent
  std::string citation;

  void append(const RelationSet& o) { relations.insert(relations.end(), o.relations.begin(), o.relations.end()); }
  std::size_t count(Provenance p) const {
    return static_cast<std::size_t>(
        std::count_if(relations.begin(), relations.end(), [&](const Relation& r) { return r.tag == p; }));
  }
};

// Subgroups closed under conjugation, with duplicates removed.
inline std::vector<Subgroup> conjugation_closure(const std::vector<Subgroup>& subs) {
  std::set<Subgroup> out;
  for (const auto& s : subs)
    for (auto& c : s.conjugates()) out.insert(c);
  return {out.begin(), out.end()};
}

namespace detail {

inline void genus_zero_relations(const QuotientCurve& c, const Subgroup& k, RelationSet& out) {
  Provenance tag = k.is_whole() ? Provenance::PullbackOfPoint : Provenance::GenusZeroQuotient;
  Symbol gp = c.generic_symbol(k);
  std::string where = k.is_whole() ? std::string("P^1") : "C/" + k.render();
  for (std::size_t j = 0; j < c.num_branches(); ++j) {
    covering::FiberSet fk = covering::fiber(c.datum(), j, k);
    for (const auto& q : fk.points) {
      DivisorClass r = c.pullback_point(k, j, q.rep);
      r.add(gp, -1);
      out.relations.push_back({std::move(r), tag, "point over E" + std::to_string(j + 1) + " on " + where, {}});
    }
  }
  if (!k.is_whole()) {
    DivisorClass r = c.single(c.generic_symbol(c.whole()));
    r.add(gp, -static_cast<Int>(k.index()));
    out.relations.push_back({std::move(r), tag, "general fibre of " + where + " -> P^1", {}});
  }
}

inline void genus_one_relation(const QuotientCurve& c, const Subgroup& k, RelationSet& out) {
  DivisorClass r = c.single(c.generic_symbol(c.whole()), -2);
  for (std::size_t j = 0; j < c.num_branches(); ++j) {
    covering::FiberSet fk = covering::fiber(c.datum(), j, k);
    for (const auto& q : fk.points)
      if (q.ramification > 1) r += static_cast<Int>(q.ramification - 1) * c.pullback_point(k, j, q.rep);
  }
  out.relations.push_back({std::move(r), Provenance::RiemannHurwitzCanonical, "canonical class of C/" + k.render(), {}});
}

// Double cover C/H' -> C/K onto P^1: split its 2g'+2 ramification points into equal
// halves X, Y; then sum X - sum Y ~ 0. The base split and all single swaps span every split.
inline void hyperelliptic_relations(const QuotientCurve& c, const Subgroup& hp, const Subgroup& k, RelationSet& out) {
  std::vector<std::pair<std::size_t, Element>> ram;
  for (std::size_t j = 0; j < c.num_branches(); ++j) {
    covering::FiberSet fh = covering::fiber(c.datum(), j, hp);
    for (const auto& p : fh.points) {
      std::size_t e_k = covering::point_stabilizer(c.datum(), j, p.rep).intersect(k).order();
      if (e_k == 2 * p.local_degree) ram.emplace_back(j, p.rep);
    }
  }
  long long gp = covering::quotient_genus(c.datum(), hp);
  if (static_cast<long long>(ram.size()) != 2 * gp + 2)
    throw InvariantViolation("double cover with unexpected number of ramification points");
  std::size_t half = ram.size() / 2;
  std::vector<DivisorClass> pts;
  for (const auto& [j, rep] : ram) pts.push_back(c.pullback_point(hp, j, rep));
  auto split = [&](std::size_t swap_x, std::size_t swap_y) {
    DivisorClass r;
    for (std::size_t i = 0; i < ram.size(); ++i) {
      bool in_x = i < half;
      if (i == swap_x || i == swap_y) in_x = !in_x;
      if (in_x)
        r += pts[i];
      else
        r -= pts[i];
    }
    return r;
  };
  std::string note = "ramification halves of C/" + hp.render() + " -> C/" + k.render();
  out.relations.push_back({split(SIZE_MAX, SIZE_MAX), Provenance::HyperellipticHalves, note, {}});
  for (std::size_t a = 0; a < half; ++a)
    for (std::size_t b = half; b < ram.size(); ++b)
      out.relations.push_back({split(a, b), Provenance::HyperellipticHalves, note + " (swap)", {}});
}

}  // namespace detail

// Relations on the curve c from the listed subgroups (closed under conjugation, plus the
// acting subgroup and G). Rules: pullback of points of P^1; points and general fibres of
// genus-0 quotients; canonical classes of genus-1 quotients; ramification halves of double
// covers of genus-0 quotients.
inline RelationSet derive_relations(const QuotientCurve& c, const std::vector<Subgroup>& subgroups) {
  RelationSet out;
  std::vector<Subgroup> list = subgroups;
  list.push_back(c.acting());
  list.push_back(c.whole());
  for (const auto& s : list)
    if (s.group() != c.datum().group) throw UsageError("subgroup from another group in relation derivation");
  list = conjugation_closure(list);
  std::vector<Subgroup> over;  // subgroups containing H
  for (const auto& s : list)
    if (c.acting().subset_of(s)) over.push_back(s);
  std::map<std::vector<std::uint32_t>, long long> genus;
  for (const auto& k : over) genus[element_key(k)] = covering::quotient_genus(c.datum(), k);

  for (const auto& k : over) {
    long long gk = genus[element_key(k)];
    if (gk == 0) detail::genus_zero_relations(c, k, out);
    if (gk == 1) detail::genus_one_relation(c, k, out);
  }
  for (const auto& hp : over)
    for (const auto& k : over) {
      if (k.order() != 2 * hp.order() || !hp.subset_of(k)) continue;
      if (genus[element_key(k)] != 0) continue;
      detail::hyperelliptic_relations(c, hp, k, out);
    }
  return out;
}

// Lattice spanned by a relation set; symbols outside its support are free.
class RelationLattice {
 public:
  RelationLattice() = default;
  explicit RelationLattice(const RelationSet& r) : complete_(r.complete) {
    for (const auto& rel : r.relations)
      for (const auto& [s, c] : rel.cls.terms) index_.emplace(s, 0);
    std::size_t i = 0;
    for (auto& [s, idx] : index_) idx = i++;
    lattice_ = intmath::Lattice(index_.size());
    for (const auto& rel : r.relations) lattice_.add(vec(rel.cls).value());
    count_ = r.relations.size();
  }

  bool contains(const DivisorClass& d) const {
    auto v = vec(d);
    return v && lattice_.contains(*v);
  }
  bool complete() const { return complete_; }
  std::size_t rank() const { return lattice_.rank(); }
  std::size_t relation_count() const { return count_; }

 private:
  std::optional<intmath::Vec> vec(const DivisorClass& d) const {
    intmath::Vec v(index_.size(), 0);
    for (const auto& [s, c] : d.terms) {
      auto it = index_.find(s);
      if (it == index_.end()) return std::nullopt;
      v[it->second] = c;
    }
    return v;
  }

  std::map<Symbol, std::size_t> index_;
  intmath::Lattice lattice_;
  std::size_t count_ = 0;
  bool complete_ = false;
};

struct Equivalence {
  bool derivable = false;
  std::string reason;
};

inline Equivalence is_equivalent(const QuotientCurve& c, const DivisorClass& a, const DivisorClass& b,
                                 const RelationLattice& r) {
  Int da = c.degree(a), db = c.degree(b);
  if (da != db) return {false, "degrees differ (" + std::to_string(da) + " vs " + std::to_string(db) + ")"};
  if (r.contains(a - b)) return {true, "difference lies in the relation lattice (rank " + std::to_string(r.rank()) + ")"};
  return {false, r.complete() ? "not equivalent (relation module declared complete)"
                              : "not derivable from the relation lattice"};
}

inline std::size_t count_distinct_classes(const std::vector<DivisorClass>& cs, const RelationLattice& r) {
  if (!r.complete()) throw UsageError("class counting needs a relation set declared complete");
  std::vector<std::size_t> rep;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    bool fresh = true;
    for (auto j : rep)
      if (r.contains(cs[i] - cs[j])) {
        fresh = false;
        break;
      }
    if (fresh) rep.push_back(i);
  }
  return rep.size();
}

inline Int clifford_bound(Int d, Int g) {
  if (d < 0 || d > 2 * g - 2) throw UsageError("Clifford bound needs 0 <= d <= 2g-2");
  return d / 2 + 1;
}

}  // namespace xcoll::divlat
