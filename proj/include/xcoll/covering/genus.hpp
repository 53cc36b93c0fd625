#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include "xcoll/covering/datum.hpp"

namespace xcoll::covering {

// 2g-2 = [G:H](-2) + sum_j ([G:H] - #cycles of g_j on H\G)
inline long long quotient_euler(const RamificationDatum& d, const Subgroup& h) {
  auto rc = groups::right_cosets(h);
  long long idx = static_cast<long long>(rc.cosets.size());
  long long total = -2 * idx;
  const auto& g = *d.group;
  for (auto gj : d.branch) {
    std::vector<char> seen(rc.cosets.size(), 0);
    long long cycles = 0;
    for (std::size_t c = 0; c < rc.cosets.size(); ++c) {
      if (seen[c]) continue;
      ++cycles;
      for (std::size_t x = c; !seen[x]; x = rc.coset_of[g.mul(rc.cosets[x][0], gj).index]) seen[x] = 1;
    }
    total += idx - cycles;
  }
  return total;
}

inline long long quotient_genus(const RamificationDatum& d, const Subgroup& h) {
  long long e = quotient_euler(d, h);
  if (e % 2 != 0) throw InvariantViolation("Riemann-Hurwitz sum is odd");
  long long g = e / 2 + 1;
  if (g < 0) throw InvariantViolation("negative genus");
  return g;
}

inline long long curve_genus(const RamificationDatum& d) { return quotient_genus(d, Subgroup::trivial(d.group)); }

// A point of C/H over branch point j: an H-orbit of points a<g_j> of C.
struct FiberPoint {
  std::vector<std::size_t> members;  // indices of C-points (cosets a<g_j>)
  Element rep;                       // minimal element of the first member coset
  std::size_t local_degree = 1;      // |H ∩ a<g_j>a^-1|, ramification of C -> C/H here
  std::size_t ramification = 1;      // index of C/H -> P^1 at this point
};

struct FiberSet {
  std::size_t branch = 0;
  std::size_t branch_order = 1;
  Subgroup acting;
  groups::CosetPartition cosets;           // points of C over p_j
  std::vector<FiberPoint> points;          // points of C/H over p_j
  std::vector<std::size_t> point_of_coset; // C-point -> index into points

  std::size_t count_on_curve() const { return cosets.cosets.size(); }
};

inline FiberSet fiber(const RamificationDatum& d, std::size_t j, const Subgroup& h) {
  if (j >= d.size()) throw UsageError("branch index out of range");
  const auto& g = *d.group;
  FiberSet f;
  f.branch = j;
  f.branch_order = d.order_at(j);
  f.acting = h;
  f.cosets = groups::left_cosets(Subgroup::generate(d.group, {d.branch[j]}));
  f.point_of_coset.assign(f.cosets.cosets.size(), SIZE_MAX);
  for (std::size_t c = 0; c < f.cosets.cosets.size(); ++c) {
    if (f.point_of_coset[c] != SIZE_MAX) continue;
    FiberPoint p;
    Element a = f.cosets.cosets[c][0];
    p.rep = a;
    for (auto x : h.elements()) {
      std::size_t k = f.cosets.coset_of[g.mul(x, a).index];
      if (f.point_of_coset[k] == SIZE_MAX) {
        f.point_of_coset[k] = f.points.size();
        p.members.push_back(k);
      }
    }
    std::sort(p.members.begin(), p.members.end());
    p.local_degree = h.order() / p.members.size();
    if (f.branch_order % p.local_degree != 0) throw InvariantViolation("local degree does not divide branch order");
    p.ramification = f.branch_order / p.local_degree;
    f.points.push_back(std::move(p));
  }
  return f;
}

// Stabilizer a<g_j>a^-1 of the C-point a<g_j>.
inline Subgroup point_stabilizer(const RamificationDatum& d, std::size_t j, Element a) {
  return Subgroup::generate(d.group, {d.group->conj(d.branch.at(j), a)});
}

// Union of all point stabilizers of C: conjugates of the cyclic groups <g_j>.
inline std::vector<char> stabilizer_union(const RamificationDatum& d) {
  const auto& g = *d.group;
  std::vector<char> in(g.order(), 0);
  for (auto gj : d.branch)
    for (auto a : g.elements()) {
      Element c = g.conj(gj, a);
      for (Element p = c;; p = g.mul(p, c)) {
        in[p.index] = 1;
        if (p == g.identity()) break;
      }
    }
  return in;
}

struct FreenessCheck {
  bool free = false;
  std::vector<Element> shared;  // nontrivial elements fixing points on both curves
};

inline FreenessCheck check_free_diagonal(const RamificationDatum& d1, const RamificationDatum& d2) {
  if (d1.group != d2.group) throw UsageError("data live over different groups");
  auto s1 = stabilizer_union(d1), s2 = stabilizer_union(d2);
  FreenessCheck out;
  for (std::size_t i = 1; i < s1.size(); ++i)
    if (s1[i] && s2[i]) out.shared.push_back(Element{static_cast<std::uint32_t>(i)});
  out.free = out.shared.empty();
  return out;
}

struct SurfaceInvariants {
  long long chiO = 0, e = 0, Ksquared = 0, q = 0, pg = 0, rankK0 = 0;
  long long g1 = 0, g2 = 0;
};

inline SurfaceInvariants surface_invariants(const RamificationDatum& d1, const RamificationDatum& d2) {
  if (!check_free_diagonal(d1, d2).free) throw UsageError("diagonal action is not free");
  SurfaceInvariants s;
  s.g1 = curve_genus(d1);
  s.g2 = curve_genus(d2);
  long long n = static_cast<long long>(d1.group->order());
  long long num = (s.g1 - 1) * (s.g2 - 1);
  if (num % n != 0) throw InvariantViolation("chi(O) is not integral");
  s.chiO = num / n;
  s.e = 4 * num / n;
  s.Ksquared = 8 * s.chiO;
  auto whole = Subgroup::whole(d1.group);
  s.q = quotient_genus(d1, whole) + quotient_genus(d2, whole);
  s.pg = s.chiO - 1 + s.q;
  s.rankK0 = s.e;
  return s;
}

}  // namespace xcoll::covering
