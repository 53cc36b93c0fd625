#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "xcoll/core/error.hpp"
#include "xcoll/core/intmath.hpp"

namespace xcoll::surface {

using intmath::Int;

struct CohTable {
  std::string curve;
  std::string bundle;
  Int h0 = 0, h1 = 0;
  Int deg = 0;
  long long genus = 0;
  bool consistent() const { return h0 >= 0 && h1 >= 0 && h0 - h1 == deg - genus + 1; }
};

inline CohTable structure_sheaf_table(const std::string& curve, long long g) { return {curve, "O", 1, g, 0, g}; }

struct KunnethDims {
  Int h0 = 0, h1 = 0, h2 = 0;
  bool zero() const { return h0 == 0 && h1 == 0 && h2 == 0; }
  bool operator==(const KunnethDims&) const = default;
};

inline KunnethDims kunneth_dims(const CohTable& a, const CohTable& b) {
  using namespace intmath;
  return {mul(a.h0, b.h0), add(mul(a.h0, b.h1), mul(a.h1, b.h0)), mul(a.h1, b.h1)};
}

struct NumericalClass {
  Int i = 0, j = 0;
};

inline Int euler_numerical(NumericalClass c) { return intmath::mul(c.i - 1, c.j - 1); }

// (a,b).(c,d) = ad + bc on numerical classes O(a,b); K = O(2,2).
inline Int intersect(NumericalClass a, NumericalClass b) { return a.i * b.j + a.j * b.i; }

struct LatticeSelfcheck {
  Int square_20 = 0, square_02 = 0, pairing = 0;
  bool riemann_roch = true;
  bool ok() const { return square_20 == 0 && square_02 == 0 && pairing == 4 && riemann_roch; }
};

inline LatticeSelfcheck lattice_selfcheck(int range = 6) {
  LatticeSelfcheck r;
  r.square_20 = intersect({2, 0}, {2, 0});
  r.square_02 = intersect({0, 2}, {0, 2});
  r.pairing = intersect({2, 0}, {0, 2});
  NumericalClass K{2, 2};
  for (int i = -range; i <= range; ++i)
    for (int j = -range; j <= range; ++j) {
      NumericalClass d{i, j};
      Int twice = intersect(d, d) - intersect(d, K);
      if (twice % 2 != 0 || euler_numerical(d) - euler_numerical({0, 0}) != twice / 2) r.riemann_roch = false;
    }
  return r;
}

enum class Equivariance { Direct, PairedObstruction, AbstractPaired };

inline const char* equivariance_name(Equivariance e) {
  switch (e) {
    case Equivariance::Direct:
      return "direct";
    case Equivariance::PairedObstruction:
      return "paired";
    case Equivariance::AbstractPaired:
      return "abstract";
  }
  return "?";
}

struct EquivarianceCert {
  Equivariance kind = Equivariance::Direct;
  bool verified = false;       // machine evidence holds (or, for abstract, the citation is present)
  std::string detail;
  std::string citation;        // required for abstract certificates
};

// Formal combination of named curve bundles.
using Combination = std::map<std::string, Int>;

struct SequenceMember {
  std::string label;
  Combination c1, c2;
  int twist = 0;
  EquivarianceCert equivariance;
};

// Known cohomology of single named bundles on one curve.
struct CurveSide {
  std::string curve;
  long long genus = 0;
  std::map<std::string, CohTable> acyclic;  // bundles with a valid acyclicity certificate
  std::map<std::string, CohTable> tables;   // any other supplied tables (possibly nonzero)
  std::map<std::string, Int> degrees;       // known degrees; absent for abstract bundles
};

struct SurfaceData {
  long long q = 0, pg = 0;
  Int chi_O = 1;
};

struct PairVerdict {
  std::size_t later = 0, earlier = 0;
  std::string c1, c2;
  std::optional<CohTable> t1, t2;
  std::optional<KunnethDims> dims;
  std::optional<Int> chi;
  bool ok = false;
  std::string reason;
};

struct EndoVerdict {
  std::size_t index = 0;
  KunnethDims dims;
  bool ok = false;
};

struct ExceptionalSequenceReport {
  std::vector<SequenceMember> members;
  std::vector<PairVerdict> pairs;
  std::vector<EndoVerdict> endos;
  std::vector<std::string> equivariance_failures;
  std::vector<std::string> failing_pairs;
  bool verdict = false;
};

inline Combination combination_difference(const Combination& a, const Combination& b) {
  Combination out = a;
  for (const auto& [k, v] : b) {
    Int& x = out[k];
    x = intmath::sub(x, v);
    if (x == 0) out.erase(k);
  }
  return out;
}

inline std::string render_combination(const Combination& c) {
  if (c.empty()) return "O";
  std::string out;
  for (const auto& [k, v] : c) {
    Int a = v < 0 ? -v : v;
    if (out.empty())
      out += v < 0 ? "-" : "";
    else
      out += v < 0 ? " - " : " + ";
    out += (a != 1 ? std::to_string(a) : std::string()) + k;
  }
  return out;
}

// Table for a difference bundle on one curve: O, or a single acyclic bundle.
inline std::optional<CohTable> side_table(const CurveSide& s, const Combination& c) {
  if (c.empty()) return structure_sheaf_table(s.curve, s.genus);
  if (c.size() == 1 && c.begin()->second == 1) {
    const auto& name = c.begin()->first;
    if (auto it = s.acyclic.find(name); it != s.acyclic.end()) return it->second;
    if (auto it = s.tables.find(name); it != s.tables.end()) return it->second;
  }
  return std::nullopt;
}

inline std::optional<Int> side_chi(const CurveSide& s, const Combination& c) {
  Int deg = 0;
  for (const auto& [k, v] : c) {
    auto it = s.degrees.find(k);
    if (it == s.degrees.end()) return std::nullopt;
    deg = intmath::add(deg, intmath::mul(v, it->second));
  }
  return deg - s.genus + 1;
}

inline ExceptionalSequenceReport verify_collection(const std::vector<SequenceMember>& seq, const CurveSide& s1,
                                                   const CurveSide& s2, const SurfaceData& surf) {
  ExceptionalSequenceReport r;
  r.members = seq;
  bool ok = true;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    const auto& e = seq[i].equivariance;
    if (!e.verified || (e.kind == Equivariance::AbstractPaired && e.citation.empty())) {
      r.equivariance_failures.push_back(seq[i].label + ": " + e.detail);
      ok = false;
    }
  }
  // Hom(E_i, E_j) for i > j is the cohomology of E_j - E_i
  for (std::size_t i = 0; i < seq.size(); ++i)
    for (std::size_t j = 0; j < i; ++j) {
      PairVerdict p;
      p.later = i;
      p.earlier = j;
      Combination d1 = combination_difference(seq[j].c1, seq[i].c1);
      Combination d2 = combination_difference(seq[j].c2, seq[i].c2);
      p.c1 = render_combination(d1);
      p.c2 = render_combination(d2);
      p.t1 = side_table(s1, d1);
      p.t2 = side_table(s2, d2);
      auto x1 = side_chi(s1, d1), x2 = side_chi(s2, d2);
      if ((x1 && *x1 == 0) || (x2 && *x2 == 0))
        p.chi = 0;
      else if (x1 && x2)
        p.chi = intmath::mul(*x1, *x2);
      bool zero1 = p.t1 && p.t1->h0 == 0 && p.t1->h1 == 0;
      bool zero2 = p.t2 && p.t2->h0 == 0 && p.t2->h1 == 0;
      if (p.t1 && p.t2)
        p.dims = kunneth_dims(*p.t1, *p.t2);
      else if (zero1 || zero2)
        p.dims = KunnethDims{};  // a zero factor annihilates whatever the other side is
      p.ok = p.dims && p.dims->zero();
      if (p.ok && p.chi && *p.chi != 0) {
        p.ok = false;
        p.reason = "vanishing contradicts chi = " + std::to_string(*p.chi);
      } else if (p.ok) {
        p.reason = "annihilated by an acyclic factor";
      } else if (p.dims) {
        p.reason = "Kunneth dimensions (" + std::to_string(p.dims->h0) + "," + std::to_string(p.dims->h1) + "," +
                   std::to_string(p.dims->h2) + ") do not vanish";
      } else {
        p.reason = "no acyclic factor and no table for " + (p.t1 ? p.c2 : p.c1);
      }
      if (!p.ok) {
        ok = false;
        r.failing_pairs.push_back("Hom(" + seq[i].label + ", " + seq[j].label + ")");
      }
      r.pairs.push_back(std::move(p));
    }
  for (std::size_t i = 0; i < seq.size(); ++i) {
    EndoVerdict e;
    e.index = i;
    e.dims = {1, surf.q, surf.pg};
    e.ok = surf.q == 0 && surf.pg == 0 && surf.chi_O == 1;
    if (!e.ok) {
      ok = false;
      r.failing_pairs.push_back("End(" + seq[i].label + ")");
    }
    r.endos.push_back(e);
  }
  r.verdict = ok;
  return r;
}

}  // namespace xcoll::surface
