#pragma once

#include <numeric>
#include <vector>

#include "xcoll/groups/subgroup.hpp"

namespace xcoll::groups {

// Homomorphism H -> mu_n, stored as exponents mod n aligned with H.elements().
struct Character {
  int modulus = 1;
  std::vector<int> values;
};

// Exponent of H/[H,H].
inline int abelianization_exponent(const Subgroup& h) {
  Subgroup c = h.commutator_subgroup();
  const auto& g = *h.group();
  int e = 1;
  for (auto a : h.elements()) {
    int k = 1;
    for (Element p = a; !c.contains(p); p = g.mul(p, a)) ++k;
    e = std::lcm(e, k);
  }
  return e;
}

inline std::size_t abelianization_order(const Subgroup& h) { return h.order() / h.commutator_subgroup().order(); }

// All homomorphisms H -> mu_n. With modulus 0 the exponent of the abelianization is used,
// which makes the count equal |H/[H,H]|.
inline std::vector<Character> character_group(const Subgroup& h, int modulus = 0) {
  int n = modulus > 0 ? modulus : abelianization_exponent(h);
  const auto& g = *h.group();
  const auto& gens = h.generators();
  const auto& elts = h.elements();
  std::vector<std::size_t> pos(g.order(), SIZE_MAX);
  for (std::size_t i = 0; i < elts.size(); ++i) pos[elts[i].index] = i;

  // BFS tree of H over its generators
  std::vector<std::size_t> parent(elts.size(), SIZE_MAX), via(elts.size(), 0), order{pos[0]};
  parent[pos[0]] = pos[0];
  for (std::size_t i = 0; i < order.size(); ++i)
    for (std::size_t s = 0; s < gens.size(); ++s) {
      std::size_t d = pos[g.mul(elts[order[i]], gens[s]).index];
      if (parent[d] == SIZE_MAX) {
        parent[d] = order[i];
        via[d] = s;
        order.push_back(d);
      }
    }

  std::vector<Character> out;
  std::vector<int> assign(gens.size(), 0);
  while (true) {
    std::vector<int> val(elts.size(), 0);
    for (std::size_t k = 1; k < order.size(); ++k) val[order[k]] = (val[parent[order[k]]] + assign[via[order[k]]]) % n;
    bool ok = true;
    for (std::size_t i = 0; i < elts.size() && ok; ++i)
      for (std::size_t s = 0; s < gens.size() && ok; ++s)
        if (val[pos[g.mul(elts[i], gens[s]).index]] != (val[i] + assign[s]) % n) ok = false;
    if (ok) out.push_back(Character{n, val});
    std::size_t k = 0;
    while (k < assign.size() && ++assign[k] == n) assign[k++] = 0;
    if (k == assign.size()) break;
  }
  return out;
}

inline bool is_multiplicative(const Subgroup& h, const Character& chi) {
  const auto& g = *h.group();
  const auto& elts = h.elements();
  std::vector<std::size_t> pos(g.order(), SIZE_MAX);
  for (std::size_t i = 0; i < elts.size(); ++i) pos[elts[i].index] = i;
  for (std::size_t i = 0; i < elts.size(); ++i)
    for (std::size_t j = 0; j < elts.size(); ++j)
      if (chi.values[pos[g.mul(elts[i], elts[j]).index]] != (chi.values[i] + chi.values[j]) % chi.modulus) return false;
  return true;
}

}  // namespace xcoll::groups
