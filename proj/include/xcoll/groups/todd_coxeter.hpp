#pragma once

#include <cstdint>
#include <vector>

#include "xcoll/core/error.hpp"

namespace xcoll::groups {

// Letters encode generator g as column 2g and its inverse as 2g+1.
using Letters = std::vector<int>;

inline int inverse_letter(int c) { return c ^ 1; }

// HLT coset enumeration over the trivial subgroup. Returns the coset table restricted to
// generator columns (entry [c][g] = c·g) with coset 0 the identity, live cosets renumbered
// in order of first appearance.
inline std::vector<std::vector<std::int32_t>> enumerate_cosets(int num_gens, const std::vector<Letters>& relators,
                                                              std::size_t order_bound) {
  const int cols = 2 * num_gens;
  const std::size_t max_defs = order_bound * 100 + 1000;
  std::vector<std::vector<std::int32_t>> table;
  std::vector<std::int32_t> parent;  // coincidence forwarding, parent[c] == c iff live
  table.reserve(1024);
  auto new_coset = [&]() -> std::int32_t {
    if (table.size() >= max_defs)
      throw UsageError("coset enumeration exceeds bound of " + std::to_string(order_bound) + " elements");
    table.emplace_back(cols, -1);
    parent.push_back(static_cast<std::int32_t>(parent.size()));
    return static_cast<std::int32_t>(table.size() - 1);
  };
  new_coset();

  auto rep = [&](std::int32_t k) {
    std::int32_t r = k;
    while (parent[r] != r) r = parent[r];
    while (parent[k] != r) {
      std::int32_t n = parent[k];
      parent[k] = r;
      k = n;
    }
    return r;
  };

  std::vector<std::int32_t> queue;
  auto merge = [&](std::int32_t k, std::int32_t l) {
    std::int32_t a = rep(k), b = rep(l);
    if (a == b) return;
    std::int32_t lo = std::min(a, b), hi = std::max(a, b);
    parent[hi] = lo;
    queue.push_back(hi);
  };
  auto coincidence = [&](std::int32_t a, std::int32_t b) {
    queue.clear();
    merge(a, b);
    for (std::size_t i = 0; i < queue.size(); ++i) {
      std::int32_t g = queue[i];
      for (int x = 0; x < cols; ++x) {
        std::int32_t d = table[g][x];
        if (d < 0) continue;
        table[d][inverse_letter(x)] = -1;
        std::int32_t mu = rep(g), nu = rep(d);
        if (table[mu][x] >= 0) {
          merge(nu, table[mu][x]);
        } else if (table[nu][inverse_letter(x)] >= 0) {
          merge(mu, table[nu][inverse_letter(x)]);
        } else {
          table[mu][x] = nu;
          table[nu][inverse_letter(x)] = mu;
        }
      }
    }
  };
  auto define = [&](std::int32_t c, int x) {
    std::int32_t d = new_coset();
    table[c][x] = d;
    table[d][inverse_letter(x)] = c;
  };
  auto scan_and_fill = [&](std::int32_t a, const Letters& w) {
    std::int32_t f = a, b = a;
    long i = 0, j = static_cast<long>(w.size()) - 1;
    while (true) {
      while (i <= j && table[f][w[i]] >= 0) f = table[f][w[i++]];
      if (i > j) {
        if (f != b) coincidence(f, b);
        return;
      }
      while (j >= i && table[b][inverse_letter(w[j])] >= 0) b = table[b][inverse_letter(w[j--])];
      if (j < i) {
        coincidence(f, b);
        return;
      }
      if (i == j) {
        table[f][w[i]] = b;
        table[b][inverse_letter(w[i])] = f;
        return;
      }
      define(f, w[i]);
    }
  };

  for (std::int32_t a = 0; a < static_cast<std::int32_t>(table.size()); ++a) {
    if (parent[a] != a) continue;
    for (const auto& r : relators) {
      if (r.empty()) continue;
      scan_and_fill(a, r);
      if (parent[a] != a) break;
    }
    if (parent[a] != a) continue;
    for (int x = 0; x < cols; ++x)
      if (table[a][x] < 0) define(a, x);
  }

  std::vector<std::int32_t> renum(table.size(), -1);
  std::int32_t live = 0;
  for (std::size_t c = 0; c < table.size(); ++c)
    if (parent[c] == static_cast<std::int32_t>(c)) renum[c] = live++;
  if (static_cast<std::size_t>(live) > order_bound)
    throw UsageError("presented group exceeds bound of " + std::to_string(order_bound) + " elements");
  std::vector<std::vector<std::int32_t>> out(static_cast<std::size_t>(live), std::vector<std::int32_t>(num_gens));
  for (std::size_t c = 0; c < table.size(); ++c) {
    if (renum[c] < 0) continue;
    for (int g = 0; g < num_gens; ++g) {
      std::int32_t d = table[c][2 * g];
      if (d < 0 || renum[rep(d)] < 0) throw InvariantViolation("incomplete coset table");
      out[renum[c]][g] = renum[rep(d)];
    }
  }
  return out;
}

}  // namespace xcoll::groups
