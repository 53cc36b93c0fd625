#pragma once

#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "xcoll/cocycle/formula.hpp"
#include "xcoll/groups/character.hpp"
#include "xcoll/groups/finite_group.hpp"

namespace xcoll::cocycle {

using groups::Element;
using groups::GroupPtr;
using intmath::Int;

// mu_n-valued cochains with trivial action, stored as exponents mod n.
struct Cochain1 {
  GroupPtr group;
  int modulus = 4;
  std::vector<int> table;  // by element index

  int at(Element g) const { return table.at(g.index); }
  bool operator==(const Cochain1& o) const { return modulus == o.modulus && table == o.table; }
};

struct Cochain2 {
  GroupPtr group;
  int modulus = 4;
  std::vector<int> table;  // index g * |G| + h

  int at(Element g, Element h) const { return table.at(g.index * group->order() + h.index); }
  bool operator==(const Cochain2& o) const { return modulus == o.modulus && table == o.table; }
};

inline int modn(Int a, int n) { return static_cast<int>(intmath::mod(a, n)); }

inline Cochain1 constant1(GroupPtr g, int n, int value = 0) {
  std::size_t ord = g->order();
  return {std::move(g), n, std::vector<int>(ord, modn(value, n))};
}
inline Cochain2 trivial2(GroupPtr g, int n) {
  std::size_t ord = g->order();
  return {std::move(g), n, std::vector<int>(ord * ord, 0)};
}

inline Cochain1 character_cochain(GroupPtr g, const groups::Character& chi, int n) {
  if (n % chi.modulus != 0) throw UsageError("character modulus does not divide the cochain modulus");
  // a character of the whole group has values aligned with the element order
  Cochain1 b = constant1(g, n);
  for (std::size_t i = 0; i < chi.values.size(); ++i) b.table[i] = modn(static_cast<Int>(chi.values[i]) * (n / chi.modulus), n);
  return b;
}

// d(beta)(g,h) = beta(g) + beta(h) - beta(gh)
inline Cochain2 differential1(const Cochain1& b) {
  const auto& g = *b.group;
  Cochain2 e = trivial2(b.group, b.modulus);
  std::size_t n = g.order();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Element x{static_cast<std::uint32_t>(i)}, y{static_cast<std::uint32_t>(j)};
      e.table[i * n + j] = modn(static_cast<Int>(b.at(x)) + b.at(y) - b.at(g.mul(x, y)), b.modulus);
    }
  return e;
}

struct CocycleCheck {
  bool cocycle = true;
  std::size_t triples = 0;
  std::string first_failure;
};

// e(g,h) + e(gh,k) = e(h,k) + e(g,hk) for all triples; no normalization assumed.
inline CocycleCheck check_cocycle(const Cochain2& e) {
  const auto& g = *e.group;
  CocycleCheck r;
  std::size_t n = g.order();
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c) {
        ++r.triples;
        Element x{static_cast<std::uint32_t>(a)}, y{static_cast<std::uint32_t>(b)}, z{static_cast<std::uint32_t>(c)};
        int lhs = modn(static_cast<Int>(e.at(x, y)) + e.at(g.mul(x, y), z), e.modulus);
        int rhs = modn(static_cast<Int>(e.at(y, z)) + e.at(x, g.mul(y, z)), e.modulus);
        if (lhs != rhs && r.cocycle) {
          r.cocycle = false;
          r.first_failure = "(" + g.render(x) + ", " + g.render(y) + ", " + g.render(z) + ")";
        }
      }
  return r;
}
inline bool is_cocycle(const Cochain2& e) { return check_cocycle(e).cocycle; }

inline void same_space(const Cochain2& a, const Cochain2& b) {
  if (a.modulus != b.modulus) throw UsageError("cochain moduli differ");
  if (a.group != b.group) throw UsageError("cochains live on different groups");
}

inline Cochain2 multiply(const Cochain2& a, const Cochain2& b) {
  same_space(a, b);
  Cochain2 r = a;
  for (std::size_t i = 0; i < r.table.size(); ++i) r.table[i] = modn(a.table[i] + b.table[i], a.modulus);
  return r;
}
inline Cochain2 invert(const Cochain2& a) {
  Cochain2 r = a;
  for (auto& v : r.table) v = modn(-v, a.modulus);
  return r;
}
inline Cochain2 power(const Cochain2& a, int t) {
  Cochain2 r = a;
  for (auto& v : r.table) v = modn(static_cast<Int>(v) * t, a.modulus);
  return r;
}
inline bool is_trivial(const Cochain2& a) {
  return std::all_of(a.table.begin(), a.table.end(), [](int v) { return v == 0; });
}

// Solve d(beta) = e. beta is fixed on the BFS tree by beta(1) = e(1,1) and the generator
// values b_s via beta(g s) = beta(g) + beta(s) - e(g,s); every table entry then gives an
// affine equation in the b_s, solved mod n.
inline std::optional<Cochain1> is_coboundary(const Cochain2& e) {
  if (!is_cocycle(e)) throw UsageError("is_coboundary needs a 2-cocycle");
  const auto& g = *e.group;
  int n = e.modulus;
  std::size_t ord = g.order(), ng = g.num_generators();
  // affine form: coefficients on b_0..b_{ng-1}, constant last
  std::vector<intmath::Vec> form(ord, intmath::Vec(ng + 1, 0));
  std::vector<char> done(ord, 0);
  Element one = g.identity();
  form[one.index][ng] = e.at(one, one);
  done[one.index] = 1;
  std::vector<Element> queue{one};
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    Element a = queue[qi];
    for (std::size_t s = 0; s < ng; ++s) {
      Element gs = g.generator(s);
      Element b = g.mul(a, gs);
      if (done[b.index]) continue;
      done[b.index] = 1;
      auto f = form[a.index];
      f[s] = intmath::add(f[s], 1);
      f[ng] = intmath::mod(f[ng] - e.at(a, gs), n);
      form[b.index] = f;
      queue.push_back(b);
    }
  }
  // rows are (coefficients..., rhs); the generator values themselves must agree with form[s]
  std::vector<intmath::Vec> rows;
  auto push = [&](intmath::Vec f) {
    for (std::size_t c = 0; c < ng; ++c) f[c] = intmath::mod(f[c], n);
    f[ng] = intmath::mod(-f[ng], n);
    if (std::any_of(f.begin(), f.end(), [](Int v) { return v != 0; })) rows.push_back(std::move(f));
  };
  for (std::size_t s = 0; s < ng; ++s) {
    auto f = form[g.generator(s).index];
    f[s] = intmath::sub(f[s], 1);
    push(f);
  }
  for (std::size_t i = 0; i < ord; ++i)
    for (std::size_t j = 0; j < ord; ++j) {
      Element x{static_cast<std::uint32_t>(i)}, y{static_cast<std::uint32_t>(j)};
      intmath::Vec f(ng + 1, 0);
      for (std::size_t c = 0; c <= ng; ++c)
        f[c] = intmath::sub(intmath::add(form[i][c], form[j][c]), form[g.mul(x, y).index][c]);
      f[ng] = intmath::sub(f[ng], e.at(x, y));
      push(f);
    }
  std::sort(rows.begin(), rows.end());
  rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
  intmath::Vec sol(ng, 0);
  if (!rows.empty()) {
    intmath::Matrix M;
    intmath::Vec b;
    for (auto& r : rows) {
      b.push_back(r.back());
      r.pop_back();
      M.push_back(r);
    }
    auto s = intmath::solve_mod(M, b, n);
    if (!s) return std::nullopt;
    sol = *s;
  }
  Cochain1 beta = constant1(e.group, n);
  for (std::size_t i = 0; i < ord; ++i) {
    Int v = form[i][ng];
    for (std::size_t s = 0; s < ng; ++s) v = intmath::add(v, intmath::mul(form[i][s], sol[s]));
    beta.table[i] = modn(v, n);
  }
  if (!(differential1(beta) == e)) throw InvariantViolation("coboundary witness does not reproduce the cocycle");
  return beta;
}

inline int class_order(const Cochain2& e) {
  if (!is_cocycle(e)) throw UsageError("class_order needs a 2-cocycle");
  for (int t = 1; t <= e.modulus; ++t)
    if (is_coboundary(power(e, t))) return t;
  throw InvariantViolation("class order exceeds the modulus");
}

// Closed forms on standard exponents: (k,l,m) of g and (k',l',m') of h.
struct ObstructionFormula {
  std::string name;
  std::string text;
  int modulus = 4;
  std::string citation;
};

inline std::map<std::string, Int> standard_vars(const groups::FiniteGroup& g, Element a, const std::string& suffix) {
  static const char* names[] = {"k", "l", "m", "n", "o", "p"};
  const auto& ex = g.standard_exponents(a);
  if (ex.size() > 6) throw UsageError("standard form with more than six exponents");
  std::map<std::string, Int> v;
  for (std::size_t i = 0; i < ex.size(); ++i) v[names[i] + suffix] = ex[i];
  return v;
}

inline Cochain2 evaluate_formula(GroupPtr grp, const ObstructionFormula& f) {
  const auto& g = *grp;
  if (!g.has_standard_form()) throw UsageError("formula " + f.name + " needs a group with a standard form");
  Polynomial p(f.text);
  Cochain2 e = trivial2(grp, f.modulus);
  std::size_t n = g.order();
  for (std::size_t i = 0; i < n; ++i) {
    auto vi = standard_vars(g, Element{static_cast<std::uint32_t>(i)}, "");
    for (std::size_t j = 0; j < n; ++j) {
      auto v = vi;
      for (auto& kv : standard_vars(g, Element{static_cast<std::uint32_t>(j)}, "'")) v.insert(kv);
      e.table[i * n + j] = modn(p.eval(v), f.modulus);
    }
  }
  return e;
}

inline Cochain1 evaluate_formula1(GroupPtr grp, const ObstructionFormula& f) {
  const auto& g = *grp;
  if (!g.has_standard_form()) throw UsageError("formula " + f.name + " needs a group with a standard form");
  Polynomial p(f.text);
  Cochain1 b = constant1(grp, f.modulus);
  for (std::size_t i = 0; i < g.order(); ++i)
    b.table[i] = modn(p.eval(standard_vars(g, Element{static_cast<std::uint32_t>(i)}, "")), f.modulus);
  return b;
}

// H^2(G, Z/n) with trivial action, as a list of cyclic orders (invariant factors).
struct H2Invariants {
  int modulus = 0;
  std::vector<int> factors;  // invariant factors, each dividing the next; trivial ones dropped
  long long order() const {
    long long o = 1;
    for (int f : factors) o *= f;
    return o;
  }
  std::string render() const {
    if (factors.empty()) return "0";
    std::string out;
    for (std::size_t i = 0; i < factors.size();) {
      std::size_t j = i;
      while (j < factors.size() && factors[j] == factors[i]) ++j;
      if (!out.empty()) out += " + ";
      std::string z = "Z/" + std::to_string(factors[i]);
      out += j - i > 1 ? "(" + z + ")^" + std::to_string(j - i) : z;
      i = j;
    }
    return out;
  }
};

inline H2Invariants h2_invariants(GroupPtr grp, int n) {
  const auto& g = *grp;
  std::size_t ord = g.order();
  std::size_t m = ord - 1;
  if (m * m * m > 200000) throw UsageError("H^2 computation is limited to small groups");
  // normalized cochains: indices over non-identity elements
  std::vector<int> pos(ord, -1);
  std::vector<Element> nonid;
  for (auto a : g.elements())
    if (a != g.identity()) {
      pos[a.index] = static_cast<int>(nonid.size());
      nonid.push_back(a);
    }
  auto pair_index = [&](Element a, Element b) -> int {
    if (pos[a.index] < 0 || pos[b.index] < 0) return -1;
    return pos[a.index] * static_cast<int>(m) + pos[b.index];
  };
  std::vector<std::vector<int>> d1(m * m, std::vector<int>(m, 0));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      auto& row = d1[i * m + j];
      row[i] += 1;
      row[j] += 1;
      Element p = g.mul(nonid[i], nonid[j]);
      if (pos[p.index] >= 0) row[pos[p.index]] -= 1;
    }
  std::vector<std::vector<int>> d2(m * m * m, std::vector<int>(m * m, 0));
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b)
      for (std::size_t c = 0; c < m; ++c) {
        auto& row = d2[(a * m + b) * m + c];
        Element x = nonid[a], y = nonid[b], z = nonid[c];
        auto bump = [&](int idx, int s) {
          if (idx >= 0) row[idx] += s;
        };
        bump(pair_index(y, z), 1);
        bump(pair_index(g.mul(x, y), z), -1);
        bump(pair_index(x, g.mul(y, z)), 1);
        bump(pair_index(x, y), -1);
      }
  int c2 = static_cast<int>(m * m);
  // per prime power, then merge into invariant factors
  std::map<int, std::vector<int>> by_prime;  // p -> exponents
  int rest = n;
  for (int p = 2; p <= rest; ++p) {
    if (rest % p) continue;
    int k = 0;
    while (rest % p == 0) {
      rest /= p;
      ++k;
    }
    auto v1 = intmath::local_elementary_valuations(d1, p, k);
    auto v2 = intmath::local_elementary_valuations(d2, p, k);
    int s1 = static_cast<int>(v1.size()), s2 = static_cast<int>(v2.size());
    std::vector<int> ex(static_cast<std::size_t>(std::max(0, c2 - s1 - s2)), k);
    for (int w : v1)
      if (w > 0 && w < k) ex.push_back(w);
    for (int w : v2)
      if (w > 0 && w < k) ex.push_back(w);
    by_prime[p] = ex;
  }
  for (auto& [p, ex] : by_prime) std::sort(ex.begin(), ex.end(), std::greater<>());
  std::size_t len = 0;
  for (auto& [p, ex] : by_prime) len = std::max(len, ex.size());
  std::vector<int> factors(len, 1);
  for (auto& [p, ex] : by_prime)
    for (std::size_t i = 0; i < ex.size(); ++i)
      for (int t = 0; t < ex[i]; ++t) factors[i] *= p;
  std::sort(factors.begin(), factors.end());
  return {n, factors};
}

}  // namespace xcoll::cocycle
