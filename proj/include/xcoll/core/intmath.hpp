#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "xcoll/core/error.hpp"

namespace xcoll::intmath {

using Int = std::int64_t;
using Vec = std::vector<Int>;
using Matrix = std::vector<Vec>;

inline Int add(Int a, Int b) {
  Int r;
  if (__builtin_add_overflow(a, b, &r)) throw OverflowError("int64 overflow in addition");
  return r;
}
inline Int sub(Int a, Int b) {
  Int r;
  if (__builtin_sub_overflow(a, b, &r)) throw OverflowError("int64 overflow in subtraction");
  return r;
}
inline Int mul(Int a, Int b) {
  Int r;
  if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("int64 overflow in multiplication");
  return r;
}
inline Int mod(Int a, Int n) {
  Int r = a % n;
  return r < 0 ? r + n : r;
}
// floor division, n > 0
inline Int floordiv(Int a, Int n) { return (a - mod(a, n)) / n; }

struct Egcd {
  Int g, s, t;  // s*a + t*b = g >= 0
};

inline Egcd egcd(Int a, Int b) {
  Int old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    Int q = old_r / r;
    Int tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = sub(old_s, mul(q, s));
    old_s = s;
    s = tmp;
    tmp = sub(old_t, mul(q, t));
    old_t = t;
    t = tmp;
  }
  if (old_r < 0) return {-old_r, -old_s, -old_t};
  return {old_r, old_s, old_t};
}

inline Matrix identity(std::size_t n) {
  Matrix m(n, Vec(n, 0));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

inline Vec mat_vec(const Matrix& a, const Vec& v) {
  Vec out(a.size(), 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j)
      if (a[i][j] != 0 && v[j] != 0) out[i] = add(out[i], mul(a[i][j], v[j]));
  return out;
}

inline Matrix mat_mul(const Matrix& a, const Matrix& b) {
  std::size_t n = a.size(), m = b.empty() ? 0 : b[0].size();
  Matrix out(n, Vec(m, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < b.size(); ++k)
      if (a[i][k] != 0)
        for (std::size_t j = 0; j < m; ++j)
          if (b[k][j] != 0) out[i][j] = add(out[i][j], mul(a[i][k], b[k][j]));
  return out;
}

// U * A * V = D with U, V unimodular and D diagonal, d_i | d_{i+1}.
struct SmithForm {
  Matrix D, U, V;
  std::size_t rank = 0;
  Int diag(std::size_t i) const { return i < D.size() && i < D[i].size() ? D[i][i] : 0; }
};

namespace detail {

inline void row_combine(Matrix& m, std::size_t i, std::size_t j, Int a, Int b, Int c, Int d) {
  // (row_i, row_j) <- (a row_i + b row_j, c row_i + d row_j)
  for (std::size_t k = 0; k < m[i].size(); ++k) {
    Int x = m[i][k], y = m[j][k];
    if (x == 0 && y == 0) continue;
    m[i][k] = add(mul(a, x), mul(b, y));
    m[j][k] = add(mul(c, x), mul(d, y));
  }
}

inline void col_combine(Matrix& m, std::size_t i, std::size_t j, Int a, Int b, Int c, Int d) {
  for (auto& row : m) {
    Int x = row[i], y = row[j];
    if (x == 0 && y == 0) continue;
    row[i] = add(mul(a, x), mul(b, y));
    row[j] = add(mul(c, x), mul(d, y));
  }
}

}  // namespace detail

inline SmithForm smith_normal_form(const Matrix& a) {
  using detail::col_combine;
  using detail::row_combine;
  SmithForm sf;
  std::size_t rows = a.size(), cols = rows ? a[0].size() : 0;
  sf.D = a;
  sf.U = identity(rows);
  sf.V = identity(cols);
  Matrix& d = sf.D;
  std::size_t t = 0;
  while (t < rows && t < cols) {
    // pivot: smallest nonzero |entry| in the trailing block
    std::size_t pi = rows, pj = cols;
    Int best = 0;
    for (std::size_t i = t; i < rows; ++i)
      for (std::size_t j = t; j < cols; ++j)
        if (d[i][j] != 0 && (best == 0 || std::llabs(d[i][j]) < best)) {
          best = std::llabs(d[i][j]);
          pi = i;
          pj = j;
        }
    if (best == 0) break;
    std::swap(d[t], d[pi]);
    std::swap(sf.U[t], sf.U[pi]);
    for (auto& row : d) std::swap(row[t], row[pj]);
    for (auto& row : sf.V) std::swap(row[t], row[pj]);

    bool dirty = true;
    while (dirty) {
      dirty = false;
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (d[i][t] == 0) continue;
        Int p = d[t][t], x = d[i][t];
        if (x % p == 0) {
          Int q = x / p;
          row_combine(d, t, i, 1, 0, -q, 1);
          row_combine(sf.U, t, i, 1, 0, -q, 1);
        } else {
          auto [g, s, u] = egcd(p, x);
          row_combine(d, t, i, s, u, -x / g, p / g);
          row_combine(sf.U, t, i, s, u, -x / g, p / g);
        }
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (d[t][j] == 0) continue;
        Int p = d[t][t], x = d[t][j];
        if (x % p == 0) {
          Int q = x / p;
          col_combine(d, t, j, 1, 0, -q, 1);
          col_combine(sf.V, t, j, 1, 0, -q, 1);
        } else {
          auto [g, s, u] = egcd(p, x);
          col_combine(d, t, j, s, u, -x / g, p / g);
          col_combine(sf.V, t, j, s, u, -x / g, p / g);
          dirty = true;  // column step may refill the pivot column
        }
      }
      for (std::size_t i = t + 1; i < rows && !dirty; ++i)
        if (d[i][t] != 0) dirty = true;
      if (!dirty) {
        // divisibility: pull in any trailing entry the pivot does not divide
        for (std::size_t i = t + 1; i < rows && !dirty; ++i)
          for (std::size_t j = t + 1; j < cols; ++j)
            if (d[i][j] % d[t][t] != 0) {
              row_combine(d, t, i, 1, 1, 0, 1);
              row_combine(sf.U, t, i, 1, 1, 0, 1);
              dirty = true;
              break;
            }
      }
    }
    if (d[t][t] < 0) {
      for (auto& x : d[t]) x = -x;
      for (auto& x : sf.U[t]) x = -x;
    }
    ++t;
  }
  sf.rank = t;
  return sf;
}

// Some x with A x = b (mod n), or nothing.
inline std::optional<Vec> solve_mod(const Matrix& a, const Vec& b, Int n) {
  std::size_t rows = a.size();
  std::size_t cols = rows ? a[0].size() : 0;
  if (rows == 0) return Vec{};
  SmithForm sf = smith_normal_form(a);
  Vec ub = mat_vec(sf.U, b);
  Vec y(cols, 0);
  for (std::size_t i = 0; i < rows; ++i) {
    Int rhs = mod(ub[i], n);
    Int di = i < sf.rank ? mod(sf.D[i][i], n) : 0;
    if (i >= sf.rank || di == 0) {
      if (rhs != 0) return std::nullopt;
      continue;
    }
    Int g = std::gcd(di, n);
    if (rhs % g != 0) return std::nullopt;
    Int m = n / g;
    Int inv = mod(egcd(di / g, m).s, m);
    y[i] = mod(mul(rhs / g, inv), m);
  }
  Vec x = mat_vec(sf.V, y);
  for (auto& v : x) v = mod(v, n);
  return x;
}

// Valuations (each < k) of the nonzero elementary divisors of a matrix over Z/p^k.
// Entries are taken mod p^k; row operations only, since clearing a pivot row never
// changes the trailing block.
inline std::vector<int> local_elementary_valuations(std::vector<std::vector<int>> m, int p, int k) {
  int q = 1;
  for (int i = 0; i < k; ++i) q *= p;
  auto val = [&](int x) {
    if (x == 0) return k;
    int v = 0;
    while (x % p == 0) {
      x /= p;
      ++v;
    }
    return v;
  };
  auto inv_unit = [&](int u) { return static_cast<int>(mod(egcd(u, q).s, q)); };
  std::size_t rows = m.size(), cols = rows ? m[0].size() : 0;
  for (auto& r : m)
    for (auto& x : r) x = static_cast<int>(mod(x, q));
  std::vector<int> out;
  std::size_t t = 0;
  std::vector<char> col_done(cols, 0);
  while (t < rows) {
    int best = k;
    std::size_t pi = rows, pj = cols;
    for (std::size_t i = t; i < rows && best > 0; ++i)
      for (std::size_t j = 0; j < cols; ++j) {
        if (col_done[j] || m[i][j] == 0) continue;
        int v = val(m[i][j]);
        if (v < best) {
          best = v;
          pi = i;
          pj = j;
          if (v == 0) break;
        }
      }
    if (best == k) break;
    std::swap(m[t], m[pi]);
    int pv = 1;
    for (int i = 0; i < best; ++i) pv *= p;
    int unit = m[t][pj] / pv;
    int uinv = inv_unit(unit);
    for (auto& x : m[t]) x = static_cast<int>(mod(static_cast<Int>(x) * uinv, q));
    for (std::size_t i = t + 1; i < rows; ++i) {
      int x = m[i][pj];
      if (x == 0) continue;
      int f = x / pv;
      for (std::size_t j = 0; j < cols; ++j)
        if (m[t][j] != 0) m[i][j] = static_cast<int>(mod(m[i][j] - static_cast<Int>(f) * m[t][j], q));
    }
    col_done[pj] = 1;
    out.push_back(best);
    ++t;
  }
  return out;
}

// Integer lattice kept in row echelon form (positive pivots, strictly increasing pivot columns).
class Lattice {
 public:
  explicit Lattice(std::size_t dim = 0) : dim_(dim) {}

  std::size_t dim() const { return dim_; }
  std::size_t rank() const { return rows_.size(); }

  void add(Vec v) {
    check_dim(v);
    std::size_t i = 0;
    while (true) {
      std::size_t lead = leading(v);
      if (lead == dim_) return;
      while (i < rows_.size() && pivots_[i] < lead) ++i;
      if (i == rows_.size() || pivots_[i] > lead) {
        if (v[lead] < 0)
          for (auto& x : v) x = -x;
        rows_.insert(rows_.begin() + static_cast<long>(i), std::move(v));
        pivots_.insert(pivots_.begin() + static_cast<long>(i), lead);
        reduce_above(i);
        return;
      }
      Vec& r = rows_[i];
      Int a = r[lead], b = v[lead];
      if (b % a == 0) {
        axpy(v, -(b / a), r);
      } else {
        auto [g, s, t] = egcd(a, b);
        Vec nr(dim_);
        for (std::size_t j = 0; j < dim_; ++j) nr[j] = intmath::add(mul(s, r[j]), mul(t, v[j]));
        Vec nv(dim_);
        for (std::size_t j = 0; j < dim_; ++j) nv[j] = sub(mul(a / g, v[j]), mul(b / g, r[j]));
        r = std::move(nr);
        v = std::move(nv);
        reduce_above(i);
      }
      ++i;
    }
  }

  bool contains(Vec v) const {
    check_dim(v);
    std::size_t i = 0;
    while (true) {
      std::size_t lead = leading(v);
      if (lead == dim_) return true;
      while (i < rows_.size() && pivots_[i] < lead) ++i;
      if (i == rows_.size() || pivots_[i] > lead) return false;
      const Vec& r = rows_[i];
      if (v[lead] % r[lead] != 0) return false;
      axpy(v, -(v[lead] / r[lead]), r);
      ++i;
    }
  }

  const Matrix& basis() const { return rows_; }

 private:
  void check_dim(const Vec& v) const {
    if (v.size() != dim_) throw UsageError("lattice vector has wrong dimension");
  }
  std::size_t leading(const Vec& v) const {
    for (std::size_t j = 0; j < dim_; ++j)
      if (v[j] != 0) return j;
    return dim_;
  }
  static void axpy(Vec& v, Int c, const Vec& r) {
    if (c == 0) return;
    for (std::size_t j = 0; j < v.size(); ++j)
      if (r[j] != 0) v[j] = intmath::add(v[j], mul(c, r[j]));
  }
  void reduce_above(std::size_t i) {
    std::size_t c = pivots_[i];
    Int p = rows_[i][c];
    for (std::size_t k = 0; k < i; ++k) {
      Int x = rows_[k][c];
      if (x == 0) continue;
      Int q = floordiv(x, p);
      axpy(rows_[k], -q, rows_[i]);
    }
  }

  std::size_t dim_;
  Matrix rows_;
  std::vector<std::size_t> pivots_;
};

}  // namespace xcoll::intmath
