#pragma once

#include <cctype>
#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "xcoll/core/error.hpp"

namespace xcoll::groups {

// Permutation of {0..degree-1}; products compose right to left: (p*q)(i) = p(q(i)).
class Perm {
 public:
  Perm() = default;
  explicit Perm(std::size_t degree) : img_(degree) {
    for (std::size_t i = 0; i < degree; ++i) img_[i] = static_cast<std::uint8_t>(i);
  }
  static Perm from_images(std::vector<std::uint8_t> img) {
    Perm p;
    p.img_ = std::move(img);
    return p;
  }

  std::size_t degree() const { return img_.size(); }
  std::size_t operator()(std::size_t i) const { return img_[i]; }
  const std::vector<std::uint8_t>& images() const { return img_; }

  friend Perm operator*(const Perm& p, const Perm& q) {
    if (p.degree() != q.degree()) throw UsageError("permutation degree mismatch");
    Perm r(p.degree());
    for (std::size_t i = 0; i < p.degree(); ++i) r.img_[i] = p.img_[q.img_[i]];
    return r;
  }
  Perm inverse() const {
    Perm r(degree());
    for (std::size_t i = 0; i < degree(); ++i) r.img_[img_[i]] = static_cast<std::uint8_t>(i);
    return r;
  }
  bool is_identity() const {
    for (std::size_t i = 0; i < degree(); ++i)
      if (img_[i] != i) return false;
    return true;
  }
  int sign() const {
    std::vector<char> seen(degree(), 0);
    int s = 1;
    for (std::size_t i = 0; i < degree(); ++i) {
      if (seen[i]) continue;
      std::size_t len = 0;
      for (std::size_t j = i; !seen[j]; j = img_[j]) {
        seen[j] = 1;
        ++len;
      }
      if (len % 2 == 0) s = -s;
    }
    return s;
  }

  // Cycle notation with 1-based points, e.g. "(12)(34)"; identity is "()".
  std::string cycles() const {
    std::string out;
    std::vector<char> seen(degree(), 0);
    for (std::size_t i = 0; i < degree(); ++i) {
      if (seen[i] || img_[i] == i) continue;
      out += '(';
      for (std::size_t j = i; !seen[j]; j = img_[j]) {
        seen[j] = 1;
        out += point_name(j);
      }
      out += ')';
    }
    return out.empty() ? "()" : out;
  }

  // Parse a product of cycles such as "(12)(34)" or "()" (degree <= 9, 1-based digits).
  static Perm parse_cycles(std::string_view text, std::size_t degree) {
    Perm result(degree);
    std::size_t i = 0;
    auto skip = [&] {
      while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    };
    skip();
    if (text.substr(i) == "1" || text.substr(i) == "id") return result;
    while (i < text.size()) {
      if (text[i] != '(') throw UsageError("expected '(' in cycle notation: " + std::string(text));
      ++i;
      std::vector<std::size_t> cyc;
      while (i < text.size() && text[i] != ')') {
        char c = text[i++];
        if (std::isspace(static_cast<unsigned char>(c)) || c == ',') continue;
        if (!std::isdigit(static_cast<unsigned char>(c)) || c == '0')
          throw UsageError("bad point in cycle notation: " + std::string(text));
        std::size_t pt = static_cast<std::size_t>(c - '1');
        if (pt >= degree) throw UsageError("point exceeds degree in: " + std::string(text));
        for (auto q : cyc)
          if (q == pt) throw UsageError("repeated point in cycle: " + std::string(text));
        cyc.push_back(pt);
      }
      if (i >= text.size()) throw UsageError("unterminated cycle: " + std::string(text));
      ++i;
      Perm c(degree);
      for (std::size_t k = 0; k < cyc.size(); ++k)
        c.img_[cyc[k]] = static_cast<std::uint8_t>(cyc[(k + 1) % cyc.size()]);
      result = result * c;
      skip();
    }
    return result;
  }

  auto operator<=>(const Perm&) const = default;

 private:
  static char point_name(std::size_t j) { return static_cast<char>('1' + j); }
  std::vector<std::uint8_t> img_;
};

}  // namespace xcoll::groups
