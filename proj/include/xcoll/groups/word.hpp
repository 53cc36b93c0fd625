#pragma once

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "xcoll/core/error.hpp"

namespace xcoll::groups {

// Parsed group word. Evaluated against a concrete group by FiniteGroup::eval.
struct WordNode {
  enum class Kind { Identity, Symbol, Literal, Product, Power, Conjugate, Commutator };
  Kind kind = Kind::Identity;
  std::string text;  // symbol name or literal text
  long long exponent = 1;
  std::vector<WordNode> children;
};

// Split on top-level commas, respecting (), [] and <>.
inline std::vector<std::string> split_top_level(std::string_view s, char sep = ',') {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (char c : s) {
    if (c == '(' || c == '[' || c == '<') ++depth;
    if (c == ')' || c == ']' || c == '>') --depth;
    if (c == sep && depth == 0) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  for (auto& t : out) {
    std::size_t a = t.find_first_not_of(" \t\r\n");
    std::size_t b = t.find_last_not_of(" \t\r\n");
    t = a == std::string::npos ? std::string{} : t.substr(a, b - a + 1);
  }
  if (out.size() == 1 && out[0].empty()) out.clear();
  return out;
}

// Grammar: word := factor*; factor := atom ('^' (int | atom))*;
// atom := symbol | '1' | '[' word ',' word ']' | '(' word ')' | literal.
// With permutation literals enabled, "(123)" is a cycle and "((12),1)" a tuple literal.
class WordParser {
 public:
  WordParser(std::vector<std::string> symbols, bool perm_literals)
      : symbols_(std::move(symbols)), perm_literals_(perm_literals) {}

  WordNode parse(std::string_view text) const {
    State st{text, 0};
    WordNode w = parse_word(st, '\0');
    skip(st);
    if (st.pos != text.size())
      throw UsageError("unexpected '" + std::string(1, text[st.pos]) + "' in word: " + std::string(text));
    return w;
  }

 private:
  struct State {
    std::string_view s;
    std::size_t pos;
  };

  static void skip(State& st) {
    while (st.pos < st.s.size() && (std::isspace(static_cast<unsigned char>(st.s[st.pos])) ||
                                    st.s[st.pos] == '*' || st.s[st.pos] == '.'))
      ++st.pos;
  }

  WordNode parse_word(State& st, char stop) const {
    WordNode prod;
    prod.kind = WordNode::Kind::Product;
    while (true) {
      skip(st);
      if (st.pos >= st.s.size()) break;
      char c = st.s[st.pos];
      if (c == stop || c == ')' || c == ']' || c == ',') break;
      prod.children.push_back(parse_factor(st));
    }
    if (prod.children.size() == 1) return prod.children[0];
    if (prod.children.empty()) return WordNode{};
    return prod;
  }

  WordNode parse_factor(State& st) const {
    WordNode base = parse_atom(st);
    while (true) {
      skip(st);
      if (st.pos >= st.s.size() || st.s[st.pos] != '^') break;
      ++st.pos;
      skip(st);
      std::size_t save = st.pos;
      bool paren = false;
      if (st.pos < st.s.size() && st.s[st.pos] == '(') {
        paren = true;
        ++st.pos;
      }
      bool neg = false;
      if (st.pos < st.s.size() && (st.s[st.pos] == '-' || st.s[st.pos] == '+')) {
        neg = st.s[st.pos] == '-';
        ++st.pos;
      }
      if (st.pos < st.s.size() && std::isdigit(static_cast<unsigned char>(st.s[st.pos]))) {
        long long e = 0;
        while (st.pos < st.s.size() && std::isdigit(static_cast<unsigned char>(st.s[st.pos])))
          e = e * 10 + (st.s[st.pos++] - '0');
        if (paren) {
          if (st.pos >= st.s.size() || st.s[st.pos] != ')') throw UsageError("expected ')' after exponent");
          ++st.pos;
        }
        WordNode p;
        p.kind = WordNode::Kind::Power;
        p.exponent = neg ? -e : e;
        p.children.push_back(std::move(base));
        base = std::move(p);
      } else {
        st.pos = save;
        WordNode conj;
        conj.kind = WordNode::Kind::Conjugate;
        conj.children.push_back(std::move(base));
        conj.children.push_back(parse_atom(st));
        base = std::move(conj);
      }
    }
    return base;
  }

  WordNode parse_atom(State& st) const {
    skip(st);
    if (st.pos >= st.s.size()) throw UsageError("unexpected end of word: " + std::string(st.s));
    char c = st.s[st.pos];
    if (c == '[') {
      ++st.pos;
      WordNode a = parse_word(st, ',');
      if (st.pos >= st.s.size() || st.s[st.pos] != ',') throw UsageError("expected ',' in commutator");
      ++st.pos;
      WordNode b = parse_word(st, ']');
      if (st.pos >= st.s.size() || st.s[st.pos] != ']') throw UsageError("expected ']' in commutator");
      ++st.pos;
      WordNode n;
      n.kind = WordNode::Kind::Commutator;
      n.children = {std::move(a), std::move(b)};
      return n;
    }
    if (c == '(') {
      std::size_t close = matching(st.s, st.pos);
      std::string_view inner = st.s.substr(st.pos + 1, close - st.pos - 1);
      if (perm_literals_ && is_literal(inner)) {
        WordNode n;
        n.kind = WordNode::Kind::Literal;
        n.text = std::string(st.s.substr(st.pos, close - st.pos + 1));
        st.pos = close + 1;
        return n;
      }
      ++st.pos;
      WordNode w = parse_word(st, ')');
      if (st.pos >= st.s.size() || st.s[st.pos] != ')') throw UsageError("expected ')'");
      ++st.pos;
      return w;
    }
    if (c == '1' && (st.pos + 1 == st.s.size() || !std::isdigit(static_cast<unsigned char>(st.s[st.pos + 1])))) {
      ++st.pos;
      return WordNode{};
    }
    // greedy longest symbol match
    std::size_t best = 0;
    const std::string* hit = nullptr;
    for (const auto& sym : symbols_)
      if (sym.size() > best && st.s.substr(st.pos, sym.size()) == sym) {
        best = sym.size();
        hit = &sym;
      }
    if (!hit) {
      std::size_t e = st.pos;
      while (e < st.s.size() && (std::isalnum(static_cast<unsigned char>(st.s[e])) || st.s[e] == '_')) ++e;
      throw UsageError("unknown symbol '" + std::string(st.s.substr(st.pos, std::max<std::size_t>(e - st.pos, 1))) +
                       "' in word: " + std::string(st.s));
    }
    st.pos += best;
    WordNode n;
    n.kind = WordNode::Kind::Symbol;
    n.text = *hit;
    return n;
  }

  static std::size_t matching(std::string_view s, std::size_t open) {
    int depth = 0;
    for (std::size_t i = open; i < s.size(); ++i) {
      if (s[i] == '(') ++depth;
      if (s[i] == ')' && --depth == 0) return i;
    }
    throw UsageError("unbalanced parentheses in word: " + std::string(s));
  }

  // "(123)", "()" and tuples "((12),1)" are literals; anything else is grouping.
  static bool is_literal(std::string_view inner) {
    std::size_t i = inner.find_first_not_of(" \t");
    if (i == std::string_view::npos) return true;
    if (std::isdigit(static_cast<unsigned char>(inner[i]))) {
      for (char c : inner)
        if (!std::isdigit(static_cast<unsigned char>(c)) && c != ' ' && c != ',') return false;
      return true;
    }
    int depth = 0;
    for (char c : inner) {
      if (c == '(') ++depth;
      if (c == ')') --depth;
      if (c == ',' && depth == 0) return true;
    }
    return false;
  }

  std::vector<std::string> symbols_;
  bool perm_literals_;
};

}  // namespace xcoll::groups
