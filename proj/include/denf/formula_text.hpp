// Textual formula syntax: parsing and canonical printing.
//
// Grammar: atoms [a-zA-Z_][a-zA-Z0-9_]*; constants true/false; unary ! X G F;
// binary U R & | -> <->; parentheses. Precedence ! X G F > U R > & > | > ->
// > <->, with U and R right-associative. parse_formula(print_formula(f)) is
// structurally f.

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "denf/errors.hpp"
#include "denf/event.hpp"
#include "denf/formula.hpp"

namespace denf {

namespace detail {

struct Token {
  enum Kind { Ident, LParen, RParen, AndOp, OrOp, ImpliesOp, IffOp, NotOp, End };
  Kind kind;
  std::string text;
  std::size_t pos;
};

inline std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto push = [&](Token::Kind k, std::string t, std::size_t p) {
    out.push_back(Token{k, std::move(t), p});
  };
  while (i < src.size()) {
    char c = src[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      ++i;
      continue;
    }
    if (c == '(') { push(Token::LParen, "(", i); ++i; continue; }
    if (c == ')') { push(Token::RParen, ")", i); ++i; continue; }
    if (c == '&') { push(Token::AndOp, "&", i); ++i; continue; }
    if (c == '|') { push(Token::OrOp, "|", i); ++i; continue; }
    if (c == '!') { push(Token::NotOp, "!", i); ++i; continue; }
    if (src.compare(i, 3, "<->") == 0) { push(Token::IffOp, "<->", i); i += 3; continue; }
    if (src.compare(i, 2, "->") == 0) { push(Token::ImpliesOp, "->", i); i += 2; continue; }
    if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_') {
      std::size_t start = i;
      while (i < src.size() &&
             ((src[i] >= 'a' && src[i] <= 'z') || (src[i] >= 'A' && src[i] <= 'Z') ||
              (src[i] >= '0' && src[i] <= '9') || src[i] == '_'))
        ++i;
      push(Token::Ident, std::string(src.substr(start, i - start)), start);
      continue;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", i);
  }
  push(Token::End, "", src.size());
  return out;
}

class Parser {
 public:
  explicit Parser(std::string_view src) : tokens_(tokenize(src)) {}

  Formula parse() {
    Formula f = parse_iff();
    expect(Token::End, "end of input");
    return f;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  Token take() { return tokens_[pos_++]; }
  void expect(Token::Kind k, const char* what) {
    if (peek().kind != k)
      throw ParseError(std::string("expected ") + what, peek().pos);
    ++pos_;
  }

  Formula parse_iff() {
    Formula left = parse_implies();
    if (peek().kind == Token::IffOp) {
      take();
      return make_iff(std::move(left), parse_iff());
    }
    return left;
  }

  Formula parse_implies() {
    Formula left = parse_or();
    if (peek().kind == Token::ImpliesOp) {
      take();
      return make_implies(std::move(left), parse_implies());
    }
    return left;
  }

  Formula parse_or() {
    Formula f = parse_and();
    while (peek().kind == Token::OrOp) {
      take();
      f = make_or(std::move(f), parse_and());
    }
    return f;
  }

  Formula parse_and() {
    Formula f = parse_until();
    while (peek().kind == Token::AndOp) {
      take();
      f = make_and(std::move(f), parse_until());
    }
    return f;
  }

  Formula parse_until() {
    Formula left = parse_unary();
    if (peek().kind == Token::Ident && (peek().text == "U" || peek().text == "R")) {
      bool until = take().text == "U";
      Formula right = parse_until();
      return until ? make_until(std::move(left), std::move(right))
                   : make_release(std::move(left), std::move(right));
    }
    return left;
  }

  Formula parse_unary() {
    if (peek().kind == Token::NotOp) {
      take();
      return make_not(parse_unary());
    }
    if (peek().kind == Token::Ident) {
      const std::string& t = peek().text;
      if (t == "X" || t == "G" || t == "F") {
        take();
        Formula sub = parse_unary();
        if (t == "X") return make_next(std::move(sub));
        if (t == "G") return make_globally(std::move(sub));
        return make_eventually(std::move(sub));
      }
    }
    return parse_primary();
  }

  Formula parse_primary() {
    const Token& tok = peek();
    if (tok.kind == Token::LParen) {
      take();
      Formula f = parse_iff();
      expect(Token::RParen, "')'");
      return f;
    }
    if (tok.kind == Token::Ident) {
      if (tok.text == "true") { take(); return make_true(); }
      if (tok.text == "false") { take(); return make_false(); }
      if (tok.text == "U" || tok.text == "R")
        throw ParseError("'" + tok.text + "' is a reserved operator", tok.pos);
      return make_atom(take().text);
    }
    throw ParseError("expected a formula", tok.pos);
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline Formula parse_formula(std::string_view text) {
  return detail::Parser(text).parse();
}

// Parse and reject atoms outside the given alphabet.
inline Formula parse_formula(std::string_view text, const Event& alphabet) {
  Formula f = detail::Parser(text).parse();
  for (const auto& name : ap_formula(f))
    if (!alphabet.contains(name))
      throw UnknownAtomError("atom '" + name + "' is not in the configured alphabet");
  return f;
}

namespace detail {

inline int precedence(Op op) {
  switch (op) {
    case Op::Iff: return 1;
    case Op::Implies: return 2;
    case Op::Or: return 3;
    case Op::And: return 4;
    case Op::Until:
    case Op::Release: return 5;
    case Op::Not:
    case Op::Next:
    case Op::Globally:
    case Op::Eventually: return 6;
    default: return 7;
  }
}

inline void print_rec(const Formula& f, std::string& out) {
  // Unary operands print bare when they are constants or literals: G !b, !a.
  auto atomic = [](const Formula& g) {
    return g.op() == Op::True || g.op() == Op::False || is_literal(g);
  };
  auto wrapped = [&](const Formula& g, bool parens) {
    if (parens) out += '(';
    print_rec(g, out);
    if (parens) out += ')';
  };
  switch (f.op()) {
    case Op::True: out += "true"; return;
    case Op::False: out += "false"; return;
    case Op::Atom: out += f.atom_name(); return;
    case Op::Not:
      out += '!';
      wrapped(f.lhs(), !atomic(f.lhs()));
      return;
    case Op::Next:
    case Op::Globally:
    case Op::Eventually:
      out += f.op() == Op::Next ? 'X' : (f.op() == Op::Globally ? 'G' : 'F');
      out += ' ';
      wrapped(f.lhs(), !atomic(f.lhs()));
      return;
    default: {
      const int p = precedence(f.op());
      const bool right_assoc = f.op() == Op::Until || f.op() == Op::Release ||
                               f.op() == Op::Implies || f.op() == Op::Iff;
      const int lp = precedence(f.lhs().op());
      const int rp = precedence(f.rhs().op());
      wrapped(f.lhs(), right_assoc ? lp <= p : lp < p);
      switch (f.op()) {
        case Op::And: out += " & "; break;
        case Op::Or: out += " | "; break;
        case Op::Implies: out += " -> "; break;
        case Op::Iff: out += " <-> "; break;
        case Op::Until: out += " U "; break;
        default: out += " R "; break;
      }
      wrapped(f.rhs(), right_assoc ? rp < p : rp <= p);
      return;
    }
  }
}

}  // namespace detail

inline std::string print_formula(const Formula& f) {
  std::string out;
  detail::print_rec(f, out);
  return out;
}

}  // namespace denf
