#ifndef COALSIM_FORMULA_HPP
#define COALSIM_FORMULA_HPP

// Formula AST, ASCII concrete syntax, rank and positivity.
//
// Grammar (loosest to tightest):
//   f ::= g -> f                       right associative
//   g ::= h | h | ...
//   h ::= u & u & ...
//   u ::= ~u | [] u | <> u | <k> u | L(n/d) u | M(n/d) u | [m] u
//       | true | false | atom | ( f )
// Implication is sugar for ~g | f; the AST keeps Or and Bot as nodes.

#include <cctype>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "coalsim/lifting.hpp"
#include "coalsim/modality.hpp"

namespace coalsim {

class Formula {
 public:
  enum class Tag { Top, Bot, Neg, And, Or, Modal };

  static Formula top() { return Formula(make(Tag::Top)); }
  static Formula bot() { return Formula(make(Tag::Bot)); }
  static Formula neg(Formula f) {
    auto n = make(Tag::Neg);
    n->lhs = std::move(f.node_);
    return Formula(std::move(n));
  }
  static Formula conj(Formula a, Formula b) { return binary(Tag::And, std::move(a), std::move(b)); }
  static Formula disj(Formula a, Formula b) { return binary(Tag::Or, std::move(a), std::move(b)); }
  static Formula implies(Formula a, Formula b) { return disj(neg(std::move(a)), std::move(b)); }
  /// Unary modal formula ♥f.
  static Formula modal(Modality h, Formula f) {
    if (h.nullary()) throw ValidationError("atom '" + h.atom + "' takes no argument");
    auto n = make(Tag::Modal);
    n->mod = std::move(h);
    n->lhs = std::move(f.node_);
    return Formula(std::move(n));
  }
  static Formula atom(std::string name) {
    auto n = make(Tag::Modal);
    n->mod = Modality::prop(std::move(name));
    return Formula(std::move(n));
  }

  /// Default-constructed formulas are ⊤.
  Formula() : Formula(top()) {}

  Tag tag() const { return node_->tag; }
  Formula child() const { return Formula(node_->lhs); }
  Formula left() const { return Formula(node_->lhs); }
  Formula right() const { return Formula(node_->rhs); }
  const Modality& modality() const { return node_->mod; }
  bool has_child() const { return node_->lhs != nullptr; }

  friend bool operator==(const Formula& a, const Formula& b) {
    if (a.node_ == b.node_) return true;
    if (a.tag() != b.tag()) return false;
    switch (a.tag()) {
      case Tag::Top:
      case Tag::Bot: return true;
      case Tag::Neg: return a.child() == b.child();
      case Tag::And:
      case Tag::Or: return a.left() == b.left() && a.right() == b.right();
      case Tag::Modal:
        return a.modality() == b.modality() && a.has_child() == b.has_child() &&
               (!a.has_child() || a.child() == b.child());
    }
    return false;
  }

 private:
  struct Node {
    Tag tag;
    Modality mod;
    std::shared_ptr<const Node> lhs, rhs;
  };

  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static std::shared_ptr<Node> make(Tag t) {
    auto n = std::make_shared<Node>();
    n->tag = t;
    return n;
  }
  static Formula binary(Tag t, Formula a, Formula b) {
    auto n = make(t);
    n->lhs = std::move(a.node_);
    n->rhs = std::move(b.node_);
    return Formula(std::move(n));
  }

  std::shared_ptr<const Node> node_;
};

inline std::string to_string(const Formula& f) {
  switch (f.tag()) {
    case Formula::Tag::Top: return "true";
    case Formula::Tag::Bot: return "false";
    case Formula::Tag::Neg: return "~" + to_string(f.child());
    case Formula::Tag::And: return "(" + to_string(f.left()) + " & " + to_string(f.right()) + ")";
    case Formula::Tag::Or: return "(" + to_string(f.left()) + " | " + to_string(f.right()) + ")";
    case Formula::Tag::Modal:
      if (!f.has_child()) return f.modality().atom;
      return to_string(f.modality()) + " " + to_string(f.child());
  }
  return "?";
}

/// Maximum nesting of operators; atoms count as one level.
inline std::size_t rank(const Formula& f) {
  switch (f.tag()) {
    case Formula::Tag::Top:
    case Formula::Tag::Bot: return 0;
    case Formula::Tag::Neg: return rank(f.child());
    case Formula::Tag::And:
    case Formula::Tag::Or: return std::max(rank(f.left()), rank(f.right()));
    case Formula::Tag::Modal: return f.has_child() ? 1 + rank(f.child()) : 1;
  }
  return 0;
}

inline bool is_positive(const Formula& f) {
  switch (f.tag()) {
    case Formula::Tag::Top:
    case Formula::Tag::Bot: return true;
    case Formula::Tag::Neg: return false;
    case Formula::Tag::And:
    case Formula::Tag::Or: return is_positive(f.left()) && is_positive(f.right());
    case Formula::Tag::Modal: return !f.has_child() || is_positive(f.child());
  }
  return false;
}

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error("syntax error at position " + std::to_string(position) + ": " + what), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

class UnknownModality : public Error {
 public:
  UnknownModality(const std::string& token, const std::string& signature)
      : Error("unknown modality '" + token + "' for signature '" + signature + "'"), token_(token) {}
  const std::string& token() const { return token_; }

 private:
  std::string token_;
};

namespace detail {

class FormulaParser {
 public:
  FormulaParser(std::string_view text, const LambdaSignature& sig) : text_(text), sig_(sig) {}

  Formula parse() {
    Formula f = implication();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool accept(std::string_view tok) {
    skip_ws();
    if (text_.substr(pos_, tok.size()) == tok) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }

  Formula implication() {
    Formula lhs = disjunction();
    if (accept("->")) return Formula::implies(std::move(lhs), implication());
    return lhs;
  }
  Formula disjunction() {
    Formula f = conjunction();
    while (accept("|")) f = Formula::disj(std::move(f), conjunction());
    return f;
  }
  Formula conjunction() {
    Formula f = unary();
    while (accept("&")) f = Formula::conj(std::move(f), unary());
    return f;
  }

  Modality check(Modality h, const std::string& token) {
    if (!sig_.admits(h)) throw UnknownModality(token, sig_.literal);
    return h;
  }

  Formula unary() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const std::size_t start = pos_;
    const char c = text_[pos_];
    if (c == '~') {
      ++pos_;
      return Formula::neg(unary());
    }
    if (c == '(') {
      ++pos_;
      Formula f = implication();
      if (!accept(")")) fail("expected ')'");
      return f;
    }
    if (accept("[]")) return Formula::modal(check(Modality::box(), "[]"), unary());
    if (accept("<>")) return Formula::modal(check(Modality::diamond(), "<>"), unary());
    if (c == '[') {
      ++pos_;
      skip_ws();
      if (pos_ < text_.size() && text_[pos_] == 'm') {
        ++pos_;
        if (accept("]")) return Formula::modal(check(Modality::nbhd_box(), "[m]"), unary());
      }
      pos_ = start;
      fail("expected '[]' or '[m]'");
    }
    if (c == '<') {
      ++pos_;
      skip_ws();
      const std::size_t digits = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (digits == pos_ || pos_ - digits > 18) fail("expected natural number in '<k>'");
      const std::string num(text_.substr(digits, pos_ - digits));
      if (!accept(">")) fail("expected '>'");
      return Formula::modal(check(Modality::graded(std::stoull(num)), "<" + num + ">"), unary());
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) ++pos_;
      const std::string word(text_.substr(start, pos_ - start));
      if (word == "true") return Formula::top();
      if (word == "false") return Formula::bot();
      if (word == "L" || word == "M") {
        std::size_t save = pos_;
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == '(') {
          ++pos_;
          const std::size_t num_start = pos_;
          while (pos_ < text_.size() && text_[pos_] != ')') ++pos_;
          if (pos_ == text_.size()) fail("expected ')' after probability");
          std::string num(text_.substr(num_start, pos_ - num_start));
          num.erase(std::remove_if(num.begin(), num.end(), [](unsigned char ch) { return std::isspace(ch); }), num.end());
          ++pos_;
          Rational p;
          try {
            p = parse_rational(num);
            if (p < Rational(0) || p > Rational(1)) throw ValidationError("out of range");
          } catch (const ValidationError&) {
            pos_ = num_start;
            fail("expected rational in [0,1], got '" + num + "'");
          }
          Modality h = word == "L" ? Modality::at_least(p) : Modality::more_than(p);
          return Formula::modal(check(h, word + "(" + to_string(p) + ")"), unary());
        }
        pos_ = save;
      }
      check(Modality::prop(word), word);
      return Formula::atom(word);
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string_view text_;
  const LambdaSignature& sig_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses the ASCII syntax. Every operator token must be admitted by `sig`.
inline Formula parse_formula(std::string_view text, const LambdaSignature& sig) {
  return detail::FormulaParser(text, sig).parse();
}

}  // namespace coalsim

#endif  // COALSIM_FORMULA_HPP
