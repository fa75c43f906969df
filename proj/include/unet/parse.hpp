// Text format for terms, formulas, sequents and nets.
//
// Grammar (ASCII):
//   sequent  ::=  [ member { ',' member } ]
//   member   ::=  formula  |  'cut' '{' formula ';' formula '}'
//   formula  ::=  ('all'|'ex') var '.' formula  |  chain
//   chain    ::=  unit { '*' unit }  |  unit { '|' unit }     (no mixing)
//   unit     ::=  '(' formula ')'  |  atom  |  quantified
//   atom     ::=  ['~'] PRED [ '(' term { ',' term } ')' ]
//   term     ::=  var  |  fn '(' term { ',' term } ')'
// Predicate names start with an uppercase letter or '#'; variables and
// function symbols start lowercase.  A bare lowercase identifier is a
// variable (free variables act as constants).  Quantifiers bind weakest:
// 'all x. A | B' is all x.(A|B).  Mixing '*' and '|' without parentheses
// is rejected.
//
// A net is a sequent plus a link line over left-to-right leaf numbers:
//   links: (0 2) (1 3)

#ifndef UNET_PARSE_HPP
#define UNET_PARSE_HPP

#include <cctype>
#include <cstddef>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "unet/syntax.hpp"

namespace unet {

struct ParseError : std::runtime_error {
  std::size_t line, col;
  ParseError(std::size_t l, std::size_t c, const std::string& msg)
      : std::runtime_error(std::to_string(l) + ":" + std::to_string(c) +
                           ": " + msg),
        line(l),
        col(c) {}
};

/// Predicate/function arities, inferred on first use and enforced after.
class Signature {
 public:
  void check_pred(const std::string& base, std::size_t arity, std::size_t line,
                  std::size_t col) {
    auto [it, fresh] = preds_.emplace(base, arity);
    if (!fresh && it->second != arity)
      throw ParseError(line, col,
                       "predicate " + base + " used with arity " +
                           std::to_string(arity) + " but declared " +
                           std::to_string(it->second));
  }
  void check_fn(const std::string& name, std::size_t arity, std::size_t line,
                std::size_t col) {
    auto [it, fresh] = fns_.emplace(name, arity);
    if (!fresh && it->second != arity)
      throw ParseError(line, col,
                       "function " + name + " used with arity " +
                           std::to_string(arity) + " but declared " +
                           std::to_string(it->second));
  }

 private:
  std::map<std::string, std::size_t> preds_;
  std::map<std::string, std::size_t> fns_;
};

namespace detail {

class Cursor {
 public:
  explicit Cursor(std::string_view text) : text_(text) {}

  void skip_ws() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_])))
      advance();
  }

  bool eof() {
    skip_ws();
    return pos_ >= text_.size();
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  bool try_eat(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      advance();
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!try_eat(c)) fail(std::string("expected '") + c + "'");
  }

  bool try_keyword(const std::string& kw) {
    skip_ws();
    if (text_.substr(pos_, kw.size()) != kw) return false;
    std::size_t after = pos_ + kw.size();
    if (after < text_.size() && (std::isalnum(static_cast<unsigned char>(
                                     text_[after])) ||
                                 text_[after] == '_' || text_[after] == '\''))
      return false;
    for (std::size_t i = 0; i < kw.size(); ++i) advance();
    return true;
  }

  std::string ident() {
    skip_ws();
    std::size_t start = pos_;
    if (pos_ < text_.size() && text_[pos_] == '#') {
      advance();
      while (pos_ < text_.size() &&
             std::isdigit(static_cast<unsigned char>(text_[pos_])))
        advance();
      if (pos_ == start + 1) fail("expected digits after '#'");
      return std::string(text_.substr(start, pos_ - start));
    }
    if (pos_ >= text_.size() ||
        !(std::isalpha(static_cast<unsigned char>(text_[pos_]))))
      fail("expected identifier");
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
            text_[pos_] == '_' || text_[pos_] == '\''))
      advance();
    return std::string(text_.substr(start, pos_ - start));
  }

  std::optional<long> try_integer() {
    skip_ws();
    std::size_t p = pos_;
    bool neg = false;
    if (p < text_.size() && text_[p] == '-') {
      neg = true;
      ++p;
    }
    std::size_t start = p;
    while (p < text_.size() && std::isdigit(static_cast<unsigned char>(text_[p])))
      ++p;
    if (p == start) return std::nullopt;
    long v = std::stol(std::string(text_.substr(start, p - start)));
    while (pos_ < p) advance();
    return neg ? -v : v;
  }

  [[noreturn]] void fail(const std::string& msg) {
    throw ParseError(line_, col_, msg);
  }

  std::size_t line() const { return line_; }
  std::size_t col() const { return col_; }

 private:
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1, col_ = 1;
};

class FormulaParser {
 public:
  FormulaParser(Cursor& cur, Signature& sig) : cur_(cur), sig_(sig) {}

  Term term() {
    std::size_t l = cur_.line(), c = cur_.col();
    std::string name = cur_.ident();
    if (std::isupper(static_cast<unsigned char>(name[0])) || name[0] == '#')
      cur_.fail("expected a term, got predicate-case identifier " + name);
    if (cur_.try_eat('(')) {
      std::vector<Term> args;
      if (!cur_.try_eat(')')) {
        do {
          args.push_back(term());
        } while (cur_.try_eat(','));
        cur_.expect(')');
      }
      sig_.check_fn(name, args.size(), l, c);
      return Term::app(name, std::move(args));
    }
    return Term::var(name);
  }

  Formula atom() {
    bool neg = cur_.try_eat('~');
    std::size_t l = cur_.line(), c = cur_.col();
    std::string base = cur_.ident();
    if (!(std::isupper(static_cast<unsigned char>(base[0])) || base[0] == '#'))
      cur_.fail("predicate names start uppercase (or '#'): " + base);
    std::vector<Term> args;
    if (cur_.try_eat('(')) {
      if (!cur_.try_eat(')')) {
        do {
          args.push_back(term());
        } while (cur_.try_eat(','));
        cur_.expect(')');
      }
    }
    sig_.check_pred(base, args.size(), l, c);
    PredicateSymbol p{base, neg ? Polarity::Neg : Polarity::Pos, args.size()};
    return Formula::atom(std::move(p), std::move(args));
  }

  Formula unit() {
    if (cur_.try_eat('(')) {
      Formula f = formula();
      cur_.expect(')');
      return f;
    }
    if (cur_.try_keyword("all")) return quantified(FKind::Forall);
    if (cur_.try_keyword("ex")) return quantified(FKind::Exists);
    return atom();
  }

  Formula quantified(FKind k) {
    std::string x = cur_.ident();
    if (std::isupper(static_cast<unsigned char>(x[0])) || x[0] == '#')
      cur_.fail("quantified variable must be lowercase: " + x);
    cur_.expect('.');
    return Formula::quant(k, std::move(x), formula());
  }

  Formula formula() {
    if (cur_.try_keyword("all")) return quantified(FKind::Forall);
    if (cur_.try_keyword("ex")) return quantified(FKind::Exists);
    Formula acc = unit();
    std::optional<char> op;
    while (true) {
      char p = cur_.peek();
      if (p != '*' && p != '|') break;
      if (op && *op != p)
        cur_.fail("mixing '*' and '|' requires parentheses");
      op = p;
      cur_.try_eat(p);
      Formula rhs = unit();
      acc = Formula::binary(p == '*' ? FKind::Tensor : FKind::Par,
                            std::move(acc), std::move(rhs));
    }
    return acc;
  }

 private:
  Cursor& cur_;
  Signature& sig_;
};

}  // namespace detail

struct MalformedCut : std::runtime_error {
  explicit MalformedCut(const std::string& msg) : std::runtime_error(msg) {}
};

inline CutSequent parse_sequent(std::string_view text, Signature& sig) {
  detail::Cursor cur(text);
  detail::FormulaParser fp(cur, sig);
  std::vector<Formula> fs;
  std::vector<std::pair<Formula, Formula>> cuts;
  if (!cur.eof()) {
    do {
      if (cur.try_keyword("cut")) {
        std::size_t l = cur.line(), c = cur.col();
        cur.expect('{');
        Formula a = fp.formula();
        cur.expect(';');
        Formula b = fp.formula();
        cur.expect('}');
        if (a.dual() != b)
          throw ParseError(l, c, "cut formulas are not dual");
        cuts.emplace_back(std::move(a), std::move(b));
      } else {
        fs.push_back(fp.formula());
      }
    } while (cur.try_eat(','));
  }
  if (!cur.eof()) cur.fail("trailing input after sequent");
  return CutSequent(std::move(fs), std::move(cuts));
}

inline CutSequent parse_sequent(std::string_view text) {
  Signature sig;
  return parse_sequent(text, sig);
}

inline Formula parse_formula(std::string_view text, Signature& sig) {
  detail::Cursor cur(text);
  detail::FormulaParser fp(cur, sig);
  Formula f = fp.formula();
  if (!cur.eof()) cur.fail("trailing input after formula");
  return f;
}

inline Formula parse_formula(std::string_view text) {
  Signature sig;
  return parse_formula(text, sig);
}

inline Term parse_term(std::string_view text, Signature& sig) {
  detail::Cursor cur(text);
  detail::FormulaParser fp(cur, sig);
  Term t = fp.term();
  if (!cur.eof()) cur.fail("trailing input after term");
  return t;
}

inline Term parse_term(std::string_view text) {
  Signature sig;
  return parse_term(text, sig);
}

// ---------------------------------------------------------------------------
// Printing (canonical form: formulas first, then cuts; minimal parentheses,
// left-associated chains printed flat).

namespace detail {

inline void print_formula(std::ostream& os, const Formula& f,
                          const Formula* parent_binary_of = nullptr);

inline void print_binary_child(std::ostream& os, const Formula& child,
                               FKind parent, bool right_slot) {
  bool parens = false;
  if (is_quant(child.kind())) parens = true;
  if (is_binary(child.kind()) && (child.kind() != parent || right_slot))
    parens = true;
  if (parens) os << '(';
  print_formula(os, child);
  if (parens) os << ')';
}

inline void print_formula(std::ostream& os, const Formula& f,
                          const Formula*) {
  switch (f.kind()) {
    case FKind::Atom: {
      os << f.pred().str();
      if (!f.terms().empty()) {
        os << '(';
        for (std::size_t i = 0; i < f.terms().size(); ++i) {
          if (i) os << ',';
          f.terms()[i].print(os);
        }
        os << ')';
      }
      return;
    }
    case FKind::Tensor:
    case FKind::Par: {
      const char* op = f.kind() == FKind::Tensor ? " * " : " | ";
      print_binary_child(os, f.left(), f.kind(), false);
      os << op;
      print_binary_child(os, f.right(), f.kind(), true);
      return;
    }
    case FKind::Forall:
    case FKind::Exists:
      os << (f.kind() == FKind::Forall ? "all " : "ex ") << f.var() << ". ";
      print_formula(os, f.body());
      return;
  }
}

}  // namespace detail

inline std::string print(const Formula& f) {
  std::ostringstream os;
  detail::print_formula(os, f);
  return os.str();
}

inline std::string print(const CutSequent& s) {
  std::ostringstream os;
  bool first = true;
  for (const Formula& f : s.formulas()) {
    if (!first) os << ", ";
    first = false;
    detail::print_formula(os, f);
  }
  for (const auto& [a, b] : s.cuts()) {
    if (!first) os << ", ";
    first = false;
    os << "cut{ ";
    detail::print_formula(os, a);
    os << " ; ";
    detail::print_formula(os, b);
    os << " }";
  }
  return os.str();
}

}  // namespace unet

#endif  // UNET_PARSE_HPP
