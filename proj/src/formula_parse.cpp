#include <cctype>

#include "quasigrade/formula.hpp"

namespace qg {
namespace {

// Tokens: identifiers, integer literals, and the fixed operator set.
struct Token {
  enum Kind {
    Ident, Number, Plus, Minus, Star, LParen, RParen, Comma, Dot, Bar,
    Amp, Arrow, Bang, Le, Lt, Ge, Gt, EqTok, Ne, End,
  };
  Kind kind;
  std::string text;
  Int value;
  size_t pos;
};

class Lexer {
public:
  explicit Lexer(const std::string& text) : text_(text) { advance(); }

  const Token& peek() const { return cur_; }
  const Token& peek2() {
    if (!hasNext_) {
      next_ = lex();
      hasNext_ = true;
    }
    return next_;
  }
  Token take() {
    Token t = cur_;
    advance();
    return t;
  }

private:
  void advance() {
    if (hasNext_) {
      cur_ = next_;
      hasNext_ = false;
    } else {
      cur_ = lex();
    }
  }

  Token lex() {
    while (i_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[i_])))
      ++i_;
    size_t start = i_;
    if (i_ >= text_.size()) return {Token::End, "", 0, start};
    char c = text_[i_];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t j = i_;
      while (j < text_.size() && std::isdigit(static_cast<unsigned char>(text_[j])))
        ++j;
      std::string digits = text_.substr(i_, j - i_);
      i_ = j;
      return {Token::Number, digits, Int(digits), start};
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t j = i_;
      while (j < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[j])) || text_[j] == '_'))
        ++j;
      std::string name = text_.substr(i_, j - i_);
      i_ = j;
      return {Token::Ident, name, 0, start};
    }
    ++i_;
    switch (c) {
      case '+': return {Token::Plus, "+", 0, start};
      case '-':
        if (i_ < text_.size() && text_[i_] == '>') {
          ++i_;
          return {Token::Arrow, "->", 0, start};
        }
        return {Token::Minus, "-", 0, start};
      case '*': return {Token::Star, "*", 0, start};
      case '(': return {Token::LParen, "(", 0, start};
      case ')': return {Token::RParen, ")", 0, start};
      case ',': return {Token::Comma, ",", 0, start};
      case '.': return {Token::Dot, ".", 0, start};
      case '|': return {Token::Bar, "|", 0, start};
      case '&': return {Token::Amp, "&", 0, start};
      case '!':
        if (i_ < text_.size() && text_[i_] == '=') {
          ++i_;
          return {Token::Ne, "!=", 0, start};
        }
        return {Token::Bang, "!", 0, start};
      case '<':
        if (i_ < text_.size() && text_[i_] == '=') {
          ++i_;
          return {Token::Le, "<=", 0, start};
        }
        return {Token::Lt, "<", 0, start};
      case '>':
        if (i_ < text_.size() && text_[i_] == '=') {
          ++i_;
          return {Token::Ge, ">=", 0, start};
        }
        return {Token::Gt, ">", 0, start};
      case '=': return {Token::EqTok, "=", 0, start};
      default:
        fail(ErrorKind::Syntax,
             "unexpected character '" + std::string(1, c) + "' at offset " +
                 std::to_string(start));
    }
  }

  const std::string& text_;
  size_t i_ = 0;
  Token cur_;
  Token next_;
  bool hasNext_ = false;
};

class Parser {
public:
  explicit Parser(const std::string& text) : lex_(text) {}

  FormulaPtr parse() {
    FormulaPtr f = formula();
    expect(Token::End, "end of input");
    return f;
  }

private:
  [[noreturn]] void bail(const std::string& what) {
    fail(ErrorKind::Syntax, "expected " + what + " at offset " +
                                std::to_string(lex_.peek().pos));
  }

  Token expect(Token::Kind k, const std::string& what) {
    if (lex_.peek().kind != k) bail(what);
    return lex_.take();
  }

  // formula := implication, where quantifiers extend maximally right.
  FormulaPtr formula() { return implication(); }

  FormulaPtr implication() {
    FormulaPtr lhs = disjunction();
    if (lex_.peek().kind == Token::Arrow) {
      lex_.take();
      return mkImplies(std::move(lhs), implication());
    }
    return lhs;
  }

  FormulaPtr disjunction() {
    std::vector<FormulaPtr> parts{conjunction()};
    while (lex_.peek().kind == Token::Bar) {
      lex_.take();
      parts.push_back(conjunction());
    }
    return parts.size() == 1 ? parts[0] : mkOr(std::move(parts));
  }

  FormulaPtr conjunction() {
    std::vector<FormulaPtr> parts{unary()};
    while (lex_.peek().kind == Token::Amp) {
      lex_.take();
      parts.push_back(unary());
    }
    return parts.size() == 1 ? parts[0] : mkAnd(std::move(parts));
  }

  FormulaPtr unary() {
    const Token& t = lex_.peek();
    if (t.kind == Token::Bang) {
      lex_.take();
      return mkNot(unary());
    }
    if (t.kind == Token::Ident && (t.text == "E" || t.text == "A"))
      return quantifier();
    if (t.kind == Token::Ident && t.text == "true") {
      lex_.take();
      return mkTrue();
    }
    if (t.kind == Token::Ident && t.text == "false") {
      lex_.take();
      return mkFalse();
    }
    if (t.kind == Token::LParen) return grouped();
    return atom();
  }

  FormulaPtr quantifier() {
    Token q = lex_.take();
    std::vector<std::string> vars;
    vars.push_back(expect(Token::Ident, "variable name").text);
    while (lex_.peek().kind == Token::Comma) {
      lex_.take();
      vars.push_back(expect(Token::Ident, "variable name").text);
    }
    expect(Token::Dot, "'.' after binder list");
    FormulaPtr body = implication();
    return q.text == "E" ? mkExists(std::move(vars), std::move(body))
                         : mkForall(std::move(vars), std::move(body));
  }

  // A '(' at formula position always opens a formula; term-level parentheses
  // are not part of the grammar (linear terms need none).
  FormulaPtr grouped() {
    expect(Token::LParen, "'('");
    FormulaPtr f = implication();
    expect(Token::RParen, "')'");
    return f;
  }

  FormulaPtr atom() {
    // Divisibility needs two-token lookahead: NUMBER '|' commits to it.
    if (lex_.peek().kind == Token::Number && lex_.peek2().kind == Token::Bar) {
      Int m = lex_.take().value;
      lex_.take();  // '|'
      LinTerm t = term();
      if (m < 1) fail(ErrorKind::Syntax, "divisibility modulus must be positive");
      return mkDvd(m, t);
    }
    LinTerm lhs = term();
    CmpOp op;
    switch (lex_.peek().kind) {
      case Token::Le: op = CmpOp::Le; break;
      case Token::Lt: op = CmpOp::Lt; break;
      case Token::Ge: op = CmpOp::Ge; break;
      case Token::Gt: op = CmpOp::Gt; break;
      case Token::EqTok: op = CmpOp::Eq; break;
      case Token::Ne: op = CmpOp::Ne; break;
      default: bail("comparison operator");
    }
    lex_.take();
    LinTerm rhs = term();
    return mkCmp(lhs, op, rhs);
  }

  LinTerm term() {
    LinTerm t = addend();
    while (true) {
      if (lex_.peek().kind == Token::Plus) {
        lex_.take();
        t += addend();
      } else if (lex_.peek().kind == Token::Minus) {
        lex_.take();
        t -= addend();
      } else {
        return t;
      }
    }
  }

  // addend := ['-'] (NUMBER ['*' IDENT] | IDENT ['*' NUMBER])
  LinTerm addend() {
    bool neg = false;
    while (lex_.peek().kind == Token::Minus) {
      lex_.take();
      neg = !neg;
    }
    LinTerm t;
    if (lex_.peek().kind == Token::Number) {
      Int k = lex_.take().value;
      if (lex_.peek().kind == Token::Star) {
        lex_.take();
        std::string v = expect(Token::Ident, "variable after '*'").text;
        t.coeffs[v] = k;
        if (k == 0) t.coeffs.erase(v);
      } else {
        t.constant = k;
      }
    } else if (lex_.peek().kind == Token::Ident) {
      std::string v = lex_.take().text;
      Int k = 1;
      if (lex_.peek().kind == Token::Star) {
        lex_.take();
        k = expect(Token::Number, "number after '*'").value;
      }
      if (k != 0) t.coeffs[v] = k;
    } else {
      bail("term");
    }
    if (neg) t *= Int(-1);
    return t;
  }

  Lexer lex_;
};

}  // namespace

FormulaPtr parseFormula(const std::string& text) {
  Parser p(text);
  return p.parse();
}

}  // namespace qg
