#include "ddelta/parse.hpp"

#include <cctype>

namespace ddelta {

namespace {

enum class Tok { Number, Z, Z2, S, I, Plus, Minus, Star, Slash, Caret, LParen, RParen, LBracket, RBracket, Comma, End };

struct Token {
  Tok kind = Tok::End;
  size_t pos = 0;
  GaussianRational value;
  long integer = 0;  // for Number tokens without fraction or decimal point
  bool plain_integer = false;
  std::string text;
};

[[noreturn]] void syntax(size_t pos, const std::string& msg) {
  throw Error(ErrorKind::SyntaxError, "column " + std::to_string(pos + 1) + ": " + msg);
}

std::vector<Token> lex(const std::string& s) {
  std::vector<Token> out;
  size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    Token t;
    t.pos = i;
    if (std::isdigit(static_cast<unsigned char>(c)) || (c == '.' && i + 1 < s.size() && std::isdigit(static_cast<unsigned char>(s[i + 1])))) {
      // After '^' only a plain integer is read, so "z^2/3" stays z^2 / 3.
      const bool exponent = !out.empty() && out.back().kind == Tok::Caret;
      size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      mpq_class v;
      std::string whole = s.substr(i, j - i);
      t.plain_integer = true;
      if (!exponent && j < s.size() && s[j] == '.') {
        size_t k = j + 1;
        while (k < s.size() && std::isdigit(static_cast<unsigned char>(s[k]))) ++k;
        std::string frac = s.substr(j + 1, k - j - 1);
        mpz_class num(whole.empty() ? "0" : whole);
        mpz_class scale = 1;
        for (size_t q = 0; q < frac.size(); ++q) scale *= 10;
        if (!frac.empty()) num = num * scale + mpz_class(frac);
        v = mpq_class(num, scale);
        t.plain_integer = false;
        j = k;
      } else {
        v = mpq_class(mpz_class(whole));
        if (!exponent && j + 1 < s.size() && s[j] == '/' && std::isdigit(static_cast<unsigned char>(s[j + 1]))) {
          size_t k = j + 1;
          while (k < s.size() && std::isdigit(static_cast<unsigned char>(s[k]))) ++k;
          mpz_class den(s.substr(j + 1, k - j - 1));
          if (den == 0) syntax(j + 1, "zero denominator in literal");
          v = mpq_class(mpz_class(whole), den);
          t.plain_integer = false;
          j = k;
        }
      }
      v.canonicalize();
      if (!exponent && j < s.size() && s[j] == 'i' && !(j + 1 < s.size() && std::isalnum(static_cast<unsigned char>(s[j + 1])))) {
        t.value = GaussianRational(mpq_class(0), v);
        t.plain_integer = false;
        ++j;
      } else {
        t.value = GaussianRational(v, mpq_class(0));
      }
      if (t.plain_integer) {
        if (!v.get_num().fits_slong_p()) syntax(i, "integer too large");
        t.integer = v.get_num().get_si();
      }
      t.kind = Tok::Number;
      t.text = s.substr(i, j - i);
      i = j;
      out.push_back(std::move(t));
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      size_t j = i;
      while (j < s.size() && std::isalnum(static_cast<unsigned char>(s[j]))) ++j;
      t.text = s.substr(i, j - i);
      if (t.text == "z" || t.text == "z1")
        t.kind = Tok::Z;
      else if (t.text == "z2")
        t.kind = Tok::Z2;
      else if (t.text == "s")
        t.kind = Tok::S;
      else if (t.text == "i")
        t.kind = Tok::I;
      else
        syntax(i, "unknown identifier '" + t.text + "'");
      i = j;
      out.push_back(std::move(t));
      continue;
    }
    switch (c) {
      case '+': t.kind = Tok::Plus; break;
      case '-': t.kind = Tok::Minus; break;
      case '*': t.kind = Tok::Star; break;
      case '/': t.kind = Tok::Slash; break;
      case '^': t.kind = Tok::Caret; break;
      case '(': t.kind = Tok::LParen; break;
      case ')': t.kind = Tok::RParen; break;
      case '[': t.kind = Tok::LBracket; break;
      case ']': t.kind = Tok::RBracket; break;
      case ',': t.kind = Tok::Comma; break;
      default: syntax(i, std::string("unexpected character '") + c + "'");
    }
    t.text = std::string(1, c);
    ++i;
    out.push_back(std::move(t));
  }
  Token end;
  end.pos = s.size();
  out.push_back(end);
  return out;
}

// num / den * z2^z2.
struct Value {
  ExpPoly num;
  PolyC den{GaussianRational(1)};
  int z2 = 0;
};

bool pure_z(const ExpPoly& e) { return e.is_zero() || (e.terms().size() == 1 && e.terms().begin()->first == 0); }

// c s^k with c constant.
bool unit_monomial(const ExpPoly& e) { return e.terms().size() == 1 && e.terms().begin()->second.is_constant(); }

ExpPoly unit_inverse(const ExpPoly& e) {
  const auto& [k, p] = *e.terms().begin();
  return ExpPoly::term(-k, PolyC(p[0].inverse()));
}

Value add(const Value& a, const Value& b, size_t pos, bool subtract) {
  if (a.z2 != b.z2 && !a.num.is_zero() && !b.num.is_zero()) syntax(pos, "z2 powers differ across a sum");
  Value out;
  ExpPoly bn = subtract ? ExpPoly() - b.num : b.num;
  if (a.den == b.den) {
    out.num = a.num + bn;
    out.den = a.den;
  } else {
    out.num = a.num * ExpPoly(b.den) + bn * ExpPoly(a.den);
    out.den = a.den * b.den;
  }
  out.z2 = a.num.is_zero() ? b.z2 : a.z2;
  return out;
}

Value mul(const Value& a, const Value& b) { return {a.num * b.num, a.den * b.den, a.z2 + b.z2}; }

Value reciprocal(const Value& b, size_t pos) {
  if (b.num.is_zero()) throw Error(ErrorKind::ZeroDenominator, "column " + std::to_string(pos + 1) + ": division by zero");
  if (b.z2 != 0) syntax(pos, "z2 cannot appear in a denominator");
  if (unit_monomial(b.num)) return {unit_inverse(b.num) * ExpPoly(b.den), PolyC(GaussianRational(1)), 0};
  if (!pure_z(b.num))
    throw Error(ErrorKind::NonPolynomialDenominator,
                "column " + std::to_string(pos + 1) + ": denominator must be a polynomial in z");
  return {ExpPoly(b.den), b.num.coeff(0), 0};
}

Value power(const Value& base, long n, size_t pos) {
  if (n < 0) return power(reciprocal(base, pos), -n, pos);
  if (n > 4096) syntax(pos, "exponent too large");
  Value out{ExpPoly(GaussianRational(1)), PolyC(GaussianRational(1)), 0};
  Value b = base;
  for (long e = n; e > 0; e >>= 1) {
    if (e & 1) out = mul(out, b);
    if (e > 1) b = mul(b, b);
  }
  return out;
}

class Parser {
 public:
  explicit Parser(const std::string& text, bool allow_z2) : toks_(lex(text)), allow_z2_(allow_z2) {}

  Value parse_expression() {
    Value v = expr();
    expect_end();
    return v;
  }

  HMatrix parse_matrix() {
    std::vector<std::vector<HElement>> rows;
    expect(Tok::LBracket, "'['");
    do {
      size_t row_pos = peek().pos;
      expect(Tok::LBracket, "'[' opening a row");
      std::vector<HElement> row;
      do {
        size_t p = peek().pos;
        row.push_back(to_element(expr(), p));
      } while (accept(Tok::Comma));
      expect(Tok::RBracket, "']' closing a row");
      if (!rows.empty() && row.size() != rows.front().size()) syntax(row_pos, "rows have different lengths");
      rows.push_back(std::move(row));
    } while (accept(Tok::Comma));
    expect(Tok::RBracket, "']'");
    expect_end();
    return HMatrix(std::move(rows));
  }

  static HElement to_element(const Value& v, size_t pos) {
    if (v.z2 != 0) syntax(pos, "z2 is only allowed in hefer input");
    return h_normalize(v.num, v.den);
  }

 private:
  const Token& peek() const { return toks_[idx_]; }
  bool accept(Tok k) {
    if (peek().kind != k) return false;
    ++idx_;
    return true;
  }
  void expect(Tok k, const char* what) {
    if (!accept(k)) syntax(peek().pos, std::string("expected ") + what + describe());
  }
  void expect_end() {
    if (peek().kind != Tok::End) syntax(peek().pos, "unexpected '" + peek().text + "'");
  }
  std::string describe() const { return peek().kind == Tok::End ? " at end of input" : " before '" + peek().text + "'"; }

  Value expr() {
    Value v = term();
    for (;;) {
      size_t p = peek().pos;
      if (accept(Tok::Plus))
        v = add(v, term(), p, false);
      else if (accept(Tok::Minus))
        v = add(v, term(), p, true);
      else
        return v;
    }
  }

  Value term() {
    Value v = unary();
    for (;;) {
      if (accept(Tok::Star)) {
        v = mul(v, unary());
      } else if (accept(Tok::Slash)) {
        size_t p = peek().pos;
        v = mul(v, reciprocal(unary(), p));
      } else {
        return v;
      }
    }
  }

  Value unary() {
    if (accept(Tok::Minus)) {
      Value v = unary();
      v.num = ExpPoly() - v.num;
      return v;
    }
    if (accept(Tok::Plus)) return unary();
    return pow();
  }

  Value pow() {
    Value base = atom();
    size_t p = peek().pos;
    if (!accept(Tok::Caret)) return base;
    bool neg = false;
    bool paren = accept(Tok::LParen);
    if (accept(Tok::Minus)) neg = true;
    if (peek().kind != Tok::Number || !peek().plain_integer) syntax(peek().pos, "expected an integer exponent" + describe());
    long n = toks_[idx_++].integer;
    if (paren) expect(Tok::RParen, "')'");
    if (neg) n = -n;
    if (base.z2 != 0 && n < 0) syntax(p, "negative power of z2");
    return power(base, n, p);
  }

  Value atom() {
    const Token& t = peek();
    Value v;
    switch (t.kind) {
      case Tok::Number:
        ++idx_;
        v.num = ExpPoly(t.value);
        return v;
      case Tok::Z:
        ++idx_;
        v.num = ExpPoly::z();
        return v;
      case Tok::Z2:
        if (!allow_z2_) syntax(t.pos, "z2 is only allowed in hefer input");
        ++idx_;
        v.num = ExpPoly(GaussianRational(1));
        v.z2 = 1;
        return v;
      case Tok::S:
        ++idx_;
        v.num = ExpPoly::sigma(1);
        return v;
      case Tok::I:
        ++idx_;
        v.num = ExpPoly(GaussianRational::i());
        return v;
      case Tok::LParen: {
        ++idx_;
        Value inner = expr();
        expect(Tok::RParen, "')'");
        return inner;
      }
      default:
        syntax(t.pos, "expected an operand" + describe());
    }
  }

  std::vector<Token> toks_;
  size_t idx_ = 0;
  bool allow_z2_;
};

}  // namespace

HElement parse_operator(const std::string& text) {
  Parser p(text, false);
  return Parser::to_element(p.parse_expression(), 0);
}

HMatrix parse_matrix(const std::string& text) {
  Parser p(text, false);
  return p.parse_matrix();
}

HeferInput parse_hefer_input(const std::string& text) {
  Parser p(text, true);
  Value v = p.parse_expression();
  HeferInput out;
  out.alpha = v.z2;
  v.z2 = 0;
  out.q = Parser::to_element(v, 0);
  return out;
}

GaussianRational parse_gaussian(const std::string& text) {
  Parser p(text, false);
  Value v = p.parse_expression();
  if (v.z2 != 0 || !pure_z(v.num) || !v.den.is_constant() || !v.num.coeff(0).is_constant())
    throw Error(ErrorKind::SyntaxError, "not a constant: '" + text + "'");
  return v.num.coeff(0)[0] / v.den[0];
}

std::string print(const HElement& h) { return h.to_string(); }

std::string print(const HMatrix& m) {
  std::string out = "[";
  for (int i = 0; i < m.rows(); ++i) {
    out += i ? ", [" : "[";
    for (int j = 0; j < m.cols(); ++j) out += (j ? ", " : "") + m(i, j).to_string();
    out += "]";
  }
  return out + "]";
}

}  // namespace ddelta
