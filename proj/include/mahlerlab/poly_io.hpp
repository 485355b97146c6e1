#pragma once
#include <cctype>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "laurent_poly.hpp"
#include "uni_poly.hpp"

namespace mahlerlab {

// Text form: sums of terms `coeff*x1^e1*...*xd^ed`. The reader also accepts
// parentheses, implicit multiplication by juxtaposition of a number and a
// variable, integer powers of parenthesised factors, and the one-letter
// aliases x, t (variable 1), y (variable 2), z (variable 3).

namespace detail {

class PolyParser {
public:
  PolyParser(std::string_view text, std::size_t dim) : s_(text), dim_(dim) {}

  LaurentPoly parse() {
    LaurentPoly p = expr();
    skip_ws();
    if (pos_ != s_.size())
      fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return p;
  }

  //! Largest variable index referenced by the text (1-based), 0 if none.
  static std::size_t scan_dim(std::string_view s) {
    std::size_t best = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      const char ch = s[i];
      if (!std::isalpha(static_cast<unsigned char>(ch)))
        continue;
      if (i > 0 && std::isalpha(static_cast<unsigned char>(s[i - 1])))
        continue;
      std::size_t j = i + 1;
      std::size_t idx = 0;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j])))
        idx = idx * 10 + static_cast<std::size_t>(s[j++] - '0');
      if (j == i + 1)
        idx = ch == 'y' ? 2 : ch == 'z' ? 3 : 1;
      best = std::max(best, idx);
    }
    return best;
  }

private:
  [[noreturn]] void fail(const std::string &msg) const {
    throw std::invalid_argument("polynomial parse error at position " +
                                std::to_string(pos_) + ": " + msg + " in '" +
                                std::string(s_) + "'");
  }
  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
      ++pos_;
  }
  bool peek(char c) {
    skip_ws();
    return pos_ < s_.size() && s_[pos_] == c;
  }
  bool accept(char c) {
    if (peek(c)) {
      ++pos_;
      return true;
    }
    return false;
  }

  LaurentPoly expr() {
    LaurentPoly acc(dim_);
    bool first = true;
    while (true) {
      int sign = 1;
      if (accept('+'))
        sign = 1;
      else if (accept('-'))
        sign = -1;
      else if (!first)
        break;
      LaurentPoly t = term();
      if (sign < 0)
        t = -t;
      acc += t;
      first = false;
    }
    return acc;
  }

  bool starts_factor() {
    skip_ws();
    if (pos_ >= s_.size())
      return false;
    const char c = s_[pos_];
    return c == '(' || std::isdigit(static_cast<unsigned char>(c)) ||
           std::isalpha(static_cast<unsigned char>(c));
  }

  LaurentPoly term() {
    LaurentPoly acc = factor();
    while (true) {
      if (accept('*')) {
        acc = acc * factor();
      } else if (starts_factor()) {
        acc = acc * factor();
      } else {
        break;
      }
    }
    return acc;
  }

  std::int64_t integer_exponent() {
    skip_ws();
    bool paren = accept('(');
    int sign = 1;
    if (accept('-'))
      sign = -1;
    else
      accept('+');
    skip_ws();
    if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_])))
      fail("expected integer exponent");
    std::int64_t v = 0;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
      v = v * 10 + (s_[pos_++] - '0');
    if (paren && !accept(')'))
      fail("expected ')'");
    return sign * v;
  }

  LaurentPoly factor() {
    skip_ws();
    if (pos_ >= s_.size())
      fail("unexpected end of input");
    LaurentPoly base(dim_);
    bool is_monomial = false;
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      base = expr();
      if (!accept(')'))
        fail("expected ')'");
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
        ++pos_;
      base = LaurentPoly::constant(dim_, parse_bigint(s_.substr(start, pos_ - start)));
    } else if (std::isalpha(static_cast<unsigned char>(c))) {
      ++pos_;
      std::size_t idx = 0;
      bool has_digits = false;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
        idx = idx * 10 + static_cast<std::size_t>(s_[pos_++] - '0');
        has_digits = true;
      }
      if (!has_digits) {
        if (c == 'x' || c == 't')
          idx = 1;
        else if (c == 'y')
          idx = 2;
        else if (c == 'z')
          idx = 3;
        else
          fail(std::string("unknown variable '") + c + "'");
      } else if (c != 'x' && c != 't') {
        fail(std::string("unknown variable '") + c + "'");
      }
      if (idx == 0 || idx > dim_)
        fail("variable index " + std::to_string(idx) + " outside dimension " +
             std::to_string(dim_));
      base = LaurentPoly::variable(dim_, idx - 1);
      is_monomial = true;
    } else {
      fail(std::string("unexpected '") + c + "'");
    }
    if (accept('^')) {
      const std::int64_t e = integer_exponent();
      if (e < 0) {
        if (!is_monomial && base.size() != 1)
          fail("negative powers are only defined for monomials");
        const auto &[ex, co] = *base.terms().begin();
        if (abs(co) != 1)
          fail("negative power of a non-unit monomial");
        Exponent f = ex;
        for (auto &v : f)
          v *= e;
        BigInt sign = (co < 0 && (-e) % 2 == 1) ? BigInt(-1) : BigInt(1);
        return LaurentPoly::monomial(dim_, f, sign);
      }
      return base.pow(static_cast<unsigned>(e));
    }
    return base;
  }

  std::string_view s_;
  std::size_t dim_;
  std::size_t pos_ = 0;
};

} // namespace detail

//! Parse the text form. With dim == 0 the dimension is the largest variable
//! index mentioned (at least 1).
inline LaurentPoly parse_poly(std::string_view text, std::size_t dim = 0) {
  if (dim == 0)
    dim = std::max<std::size_t>(1, detail::PolyParser::scan_dim(text));
  return detail::PolyParser(text, dim).parse();
}

//! Canonical text form: terms in descending exponent order, variables
//! written x1..xd (or x when d = 1). parse_poly(to_text(P), P.dim()) == P.
inline std::string to_text(const LaurentPoly &p) {
  if (p.is_zero())
    return "0";
  std::string out;
  bool first = true;
  for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
    const auto &[e, c] = *it;
    const bool neg = sgn(c) < 0;
    const BigInt mag = abs(c);
    if (first)
      out += neg ? "-" : "";
    else
      out += neg ? " - " : " + ";
    first = false;
    std::string mono;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0)
        continue;
      if (!mono.empty())
        mono += "*";
      mono += p.dim() == 1 ? "x" : "x" + std::to_string(i + 1);
      if (e[i] != 1)
        mono += "^" + std::to_string(e[i]);
    }
    if (mono.empty())
      out += to_string(mag);
    else if (mag == 1)
      out += mono;
    else
      out += to_string(mag) + "*" + mono;
  }
  return out;
}

inline std::string to_text(const UniPoly &p) { return to_text(to_laurent(p)); }

//! JSON form {dim, terms:[{exps:[...], coeff:"..."}]} with decimal-string
//! coefficients of arbitrary size.
inline nlohmann::json to_json(const LaurentPoly &p) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto &[e, c] : p.terms())
    terms.push_back({{"exps", e}, {"coeff", to_string(c)}});
  return {{"dim", p.dim()}, {"terms", terms}};
}

inline LaurentPoly poly_from_json(const nlohmann::json &j) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("terms"))
    throw std::invalid_argument("polynomial JSON needs 'dim' and 'terms'");
  const auto dim = j.at("dim").get<std::size_t>();
  LaurentPoly p(dim);
  for (const auto &t : j.at("terms")) {
    auto e = t.at("exps").get<Exponent>();
    const auto &cj = t.at("coeff");
    BigInt c = cj.is_string() ? parse_bigint(cj.get<std::string>())
                              : BigInt(cj.get<long>());
    p.add_term(e, c);
  }
  return p;
}

} // namespace mahlerlab
