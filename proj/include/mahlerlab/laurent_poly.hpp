#pragma once
#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "bigint.hpp"

namespace mahlerlab {

using Exponent = std::vector<std::int64_t>;

//! Sparse integer Laurent polynomial in `dim` commuting variables.
//!
//! Terms live in an ordered map keyed by exponent vector, so iteration order
//! (and therefore every downstream floating-point summation) is deterministic.
//! Zero coefficients are never stored; the zero polynomial is the empty map.
class LaurentPoly {
public:
  using TermMap = std::map<Exponent, BigInt>;

  explicit LaurentPoly(std::size_t dim) : dim_(dim) {
    if (dim == 0)
      throw std::invalid_argument("LaurentPoly: dimension must be positive");
  }

  static LaurentPoly constant(std::size_t dim, const BigInt &c) {
    LaurentPoly p(dim);
    p.add_term(Exponent(dim, 0), c);
    return p;
  }
  static LaurentPoly monomial(std::size_t dim, Exponent e,
                              const BigInt &c = 1) {
    LaurentPoly p(dim);
    p.add_term(e, c);
    return p;
  }
  //! The coordinate function x_{index+1}.
  static LaurentPoly variable(std::size_t dim, std::size_t index) {
    Exponent e(dim, 0);
    e.at(index) = 1;
    return monomial(dim, std::move(e));
  }

  std::size_t dim() const { return dim_; }
  const TermMap &terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  void add_term(const Exponent &e, const BigInt &c) {
    if (e.size() != dim_)
      throw std::invalid_argument("LaurentPoly: exponent of dimension " +
                                  std::to_string(e.size()) + " in a " +
                                  std::to_string(dim_) + "-variable polynomial");
    if (sgn(c) == 0)
      return;
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
      it->second += c;
      if (sgn(it->second) == 0)
        terms_.erase(it);
    }
  }

  BigInt coefficient(const Exponent &e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? BigInt(0) : it->second;
  }

  //! True if no exponent is negative.
  bool is_polynomial() const {
    for (const auto &[e, c] : terms_)
      for (auto v : e)
        if (v < 0)
          return false;
    return true;
  }

  std::int64_t min_exponent(std::size_t var) const {
    check_nonzero("min_exponent");
    std::int64_t m = terms_.begin()->first.at(var);
    for (const auto &[e, c] : terms_)
      m = std::min(m, e[var]);
    return m;
  }
  std::int64_t max_exponent(std::size_t var) const {
    check_nonzero("max_exponent");
    std::int64_t m = terms_.begin()->first.at(var);
    for (const auto &[e, c] : terms_)
      m = std::max(m, e[var]);
    return m;
  }

  //! Multiply by the monomial x^shift.
  LaurentPoly shifted(const Exponent &shift) const {
    check_dim(shift.size());
    LaurentPoly r(dim_);
    for (const auto &[e, c] : terms_) {
      Exponent f = e;
      for (std::size_t i = 0; i < dim_; ++i)
        f[i] += shift[i];
      r.terms_.emplace(std::move(f), c);
    }
    return r;
  }

  //! Sum of absolute values of the coefficients.
  BigInt l1_norm() const {
    BigInt s = 0;
    for (const auto &[e, c] : terms_)
      s += abs(c);
    return s;
  }

  BigInt max_abs_coefficient() const {
    BigInt m = 0;
    for (const auto &[e, c] : terms_)
      if (abs(c) > m)
        m = abs(c);
    return m;
  }

  LaurentPoly &operator+=(const LaurentPoly &o) {
    check_dim(o.dim_);
    for (const auto &[e, c] : o.terms_)
      add_term(e, c);
    return *this;
  }
  LaurentPoly &operator-=(const LaurentPoly &o) {
    check_dim(o.dim_);
    for (const auto &[e, c] : o.terms_)
      add_term(e, -c);
    return *this;
  }
  LaurentPoly &operator*=(const BigInt &k) {
    if (sgn(k) == 0) {
      terms_.clear();
      return *this;
    }
    for (auto &[e, c] : terms_)
      c *= k;
    return *this;
  }

  friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly &b) {
    a += b;
    return a;
  }
  friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly &b) {
    a -= b;
    return a;
  }
  friend LaurentPoly operator-(LaurentPoly a) {
    for (auto &[e, c] : a.terms_)
      c = -c;
    return a;
  }
  friend LaurentPoly operator*(const LaurentPoly &a, const LaurentPoly &b) {
    a.check_dim(b.dim_);
    LaurentPoly r(a.dim_);
    Exponent f(a.dim_);
    for (const auto &[ea, ca] : a.terms_)
      for (const auto &[eb, cb] : b.terms_) {
        for (std::size_t i = 0; i < a.dim_; ++i)
          f[i] = ea[i] + eb[i];
        r.add_term(f, ca * cb);
      }
    return r;
  }
  friend LaurentPoly operator*(LaurentPoly a, const BigInt &k) {
    a *= k;
    return a;
  }
  friend bool operator==(const LaurentPoly &a, const LaurentPoly &b) {
    return a.dim_ == b.dim_ && a.terms_ == b.terms_;
  }

  LaurentPoly pow(unsigned e) const {
    LaurentPoly result = constant(dim_, 1);
    LaurentPoly base = *this;
    while (e) {
      if (e & 1u)
        result = result * base;
      e >>= 1;
      if (e)
        base = base * base;
    }
    return result;
  }

private:
  void check_dim(std::size_t d) const {
    if (d != dim_)
      throw std::invalid_argument("LaurentPoly: dimension mismatch (" +
                                  std::to_string(dim_) + " vs " +
                                  std::to_string(d) + ")");
  }
  void check_nonzero(const char *what) const {
    if (terms_.empty())
      throw std::invalid_argument(std::string(what) +
                                  ": zero polynomial has no exponents");
  }

  std::size_t dim_;
  TermMap terms_;
};

//! log of the largest coefficient modulus.
inline double height(const LaurentPoly &p) {
  if (p.is_zero())
    throw std::invalid_argument("height: zero polynomial");
  return log_abs(p.max_abs_coefficient());
}

//! Degree under G_m^d -> P^d. Denominators are cleared per variable by the
//! smallest monomial x^v making the polynomial honest (v_i = max(0, -min e_i)),
//! then the total degree is taken. For ordinary polynomials this is the usual
//! total degree.
inline std::int64_t degree(const LaurentPoly &p) {
  if (p.is_zero())
    throw std::invalid_argument("degree: zero polynomial");
  Exponent shift(p.dim(), 0);
  for (std::size_t i = 0; i < p.dim(); ++i)
    shift[i] = std::max<std::int64_t>(0, -p.min_exponent(i));
  std::int64_t best = 0;
  for (const auto &[e, c] : p.terms()) {
    std::int64_t s = 0;
    for (std::size_t i = 0; i < p.dim(); ++i)
      s += e[i] + shift[i];
    best = std::max(best, s);
  }
  return best;
}

//! Degree in a single variable (max exponent), for polynomials.
inline std::int64_t partial_degree(const LaurentPoly &p, std::size_t var) {
  return p.is_zero() ? -1 : p.max_exponent(var);
}

//! Divide out the largest monomial factor so every variable has minimum
//! exponent zero. |P| is unchanged on the unit torus.
inline LaurentPoly normalize_monomial(const LaurentPoly &p) {
  if (p.is_zero())
    return p;
  Exponent shift(p.dim());
  for (std::size_t i = 0; i < p.dim(); ++i)
    shift[i] = -p.min_exponent(i);
  return p.shifted(shift);
}

} // namespace mahlerlab
