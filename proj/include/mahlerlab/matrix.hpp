#pragma once
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bigint.hpp"
#include "uni_poly.hpp"

namespace mahlerlab {

//! Dense integer matrix with big-integer entries, row-major.
class IntMatrix {
public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : r_(rows), c_(cols), a_(rows * cols, BigInt(0)) {}
  IntMatrix(std::initializer_list<std::initializer_list<long>> rows) {
    r_ = rows.size();
    c_ = r_ ? rows.begin()->size() : 0;
    for (const auto &row : rows) {
      if (row.size() != c_)
        throw std::invalid_argument("IntMatrix: ragged rows");
      for (long v : row)
        a_.emplace_back(v);
    }
  }
  static IntMatrix identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
      m(i, i) = 1;
    return m;
  }

  std::size_t rows() const { return r_; }
  std::size_t cols() const { return c_; }
  bool square() const { return r_ == c_; }

  BigInt &operator()(std::size_t i, std::size_t j) { return a_[i * c_ + j]; }
  const BigInt &operator()(std::size_t i, std::size_t j) const { return a_[i * c_ + j]; }

  friend IntMatrix operator*(const IntMatrix &x, const IntMatrix &y) {
    if (x.c_ != y.r_)
      throw std::invalid_argument("IntMatrix: shape mismatch in product");
    IntMatrix z(x.r_, y.c_);
    for (std::size_t i = 0; i < x.r_; ++i)
      for (std::size_t k = 0; k < x.c_; ++k) {
        if (sgn(x(i, k)) == 0)
          continue;
        for (std::size_t j = 0; j < y.c_; ++j)
          z(i, j) += x(i, k) * y(k, j);
      }
    return z;
  }
  friend IntMatrix operator-(IntMatrix x, const IntMatrix &y) {
    if (x.r_ != y.r_ || x.c_ != y.c_)
      throw std::invalid_argument("IntMatrix: shape mismatch in difference");
    for (std::size_t i = 0; i < x.a_.size(); ++i)
      x.a_[i] -= y.a_[i];
    return x;
  }
  friend bool operator==(const IntMatrix &x, const IntMatrix &y) {
    return x.r_ == y.r_ && x.c_ == y.c_ && x.a_ == y.a_;
  }

private:
  std::size_t r_ = 0, c_ = 0;
  std::vector<BigInt> a_;
};

inline IntMatrix power(IntMatrix base, unsigned long e) {
  if (!base.square())
    throw std::invalid_argument("power: matrix must be square");
  IntMatrix r = IntMatrix::identity(base.rows());
  while (e) {
    if (e & 1)
      r = r * base;
    e >>= 1;
    if (e)
      base = base * base;
  }
  return r;
}

//! Determinant by Bareiss fraction-free elimination (all divisions exact).
inline BigInt determinant(IntMatrix m) {
  if (!m.square())
    throw std::invalid_argument("determinant: matrix must be square");
  const std::size_t n = m.rows();
  if (n == 0)
    return 1;
  BigInt prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (sgn(m(k, k)) == 0) {
      std::size_t p = k + 1;
      while (p < n && sgn(m(p, k)) == 0)
        ++p;
      if (p == n)
        return 0;
      for (std::size_t j = 0; j < n; ++j)
        std::swap(m(k, j), m(p, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j)
        m(i, j) = divexact(m(i, j) * m(k, k) - m(i, k) * m(k, j), prev);
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

//! det(t I - A) by Faddeev-LeVerrier; the divisions by k are exact over Z.
inline UniPoly charpoly(const IntMatrix &a) {
  if (!a.square())
    throw std::invalid_argument("charpoly: matrix must be square");
  const std::size_t n = a.rows();
  std::vector<BigInt> c(n + 1, BigInt(0));
  c[n] = 1;
  IntMatrix m(n, n);
  for (std::size_t k = 1; k <= n; ++k) {
    m = a * m;
    for (std::size_t i = 0; i < n; ++i)
      m(i, i) += c[n - k + 1];
    IntMatrix am = a * m;
    BigInt tr = 0;
    for (std::size_t i = 0; i < n; ++i)
      tr += am(i, i);
    c[n - k] = divexact(-tr, BigInt(static_cast<long>(k)));
  }
  return UniPoly(std::move(c));
}

//! Companion matrix of a monic polynomial (last column holds -c_0..-c_{n-1}).
inline IntMatrix companion(const UniPoly &f) {
  if (f.degree() < 1 || f.lead() != 1)
    throw std::invalid_argument("companion: polynomial must be monic of positive degree");
  const auto n = static_cast<std::size_t>(f.degree());
  IntMatrix m(n, n);
  for (std::size_t i = 1; i < n; ++i)
    m(i, i - 1) = 1;
  for (std::size_t i = 0; i < n; ++i)
    m(i, n - 1) = -f.coeffs()[i];
  return m;
}

//! Smith normal form U A V = S with U, V unimodular and S diagonal with
//! nonnegative entries s_1 | s_2 | ...
struct SmithForm {
  IntMatrix U, S, V;
  std::vector<BigInt> diagonal() const {
    std::vector<BigInt> d;
    for (std::size_t i = 0; i < std::min(S.rows(), S.cols()); ++i)
      d.push_back(S(i, i));
    return d;
  }
};

inline SmithForm smith_normal_form(const IntMatrix &a) {
  const std::size_t r = a.rows(), c = a.cols();
  SmithForm f{IntMatrix::identity(r), a, IntMatrix::identity(c)};
  IntMatrix &s = f.S;
  auto row_op = [&](std::size_t dst, std::size_t src, const BigInt &q) {
    // row dst -= q * row src (on S and U)
    for (std::size_t j = 0; j < c; ++j)
      s(dst, j) -= q * s(src, j);
    for (std::size_t j = 0; j < r; ++j)
      f.U(dst, j) -= q * f.U(src, j);
  };
  auto col_op = [&](std::size_t dst, std::size_t src, const BigInt &q) {
    for (std::size_t i = 0; i < r; ++i)
      s(i, dst) -= q * s(i, src);
    for (std::size_t i = 0; i < c; ++i)
      f.V(i, dst) -= q * f.V(i, src);
  };
  auto swap_rows = [&](std::size_t x, std::size_t y) {
    for (std::size_t j = 0; j < c; ++j)
      std::swap(s(x, j), s(y, j));
    for (std::size_t j = 0; j < r; ++j)
      std::swap(f.U(x, j), f.U(y, j));
  };
  auto swap_cols = [&](std::size_t x, std::size_t y) {
    for (std::size_t i = 0; i < r; ++i)
      std::swap(s(i, x), s(i, y));
    for (std::size_t i = 0; i < c; ++i)
      std::swap(f.V(i, x), f.V(i, y));
  };
  auto fdiv = [](const BigInt &x, const BigInt &y) {
    BigInt q;
    mpz_fdiv_q(q.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
    return q;
  };

  const std::size_t n = std::min(r, c);
  for (std::size_t t = 0; t < n; ++t) {
    while (true) {
      // pivot: smallest nonzero modulus in the trailing block
      std::size_t pi = r, pj = c;
      for (std::size_t i = t; i < r; ++i)
        for (std::size_t j = t; j < c; ++j)
          if (sgn(s(i, j)) != 0 && (pi == r || abs(s(i, j)) < abs(s(pi, pj)))) {
            pi = i;
            pj = j;
          }
      if (pi == r)
        return f; // trailing block is zero
      swap_rows(t, pi);
      swap_cols(t, pj);
      bool clean = true;
      for (std::size_t i = t + 1; i < r; ++i)
        if (sgn(s(i, t)) != 0) {
          row_op(i, t, fdiv(s(i, t), s(t, t)));
          clean = clean && sgn(s(i, t)) == 0;
        }
      for (std::size_t j = t + 1; j < c; ++j)
        if (sgn(s(t, j)) != 0) {
          col_op(j, t, fdiv(s(t, j), s(t, t)));
          clean = clean && sgn(s(t, j)) == 0;
        }
      if (!clean)
        continue;
      // the pivot must divide the rest of the block
      bool divides = true;
      for (std::size_t i = t + 1; i < r && divides; ++i)
        for (std::size_t j = t + 1; j < c && divides; ++j)
          if (sgn(s(i, j)) != 0 && !mpz_divisible_p(s(i, j).get_mpz_t(), s(t, t).get_mpz_t())) {
            // add row i to row t and redo
            row_op(t, i, BigInt(-1));
            divides = false;
          }
      if (divides)
        break;
    }
    if (sgn(s(t, t)) < 0) {
      for (std::size_t j = 0; j < c; ++j)
        s(t, j) = -s(t, j);
      for (std::size_t j = 0; j < r; ++j)
        f.U(t, j) = -f.U(t, j);
    }
  }
  return f;
}

inline std::string to_string(const IntMatrix &m) {
  std::string s = "[";
  for (std::size_t i = 0; i < m.rows(); ++i) {
    s += i ? ",[" : "[";
    for (std::size_t j = 0; j < m.cols(); ++j)
      s += (j ? "," : "") + to_string(m(i, j));
    s += "]";
  }
  return s + "]";
}

} // namespace mahlerlab
