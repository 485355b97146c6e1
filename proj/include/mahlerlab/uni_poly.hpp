#pragma once
#include <cstdint>
#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>
#include <vector>

#include "bigint.hpp"
#include "laurent_poly.hpp"

namespace mahlerlab {

//! Dense univariate integer polynomial, constant term first. The highest
//! stored coefficient is nonzero; the zero polynomial has no coefficients.
class UniPoly {
public:
  UniPoly() = default;
  explicit UniPoly(std::vector<BigInt> coeffs) : c_(std::move(coeffs)) {
    trim();
  }
  UniPoly(std::initializer_list<long> coeffs) {
    for (long v : coeffs)
      c_.emplace_back(v);
    trim();
  }

  static UniPoly monomial(std::size_t deg, const BigInt &coeff = 1) {
    std::vector<BigInt> c(deg + 1, BigInt(0));
    c[deg] = coeff;
    return UniPoly(std::move(c));
  }
  //! t^n - 1
  static UniPoly x_pow_minus_one(std::size_t n) {
    std::vector<BigInt> c(n + 1, BigInt(0));
    c[0] = -1;
    c[n] += 1;
    return UniPoly(std::move(c));
  }

  //! -1 for the zero polynomial.
  long degree() const { return static_cast<long>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<BigInt> &coeffs() const { return c_; }
  const BigInt &lead() const {
    if (c_.empty())
      throw std::invalid_argument("UniPoly::lead of zero polynomial");
    return c_.back();
  }
  BigInt coeff(std::size_t i) const { return i < c_.size() ? c_[i] : BigInt(0); }

  BigInt eval(const BigInt &x) const {
    BigInt r = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it)
      r = r * x + *it;
    return r;
  }

  friend UniPoly operator+(const UniPoly &a, const UniPoly &b) {
    std::vector<BigInt> c(std::max(a.c_.size(), b.c_.size()), BigInt(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      c[i] += a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i)
      c[i] += b.c_[i];
    return UniPoly(std::move(c));
  }
  friend UniPoly operator-(const UniPoly &a, const UniPoly &b) {
    std::vector<BigInt> c(std::max(a.c_.size(), b.c_.size()), BigInt(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      c[i] += a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i)
      c[i] -= b.c_[i];
    return UniPoly(std::move(c));
  }
  friend UniPoly operator*(const UniPoly &a, const UniPoly &b) {
    if (a.is_zero() || b.is_zero())
      return {};
    std::vector<BigInt> c(a.c_.size() + b.c_.size() - 1, BigInt(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (sgn(a.c_[i]) == 0)
        continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j)
        c[i + j] += a.c_[i] * b.c_[j];
    }
    return UniPoly(std::move(c));
  }
  friend UniPoly operator*(const UniPoly &a, const BigInt &k) {
    std::vector<BigInt> c = a.c_;
    for (auto &v : c)
      v *= k;
    return UniPoly(std::move(c));
  }
  friend bool operator==(const UniPoly &a, const UniPoly &b) {
    return a.c_ == b.c_;
  }

  UniPoly derivative() const {
    if (c_.size() <= 1)
      return {};
    std::vector<BigInt> c(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i)
      c[i - 1] = c_[i] * static_cast<unsigned long>(i);
    return UniPoly(std::move(c));
  }

  BigInt content() const {
    BigInt g = 0;
    for (const auto &v : c_)
      g = mahlerlab::gcd(g, v);
    return g;
  }
  //! Divide by the content, normalising the leading coefficient positive.
  UniPoly primitive_part() const {
    if (is_zero())
      return {};
    BigInt g = content();
    if (sgn(lead()) < 0)
      g = -g;
    std::vector<BigInt> c = c_;
    for (auto &v : c)
      v = divexact(v, g);
    return UniPoly(std::move(c));
  }

  //! Reverse coefficient order: t^deg * A(1/t).
  UniPoly reciprocal() const {
    std::vector<BigInt> c(c_.rbegin(), c_.rend());
    return UniPoly(std::move(c));
  }

private:
  void trim() {
    while (!c_.empty() && sgn(c_.back()) == 0)
      c_.pop_back();
  }

  std::vector<BigInt> c_;
};

//! Quotient and remainder by a monic (or unit-leading) divisor, exact over Z.
inline std::pair<UniPoly, UniPoly> divmod_monic(const UniPoly &a,
                                                const UniPoly &m) {
  if (m.is_zero() || abs(m.lead()) != 1)
    throw std::invalid_argument("divmod_monic: divisor must have unit lead");
  std::vector<BigInt> r = a.coeffs();
  const long dm = m.degree();
  if (a.degree() < dm)
    return {UniPoly{}, a};
  std::vector<BigInt> q(static_cast<std::size_t>(a.degree() - dm + 1),
                        BigInt(0));
  const BigInt &lm = m.lead();
  for (long i = a.degree(); i >= dm; --i) {
    BigInt coef = r[static_cast<std::size_t>(i)] * lm; // lm = +-1
    if (sgn(coef) == 0)
      continue;
    q[static_cast<std::size_t>(i - dm)] = coef;
    for (long j = 0; j <= dm; ++j)
      r[static_cast<std::size_t>(i - dm + j)] -=
          coef * m.coeffs()[static_cast<std::size_t>(j)];
  }
  return {UniPoly(std::move(q)), UniPoly(std::move(r))};
}

//! Exact quotient a / b over Z; throws if b does not divide a.
inline UniPoly divexact(const UniPoly &a, const UniPoly &b) {
  if (b.is_zero())
    throw std::invalid_argument("divexact: division by zero polynomial");
  if (a.is_zero())
    return {};
  std::vector<BigInt> r = a.coeffs();
  const long db = b.degree();
  if (a.degree() < db)
    throw std::domain_error("divexact: not divisible");
  std::vector<BigInt> q(static_cast<std::size_t>(a.degree() - db + 1),
                        BigInt(0));
  for (long i = a.degree(); i >= db; --i) {
    const BigInt &top = r[static_cast<std::size_t>(i)];
    if (sgn(top) == 0)
      continue;
    if (!mpz_divisible_p(top.get_mpz_t(), b.lead().get_mpz_t()))
      throw std::domain_error("divexact: not divisible");
    BigInt coef = divexact(top, b.lead());
    q[static_cast<std::size_t>(i - db)] = coef;
    for (long j = 0; j <= db; ++j)
      r[static_cast<std::size_t>(i - db + j)] -=
          coef * b.coeffs()[static_cast<std::size_t>(j)];
  }
  for (const auto &v : r)
    if (sgn(v) != 0)
      throw std::domain_error("divexact: not divisible");
  return UniPoly(std::move(q));
}

//! True if m (unit leading coefficient) divides a.
inline bool divides_monic(const UniPoly &m, const UniPoly &a) {
  return divmod_monic(a, m).second.is_zero();
}

//! Greatest common divisor over Z (primitive, positive lead) via the
//! primitive polynomial remainder sequence.
inline UniPoly gcd(const UniPoly &a, const UniPoly &b) {
  if (a.is_zero())
    return b.primitive_part();
  if (b.is_zero())
    return a.primitive_part();
  UniPoly f = a.primitive_part(), g = b.primitive_part();
  if (f.degree() < g.degree())
    std::swap(f, g);
  while (!g.is_zero()) {
    // pseudo-remainder of f by g
    std::vector<BigInt> r = f.coeffs();
    const long dg = g.degree();
    const BigInt &lg = g.lead();
    for (long i = f.degree(); i >= dg; --i) {
      BigInt top = r[static_cast<std::size_t>(i)];
      for (auto &v : r)
        v *= lg;
      if (sgn(top) == 0)
        continue;
      for (long j = 0; j <= dg; ++j)
        r[static_cast<std::size_t>(i - dg + j)] -=
            top * g.coeffs()[static_cast<std::size_t>(j)];
    }
    UniPoly rem(std::move(r));
    f = g;
    g = rem.primitive_part();
  }
  return f.primitive_part();
}

//! Squarefree decomposition (Yun): returns pairs (factor, multiplicity) with
//! pairwise coprime squarefree primitive factors of positive degree.
inline std::vector<std::pair<UniPoly, int>> squarefree_decomposition(
    const UniPoly &a) {
  std::vector<std::pair<UniPoly, int>> out;
  if (a.degree() <= 0)
    return out;
  UniPoly f = a.primitive_part();
  UniPoly fp = f.derivative();
  UniPoly g = gcd(f, fp);
  UniPoly b = divexact(f, g);
  UniPoly c = divexact(fp, g);
  UniPoly d = c - b.derivative();
  int i = 1;
  while (b.degree() > 0) {
    UniPoly h = gcd(b, d);
    if (h.degree() > 0)
      out.emplace_back(h, i);
    b = divexact(b, h);
    c = divexact(d, h);
    d = c - b.derivative();
    ++i;
  }
  return out;
}

namespace detail {
//! Multiply in place by (t^d - 1).
inline std::vector<BigInt> mul_xd_minus_one(const std::vector<BigInt> &p,
                                            std::size_t d) {
  std::vector<BigInt> r(p.size() + d, BigInt(0));
  for (std::size_t i = 0; i < p.size(); ++i) {
    r[i + d] += p[i];
    r[i] -= p[i];
  }
  return r;
}
//! Exact division by (t^d - 1): q_i = q_{i-d} - p_i read from the bottom.
inline std::vector<BigInt> div_xd_minus_one(const std::vector<BigInt> &p,
                                            std::size_t d) {
  if (p.size() <= d)
    throw std::domain_error("div_xd_minus_one: degree too small");
  std::vector<BigInt> q(p.size() - d, BigInt(0));
  // p = q * (t^d - 1)  =>  p_i = q_{i-d} - q_i
  for (std::size_t i = 0; i < q.size(); ++i) {
    BigInt prev = i >= d ? q[i - d] : BigInt(0);
    q[i] = prev - p[i];
  }
  return q;
}
} // namespace detail

//! The n-th cyclotomic polynomial, via prod_{e|n} (t^e - 1)^{mu(n/e)}.
//! Results are memoised process-wide behind a mutex.
inline UniPoly cyclotomic(std::uint64_t n) {
  if (n == 0)
    throw std::invalid_argument("cyclotomic: n must be positive");
  static std::mutex mu;
  static std::map<std::uint64_t, UniPoly> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end())
      return it->second;
  }
  std::vector<BigInt> p{BigInt(1)};
  const auto divs = divisors(n);
  for (auto e : divs)
    if (moebius(n / e) == 1)
      p = detail::mul_xd_minus_one(p, e);
  for (auto e : divs)
    if (moebius(n / e) == -1)
      p = detail::div_xd_minus_one(p, e);
  // With an odd count of -1 factors the sign flips; normalise to monic.
  UniPoly result(std::move(p));
  if (sgn(result.lead()) < 0)
    result = result * BigInt(-1);
  std::lock_guard<std::mutex> lock(mu);
  cache.emplace(n, result);
  return result;
}

//! Res(A, B) = lead(A)^{deg B} * prod_{A(a)=0} B(a). Computed exactly by the
//! Euclidean recursion over Q.
inline BigInt resultant(const UniPoly &a, const UniPoly &b) {
  if (a.is_zero() || b.is_zero())
    throw std::invalid_argument("resultant: zero polynomial");
  using Q = std::vector<BigRational>;
  auto to_q = [](const UniPoly &p) {
    Q q;
    for (const auto &c : p.coeffs())
      q.emplace_back(c);
    return q;
  };
  auto deg = [](const Q &p) { return static_cast<long>(p.size()) - 1; };
  auto trim = [](Q &p) {
    while (!p.empty() && sgn(p.back()) == 0)
      p.pop_back();
  };
  auto qpow = [](const BigRational &x, long e) {
    BigRational r = 1;
    for (long i = 0; i < e; ++i)
      r *= x;
    return r;
  };

  Q A = to_q(a), B = to_q(b);
  BigRational factor = 1;
  while (true) {
    const long n = deg(A), m = deg(B);
    if (n == 0)
      return BigInt(factor * qpow(A[0], m));
    if (m == 0)
      return BigInt(factor * qpow(B[0], n));
    if (m < n) {
      if ((n * m) % 2 == 1)
        factor = -factor;
      std::swap(A, B);
      continue;
    }
    // B := B mod A
    Q R = B;
    const BigRational la = A.back();
    for (long i = m; i >= n; --i) {
      BigRational coef = R[static_cast<std::size_t>(i)] / la;
      if (sgn(coef) == 0)
        continue;
      for (long j = 0; j <= n; ++j)
        R[static_cast<std::size_t>(i - n + j)] -=
            coef * A[static_cast<std::size_t>(j)];
    }
    R.resize(static_cast<std::size_t>(n));
    trim(R);
    if (R.empty())
      return BigInt(0);
    factor *= qpow(la, m - deg(R));
    B = std::move(R);
  }
}

//! Convert a one-variable Laurent polynomial to a polynomial by dividing out
//! the lowest power of the variable. Returns the shift applied as well.
inline std::pair<UniPoly, std::int64_t> to_unipoly(const LaurentPoly &p) {
  if (p.dim() != 1)
    throw std::invalid_argument("to_unipoly: polynomial is not univariate");
  if (p.is_zero())
    return {UniPoly{}, 0};
  const std::int64_t lo = p.min_exponent(0);
  const std::int64_t hi = p.max_exponent(0);
  std::vector<BigInt> c(static_cast<std::size_t>(hi - lo + 1), BigInt(0));
  for (const auto &[e, v] : p.terms())
    c[static_cast<std::size_t>(e[0] - lo)] = v;
  return {UniPoly(std::move(c)), lo};
}

inline LaurentPoly to_laurent(const UniPoly &p) {
  LaurentPoly r(1);
  for (std::size_t i = 0; i < p.coeffs().size(); ++i)
    r.add_term({static_cast<std::int64_t>(i)}, p.coeffs()[i]);
  return r;
}

//! Strip factors of t (zero roots). Returns the count removed.
inline std::pair<UniPoly, std::size_t> strip_zero_roots(const UniPoly &p) {
  std::size_t k = 0;
  while (k < p.coeffs().size() && sgn(p.coeffs()[k]) == 0)
    ++k;
  if (k == 0)
    return {p, 0};
  std::vector<BigInt> c(p.coeffs().begin() + static_cast<long>(k),
                        p.coeffs().end());
  return {UniPoly(std::move(c)), k};
}

struct CyclotomicSplit {
  UniPoly remainder;                            //!< no root of unity among its roots
  std::vector<std::pair<std::uint64_t, int>> factors; //!< (order e, multiplicity)
};

//! Divide out every cyclotomic factor exactly. Only orders e with
//! phi(e) <= deg can occur, and phi(e) >= sqrt(e/2), so e <= 2 deg^2.
inline CyclotomicSplit split_cyclotomic(const UniPoly &p) {
  CyclotomicSplit out{p, {}};
  if (p.degree() <= 0)
    return out;
  const auto maxe = static_cast<std::uint64_t>(2 * p.degree() * p.degree() + 2);
  for (std::uint64_t e = 1; e <= maxe && out.remainder.degree() > 0; ++e) {
    if (euler_phi(e) > static_cast<std::uint64_t>(out.remainder.degree()))
      continue;
    const UniPoly phi = cyclotomic(e);
    int mult = 0;
    while (out.remainder.degree() >= phi.degree()) {
      auto [q, r] = divmod_monic(out.remainder, phi);
      if (!r.is_zero())
        break;
      out.remainder = std::move(q);
      ++mult;
    }
    if (mult > 0)
      out.factors.emplace_back(e, mult);
  }
  return out;
}

} // namespace mahlerlab
