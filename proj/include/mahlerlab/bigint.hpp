#pragma once
#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mahlerlab {

using BigInt = mpz_class;
using BigRational = mpq_class;

inline BigInt parse_bigint(std::string_view text) {
  BigInt v;
  std::string s(text);
  if (!s.empty() && s.front() == '+')
    s.erase(0, 1);
  if (s.empty() || v.set_str(s, 10) != 0)
    throw std::invalid_argument("not a decimal integer: '" + std::string(text) +
                                "'");
  return v;
}

inline std::string to_string(const BigInt &v) { return v.get_str(10); }

inline std::size_t bit_length(const BigInt &v) {
  return sgn(v) == 0 ? 0 : mpz_sizeinbase(v.get_mpz_t(), 2);
}

//! Natural log of |v| for arbitrarily large v. Returns -inf for zero.
inline double log_abs(const BigInt &v) {
  if (sgn(v) == 0)
    return -INFINITY;
  long exp = 0;
  const double mant = mpz_get_d_2exp(&exp, v.get_mpz_t());
  return std::log(std::fabs(mant)) + static_cast<double>(exp) * std::log(2.0);
}

//! Number of decimal digits of |v| (1 for zero).
inline std::size_t decimal_digits(const BigInt &v) {
  BigInt a = abs(v);
  return a.get_str(10).size();
}

inline BigInt pow(const BigInt &base, unsigned long e) {
  BigInt r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

inline BigInt gcd(const BigInt &a, const BigInt &b) {
  BigInt r;
  mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

//! Exact quotient; the caller guarantees divisibility.
inline BigInt divexact(const BigInt &a, const BigInt &b) {
  BigInt r;
  mpz_divexact(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

inline std::uint64_t mod_u64(std::int64_t a, std::uint64_t n) {
  const auto nn = static_cast<std::int64_t>(n);
  std::int64_t r = a % nn;
  if (r < 0)
    r += nn;
  return static_cast<std::uint64_t>(r);
}

//! Euler's totient of n by trial division.
inline std::uint64_t euler_phi(std::uint64_t n) {
  if (n == 0)
    throw std::invalid_argument("euler_phi: n must be positive");
  std::uint64_t result = n;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      while (n % p == 0)
        n /= p;
      result -= result / p;
    }
  }
  if (n > 1)
    result -= result / n;
  return result;
}

inline int moebius(std::uint64_t n) {
  int sign = 1;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      n /= p;
      if (n % p == 0)
        return 0;
      sign = -sign;
    }
  }
  if (n > 1)
    sign = -sign;
  return sign;
}

inline std::vector<std::uint64_t> divisors(std::uint64_t n) {
  std::vector<std::uint64_t> small, large;
  for (std::uint64_t d = 1; d * d <= n; ++d) {
    if (n % d == 0) {
      small.push_back(d);
      if (d * d != n)
        large.push_back(n / d);
    }
  }
  small.insert(small.end(), large.rbegin(), large.rend());
  return small;
}

} // namespace mahlerlab
