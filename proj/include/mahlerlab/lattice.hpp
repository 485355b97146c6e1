#pragma once
#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "bigint.hpp"

namespace mahlerlab {

using IntVector = std::vector<BigInt>;

//! Reduced row echelon form over Q. Returns the nonzero rows and the pivot
//! column of each.
struct Echelon {
  std::vector<std::vector<BigRational>> rows;
  std::vector<std::size_t> pivots;
  std::size_t cols = 0;
  std::size_t rank() const { return pivots.size(); }
};

inline Echelon rref(const std::vector<IntVector> &a, std::size_t cols) {
  std::vector<std::vector<BigRational>> m;
  m.reserve(a.size());
  for (const auto &row : a) {
    if (row.size() != cols)
      throw std::invalid_argument("rref: ragged matrix");
    m.emplace_back(row.begin(), row.end());
  }
  Echelon e;
  e.cols = cols;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
    std::size_t p = r;
    while (p < m.size() && sgn(m[p][c]) == 0)
      ++p;
    if (p == m.size())
      continue;
    std::swap(m[p], m[r]);
    const BigRational inv = 1 / m[r][c];
    for (std::size_t j = c; j < cols; ++j)
      m[r][j] *= inv;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i == r || sgn(m[i][c]) == 0)
        continue;
      const BigRational f = m[i][c];
      for (std::size_t j = c; j < cols; ++j)
        if (sgn(m[r][j]) != 0)
          m[i][j] -= f * m[r][j];
    }
    e.pivots.push_back(c);
    ++r;
  }
  m.resize(r);
  e.rows = std::move(m);
  return e;
}

//! Integer rows with the same rational row space as e (each row scaled by
//! the lcm of its denominators).
inline std::vector<IntVector> integer_rows(const Echelon &e) {
  std::vector<IntVector> out;
  for (const auto &row : e.rows) {
    BigInt l = 1;
    for (const auto &v : row)
      mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v.get_den_mpz_t());
    IntVector iv;
    iv.reserve(row.size());
    for (const auto &v : row)
      iv.push_back(BigInt(v.get_num() * (l / v.get_den())));
    out.push_back(std::move(iv));
  }
  return out;
}

inline BigInt dot(const IntVector &x, const IntVector &y) {
  BigInt s = 0;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (sgn(x[i]) != 0 && sgn(y[i]) != 0)
      s += x[i] * y[i];
  return s;
}

//! Integral LLL (all arithmetic in Z) on linearly independent rows, with
//! Lovasz constant delta = delta_num / delta_den in (1/4, 1].
inline void lll_reduce(std::vector<IntVector> &b, long delta_num = 99, long delta_den = 100) {
  const std::size_t n = b.size();
  if (n <= 1)
    return;
  // 1-based: d[0] = 1, d[i] for b[i-1]; lam[i][j] for j < i
  std::vector<BigInt> d(n + 1, BigInt(0));
  std::vector<std::vector<BigInt>> lam(n + 1, std::vector<BigInt>(n + 1, BigInt(0)));
  d[0] = 1;
  auto vec = [&](std::size_t i) -> IntVector & { return b[i - 1]; };

  auto red = [&](std::size_t k, std::size_t l) {
    BigInt twice = 2 * abs(lam[k][l]);
    if (twice <= d[l])
      return;
    // q = round(lam / d_l)
    BigInt q;
    BigInt num = 2 * lam[k][l] + d[l];
    BigInt den = 2 * d[l];
    mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    IntVector &bk = vec(k);
    const IntVector &bl = vec(l);
    for (std::size_t i = 0; i < bk.size(); ++i)
      if (sgn(bl[i]) != 0)
        bk[i] -= q * bl[i];
    lam[k][l] -= q * d[l];
    for (std::size_t i = 1; i < l; ++i)
      lam[k][i] -= q * lam[l][i];
  };

  std::size_t kmax = 1;
  d[1] = dot(vec(1), vec(1));
  if (sgn(d[1]) == 0)
    throw std::invalid_argument("lll_reduce: zero vector in basis");
  std::size_t k = 2;
  while (k <= n) {
    if (k > kmax) {
      kmax = k;
      for (std::size_t j = 1; j <= k; ++j) {
        BigInt u = dot(vec(k), vec(j));
        for (std::size_t i = 1; i < j; ++i)
          u = divexact(d[i] * u - lam[k][i] * lam[j][i], d[i - 1]);
        if (j < k)
          lam[k][j] = u;
        else
          d[k] = u;
      }
      if (sgn(d[k]) == 0)
        throw std::invalid_argument("lll_reduce: basis vectors are linearly dependent");
    }
    red(k, k - 1);
    if (delta_den * d[k] * d[k - 2] < delta_num * d[k - 1] * d[k - 1] - delta_den * lam[k][k - 1] * lam[k][k - 1]) {
      // swap b_k and b_{k-1}
      std::swap(vec(k), vec(k - 1));
      for (std::size_t j = 1; j + 2 <= k; ++j)
        std::swap(lam[k][j], lam[k - 1][j]);
      const BigInt l = lam[k][k - 1];
      const BigInt bb = divexact(d[k - 2] * d[k] + l * l, d[k - 1]);
      for (std::size_t i = k + 1; i <= kmax; ++i) {
        const BigInt t = lam[i][k];
        lam[i][k] = divexact(d[k] * lam[i][k - 1] - l * t, d[k - 1]);
        lam[i][k - 1] = divexact(bb * t + l * lam[i][k], d[k]);
      }
      d[k - 1] = bb;
      if (k > 2)
        --k;
    } else {
      for (std::size_t l = k - 1; l-- > 1;)
        red(k, l);
      ++k;
    }
  }
}

//! An LLL-reduced Z-basis of {x in Z^cols : A x = 0}. The kernel lattice is
//! read off the embedding (e_i | W a_i); the weight W is raised until the
//! number of basis vectors with zero tail equals the nullity, which proves
//! they span the whole integer kernel.
inline std::vector<IntVector> integer_kernel(const std::vector<IntVector> &a, std::size_t cols) {
  const Echelon e = rref(a, cols);
  const std::size_t rank = e.rank();
  if (rank == cols)
    return {};
  const std::vector<IntVector> rows = integer_rows(e);
  if (rank == 0) {
    std::vector<IntVector> id(cols, IntVector(cols, BigInt(0)));
    for (std::size_t i = 0; i < cols; ++i)
      id[i][i] = 1;
    return id;
  }
  unsigned long bits = 16 + static_cast<unsigned long>(cols);
  for (int attempt = 0; attempt < 8; ++attempt, bits *= 2) {
    BigInt w = 1;
    mpz_mul_2exp(w.get_mpz_t(), w.get_mpz_t(), bits);
    std::vector<IntVector> basis(cols, IntVector(cols + rank, BigInt(0)));
    for (std::size_t i = 0; i < cols; ++i) {
      basis[i][i] = 1;
      for (std::size_t r = 0; r < rank; ++r)
        basis[i][cols + r] = w * rows[r][i];
    }
    lll_reduce(basis);
    std::vector<IntVector> ker;
    for (const auto &v : basis) {
      bool zero_tail = true;
      for (std::size_t r = 0; r < rank && zero_tail; ++r)
        zero_tail = sgn(v[cols + r]) == 0;
      if (zero_tail)
        ker.emplace_back(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(cols));
    }
    if (ker.size() == cols - rank)
      return ker;
  }
  throw std::runtime_error("integer_kernel: embedding weight did not separate the kernel");
}

inline BigInt max_norm(const IntVector &v) {
  BigInt m = 0;
  for (const auto &x : v)
    if (abs(x) > m)
      m = abs(x);
  return m;
}

//! Smallest max-norm vector among the basis, pairwise sums and differences,
//! and (for small nullity) all {-1, 0, 1} combinations.
inline IntVector small_kernel_vector(const std::vector<IntVector> &basis, std::size_t full_search_dim = 8) {
  if (basis.empty())
    throw std::invalid_argument("small_kernel_vector: empty basis");
  IntVector best = basis[0];
  BigInt best_norm = max_norm(best);
  auto consider = [&](const IntVector &v) {
    BigInt m = max_norm(v);
    if (sgn(m) != 0 && m < best_norm) {
      best = v;
      best_norm = m;
    }
  };
  for (const auto &v : basis)
    consider(v);
  const std::size_t len = basis[0].size();
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = i + 1; j < basis.size(); ++j) {
      IntVector s(len), t(len);
      for (std::size_t c = 0; c < len; ++c) {
        s[c] = basis[i][c] + basis[j][c];
        t[c] = basis[i][c] - basis[j][c];
      }
      consider(s);
      consider(t);
    }
  if (basis.size() <= full_search_dim) {
    std::vector<int> coef(basis.size(), -1);
    while (true) {
      IntVector v(len, BigInt(0));
      for (std::size_t i = 0; i < basis.size(); ++i)
        if (coef[i] != 0)
          for (std::size_t c = 0; c < len; ++c)
            v[c] += coef[i] * basis[i][c];
      consider(v);
      std::size_t i = 0;
      while (i < coef.size() && coef[i] == 1)
        coef[i++] = -1;
      if (i == coef.size())
        break;
      ++coef[i];
    }
  }
  // sign normalization: first nonzero entry positive
  for (const auto &x : best)
    if (sgn(x) != 0) {
      if (sgn(x) < 0)
        for (auto &y : best)
          y = -y;
      break;
    }
  return best;
}

} // namespace mahlerlab
