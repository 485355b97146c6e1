#pragma once
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "bigint.hpp"

namespace mahlerlab {

//! A point of mu_N^d stored as its exponent vector a: the point is
//! (e^{2 pi i a_1/N}, ..., e^{2 pi i a_d/N}) with each a_i in [0, N).
class TorsionPoint {
public:
  TorsionPoint(std::uint64_t order, const std::vector<std::int64_t> &exps)
      : order_(order), exps_(exps.size()) {
    if (order == 0)
      throw std::invalid_argument("TorsionPoint: order must be positive");
    if (exps.empty())
      throw std::invalid_argument("TorsionPoint: empty exponent vector");
    for (std::size_t i = 0; i < exps.size(); ++i)
      exps_[i] = static_cast<std::int64_t>(mod_u64(exps[i], order));
  }

  std::uint64_t order() const { return order_; }
  std::size_t dim() const { return exps_.size(); }
  const std::vector<std::int64_t> &exps() const { return exps_; }

  //! Exact multiplicative order N / gcd(N, a_1, ..., a_d).
  std::uint64_t exact_order() const {
    std::uint64_t g = order_;
    for (auto a : exps_)
      g = std::gcd(g, static_cast<std::uint64_t>(a));
    return order_ / g;
  }

  //! The same point written with its exact order as denominator.
  TorsionPoint reduced() const {
    const std::uint64_t n = exact_order();
    const std::uint64_t g = order_ / n;
    std::vector<std::int64_t> e(exps_.size());
    for (std::size_t i = 0; i < e.size(); ++i)
      e[i] = exps_[i] / static_cast<std::int64_t>(g);
    return TorsionPoint(n, e);
  }

  //! Complex conjugate (= inverse) point.
  TorsionPoint inverse() const {
    std::vector<std::int64_t> e(exps_.size());
    for (std::size_t i = 0; i < e.size(); ++i)
      e[i] = -exps_[i];
    return TorsionPoint(order_, e);
  }

  std::string str() const {
    std::string s;
    for (std::size_t i = 0; i < exps_.size(); ++i) {
      if (i)
        s += ';';
      s += std::to_string(exps_[i]);
    }
    return s;
  }

  friend bool operator==(const TorsionPoint &a, const TorsionPoint &b) {
    return a.order_ == b.order_ && a.exps_ == b.exps_;
  }
  friend bool operator<(const TorsionPoint &a, const TorsionPoint &b) {
    if (a.order_ != b.order_)
      return a.order_ < b.order_;
    return a.exps_ < b.exps_;
  }

private:
  std::uint64_t order_;
  std::vector<std::int64_t> exps_;
};

//! Action of sigma_j in Gal(Q(mu_N)/Q): exponents multiplied by j mod N.
inline TorsionPoint galois_conjugate(const TorsionPoint &z, std::int64_t j) {
  const std::uint64_t n = z.order();
  const std::uint64_t jj = mod_u64(j, n);
  if (std::gcd(jj, n) != 1)
    throw std::invalid_argument("galois_conjugate: j=" + std::to_string(j) +
                                " is not a unit mod " + std::to_string(n));
  std::vector<std::int64_t> e(z.dim());
  for (std::size_t i = 0; i < e.size(); ++i)
    e[i] = static_cast<std::int64_t>(
        (static_cast<unsigned __int128>(z.exps()[i]) * jj) % n);
  return TorsionPoint(n, e);
}

//! Units mod N in increasing order.
inline std::vector<std::uint64_t> units_mod(std::uint64_t n) {
  std::vector<std::uint64_t> u;
  for (std::uint64_t j = 1; j <= n; ++j)
    if (std::gcd(j % n, n) == 1)
      u.push_back(j % n);
  return u;
}

} // namespace mahlerlab
