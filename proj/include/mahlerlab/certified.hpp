#pragma once
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "laurent_poly.hpp"
#include "real.hpp"
#include "torsion_point.hpp"

namespace mahlerlab {

//! A closed disk {mid + w : |w| <= radius} enclosing a complex value.
//!
//! Radii produced by this library are twice a rigorous error bound. With that
//! convention a disk computed at doubled precision is nested inside the
//! coarser one, because the midpoint moves by at most half of each radius.
struct CertifiedComplex {
  Real re;
  Real im;
  Real radius;

  mpfr_prec_t precision() const { return re.precision(); }

  bool contains_zero() const {
    Real m = hypot(re, im);
    return m <= radius;
  }
  //! Lower bound on |value| (zero if the disk meets the origin).
  double abs_lower() const {
    Real m = hypot(re, im);
    Real d(m.precision());
    mpfr_sub(d.get(), m.get(), radius.get(), MPFR_RNDD);
    return d.sign() > 0 ? d.to_double(MPFR_RNDD) : 0.0;
  }
  double abs_upper() const {
    Real m = hypot(re, im);
    Real d(m.precision());
    mpfr_add(d.get(), m.get(), radius.get(), MPFR_RNDU);
    return d.to_double(MPFR_RNDU);
  }
  //! True if `inner` lies entirely inside this disk.
  bool contains(const CertifiedComplex &inner) const {
    const mpfr_prec_t p = std::max(precision(), inner.precision()) + 32;
    Real dr(p), di(p), dist(p), lhs(p);
    mpfr_sub(dr.get(), re.get(), inner.re.get(), MPFR_RNDN);
    mpfr_sub(di.get(), im.get(), inner.im.get(), MPFR_RNDN);
    mpfr_hypot(dist.get(), dr.get(), di.get(), MPFR_RNDU);
    mpfr_add(lhs.get(), dist.get(), inner.radius.get(), MPFR_RNDU);
    return lhs <= radius;
  }
  //! True if the exact complex number x + iy lies in the disk.
  bool contains_point(long double x, long double y) const {
    const mpfr_prec_t p = precision() + 80;
    Real dr(p), di(p), dist(p);
    Real xr(x, p), yr(y, p);
    mpfr_sub(dr.get(), re.get(), xr.get(), MPFR_RNDN);
    mpfr_sub(di.get(), im.get(), yr.get(), MPFR_RNDN);
    mpfr_hypot(dist.get(), dr.get(), di.get(), MPFR_RNDD);
    return dist <= radius;
  }
  //! log|mid|, and a bound on |log|value| - log|mid||. The bound is +inf when
  //! the disk is not well separated from zero.
  std::pair<long double, long double> log_abs() const {
    Real m = hypot(re, im);
    const long double lm = log(m).to_ld();
    Real ratio(64);
    mpfr_div(ratio.get(), radius.get(), m.get(), MPFR_RNDU);
    const long double q = ratio.to_ld(MPFR_RNDU);
    if (!(q < 0.5L))
      return {lm, INFINITY};
    // -log(1-q) <= q / (1-q)
    return {lm, q / (1.0L - q)};
  }
};

namespace detail {

//! Reduce the angle 2 pi num/den to [0, pi/4] through exact symmetries.
struct OctantMap {
  std::uint64_t num;
  std::uint64_t den;
  bool swap;
  int cos_sign;
  int sin_sign;
};

inline OctantMap octant_reduce(std::uint64_t k, std::uint64_t n) {
  OctantMap m{k % n, n, false, 1, 1};
  if (2 * m.num > m.den) {
    m.num = m.den - m.num;
    m.sin_sign = -1;
  }
  if (4 * m.num > m.den) {
    m.num = m.den - 2 * m.num;
    m.den *= 2;
    m.cos_sign = -1;
  }
  if (8 * m.num > m.den) {
    m.num = m.den - 4 * m.num;
    m.den *= 4;
    m.swap = true;
  }
  return m;
}

template <class T>
std::pair<T, T> apply_octant(const OctantMap &m, T c, T s) {
  T outc = m.swap ? s : c;
  T outs = m.swap ? c : s;
  if (m.cos_sign < 0)
    outc = -outc;
  if (m.sin_sign < 0)
    outs = -outs;
  return {outc, outs};
}

constexpr long double kPiLd = 3.141592653589793238462643383279502884L;

} // namespace detail

//! Absolute error bound, in units of 2^-64, assumed for each component of a
//! long double root of unity. Covers angle rounding and the libm sinl/cosl
//! error on [0, pi/4].
inline constexpr int kLdTableUlps = 8;
//! Same bound for MPFR roots of unity (correctly rounded sin_cos).
inline constexpr int kMpTableUlps = 4;

//! (cos, sin)(2 pi k / n) in long double, with exact conjugate and octant
//! symmetries: root_ld(n-k, n) is bitwise the conjugate of root_ld(k, n).
inline std::pair<long double, long double> unit_root_ld(std::uint64_t k,
                                                        std::uint64_t n) {
  const auto m = detail::octant_reduce(k, n);
  long double c = 1.0L, s = 0.0L;
  if (m.num != 0) {
    const long double angle = (detail::kPiLd * static_cast<long double>(2 * m.num)) /
                              static_cast<long double>(m.den);
    c = cosl(angle);
    s = sinl(angle);
  }
  return detail::apply_octant(m, c, s);
}

//! (cos, sin)(2 pi k / n) at `prec` bits; same symmetries as unit_root_ld.
inline MpComplex unit_root_mp(std::uint64_t k, std::uint64_t n,
                              mpfr_prec_t prec) {
  const auto m = detail::octant_reduce(k, n);
  Real c(prec), s(prec);
  if (m.num == 0) {
    mpfr_set_ui(c.get(), 1, MPFR_RNDN);
  } else {
    Real angle = pi(prec);
    mpfr_mul_ui(angle.get(), angle.get(), 2 * m.num, MPFR_RNDN);
    mpfr_div_ui(angle.get(), angle.get(), m.den, MPFR_RNDN);
    mpfr_sin_cos(s.get(), c.get(), angle.get(), MPFR_RNDN);
  }
  auto [oc, os] = detail::apply_octant(m, std::move(c), std::move(s));
  return {std::move(oc), std::move(os)};
}

namespace detail {

//! Phase of the monomial x^e at the torsion point with exponents a mod N.
inline std::uint64_t monomial_phase(const Exponent &e,
                                    const std::vector<std::int64_t> &a,
                                    std::uint64_t n) {
  unsigned __int128 acc = 0;
  for (std::size_t i = 0; i < e.size(); ++i)
    acc += static_cast<unsigned __int128>(mod_u64(e[i], n)) *
           static_cast<std::uint64_t>(a[i]);
  return static_cast<std::uint64_t>(acc % n);
}

//! Twice the rigorous error bound 1.5 * S * (T + ulps + 3) * 2^-p, rounded up.
inline Real evaluation_radius(const BigInt &l1, std::size_t terms, int ulps,
                              mpfr_prec_t p) {
  Real r(64);
  mpfr_set_z(r.get(), l1.get_mpz_t(), MPFR_RNDU);
  mpfr_mul_ui(r.get(), r.get(), 3 * (terms + static_cast<std::size_t>(ulps) + 3),
              MPFR_RNDU);
  mpfr_mul_2si(r.get(), r.get(), -static_cast<long>(p), MPFR_RNDU);
  return r;
}

} // namespace detail

//! Certified enclosure of P at the torsion point z.
//!
//! Precisions up to 64 bits use x87 long double arithmetic (64-bit mantissa);
//! larger precisions use MPFR. The disk always contains the true value.
inline CertifiedComplex evaluate(const LaurentPoly &p, const TorsionPoint &z,
                                 mpfr_prec_t precision) {
  if (p.dim() != z.dim())
    throw std::invalid_argument("evaluate: dimension mismatch");
  if (precision < 32)
    throw std::invalid_argument("evaluate: precision must be at least 32 bits");
  const std::uint64_t n = z.order();
  if (precision <= 64) {
    long double re = 0.0L, im = 0.0L;
    for (const auto &[e, c] : p.terms()) {
      const auto [cr, ci] = unit_root_ld(detail::monomial_phase(e, z.exps(), n), n);
      const long double cv = Real(c, 64).to_ld();
      re += cv * cr;
      im += cv * ci;
    }
    CertifiedComplex out{Real(re, 64), Real(im, 64),
                         detail::evaluation_radius(p.l1_norm(), p.size(),
                                                   kLdTableUlps, 64)};
    if (!std::isfinite(re) || !std::isfinite(im))
      mpfr_set_inf(out.radius.get(), 1);
    return out;
  }
  Real re(precision), im(precision), t(precision);
  for (const auto &[e, c] : p.terms()) {
    MpComplex w = unit_root_mp(detail::monomial_phase(e, z.exps(), n), n, precision);
    Real cv(c, precision);
    mpfr_mul(t.get(), cv.get(), w.re.get(), MPFR_RNDN);
    mpfr_add(re.get(), re.get(), t.get(), MPFR_RNDN);
    mpfr_mul(t.get(), cv.get(), w.im.get(), MPFR_RNDN);
    mpfr_add(im.get(), im.get(), t.get(), MPFR_RNDN);
  }
  return {std::move(re), std::move(im),
          detail::evaluation_radius(p.l1_norm(), p.size(), kMpTableUlps,
                                    precision)};
}

} // namespace mahlerlab
