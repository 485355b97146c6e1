#pragma once
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "certified.hpp"
#include "error.hpp"
#include "real.hpp"
#include "uni_poly.hpp"

namespace mahlerlab {

enum class CircleLocation { Inside, Outside, OnCircle };

//! One certified root (or cluster of equal roots) of a univariate polynomial.
struct CertifiedRoot {
  CertifiedComplex disk;
  int multiplicity = 1;
  CircleLocation location = CircleLocation::OnCircle;
  //! Order of the root of unity for roots of removed cyclotomic factors,
  //! 0 otherwise.
  std::uint64_t cyclotomic_order = 0;
};

struct RootReport {
  std::vector<CertifiedRoot> roots;
  //! Cyclotomic factors removed exactly before isolation: (order, multiplicity).
  std::vector<std::pair<std::uint64_t, int>> cyclotomic_factors;
  //! Multiplicity of the root 0.
  std::size_t zero_multiplicity = 0;
  //! Non-cyclotomic roots whose disk still meets the unit circle.
  std::size_t unresolved_on_circle = 0;
  mpfr_prec_t precision_used = 0;

  bool precision_exhausted() const { return unresolved_on_circle > 0; }
};

namespace detail {

//! Horner evaluation of p at z, plus a rigorous bound on the rounding error
//! (gamma_{2n+2} * sum |a_k| |z|^k with a safety factor of 2).
inline std::pair<MpComplex, Real> horner_with_bound(
    const std::vector<Real> &coeffs, const MpComplex &z) {
  const mpfr_prec_t p = z.precision();
  MpComplex acc(p);
  Real absz = abs(z);
  Real mag(p);
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
    acc = acc * z;
    acc.re += *it;
    mag = mag * absz + abs(*it);
  }
  Real bound(64);
  const auto n = static_cast<unsigned long>(coeffs.size());
  mpfr_mul_ui(bound.get(), mag.get(), 4 * (2 * n + 2), MPFR_RNDU);
  mpfr_mul_2si(bound.get(), bound.get(), -static_cast<long>(p), MPFR_RNDU);
  return {acc, bound};
}

//! Aberth-Ehrlich iteration from `z` at the precision of the entries.
inline void aberth(const std::vector<Real> &coeffs, std::vector<MpComplex> &z,
                   int max_iter) {
  const std::size_t n = z.size();
  const mpfr_prec_t p = z.front().precision();
  std::vector<Real> dcoeffs;
  for (std::size_t k = 1; k < coeffs.size(); ++k) {
    Real c = coeffs[k];
    mpfr_mul_ui(c.get(), c.get(), k, MPFR_RNDN);
    dcoeffs.push_back(std::move(c));
  }
  Real tol = exp2i(-static_cast<long>(p) + 8, p);
  for (int it = 0; it < max_iter; ++it) {
    Real maxstep(p);
    for (std::size_t i = 0; i < n; ++i) {
      MpComplex pv(p), dv(p);
      for (auto c = coeffs.rbegin(); c != coeffs.rend(); ++c) {
        pv = pv * z[i];
        pv.re += *c;
      }
      for (auto c = dcoeffs.rbegin(); c != dcoeffs.rend(); ++c) {
        dv = dv * z[i];
        dv.re += *c;
      }
      if (pv.re.is_zero() && pv.im.is_zero())
        continue;
      MpComplex ratio = pv / dv;
      MpComplex sum(p);
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i)
          continue;
        MpComplex diff = z[i] - z[j];
        MpComplex one(Real(1.0L, p), Real(p));
        sum = sum + one / diff;
      }
      MpComplex one(Real(1.0L, p), Real(p));
      MpComplex denom = one - ratio * sum;
      MpComplex step = ratio / denom;
      z[i] = z[i] - step;
      Real s = abs(step);
      Real scale = abs(z[i]);
      if (scale < Real(1.0L, p))
        scale = Real(1.0L, p);
      Real rel = s / scale;
      if (maxstep < rel)
        maxstep = rel;
    }
    if (maxstep < tol)
      break;
  }
}

//! Inclusion radii n * |W_i| where W_i is the Weierstrass correction. The
//! union of the disks contains every root, and a connected component made of
//! k disks contains exactly k roots. Radii are doubled as for every
//! CertifiedComplex.
inline std::vector<Real> inclusion_radii(const std::vector<Real> &coeffs,
                                         const std::vector<MpComplex> &z) {
  const std::size_t n = z.size();
  const mpfr_prec_t p = z.front().precision();
  std::vector<Real> radii;
  Real lead = abs(coeffs.back());
  for (std::size_t i = 0; i < n; ++i) {
    auto [val, err] = horner_with_bound(coeffs, z[i]);
    Real num(p);
    mpfr_add(num.get(), abs(val).get(), err.get(), MPFR_RNDU);
    Real den = lead;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i)
        continue;
      den = den * abs(z[i] - z[j]);
    }
    Real r(p);
    if (den.is_zero()) {
      mpfr_set_inf(r.get(), 1);
    } else {
      mpfr_div(r.get(), num.get(), den.get(), MPFR_RNDU);
      // 2 * n * |W| with relative slack for the rounding in `den`.
      mpfr_mul_ui(r.get(), r.get(), 2 * n, MPFR_RNDU);
      Real slack(1.0L + std::ldexp(1.0L, -static_cast<int>(p) / 2), 64);
      mpfr_mul(r.get(), r.get(), slack.get(), MPFR_RNDU);
    }
    radii.push_back(std::move(r));
  }
  return radii;
}

inline bool disks_overlap(const MpComplex &a, const Real &ra, const MpComplex &b,
                          const Real &rb) {
  Real d = abs(a - b);
  Real s(64);
  mpfr_add(s.get(), ra.get(), rb.get(), MPFR_RNDU);
  return d <= s;
}

inline CircleLocation locate(const MpComplex &z, const Real &r) {
  const mpfr_prec_t p = z.precision() + 16;
  Real m(p);
  mpfr_hypot(m.get(), z.re.get(), z.im.get(), MPFR_RNDN);
  Real lo(p), hi(p), one(1.0L, p);
  mpfr_sub(lo.get(), m.get(), r.get(), MPFR_RNDD);
  mpfr_add(hi.get(), m.get(), r.get(), MPFR_RNDU);
  if (one < lo)
    return CircleLocation::Outside;
  if (hi < one)
    return CircleLocation::Inside;
  return CircleLocation::OnCircle;
}

//! Isolate the roots of a squarefree polynomial with nonzero constant term.
//! Doubles the working precision until the inclusion disks are pairwise
//! disjoint.
inline std::vector<std::pair<MpComplex, Real>> isolate_squarefree(
    const UniPoly &f, mpfr_prec_t precision, mpfr_prec_t cap) {
  const auto n = static_cast<std::size_t>(f.degree());
  std::vector<std::pair<MpComplex, Real>> out;
  if (n == 0)
    return out;
  mpfr_prec_t p = std::max<mpfr_prec_t>(precision, 64);
  // Initial guesses on a circle of the Cauchy-bound-ish radius.
  double maxratio = 0.0;
  for (std::size_t k = 0; k < n; ++k)
    maxratio = std::max(maxratio, std::pow(std::exp(log_abs(f.coeffs()[k]) -
                                                    log_abs(f.lead())),
                                           1.0 / static_cast<double>(n - k)));
  const double rad = std::max(0.5, maxratio);
  std::vector<MpComplex> z;
  for (std::size_t k = 0; k < n; ++k) {
    const double ang = 2.0 * M_PI * static_cast<double>(k) / static_cast<double>(n) + 0.4;
    z.emplace_back(Real(static_cast<long double>(rad * std::cos(ang)), p),
                   Real(static_cast<long double>(rad * std::sin(ang)), p));
  }
  while (true) {
    std::vector<Real> coeffs;
    for (const auto &c : f.coeffs())
      coeffs.emplace_back(c, p);
    for (auto &w : z) {
      mpfr_prec_round(w.re.get(), p, MPFR_RNDN);
      mpfr_prec_round(w.im.get(), p, MPFR_RNDN);
    }
    aberth(coeffs, z, 200 + 20 * static_cast<int>(n));
    auto radii = inclusion_radii(coeffs, z);
    bool disjoint = true;
    for (std::size_t i = 0; i < n && disjoint; ++i) {
      if (mpfr_inf_p(radii[i].get()))
        disjoint = false;
      for (std::size_t j = i + 1; j < n && disjoint; ++j)
        if (disks_overlap(z[i], radii[i], z[j], radii[j]))
          disjoint = false;
    }
    if (disjoint) {
      for (std::size_t i = 0; i < n; ++i)
        out.emplace_back(std::move(z[i]), std::move(radii[i]));
      return out;
    }
    if (p >= cap)
      throw ComputationError("roots_certified: could not separate roots of " +
                             std::to_string(n) + "-degree factor within " +
                             std::to_string(cap) + " bits");
    p = std::min<mpfr_prec_t>(2 * p, cap);
  }
}

} // namespace detail

//! Certified enclosures of all complex roots of A.
//!
//! Cyclotomic factors and powers of t are removed exactly first and reported
//! with exact root-of-unity enclosures. The rest is split into squarefree
//! parts, each isolated by Aberth iteration with Gerschgorin-type inclusion
//! disks. Disks still meeting the unit circle are counted in
//! `unresolved_on_circle` (these can be genuine unimodular roots).
inline RootReport roots_certified(const UniPoly &a, mpfr_prec_t precision,
                                  mpfr_prec_t cap = 8192) {
  if (a.is_zero())
    throw std::invalid_argument("roots_certified: zero polynomial");
  RootReport rep;
  auto [stripped, zeros] = strip_zero_roots(a);
  rep.zero_multiplicity = zeros;
  if (zeros > 0) {
    CertifiedRoot r{CertifiedComplex{Real(precision), Real(precision), Real(64)},
                    static_cast<int>(zeros), CircleLocation::Inside, 0};
    rep.roots.push_back(std::move(r));
  }
  auto split = split_cyclotomic(stripped);
  rep.cyclotomic_factors = split.factors;
  mpfr_prec_t used = precision;
  for (const auto &[e, mult] : split.factors) {
    for (std::uint64_t k = 0; k < e; ++k) {
      if (std::gcd(k, e) != 1)
        continue;
      MpComplex w = unit_root_mp(k, e, precision);
      Real rad(64);
      mpfr_set_ui_2exp(rad.get(), 3 * (kMpTableUlps + 1), -static_cast<long>(precision),
                       MPFR_RNDU);
      rep.roots.push_back({CertifiedComplex{std::move(w.re), std::move(w.im), std::move(rad)},
                           mult, CircleLocation::OnCircle, e});
    }
  }
  for (const auto &[factor, mult] : squarefree_decomposition(split.remainder)) {
    auto iso = detail::isolate_squarefree(factor, precision, cap);
    for (auto &[z, r] : iso) {
      used = std::max(used, z.precision());
      CertifiedRoot root;
      root.location = detail::locate(z, r);
      if (root.location == CircleLocation::OnCircle)
        ++rep.unresolved_on_circle;
      root.multiplicity = mult;
      root.disk = CertifiedComplex{std::move(z.re), std::move(z.im), std::move(r)};
      rep.roots.push_back(std::move(root));
    }
  }
  rep.precision_used = used;
  return rep;
}

} // namespace mahlerlab
