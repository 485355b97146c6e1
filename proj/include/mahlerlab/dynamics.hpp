#pragma once
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "certified.hpp"
#include "csv.hpp"
#include "error.hpp"
#include "mahler.hpp"
#include "matrix.hpp"
#include "parallel.hpp"
#include "sweep.hpp"
#include "zero_test.hpp"

namespace mahlerlab {

//! The Z^d-action dual to R_d/(P).
struct CyclicAction {
  LaurentPoly P;

  explicit CyclicAction(LaurentPoly p) : P(std::move(p)) {
    if (P.is_zero())
      throw std::invalid_argument("CyclicAction: P must be nonzero");
  }
};

//! The Z-action of an integer matrix on the m-torus (automorphism when
//! det A = +-1, otherwise a solenoid endomorphism with the same counting).
struct ToralAction {
  IntMatrix A;
  bool solenoid = false;

  explicit ToralAction(IntMatrix a) : A(std::move(a)) {
    if (!A.square() || A.rows() == 0)
      throw std::invalid_argument("ToralAction: matrix must be square and nonempty");
    const BigInt det = determinant(A);
    if (sgn(det) == 0)
      throw std::invalid_argument("ToralAction: matrix must be invertible over Q");
    solenoid = abs(det) != 1;
  }
};

using Action = std::variant<CyclicAction, ToralAction>;

//! log|v| to long double accuracy.
inline long double log_bigint(const BigInt &v) {
  if (sgn(v) == 0)
    return -std::numeric_limits<long double>::infinity();
  const mpfr_prec_t p = 128;
  return log(abs(Real(v, p))).to_ld();
}

struct ComponentCountOptions {
  SweepOptions sweep;
  //! Working-precision cap for the certified product (d >= 2). The product
  //! has about N^d m(P) / log 2 bits, so this exceeds the per-point cap.
  mpfr_prec_t product_precision_cap = mpfr_prec_t{1} << 18;
};

namespace detail {

//! |prod over nonzero z in mu_N of f(z)| = |Res((t^N - 1) / prod Phi_e, f)|
//! where e runs over the divisors of N with Phi_e | f.
inline BigInt cyclic_count_d1(const LaurentPoly &p, std::uint64_t n) {
  const UniPoly f = to_unipoly(p).first;
  UniPoly a = UniPoly::x_pow_minus_one(n);
  for (auto e : divisors(n)) {
    const UniPoly phi = cyclotomic(e);
    if (divides_monic(phi, f))
      a = divexact(a, phi);
  }
  return abs(resultant(a, f));
}

struct ProductBlock {
  std::optional<MpComplex> prod;
  //! Upper bound on the sum of the relative errors of all factors and
  //! multiplications; log(1 + total relative error) stays below it.
  Real rel{64};
};

//! 3 * 2^-p bounds the relative error of one complex multiplication with
//! round-to-nearest parts (sqrt(5) 2^-p).
inline Real mul_error(mpfr_prec_t p) {
  Real r(64);
  mpfr_set_ui_2exp(r.get(), 3, -static_cast<long>(p), MPFR_RNDU);
  return r;
}

inline void add_up(Real &acc, const Real &x) { mpfr_add(acc.get(), acc.get(), x.get(), MPFR_RNDU); }

inline void absorb(ProductBlock &b, const MpComplex &v, const Real &rel, mpfr_prec_t p) {
  if (!b.prod) {
    b.prod = v;
    b.rel = rel;
    return;
  }
  *b.prod = *b.prod * v;
  add_up(b.rel, rel);
  add_up(b.rel, mul_error(p));
}

struct ProductAttempt {
  bool ok = false;
  BigInt value;
  mpfr_prec_t escalated_points_precision = 0;
};

inline ProductAttempt certified_product(const LaurentPoly &poly, std::uint64_t n,
                                        mpfr_prec_t p, const ComponentCountOptions &opts) {
  const std::size_t d = poly.dim();
  const std::uint64_t total = grid_size(n, d);
  // root table and flattened terms at precision p
  std::vector<MpComplex> table;
  table.reserve(n);
  for (std::uint64_t k = 0; k < n; ++k)
    table.push_back(unit_root_mp(k, n, p));
  std::vector<std::uint64_t> exps;
  std::vector<Real> coeffs;
  for (const auto &[e, c] : poly.terms()) {
    for (auto v : e)
      exps.push_back(mod_u64(v, n));
    coeffs.emplace_back(c, p);
  }
  const Real radius = evaluation_radius(poly.l1_norm(), poly.size(), kMpTableUlps, p);
  const std::uint64_t bs = std::max<std::uint64_t>(1, opts.sweep.block_size);
  const std::uint64_t blocks = (total + bs - 1) / bs;
  std::vector<ProductBlock> parts(blocks);
  std::vector<mpfr_prec_t> used(blocks, p);
  parallel_for(blocks, opts.sweep.workers, [&](std::size_t b) {
    std::vector<std::int64_t> a(d);
    std::uint64_t rest = b * bs;
    for (std::size_t i = d; i-- > 0;) {
      a[i] = static_cast<std::int64_t>(rest % n);
      rest /= n;
    }
    const std::uint64_t stop = std::min(total, (b + 1) * bs);
    Real t(p);
    for (std::uint64_t idx = b * bs; idx < stop; ++idx) {
      MpComplex v(p);
      for (std::size_t j = 0; j < coeffs.size(); ++j) {
        std::uint64_t ph = 0;
        for (std::size_t i = 0; i < d; ++i)
          ph = (ph + exps[j * d + i] * static_cast<std::uint64_t>(a[i])) % n;
        mpfr_mul(t.get(), coeffs[j].get(), table[ph].re.get(), MPFR_RNDN);
        mpfr_add(v.re.get(), v.re.get(), t.get(), MPFR_RNDN);
        mpfr_mul(t.get(), coeffs[j].get(), table[ph].im.get(), MPFR_RNDN);
        mpfr_add(v.im.get(), v.im.get(), t.get(), MPFR_RNDN);
      }
      CertifiedComplex c{std::move(v.re), std::move(v.im), radius};
      TorsionPoint z(n, a);
      bool skip = false;
      if (c.contains_zero()) {
        if (is_zero_at(poly, z)) {
          skip = true;
        } else {
          // resolve the point on its own at higher precision
          mpfr_prec_t q = 2 * p;
          while (true) {
            if (q > opts.product_precision_cap)
              throw PrecisionExhausted("component_count: factor not separated from 0",
                                       n, z.exps());
            c = evaluate(poly, z, q);
            if (!c.contains_zero())
              break;
            q *= 2;
          }
          used[b] = std::max(used[b], q);
        }
      }
      if (!skip) {
        Real m = hypot(c.re, c.im);
        Real rel(64);
        mpfr_div(rel.get(), c.radius.get(), m.get(), MPFR_RNDU);
        absorb(parts[b], MpComplex(c.re, c.im), rel, p);
      }
      for (std::size_t i = d; i-- > 0;) {
        if (static_cast<std::uint64_t>(++a[i]) < n)
          break;
        a[i] = 0;
      }
    }
  });
  ProductBlock all;
  for (auto &part : parts) {
    if (!part.prod)
      continue;
    if (!all.prod) {
      all = part;
      continue;
    }
    *all.prod = *all.prod * *part.prod;
    add_up(all.rel, part.rel);
    add_up(all.rel, mul_error(p));
  }
  ProductAttempt out;
  out.escalated_points_precision = *std::max_element(used.begin(), used.end());
  if (!all.prod) {
    out.ok = true;
    out.value = 1;
    return out;
  }
  // |true - computed| <= |computed| * (exp(rel) - 1)
  Real mod = abs(*all.prod);
  Real factor(64), err(64);
  mpfr_expm1(factor.get(), all.rel.get(), MPFR_RNDU);
  mpfr_mul(err.get(), mod.get(), factor.get(), MPFR_RNDU);
  if (!(err < Real(0.25L, 64)))
    return out;
  // the exact product is a real integer within err of the midpoint
  if (!(abs(all.prod->im) < Real(0.5L, 64)))
    throw ComputationError("component_count: product is not real; the point set is not Galois-stable");
  Real re = all.prod->re;
  mpfr_rint(re.get(), re.get(), MPFR_RNDN);
  BigInt k;
  mpfr_get_z(k.get_mpz_t(), re.get(), MPFR_RNDN);
  out.ok = true;
  out.value = abs(k);
  return out;
}

} // namespace detail

//! The certified floating product route for any d (used directly for d >= 2
//! and as a cross-check for d = 1).
inline BigInt certified_component_count(const CyclicAction &act, std::uint64_t n,
                                        const ComponentCountOptions &opts = {}) {
  // size the precision from the log-sum of a preliminary sweep
  const auto s = sweep(act.P, n, kNoCensus, opts.sweep);
  const long double bits = s.log_sum / std::log(2.0L);
  const long double points = std::log2(static_cast<long double>(s.zero_count + s.contributing) + 1);
  mpfr_prec_t p = std::max<mpfr_prec_t>(
      128, static_cast<mpfr_prec_t>(std::max(0.0L, bits)) + 2 * static_cast<mpfr_prec_t>(points) + 64);
  while (true) {
    if (p > opts.product_precision_cap)
      throw PrecisionExhausted("component_count: product precision cap reached", n,
                               std::vector<std::int64_t>(act.P.dim(), 0));
    auto attempt = detail::certified_product(act.P, n, p, opts);
    if (attempt.ok)
      return attempt.value;
    p *= 2;
  }
}

//! Number of connected components of Per_N of R_d/(P):
//! |prod over z in mu_N^d with P(z) != 0 of P(z)|.
inline BigInt component_count(const CyclicAction &act, std::uint64_t n,
                              const ComponentCountOptions &opts = {}) {
  if (n == 0)
    throw std::invalid_argument("component_count: N must be positive");
  if (act.P.dim() == 1)
    return detail::cyclic_count_d1(act.P, n);
  return certified_component_count(act, n, opts);
}

//! |det(A^N - I)|, or nullopt when A^N - I is singular (positive-dimensional
//! set of points of period N).
inline std::optional<BigInt> toral_count(const ToralAction &act, std::uint64_t n) {
  if (n == 0)
    throw std::invalid_argument("toral_count: N must be positive");
  const IntMatrix b = power(act.A, n) - IntMatrix::identity(act.A.rows());
  const BigInt det = determinant(b);
  if (sgn(det) == 0)
    return std::nullopt;
  return abs(det);
}

inline long double entropy(const CyclicAction &act, const QuadratureOptions &q = {}) {
  return mahler_target(act.P, q);
}

inline long double entropy(const ToralAction &act) { return mahler_d1(charpoly(act.A)); }

inline long double entropy(const Action &act, const QuadratureOptions &q = {}) {
  return std::visit(
      [&](const auto &a) -> long double {
        if constexpr (std::is_same_v<std::decay_t<decltype(a)>, CyclicAction>)
          return entropy(a, q);
        else
          return entropy(a);
      },
      act);
}

struct GrowthOptions {
  ComponentCountOptions count;
  QuadratureOptions quadrature;
  std::optional<long double> entropy;
};

//! statistic = N^{-d} log(count), target = entropy. Singular toral counts
//! give statistic = nan with aux["singular"] = 1.
inline std::vector<ConvergenceRecord> growth_table(const Action &act,
                                                   const std::vector<std::uint64_t> &ns,
                                                   const GrowthOptions &opts = {}) {
  const long double h = opts.entropy ? *opts.entropy : entropy(act, opts.quadrature);
  std::vector<ConvergenceRecord> rows;
  for (auto n : ns) {
    ConvergenceRecord rec;
    rec.N = n;
    rec.target = h;
    std::optional<BigInt> count;
    long double vol = static_cast<long double>(n);
    if (auto *c = std::get_if<CyclicAction>(&act)) {
      count = component_count(*c, n, opts.count);
      vol = std::pow(static_cast<long double>(n), static_cast<long double>(c->P.dim()));
    } else {
      count = toral_count(std::get<ToralAction>(act), n);
    }
    if (count) {
      rec.statistic = log_bigint(*count) / vol;
      rec.aux["count_digits"] = static_cast<long double>(decimal_digits(*count));
    } else {
      rec.statistic = std::numeric_limits<long double>::quiet_NaN();
      rec.aux["singular"] = 1;
    }
    rec.gap = rec.statistic - rec.target;
    rows.push_back(std::move(rec));
  }
  return rows;
}

inline void write_growth_csv(std::ostream &out, const std::vector<ConvergenceRecord> &rows) {
  csv::Writer w(out, {"N", "count_digits", "statistic", "entropy", "gap"});
  for (const auto &r : rows)
    w.row_strings({csv::format(r.N), aux_field(r, "count_digits"), csv::format(r.statistic),
                   csv::format(r.target), csv::format(r.gap)});
}

//! The finite group (A^N - I)^{-1} Z^m / Z^m.
struct PeriodicPoints {
  BigInt count;
  //! False when count exceeded the enumeration cap (summary-only mode).
  bool enumerated = false;
  //! Invariant factors of A^N - I.
  std::vector<BigInt> invariant_factors;
  //! Coordinates in [0, 1) as reduced fractions.
  std::vector<std::vector<BigRational>> points;
};

//! Enumerate the points of period N through the Smith form U B V = S of
//! B = A^N - I: they are x = V (j_1/s_1, ..., j_m/s_m) mod 1, 0 <= j_i < s_i.
inline PeriodicPoints periodic_points_toral(const ToralAction &act, std::uint64_t n,
                                            std::uint64_t cap = 1000000) {
  if (act.solenoid)
    throw std::invalid_argument("periodic_points_toral: solenoids are not tori");
  const std::size_t m = act.A.rows();
  const IntMatrix b = power(act.A, n) - IntMatrix::identity(m);
  const SmithForm sf = smith_normal_form(b);
  PeriodicPoints out;
  out.invariant_factors = sf.diagonal();
  out.count = 1;
  for (const auto &s : out.invariant_factors) {
    if (sgn(s) == 0)
      throw std::invalid_argument("periodic_points_toral: A^N - I is singular");
    out.count *= s;
  }
  if (out.count > cap)
    return out;
  out.enumerated = true;
  const std::uint64_t total = out.count.get_ui();
  std::vector<std::uint64_t> s(m);
  for (std::size_t i = 0; i < m; ++i)
    s[i] = out.invariant_factors[i].get_ui();
  std::vector<std::uint64_t> j(m, 0);
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    std::vector<BigRational> x(m, BigRational(0));
    for (std::size_t r = 0; r < m; ++r) {
      for (std::size_t c = 0; c < m; ++c)
        x[r] += BigRational(sf.V(r, c) * BigInt(static_cast<unsigned long>(j[c])),
                            BigInt(static_cast<unsigned long>(s[c])));
      x[r].canonicalize();
      // reduce mod 1 into [0, 1)
      BigInt fl;
      mpz_fdiv_q(fl.get_mpz_t(), x[r].get_num_mpz_t(), x[r].get_den_mpz_t());
      x[r] -= fl;
    }
    out.points.push_back(std::move(x));
    for (std::size_t i = m; i-- > 0;) {
      if (++j[i] < s[i])
        break;
      j[i] = 0;
    }
  }
  std::sort(out.points.begin(), out.points.end());
  return out;
}

inline void write_periodic_points_csv(std::ostream &out, const PeriodicPoints &pts) {
  const std::size_t m = pts.points.empty() ? 0 : pts.points.front().size();
  std::vector<std::string> header;
  for (std::size_t i = 0; i < m; ++i)
    header.push_back("x" + std::to_string(i + 1));
  csv::Writer w(out, header);
  for (const auto &p : pts.points) {
    std::vector<std::string> row;
    for (const auto &q : p)
      row.push_back(q.get_str());
    w.row_strings(row);
  }
}

struct DiscrepancyOptions {
  //! Finest dyadic level for m >= 2; capped so that 2^(level*m) <= 2^20.
  unsigned max_level = 8;
};

//! Star discrepancy. Exact for m = 1; for m >= 2, the maximum over anchored
//! boxes [0, a_1/2^L) x ... x [0, a_m/2^L) for L = 1..max_level (a lower
//! bound for D*).
inline long double discrepancy(const std::vector<std::vector<double>> &pts,
                               const DiscrepancyOptions &opts = {}) {
  if (pts.empty())
    throw std::invalid_argument("discrepancy: empty point set");
  const std::size_t m = pts.front().size();
  const auto n = static_cast<long double>(pts.size());
  if (m == 1) {
    std::vector<double> xs;
    for (const auto &p : pts)
      xs.push_back(p[0]);
    std::sort(xs.begin(), xs.end());
    long double worst = 0.0L;
    for (std::size_t i = 0; i < xs.size(); ++i)
      worst = std::max(worst, std::fabs(static_cast<long double>(xs[i]) -
                                        (2.0L * static_cast<long double>(i) + 1.0L) / (2.0L * n)));
    return 1.0L / (2.0L * n) + worst;
  }
  long double best = 0.0L;
  for (unsigned level = 1; level <= opts.max_level && level * m <= 20; ++level) {
    const std::size_t side = std::size_t{1} << level;
    std::size_t cells = 1;
    for (std::size_t i = 0; i < m; ++i)
      cells *= side;
    std::vector<std::uint64_t> cnt(cells, 0);
    for (const auto &p : pts) {
      std::size_t idx = 0;
      for (std::size_t i = 0; i < m; ++i) {
        auto c = static_cast<std::size_t>(std::floor(p[i] * static_cast<double>(side)));
        idx = idx * side + std::min(c, side - 1);
      }
      ++cnt[idx];
    }
    // prefix sums along each axis: cnt[a] = #points in cells <= a componentwise
    std::size_t stride = 1;
    for (std::size_t axis = m; axis-- > 0;) {
      for (std::size_t idx = 0; idx < cells; ++idx)
        if ((idx / stride) % side != 0)
          cnt[idx] += cnt[idx - stride];
      stride *= side;
    }
    for (std::size_t idx = 0; idx < cells; ++idx) {
      long double vol = 1.0L;
      std::size_t rest = idx;
      for (std::size_t i = 0; i < m; ++i) {
        vol *= static_cast<long double>(rest % side + 1) / static_cast<long double>(side);
        rest /= side;
      }
      best = std::max(best, std::fabs(static_cast<long double>(cnt[idx]) / n - vol));
    }
  }
  return best;
}

inline std::vector<std::vector<double>> to_doubles(const PeriodicPoints &pts) {
  std::vector<std::vector<double>> out;
  for (const auto &p : pts.points) {
    std::vector<double> x;
    for (const auto &q : p)
      x.push_back(q.get_d());
    out.push_back(std::move(x));
  }
  return out;
}

} // namespace mahlerlab
