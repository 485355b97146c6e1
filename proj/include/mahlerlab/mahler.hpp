#pragma once
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "csv.hpp"
#include "error.hpp"
#include "exact_sum.hpp"
#include "laurent_poly.hpp"
#include "parallel.hpp"
#include "roots.hpp"
#include "sweep.hpp"
#include "uni_poly.hpp"

namespace mahlerlab {

//! Mahler measure with an absolute error bound.
struct MahlerValue {
  long double value = 0.0L;
  long double error = 0.0L;
  mpfr_prec_t precision = 0;
};

//! Jensen's formula: log|lead| + sum of log|alpha| over roots outside the unit
//! circle, from certified root enclosures. Cyclotomic factors are removed
//! exactly; roots that stay attached to the circle contribute at most
//! log(1 + radius). Precision doubles until the bound meets `tolerance`.
inline MahlerValue mahler_d1_certified(const UniPoly &a, long double tolerance = 1e-13L,
                                       mpfr_prec_t precision = 128,
                                       mpfr_prec_t cap = 8192) {
  if (a.is_zero())
    throw std::invalid_argument("mahler_d1: zero polynomial");
  for (mpfr_prec_t p = precision;; p = std::min<mpfr_prec_t>(2 * p, cap)) {
    const RootReport rep = roots_certified(a, p, cap);
    const mpfr_prec_t wp = rep.precision_used + 32;
    Real sum = log(abs(Real(a.lead(), wp)));
    long double err = 0.0L;
    for (const auto &r : rep.roots) {
      if (r.location == CircleLocation::Inside || r.cyclotomic_order != 0)
        continue;
      const long double rad = r.disk.radius.to_ld(MPFR_RNDU);
      if (r.location == CircleLocation::OnCircle) {
        err += r.multiplicity * log1pl(rad) * (1.0L + 0x1p-50L);
        continue;
      }
      Real m = hypot(r.disk.re, r.disk.im);
      Real l = log(m);
      mpfr_mul_si(l.get(), l.get(), r.multiplicity, MPFR_RNDN);
      sum += l;
      const long double mm = m.to_ld(MPFR_RNDD);
      err += r.multiplicity * (rad / (mm - rad)) * (1.0L + 0x1p-50L);
    }
    // rounding of the sum itself
    err += static_cast<long double>(rep.roots.size() + 1) * std::ldexp(1.0L, -static_cast<int>(wp) + 8);
    if (err <= tolerance)
      return {sum.to_ld(), err, rep.precision_used};
    if (p >= cap)
      throw ComputationError("mahler_d1: error bound " + csv::format(err) +
                             " above tolerance at the precision cap");
  }
}

inline long double mahler_d1(const UniPoly &a) { return mahler_d1_certified(a).value; }

inline long double mahler_d1(const LaurentPoly &p) {
  if (p.dim() != 1)
    throw std::invalid_argument("mahler_d1: polynomial must be univariate");
  return mahler_d1(to_unipoly(p).first);
}

struct QuadratureResult {
  //! Mean of the per-offset estimates.
  long double estimate = 0.0L;
  //! max - min of the per-offset estimates.
  long double spread = 0.0L;
  std::vector<long double> per_offset;
  std::vector<std::vector<double>> offsets;
  //! Offsets that hit the zero locus and were perturbed.
  unsigned retries = 0;
};

struct QuadratureOptions {
  std::uint64_t resolution = 2048;
  unsigned offsets = 4;
  unsigned workers = 0;
  //! Refuse grids with more than this many points per offset.
  std::uint64_t max_points = std::uint64_t{1} << 26;
};

namespace detail {

//! Offset vectors: the cell midpoint first, then a Kronecker sequence with
//! the generalised golden ratio, so runs are reproducible.
inline std::vector<std::vector<double>> quadrature_offsets(std::size_t d, unsigned count) {
  // phi_d: the positive root of x^{d+1} = x + 1
  double g = 2.0;
  for (int it = 0; it < 60; ++it)
    g = std::pow(1.0 + g, 1.0 / static_cast<double>(d + 1));
  std::vector<std::vector<double>> out;
  for (unsigned j = 0; j < count; ++j) {
    std::vector<double> delta(d, 0.5);
    if (j > 0)
      for (std::size_t i = 0; i < d; ++i) {
        const double alpha = 1.0 / std::pow(g, static_cast<double>(i + 1));
        delta[i] = std::fmod(0.5 + alpha * j, 1.0);
      }
    out.push_back(std::move(delta));
  }
  return out;
}

struct GridBlock {
  ExactSum sum;
  bool hit_zero = false;
};

//! Mean of log|P| over the grid {(k + delta)/R}^d; nullopt if a point lands
//! on the zero locus, i.e. |P| is below the double rounding level
//! 64 * eps * ||P||_1 where the sign of the value is meaningless.
inline std::optional<long double> grid_mean(const LaurentPoly &p, std::uint64_t r,
                                            const std::vector<double> &delta,
                                            unsigned workers) {
  const std::size_t d = p.dim();
  // tables[i][e] = exp(2 pi i e (k + delta_i) / R) for each exponent e used
  // in coordinate i
  std::vector<std::map<std::int64_t, std::vector<std::complex<double>>>> tables(d);
  struct Term {
    std::vector<const std::vector<std::complex<double>> *> factors;
    double coeff;
  };
  for (const auto &[e, c] : p.terms())
    for (std::size_t i = 0; i < d; ++i)
      if (!tables[i].count(e[i])) {
        std::vector<std::complex<double>> t(r);
        for (std::uint64_t k = 0; k < r; ++k) {
          const long double frac =
              std::fmod(static_cast<long double>(e[i]) * (static_cast<long double>(k) + delta[i]),
                        static_cast<long double>(r));
          const long double ang = 2.0L * detail::kPiLd * frac / static_cast<long double>(r);
          t[k] = {static_cast<double>(cosl(ang)), static_cast<double>(sinl(ang))};
        }
        tables[i].emplace(e[i], std::move(t));
      }
  std::vector<Term> terms;
  for (const auto &[e, c] : p.terms()) {
    Term t{{}, c.get_d()};
    for (std::size_t i = 0; i < d; ++i)
      t.factors.push_back(&tables[i].at(e[i]));
    terms.push_back(std::move(t));
  }
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < d; ++i)
    total *= r;
  const double floor = 64 * std::numeric_limits<double>::epsilon() * p.l1_norm().get_d();
  // one block per value of the first coordinate
  std::vector<GridBlock> blocks(r);
  const std::uint64_t inner = total / r;
  parallel_for(r, workers, [&](std::size_t k0) {
    GridBlock &b = blocks[k0];
    std::vector<std::uint64_t> k(d, 0);
    k[0] = k0;
    for (std::uint64_t idx = 0; idx < inner; ++idx) {
      std::complex<double> v = 0;
      for (const auto &t : terms) {
        std::complex<double> w = t.coeff;
        for (std::size_t i = 0; i < d; ++i)
          w *= (*t.factors[i])[k[i]];
        v += w;
      }
      const double m = std::abs(v);
      if (!(m > floor) || !std::isfinite(m)) {
        b.hit_zero = true;
        return;
      }
      b.sum.add(std::log(m));
      for (std::size_t i = d; i-- > 1;) {
        if (++k[i] < r)
          break;
        k[i] = 0;
      }
    }
  });
  ExactSum sum;
  for (const auto &b : blocks) {
    if (b.hit_zero)
      return std::nullopt;
    sum += b.sum;
  }
  // exact integer part of the mean, then the remainder
  const __int128 q = sum.raw() / static_cast<__int128>(total);
  const __int128 rem = sum.raw() - q * static_cast<__int128>(total);
  return ExactSum::dequantize(q) +
         ExactSum::dequantize(rem) / static_cast<long double>(total);
}

} // namespace detail

//! Tensor midpoint rule for m(P) on shifted grids {(k + delta)/R}^d, one
//! estimate per offset. The spread of the estimates is an empirical error
//! proxy, not a bound.
inline QuadratureResult mahler_quadrature(const LaurentPoly &p, const QuadratureOptions &opts = {}) {
  if (p.is_zero())
    throw std::invalid_argument("mahler_quadrature: zero polynomial");
  if (opts.resolution == 0 || opts.offsets == 0)
    throw std::invalid_argument("mahler_quadrature: resolution and offsets must be positive");
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < p.dim(); ++i) {
    if (total > opts.max_points / opts.resolution)
      throw CapExceeded("mahler_quadrature: R^d exceeds the grid cap");
    total *= opts.resolution;
  }
  QuadratureResult out;
  auto offsets = detail::quadrature_offsets(p.dim(), opts.offsets);
  for (auto &delta : offsets) {
    for (int attempt = 0;; ++attempt) {
      auto mean = detail::grid_mean(p, opts.resolution, delta, opts.workers);
      if (mean) {
        out.per_offset.push_back(*mean);
        break;
      }
      if (attempt >= 16)
        throw ComputationError("mahler_quadrature: grid keeps hitting the zero locus");
      ++out.retries;
      for (std::size_t i = 0; i < delta.size(); ++i)
        delta[i] = std::fmod(delta[i] + 0.0123456789 * static_cast<double>(i + 1) + 1e-3, 1.0);
    }
  }
  out.offsets = offsets;
  long double s = 0.0L;
  for (auto v : out.per_offset)
    s += v;
  out.estimate = s / static_cast<long double>(out.per_offset.size());
  const auto [lo, hi] = std::minmax_element(out.per_offset.begin(), out.per_offset.end());
  out.spread = *hi - *lo;
  return out;
}

//! A_N: sum of log|P| over the nonzero points of mu_N^d, divided by N^d.
inline long double torsion_average(const SweepSummary &s) {
  return s.log_sum / std::pow(static_cast<long double>(s.N), static_cast<long double>(s.d));
}

inline long double torsion_average(const LaurentPoly &p, std::uint64_t n,
                                   const SweepOptions &opts = {}) {
  return torsion_average(sweep(p, n, kNoCensus, opts));
}

//! Split of the torsion sum at the truncation level -T.
struct TruncationResult {
  std::uint64_t N = 0;
  long double T = 0.0L;
  //! Average of max(-T, log|P|) over the nonzero points, normalised by N^d.
  long double bulk = 0.0L;
  //! Nonzero points with log|P| < -T.
  std::vector<NearMin> tail_points;
  //! Sum over the tail of (-T - log|P|) >= 0.
  long double tail_mass = 0.0L;
  long double average = 0.0L;
  std::uint64_t zero_count = 0;
  ExactSum bulk_sum;
  ExactSum tail_sum;
  ExactSum log_sum;
  //! bulk_sum - tail_sum == log_sum as exact fixed-point integers.
  bool identity_exact = false;
};

namespace detail {
struct TruncBlock {
  ExactSum bulk, tail, total;
  std::uint64_t zeros = 0;
  std::vector<std::pair<std::vector<std::int64_t>, long double>> points;
};
} // namespace detail

inline TruncationResult truncated_average(const LaurentPoly &p, std::uint64_t n, long double t,
                                          const SweepOptions &opts = {}) {
  if (!(t > 0))
    throw std::invalid_argument("truncated_average: T must be positive");
  TorusEvaluator ev(p, n, opts);
  const __int128 qt = ExactSum::quantize(t);
  auto blocks = sweep_blocks<detail::TruncBlock>(
      ev, opts,
      [&](detail::TruncBlock &b, const std::vector<std::int64_t> &a, const PointValue &v) {
        if (v.zero) {
          ++b.zeros;
          return;
        }
        b.total.add_quantized(v.fixed);
        if (v.fixed < -qt) {
          b.bulk.add_quantized(-qt);
          b.tail.add_quantized(-qt - v.fixed);
          b.points.emplace_back(a, v.log_abs);
        } else {
          b.bulk.add_quantized(v.fixed);
        }
      });
  TruncationResult r;
  r.N = n;
  r.T = t;
  for (auto &b : blocks) {
    r.bulk_sum += b.bulk;
    r.tail_sum += b.tail;
    r.log_sum += b.total;
    r.zero_count += b.zeros;
    for (auto &[a, l] : b.points)
      r.tail_points.push_back({TorsionPoint(n, a), l});
  }
  const long double vol = std::pow(static_cast<long double>(n), static_cast<long double>(p.dim()));
  r.bulk = r.bulk_sum.value() / vol;
  r.tail_mass = r.tail_sum.value();
  r.average = r.log_sum.value() / vol;
  r.identity_exact = (r.bulk_sum - r.tail_sum) == r.log_sum;
  return r;
}

//! (N, statistic, target, gap) with named diagnostics.
struct ConvergenceRecord {
  std::uint64_t N = 0;
  long double statistic = 0.0L;
  long double target = 0.0L;
  long double gap = 0.0L;
  //! Keys used by this library: zero_count, tail_count, T, count_digits,
  //! betti_jump, skipped.
  std::map<std::string, long double> aux;
};

struct ConvergenceOptions {
  SweepOptions sweep;
  //! When set, the tail below -T is censused per N.
  std::optional<long double> truncation;
  QuadratureOptions quadrature;
  //! Use this target instead of computing m(P).
  std::optional<long double> target;
};

//! Mahler measure target for convergence tables: Jensen for d = 1, the
//! quadrature estimate otherwise.
inline long double mahler_target(const LaurentPoly &p, const QuadratureOptions &q = {}) {
  if (p.dim() == 1)
    return mahler_d1(p);
  return mahler_quadrature(p, q).estimate;
}

inline std::vector<ConvergenceRecord> convergence_table(const LaurentPoly &p,
                                                        const std::vector<std::uint64_t> &ns,
                                                        const ConvergenceOptions &opts = {}) {
  const long double target = opts.target ? *opts.target : mahler_target(p, opts.quadrature);
  std::vector<ConvergenceRecord> rows;
  for (auto n : ns) {
    ConvergenceRecord rec;
    rec.N = n;
    rec.target = target;
    if (opts.truncation) {
      const auto tr = truncated_average(p, n, *opts.truncation, opts.sweep);
      rec.statistic = tr.average;
      rec.aux["zero_count"] = static_cast<long double>(tr.zero_count);
      rec.aux["tail_count"] = static_cast<long double>(tr.tail_points.size());
      rec.aux["T"] = *opts.truncation;
    } else {
      const auto s = sweep(p, n, kNoCensus, opts.sweep);
      rec.statistic = torsion_average(s);
      rec.aux["zero_count"] = static_cast<long double>(s.zero_count);
    }
    rec.gap = rec.statistic - rec.target;
    rows.push_back(std::move(rec));
  }
  return rows;
}

inline std::string aux_field(const ConvergenceRecord &r, const std::string &key) {
  auto it = r.aux.find(key);
  return it == r.aux.end() ? std::string() : csv::format(it->second);
}

inline void write_convergence_csv(std::ostream &out, const std::vector<ConvergenceRecord> &rows) {
  csv::Writer w(out, {"N", "statistic", "target", "gap", "zero_count", "tail_count", "T"});
  for (const auto &r : rows)
    w.row_strings({csv::format(r.N), csv::format(r.statistic), csv::format(r.target),
                   csv::format(r.gap), aux_field(r, "zero_count"), aux_field(r, "tail_count"),
                   aux_field(r, "T")});
}

//! Plot data: x = N, y = |gap| (for log-log plotting).
inline void write_gap_plot(std::ostream &out, const std::vector<ConvergenceRecord> &rows) {
  csv::Writer w(out, {"x", "y"});
  for (const auto &r : rows)
    w.row(r.N, std::fabs(r.gap));
}

} // namespace mahlerlab
