#pragma once
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "certified.hpp"
#include "csv.hpp"
#include "error.hpp"
#include "exact_sum.hpp"
#include "laurent_poly.hpp"
#include "parallel.hpp"
#include "torsion_point.hpp"
#include "zero_test.hpp"

namespace mahlerlab {

struct SweepOptions {
  //! Threads; 0 means hardware concurrency.
  unsigned workers = 0;
  //! Points per block of the fixed lexicographic partition. Results do not
  //! depend on it.
  std::uint64_t block_size = 4096;
  //! Precision cap for escalation, in bits.
  mpfr_prec_t precision_cap = 8192;
  //! Required absolute accuracy of each log|P(z)|.
  long double log_tolerance = 0x1p-20L;
};

//! Value of log|P| at one point of the grid.
struct PointValue {
  bool zero = false;
  long double log_abs = 0.0L;
  //! log_abs quantised to 2^-64 (see ExactSum).
  __int128 fixed = 0;
  mpfr_prec_t precision = 0;
};

//! Evaluates one polynomial at the points of mu_N^d.
//!
//! The first attempt runs in long double with a shared table of N-th roots of
//! unity. Points where that enclosure is too wide are re-evaluated with MPFR
//! at doubling precision; points whose enclosure meets 0 are tested exactly.
class TorusEvaluator {
public:
  TorusEvaluator(const LaurentPoly &p, std::uint64_t n, const SweepOptions &opts = {})
      : p_(p), n_(n), d_(p.dim()), opts_(opts) {
    if (p.is_zero())
      throw std::invalid_argument("sweep: zero polynomial");
    if (n == 0)
      throw std::invalid_argument("sweep: N must be positive");
    if (n > (std::uint64_t{1} << 31))
      throw std::invalid_argument("sweep: N too large");
    if (!(opts.log_tolerance > 0))
      throw std::invalid_argument("sweep: log tolerance must be positive");
    for (const auto &[e, c] : p.terms()) {
      for (auto v : e)
        exps_.push_back(mod_u64(v, n));
      coeffs_.push_back(Real(c, 64).to_ld());
    }
    radius_ = detail::evaluation_radius(p.l1_norm(), p.size(), kLdTableUlps, 64)
                  .to_ld(MPFR_RNDU);
    if (!std::isfinite(radius_))
      radius_ = std::numeric_limits<long double>::infinity();
    // unit_root_ld(n - k, n) is bitwise the conjugate of unit_root_ld(k, n).
    table_.resize(n);
    for (std::uint64_t k = 0; 2 * k <= n; ++k) {
      table_[k] = unit_root_ld(k, n);
      if (k != 0 && 2 * k != n)
        table_[n - k] = {table_[k].first, -table_[k].second};
    }
  }

  std::uint64_t order() const { return n_; }
  std::size_t dim() const { return d_; }
  const LaurentPoly &poly() const { return p_; }

  PointValue at(const std::int64_t *a) const {
    long double re = 0.0L, im = 0.0L;
    const std::size_t terms = coeffs_.size();
    for (std::size_t t = 0; t < terms; ++t) {
      const std::uint64_t *e = &exps_[t * d_];
      std::uint64_t ph = 0;
      for (std::size_t i = 0; i < d_; ++i)
        ph = (ph + e[i] * static_cast<std::uint64_t>(a[i])) % n_;
      const auto &w = table_[ph];
      re += coeffs_[t] * w.first;
      im += coeffs_[t] * w.second;
    }
    PointValue v;
    v.precision = 64;
    // |re|, |im| <= ||P||_1, so the squares neither overflow nor matter when
    // they underflow (m is then below radius_). Relative error is ~2^-63.
    const long double m = sqrtl(re * re + im * im);
    if (std::isfinite(m) && m > radius_) {
      // |log|value| - log m| <= q/(1-q) with q = r/m; q <= tol/2 suffices.
      const long double q = (radius_ / m) * (1.0L + 0x1p-60L);
      if (q <= opts_.log_tolerance / 2) {
        v.log_abs = logl(m);
        v.fixed = ExactSum::quantize(v.log_abs);
        return v;
      }
    }
    return escalate(a, std::isfinite(m) && m <= radius_);
  }

  //! Same as at(), for a TorsionPoint of this order.
  PointValue at(const TorsionPoint &z) const {
    if (z.order() != n_ || z.dim() != d_)
      throw std::invalid_argument("TorusEvaluator: point of wrong order or dimension");
    return at(z.exps().data());
  }

private:
  PointValue escalate(const std::int64_t *a, bool meets_zero) const {
    TorsionPoint z(n_, std::vector<std::int64_t>(a, a + d_));
    PointValue v;
    if (meets_zero && is_zero_at(p_, z)) {
      v.zero = true;
      v.precision = 64;
      return v;
    }
    for (mpfr_prec_t prec = 128; prec <= opts_.precision_cap; prec *= 2) {
      const CertifiedComplex c = evaluate(p_, z, prec);
      if (c.contains_zero())
        continue;
      const auto [lm, err] = c.log_abs();
      if (err <= opts_.log_tolerance) {
        v.log_abs = lm;
        v.fixed = ExactSum::quantize(lm);
        v.precision = prec;
        return v;
      }
    }
    throw PrecisionExhausted("log|P| not resolved within " +
                                 std::to_string(opts_.precision_cap) + " bits",
                             n_, z.exps());
  }

  LaurentPoly p_;
  std::uint64_t n_;
  std::size_t d_;
  SweepOptions opts_;
  std::vector<std::uint64_t> exps_;
  std::vector<long double> coeffs_;
  long double radius_;
  std::vector<std::pair<long double, long double>> table_;
};

namespace detail {

inline std::uint64_t grid_size(std::uint64_t n, std::size_t d) {
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < d; ++i) {
    if (total > (std::uint64_t{1} << 62) / n)
      throw std::invalid_argument("sweep: N^d too large");
    total *= n;
  }
  return total;
}

} // namespace detail

//! Visit every point of mu_N^d. The index space [0, N^d) in odometer order
//! (last coordinate fastest) is cut into fixed blocks; each block folds its
//! points into a fresh Acc with visit(acc, exps, value). The per-block
//! accumulators are returned in block order.
template <class Acc, class Visit>
std::vector<Acc> sweep_blocks(const TorusEvaluator &ev, const SweepOptions &opts,
                              Visit visit) {
  const std::uint64_t n = ev.order();
  const std::size_t d = ev.dim();
  const std::uint64_t total = detail::grid_size(n, d);
  const std::uint64_t bs = std::max<std::uint64_t>(1, opts.block_size);
  const std::uint64_t blocks = (total + bs - 1) / bs;
  std::vector<Acc> out(blocks);
  parallel_for(blocks, opts.workers, [&](std::size_t b) {
    const std::uint64_t start = b * bs;
    const std::uint64_t stop = std::min(total, start + bs);
    std::vector<std::int64_t> a(d);
    std::uint64_t rest = start;
    for (std::size_t i = d; i-- > 0;) {
      a[i] = static_cast<std::int64_t>(rest % n);
      rest /= n;
    }
    Acc acc{};
    for (std::uint64_t idx = start; idx < stop; ++idx) {
      visit(acc, a, ev.at(a.data()));
      for (std::size_t i = d; i-- > 0;) {
        if (static_cast<std::uint64_t>(++a[i]) < n)
          break;
        a[i] = 0;
      }
    }
    out[b] = std::move(acc);
  });
  return out;
}

struct NearMin {
  TorsionPoint point;
  long double log_abs;
};

//! One full pass of log|P| over mu_N^d.
struct SweepSummary {
  std::uint64_t N = 0;
  std::size_t d = 0;
  std::uint64_t zero_count = 0;
  std::uint64_t contributing = 0;
  //! Sum of log|P(z)| over nonzero points (exact sum of quantised values).
  ExactSum log_sum_exact;
  long double log_sum = 0.0L;
  //! +inf when every point is a zero.
  long double min_log = std::numeric_limits<long double>::infinity();
  std::optional<TorsionPoint> argmin;
  long double threshold = 0.0L;
  //! Nonzero points with log|P| < threshold, in grid order.
  std::vector<NearMin> near_min;
  mpfr_prec_t max_precision_used = 0;
};

namespace detail {

struct SummaryBlock {
  std::uint64_t zeros = 0;
  std::uint64_t contributing = 0;
  ExactSum sum;
  __int128 min_fixed = 0;
  long double min_log = std::numeric_limits<long double>::infinity();
  std::vector<std::int64_t> argmin;
  std::vector<std::pair<std::vector<std::int64_t>, long double>> near;
  mpfr_prec_t prec = 0;
};

} // namespace detail

//! Census threshold that records no points.
inline constexpr long double kNoCensus = -std::numeric_limits<long double>::infinity();

//! Sweep P over mu_N^d, recording the log-sum over nonzero points, the
//! number of zeros, the minimum and every point below `census_threshold`.
inline SweepSummary sweep(const LaurentPoly &p, std::uint64_t n,
                          long double census_threshold, const SweepOptions &opts = {}) {
  if (!(census_threshold <= 0))
    throw std::invalid_argument("sweep: census threshold must be <= 0");
  TorusEvaluator ev(p, n, opts);
  auto blocks = sweep_blocks<detail::SummaryBlock>(
      ev, opts,
      [&](detail::SummaryBlock &acc, const std::vector<std::int64_t> &a, const PointValue &v) {
        acc.prec = std::max(acc.prec, v.precision);
        if (v.zero) {
          ++acc.zeros;
          return;
        }
        ++acc.contributing;
        acc.sum.add_quantized(v.fixed);
        if (acc.argmin.empty() || v.fixed < acc.min_fixed) {
          acc.min_fixed = v.fixed;
          acc.min_log = v.log_abs;
          acc.argmin = a;
        }
        if (v.log_abs < census_threshold)
          acc.near.emplace_back(a, v.log_abs);
      });
  SweepSummary s;
  s.N = n;
  s.d = p.dim();
  s.threshold = census_threshold;
  __int128 min_fixed = 0;
  for (auto &b : blocks) {
    s.zero_count += b.zeros;
    s.contributing += b.contributing;
    s.log_sum_exact += b.sum;
    s.max_precision_used = std::max(s.max_precision_used, b.prec);
    if (!b.argmin.empty() && (!s.argmin || b.min_fixed < min_fixed)) {
      min_fixed = b.min_fixed;
      s.min_log = b.min_log;
      s.argmin = TorsionPoint(n, b.argmin);
    }
    for (auto &[a, l] : b.near)
      s.near_min.push_back({TorsionPoint(n, a), l});
  }
  s.log_sum = s.log_sum_exact.value();
  return s;
}

struct MinProfileRow {
  std::uint64_t N;
  long double min_log;
  //! min_log / phi(N).
  long double normalized;
};

//! Minimum of log|P| over the nonzero points of mu_N^d for each N.
inline std::vector<MinProfileRow> min_profile(const LaurentPoly &p,
                                              const std::vector<std::uint64_t> &ns,
                                              const SweepOptions &opts = {}) {
  std::vector<MinProfileRow> rows;
  for (auto n : ns) {
    const auto s = sweep(p, n, kNoCensus, opts);
    rows.push_back({n, s.min_log, s.min_log / static_cast<long double>(euler_phi(n))});
  }
  return rows;
}

inline const std::vector<std::string> &sweep_csv_header() {
  static const std::vector<std::string> h{"N", "d", "zero_count", "log_sum", "min_log",
                                          "argmin_exps", "threshold", "census_size"};
  return h;
}

inline void write_sweep_row(csv::Writer &w, const SweepSummary &s) {
  w.row(s.N, s.d, s.zero_count, s.log_sum, s.min_log, s.argmin ? s.argmin->str() : std::string(),
        s.threshold, s.near_min.size());
}

} // namespace mahlerlab
