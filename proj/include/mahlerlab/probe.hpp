#pragma once
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "csv.hpp"
#include "error.hpp"
#include "lattice.hpp"
#include "mahler.hpp"
#include "roots.hpp"
#include "sweep.hpp"
#include "zero_test.hpp"

namespace mahlerlab {

enum class Classification { OnVariety, OnTorsionCoset, Unexplained };

inline const char *to_string(Classification c) {
  switch (c) {
  case Classification::OnVariety:
    return "on_variety";
  case Classification::OnTorsionCoset:
    return "on_torsion_coset";
  default:
    return "unexplained";
  }
}

//! The torsion coset {x : x^n = e^{2 pi i c / N}}.
struct Relation {
  std::vector<std::int64_t> n;
  std::uint64_t c = 0;
  std::uint64_t N = 1;
  //! order of e^{2 pi i c / N}
  std::uint64_t translate_order() const { return N / std::gcd(N, c); }
  std::string str() const {
    std::string s;
    for (std::size_t i = 0; i < n.size(); ++i)
      s += (i ? ";" : "") + std::to_string(n[i]);
    return s + ":" + std::to_string(c) + "/" + std::to_string(N);
  }
};

//! Exact check that the point lies on the coset: n . a = c (mod N).
inline bool satisfies(const Relation &r, const TorsionPoint &z) {
  if (r.n.size() != z.dim() || r.N != z.order())
    return false;
  BigInt s = 0;
  for (std::size_t i = 0; i < r.n.size(); ++i)
    s += BigInt(static_cast<long>(r.n[i])) * BigInt(static_cast<long>(z.exps()[i]));
  s -= BigInt(static_cast<unsigned long>(r.c));
  return mpz_divisible_ui_p(s.get_mpz_t(), r.N) != 0;
}

struct ExceptionRecord {
  TorsionPoint point;
  long double log_abs = 0;
  Classification classification = Classification::Unexplained;
  std::optional<Relation> relation;
};

struct CensusOptions {
  SweepOptions sweep;
  //! fraction of the coset's points that must be exceptional or zero for a
  //! cluster to count as a torsion-coset explanation
  double coverage = 1.0;
  std::size_t min_cluster = 2;
  //! above this |n|_1 bound, candidates come from lattice reduction
  std::int64_t enumeration_limit = 6;
};

struct CensusResult {
  std::uint64_t N = 0;
  std::uint64_t phi = 0;
  double epsilon = 0;
  std::int64_t B = 0;
  //! log|P| < threshold = -epsilon phi(N) marks a nonzero point exceptional
  long double threshold = 0;
  std::vector<ExceptionRecord> exceptional;
  std::vector<ExceptionRecord> on_variety;
  //! nonzero points at or above the threshold
  std::uint64_t unexceptional = 0;
  std::uint64_t contributing = 0;
};

namespace detail {

struct CensusBlock {
  std::vector<std::vector<std::int64_t>> zeros;
  std::vector<std::pair<std::vector<std::int64_t>, long double>> low;
  std::uint64_t high = 0;
};

//! Canonical sign: first nonzero entry positive.
inline bool canonical(const std::vector<std::int64_t> &n) {
  for (auto v : n)
    if (v != 0)
      return v > 0;
  return false;
}

inline void enumerate_relations(std::size_t d, std::int64_t B, std::set<std::vector<std::int64_t>> &out) {
  std::vector<std::int64_t> n(d, -B);
  while (true) {
    std::int64_t l1 = 0;
    for (auto v : n)
      l1 += v < 0 ? -v : v;
    if (l1 >= 1 && l1 <= B && canonical(n))
      out.insert(n);
    std::size_t i = 0;
    while (i < d && n[i] == B)
      n[i++] = -B;
    if (i == d)
      break;
    ++n[i];
  }
}

//! Short vectors of {n : n . delta = 0 (mod N)} by LLL on (e_i | W delta_i),
//! (0 | W N).
inline std::vector<std::vector<std::int64_t>> relation_lattice(const std::vector<std::int64_t> &delta,
                                                               std::uint64_t N) {
  const std::size_t d = delta.size();
  BigInt w = BigInt(static_cast<unsigned long>(N));
  mpz_mul_2exp(w.get_mpz_t(), w.get_mpz_t(), 20);
  std::vector<IntVector> b(d + 1, IntVector(d + 1, BigInt(0)));
  for (std::size_t i = 0; i < d; ++i) {
    b[i][i] = 1;
    b[i][d] = w * static_cast<long>(delta[i]);
  }
  b[d][d] = w * BigInt(static_cast<unsigned long>(N));
  lll_reduce(b);
  std::vector<std::vector<std::int64_t>> out;
  for (const auto &v : b) {
    if (sgn(v[d]) != 0)
      continue;
    std::vector<std::int64_t> n(d);
    bool fits = true;
    for (std::size_t i = 0; i < d && fits; ++i) {
      fits = v[i].fits_slong_p();
      if (fits)
        n[i] = v[i].get_si();
    }
    if (fits)
      out.push_back(n);
  }
  return out;
}

} // namespace detail

//! All points of mu_N^d where -log|P| > epsilon phi(N). Exact zeros go to
//! `on_variety`; every other such point is classified by searching the
//! relations n with |n|_1 <= B for a coset n . a = c (mod N) that is covered
//! by exceptional or zero points.
inline CensusResult exceptional_census(const LaurentPoly &p, std::uint64_t n, double epsilon, std::int64_t B,
                                       const CensusOptions &opts = {}) {
  if (!(epsilon > 0))
    throw std::invalid_argument("exceptional_census: epsilon must be positive");
  if (B < 1)
    throw std::invalid_argument("exceptional_census: relation bound B must be >= 1");
  CensusResult res;
  res.N = n;
  res.phi = euler_phi(n);
  res.epsilon = epsilon;
  res.B = B;
  res.threshold = -static_cast<long double>(epsilon) * static_cast<long double>(res.phi);
  TorusEvaluator ev(p, n, opts.sweep);
  const long double thr = res.threshold;
  auto blocks = sweep_blocks<detail::CensusBlock>(
      ev, opts.sweep, [&](detail::CensusBlock &acc, const std::vector<std::int64_t> &a, const PointValue &v) {
        if (v.zero)
          acc.zeros.push_back(a);
        else if (v.log_abs < thr)
          acc.low.emplace_back(a, v.log_abs);
        else
          ++acc.high;
      });
  for (auto &b : blocks) {
    res.unexceptional += b.high;
    for (auto &z : b.zeros)
      res.on_variety.push_back({TorsionPoint(n, z), -std::numeric_limits<long double>::infinity(),
                                Classification::OnVariety, std::nullopt});
    for (auto &[a, l] : b.low)
      res.exceptional.push_back({TorsionPoint(n, a), l, Classification::Unexplained, std::nullopt});
  }
  res.contributing = res.unexceptional + res.exceptional.size();
  if (res.exceptional.empty())
    return res;

  const std::size_t d = p.dim();
  std::set<std::vector<std::int64_t>> candidates;
  detail::enumerate_relations(d, std::min(B, opts.enumeration_limit), candidates);
  if (B > opts.enumeration_limit) {
    // each point is paired with its nearest exceptional neighbours in the
    // cyclic sup metric; points on a common coset tend to be close
    const std::size_t m = res.exceptional.size();
    const std::size_t probes = std::min<std::size_t>(m, 256);
    const std::size_t scan = std::min<std::size_t>(m, 4096);
    const std::size_t neighbours = 8;
    auto cyc = [&](std::int64_t x) {
      const auto nn = static_cast<std::int64_t>(n);
      x = ((x % nn) + nn) % nn;
      return x > nn / 2 ? x - nn : x;
    };
    std::vector<std::vector<std::int64_t>> deltas;
    for (std::size_t i = 0; i < probes; ++i) {
      std::vector<std::pair<std::int64_t, std::vector<std::int64_t>>> near;
      for (std::size_t j = 0; j < scan; ++j) {
        if (j == i)
          continue;
        std::vector<std::int64_t> dj(d);
        std::int64_t dist = 0;
        for (std::size_t k = 0; k < d; ++k) {
          dj[k] = cyc(res.exceptional[j].point.exps()[k] - res.exceptional[i].point.exps()[k]);
          dist = std::max(dist, dj[k] < 0 ? -dj[k] : dj[k]);
        }
        near.emplace_back(dist, std::move(dj));
      }
      const std::size_t keep = std::min(neighbours, near.size());
      std::partial_sort(near.begin(), near.begin() + static_cast<std::ptrdiff_t>(keep), near.end());
      for (std::size_t t = 0; t < keep; ++t)
        deltas.push_back(std::move(near[t].second));
    }
    std::sort(deltas.begin(), deltas.end());
    deltas.erase(std::unique(deltas.begin(), deltas.end()), deltas.end());
    for (const auto &delta : deltas) {
      auto basis = detail::relation_lattice(delta, n);
      for (std::size_t x = 0; x < basis.size(); ++x)
        for (int sx : {1, -1}) {
          std::vector<std::int64_t> v = basis[x];
          for (auto &e : v)
            e *= sx;
          std::int64_t l1 = 0;
          for (auto e : v)
            l1 += e < 0 ? -e : e;
          if (l1 >= 1 && l1 <= B && detail::canonical(v))
            candidates.insert(v);
        }
    }
  }
  // order candidates by |n|_1, then lexicographically
  std::vector<std::vector<std::int64_t>> order(candidates.begin(), candidates.end());
  auto l1 = [](const std::vector<std::int64_t> &v) {
    std::int64_t s = 0;
    for (auto e : v)
      s += e < 0 ? -e : e;
    return s;
  };
  std::stable_sort(order.begin(), order.end(), [&](const auto &x, const auto &y) { return l1(x) < l1(y); });

  auto phase = [&](const std::vector<std::int64_t> &rel, const std::vector<std::int64_t> &a) {
    __int128 s = 0;
    for (std::size_t i = 0; i < d; ++i)
      s += static_cast<__int128>(rel[i]) * a[i];
    s %= static_cast<__int128>(n);
    if (s < 0)
      s += n;
    return static_cast<std::uint64_t>(s);
  };
  std::uint64_t npow = 1;
  for (std::size_t i = 1; i < d; ++i)
    npow *= n;
  for (const auto &rel : order) {
    std::map<std::uint64_t, std::uint64_t> hits;
    for (const auto &r : res.exceptional)
      if (r.classification == Classification::Unexplained)
        ++hits[phase(rel, r.point.exps())];
    if (hits.empty())
      break;
    std::uint64_t g = n;
    for (auto v : rel)
      g = std::gcd(g, static_cast<std::uint64_t>(v < 0 ? -v : v));
    const std::uint64_t coset_size = g * npow;
    std::map<std::uint64_t, std::uint64_t> covered;
    for (const auto &r : res.exceptional)
      ++covered[phase(rel, r.point.exps())];
    for (const auto &z : res.on_variety)
      ++covered[phase(rel, z.point.exps())];
    for (auto &r : res.exceptional) {
      if (r.classification != Classification::Unexplained)
        continue;
      const std::uint64_t c = phase(rel, r.point.exps());
      if (hits[c] < opts.min_cluster)
        continue;
      if (static_cast<double>(covered[c]) < opts.coverage * static_cast<double>(coset_size))
        continue;
      r.classification = Classification::OnTorsionCoset;
      r.relation = Relation{rel, c, n};
    }
  }
  return res;
}

inline void write_census_csv(std::ostream &out, const std::vector<CensusResult> &results) {
  csv::Writer w(out, {"N", "exps", "log_abs", "phiN", "normalized", "classification", "relation"});
  for (const auto &res : results) {
    auto emit = [&](const ExceptionRecord &r) {
      w.row(res.N, r.point.str(), r.log_abs, res.phi, r.log_abs / static_cast<long double>(res.phi),
            std::string(to_string(r.classification)), r.relation ? r.relation->str() : std::string());
    };
    for (const auto &r : res.on_variety)
      emit(r);
    for (const auto &r : res.exceptional)
      emit(r);
  }
}

struct UnitySumOptions {
  SweepOptions sweep;
  //! largest N^k scanned exhaustively; above it random tuples are drawn
  std::uint64_t exhaustive_cap = std::uint64_t{1} << 24;
  std::uint64_t samples = std::uint64_t{1} << 20;
  std::uint64_t seed = 1;
  //! proper subsums below e^{-epsilon phi(N)} are reported as small
  double epsilon = 0.5;
};

struct SubsumReport {
  //! indices into {1, z_1, ..., z_k} (0 is the constant 1)
  std::vector<std::size_t> subset;
  bool exact_zero = false;
  long double log_abs = 0;
};

struct UnitySumResult {
  std::size_t k = 0;
  std::uint64_t N = 0;
  bool sampled = false;
  std::uint64_t scanned = 0;
  std::uint64_t exact_zero_count = 0;
  std::optional<TorsionPoint> zero_witness;
  //! smallest |1 + z_1 + ... + z_k| over certified nonzero values
  long double min_nonzero = std::numeric_limits<long double>::infinity();
  std::optional<TorsionPoint> witness;
  //! proper subsums of the witness that vanish or fall below e^{-eps phi(N)}
  std::vector<SubsumReport> small_subsums;
  bool has_small_subsum = false;
};

namespace detail {

inline LaurentPoly unity_sum_poly(std::size_t k) {
  LaurentPoly p = LaurentPoly::constant(k, 1);
  for (std::size_t i = 0; i < k; ++i)
    p += LaurentPoly::variable(k, i);
  return p;
}

//! Subsum over `subset` of {1, z_1..z_k} as a k-variable polynomial.
inline LaurentPoly subsum_poly(std::size_t k, const std::vector<std::size_t> &subset) {
  LaurentPoly p(k);
  for (auto i : subset)
    p += i == 0 ? LaurentPoly::constant(k, 1) : LaurentPoly::variable(k, i - 1);
  return p;
}

} // namespace detail

inline UnitySumResult unity_sum_minima(std::size_t k, std::uint64_t n, const UnitySumOptions &opts = {}) {
  if (k < 1)
    throw std::invalid_argument("unity_sum_minima: k must be >= 1");
  UnitySumResult res;
  res.k = k;
  res.N = n;
  const LaurentPoly p = detail::unity_sum_poly(k);
  long double total = std::pow(static_cast<long double>(n), static_cast<long double>(k));
  if (total <= static_cast<long double>(opts.exhaustive_cap)) {
    auto s = sweep(p, n, kNoCensus, opts.sweep);
    res.scanned = s.zero_count + s.contributing;
    res.exact_zero_count = s.zero_count;
    if (s.argmin) {
      res.min_nonzero = std::exp(s.min_log);
      res.witness = s.argmin;
    }
    if (s.zero_count > 0) {
      // first zero in grid order
      std::vector<std::int64_t> a(k, 0);
      for (std::uint64_t idx = 0; idx < static_cast<std::uint64_t>(total); ++idx) {
        TorsionPoint z(n, a);
        if (is_zero_at(p, z)) {
          res.zero_witness = z;
          break;
        }
        for (std::size_t i = k; i-- > 0;) {
          if (static_cast<std::uint64_t>(++a[i]) < n)
            break;
          a[i] = 0;
        }
      }
    }
  } else {
    res.sampled = true;
    TorusEvaluator ev(p, n, opts.sweep);
    std::mt19937_64 rng(opts.seed);
    std::uniform_int_distribution<std::uint64_t> dist(0, n - 1);
    __int128 best = 0;
    for (std::uint64_t t = 0; t < opts.samples; ++t) {
      std::vector<std::int64_t> a(k);
      for (auto &v : a)
        v = static_cast<std::int64_t>(dist(rng));
      auto v = ev.at(a.data());
      ++res.scanned;
      if (v.zero) {
        ++res.exact_zero_count;
        if (!res.zero_witness)
          res.zero_witness = TorsionPoint(n, a);
        continue;
      }
      if (!res.witness || v.fixed < best) {
        best = v.fixed;
        res.min_nonzero = std::exp(v.log_abs);
        res.witness = TorsionPoint(n, a);
      }
    }
  }
  if (!res.witness)
    return res;
  // proper nonempty subsets of {1, z_1, ..., z_k}
  const long double small = -opts.epsilon * static_cast<long double>(euler_phi(n));
  const std::size_t m = k + 1;
  for (std::uint64_t mask = 1; mask + 1 < (std::uint64_t{1} << m); ++mask) {
    std::vector<std::size_t> subset;
    for (std::size_t i = 0; i < m; ++i)
      if (mask >> i & 1)
        subset.push_back(i);
    const LaurentPoly q = detail::subsum_poly(k, subset);
    SubsumReport rep{subset, false, 0};
    if (is_zero_at(q, *res.witness)) {
      rep.exact_zero = true;
      rep.log_abs = -std::numeric_limits<long double>::infinity();
    } else {
      TorusEvaluator ev(q, n, opts.sweep);
      rep.log_abs = ev.at(*res.witness).log_abs;
    }
    if (rep.exact_zero || rep.log_abs < small)
      res.small_subsums.push_back(rep);
  }
  res.has_small_subsum = !res.small_subsums.empty();
  return res;
}

enum class RootSelector { LargestModulus, SmallestModulus, ClosestToCircle, Index };

struct GelfondOptions {
  RootSelector selector = RootSelector::ClosestToCircle;
  std::size_t index = 0;
  mpfr_prec_t precision = 256;
};

struct GelfondRow {
  std::uint64_t N = 0;
  //! nearest N-th root of unity is e^{2 pi i k / N}
  std::uint64_t k = 0;
  long double distance = 0;
  long double distance_lo = 0, distance_hi = 0;
  long double neg_log_distance = 0;
  long double ratio = 0;
  //! |alpha - z_k| <= |alpha - z_{k +- 1}| within the certified error
  bool locally_optimal = false;
};

struct GelfondProfile {
  long double alpha_re = 0, alpha_im = 0, alpha_abs = 0;
  bool unimodular_candidate = false;
  std::vector<GelfondRow> rows;
  long double max_ratio = 0;
  std::uint64_t argmax_N = 0;
};

namespace detail {

//! Non-cyclotomic roots sorted by (|alpha|, arg alpha).
inline std::vector<CertifiedRoot> selectable_roots(const UniPoly &a, mpfr_prec_t precision) {
  auto rep = roots_certified(a, precision);
  std::vector<CertifiedRoot> out;
  for (auto &r : rep.roots)
    if (r.cyclotomic_order == 0)
      out.push_back(std::move(r));
  auto key = [](const CertifiedRoot &r) {
    return std::make_pair(hypot(r.disk.re, r.disk.im).to_ld(),
                          std::atan2(r.disk.im.to_ld(), r.disk.re.to_ld()));
  };
  std::stable_sort(out.begin(), out.end(), [&](const auto &x, const auto &y) { return key(x) < key(y); });
  return out;
}

} // namespace detail

//! -log min_{z in mu_N} |alpha - z| for a selected root alpha of A.
inline GelfondProfile gelfond_rate(const UniPoly &a, const std::vector<std::uint64_t> &ns,
                                   const GelfondOptions &opts = {}) {
  const mpfr_prec_t p = opts.precision;
  auto roots = detail::selectable_roots(a, p);
  if (roots.empty())
    throw std::invalid_argument("gelfond_rate: every root is a root of unity (cyclotomic factor)");
  std::size_t pick = 0;
  switch (opts.selector) {
  case RootSelector::LargestModulus:
    pick = roots.size() - 1;
    break;
  case RootSelector::SmallestModulus:
    pick = 0;
    break;
  case RootSelector::ClosestToCircle: {
    long double best = INFINITY;
    for (std::size_t i = 0; i < roots.size(); ++i) {
      const long double gap = std::fabs(hypot(roots[i].disk.re, roots[i].disk.im).to_ld() - 1);
      // prefer the upper half plane among ties
      if (gap < best - 1e-15L || (std::fabs(gap - best) <= 1e-15L && roots[i].disk.im.sign() > 0 &&
                                  roots[pick].disk.im.sign() <= 0)) {
        best = gap;
        pick = i;
      }
    }
    break;
  }
  case RootSelector::Index:
    if (opts.index >= roots.size())
      throw std::invalid_argument("gelfond_rate: root index out of range");
    pick = opts.index;
    break;
  }
  const CertifiedComplex &alpha = roots[pick].disk;
  GelfondProfile prof;
  prof.alpha_re = alpha.re.to_ld();
  prof.alpha_im = alpha.im.to_ld();
  prof.alpha_abs = hypot(alpha.re, alpha.im).to_ld();
  prof.unimodular_candidate = roots[pick].location == CircleLocation::OnCircle;
  Real theta(p);
  mpfr_atan2(theta.get(), alpha.im.get(), alpha.re.get(), MPFR_RNDN);
  const Real two_pi = pi(p) * Real(2.0L, p);
  // table error of unit_root_mp plus the root disk, both already doubled
  Real slack(64);
  mpfr_set_ui_2exp(slack.get(), 3 * (kMpTableUlps + 4), -static_cast<long>(p), MPFR_RNDU);
  Real err = alpha.radius + slack;
  const long double e = err.to_ld(MPFR_RNDU);
  for (auto n : ns) {
    if (n == 0)
      throw std::invalid_argument("gelfond_rate: N must be positive");
    Real pos = theta * Real(static_cast<long double>(n), p) / two_pi;
    mpfr_round(pos.get(), pos.get());
    long k0 = mpfr_get_si(pos.get(), MPFR_RNDN);
    const auto nn = static_cast<long>(n);
    auto dist = [&](long k) {
      const auto kk = static_cast<std::uint64_t>(((k % nn) + nn) % nn);
      MpComplex z = unit_root_mp(kk, n, p);
      return hypot(alpha.re - z.re, alpha.im - z.im).to_ld();
    };
    GelfondRow row;
    row.N = n;
    row.k = static_cast<std::uint64_t>(((k0 % nn) + nn) % nn);
    row.distance = dist(k0);
    row.distance_lo = std::max(0.0L, row.distance - e);
    row.distance_hi = row.distance + e;
    row.neg_log_distance = -std::log(row.distance);
    row.ratio = row.neg_log_distance / static_cast<long double>(n);
    row.locally_optimal = row.distance <= dist(k0 - 1) + 2 * e && row.distance <= dist(k0 + 1) + 2 * e;
    if (prof.rows.empty() || row.ratio > prof.max_ratio) {
      prof.max_ratio = row.ratio;
      prof.argmax_N = n;
    }
    prof.rows.push_back(row);
  }
  return prof;
}

inline void write_gelfond_csv(std::ostream &out, const GelfondProfile &prof) {
  csv::Writer w(out, {"N", "k", "distance", "neg_log_distance", "ratio", "locally_optimal"});
  for (const auto &r : prof.rows)
    w.row(r.N, r.k, r.distance, r.neg_log_distance, r.ratio, r.locally_optimal);
}

struct SimultaneousOptions {
  SweepOptions sweep;
  //! rows are counted as exceeding when value > epsilon phi(N) / s
  double epsilon = 0.5;
  std::uint64_t max_points = std::uint64_t{1} << 24;
};

struct SimultaneousRow {
  TorsionPoint point;
  //! min over sigma in Sigma of -log|P(z^sigma)|
  long double value;
  //! value / (phi(N) / s)
  long double normalized;
};

struct SimultaneousProfile {
  std::uint64_t N = 0, phi = 0;
  std::size_t s = 0;
  std::vector<std::uint64_t> sigma;
  std::vector<SimultaneousRow> rows;
  std::uint64_t zero_count = 0;
  long double max_value = -std::numeric_limits<long double>::infinity();
  std::optional<TorsionPoint> argmax;
  long double max_normalized = -std::numeric_limits<long double>::infinity();
  std::uint64_t exceeding = 0;
};

//! Sigma = the s smallest units mod N. Zeros of P (Galois-stable) are
//! counted and skipped.
inline SimultaneousProfile simultaneous_profile(const LaurentPoly &p, std::uint64_t n, std::size_t s,
                                                const SimultaneousOptions &opts = {}) {
  SimultaneousProfile prof;
  prof.N = n;
  prof.phi = euler_phi(n);
  prof.s = s;
  if (s < 1 || s > prof.phi)
    throw std::invalid_argument("simultaneous_profile: need 1 <= s <= phi(N)");
  const std::size_t d = p.dim();
  const std::uint64_t total = detail::grid_size(n, d);
  if (total > opts.max_points)
    throw CapExceeded("simultaneous_profile: grid exceeds the point cap");
  auto units = units_mod(n);
  prof.sigma.assign(units.begin(), units.begin() + static_cast<std::ptrdiff_t>(s));
  TorusEvaluator ev(p, n, opts.sweep);
  struct Block {
    std::vector<PointValue> values;
  };
  auto blocks = sweep_blocks<Block>(
      ev, opts.sweep, [](Block &b, const std::vector<std::int64_t> &, const PointValue &v) { b.values.push_back(v); });
  std::vector<PointValue> values;
  values.reserve(total);
  for (auto &b : blocks)
    values.insert(values.end(), b.values.begin(), b.values.end());
  const long double scale = static_cast<long double>(prof.phi) / static_cast<long double>(s);
  const long double bound = static_cast<long double>(opts.epsilon) * scale;
  std::vector<std::int64_t> a(d, 0);
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    if (values[idx].zero) {
      ++prof.zero_count;
    } else {
      long double v = -std::numeric_limits<long double>::infinity();
      bool first = true;
      for (auto sg : prof.sigma) {
        std::uint64_t j = 0;
        for (std::size_t i = 0; i < d; ++i)
          j = j * n + static_cast<std::uint64_t>(a[i]) * sg % n;
        const long double w = -values[j].log_abs;
        if (first || w < v)
          v = w;
        first = false;
      }
      SimultaneousRow row{TorsionPoint(n, a), v, v / scale};
      if (v > prof.max_value) {
        prof.max_value = v;
        prof.max_normalized = row.normalized;
        prof.argmax = row.point;
      }
      if (v > bound)
        ++prof.exceeding;
      prof.rows.push_back(std::move(row));
    }
    for (std::size_t i = d; i-- > 0;) {
      if (static_cast<std::uint64_t>(++a[i]) < n)
        break;
      a[i] = 0;
    }
  }
  return prof;
}

inline void write_simultaneous_csv(std::ostream &out, const SimultaneousProfile &prof) {
  csv::Writer w(out, {"exps", "value", "normalized"});
  for (const auto &r : prof.rows)
    w.row(r.point.str(), r.value, r.normalized);
}

struct SmallPointRow {
  std::uint64_t n = 0;
  std::size_t degree = 0;
  long double alpha = 0;
  //! |2 - alpha_n|
  long double distance = 0;
  //! |alpha_n|^{-n}
  long double inverse_power = 0;
  //! | |2 - alpha| |alpha|^n - 1 |, evaluated in MPFR
  long double identity_residual = 0;
  //! m(x^n (x - 2) - 1) / (n + 1): the height of alpha_n when the
  //! polynomial is irreducible, an upper bound otherwise
  long double height = 0;
  bool height_is_upper_bound = true;
};

inline UniPoly small_point_poly(std::uint64_t n) {
  std::vector<BigInt> c(n + 2, BigInt(0));
  c[0] = -1;
  c[n] = -2;
  c[n + 1] = 1;
  return UniPoly(std::move(c));
}

inline std::vector<SmallPointRow> small_point_family(const std::vector<std::uint64_t> &ns,
                                                     mpfr_prec_t precision = 256) {
  std::vector<SmallPointRow> rows;
  for (auto n : ns) {
    if (n < 1)
      throw std::invalid_argument("small_point_family: n must be >= 1");
    const UniPoly f = small_point_poly(n);
    auto rep = roots_certified(f, precision);
    const CertifiedRoot *best = nullptr;
    long double best_d = INFINITY;
    for (const auto &r : rep.roots) {
      const long double dd = hypot(r.disk.re - Real(2.0L, precision), r.disk.im).to_ld();
      if (dd < best_d) {
        best_d = dd;
        best = &r;
      }
    }
    if (!best || best->multiplicity != 1)
      throw ComputationError("small_point_family: root near 2 not certified");
    const mpfr_prec_t p = best->disk.precision();
    const Real &re = best->disk.re;
    const Real &im = best->disk.im;
    Real dist = hypot(Real(2.0L, p) - re, im);
    Real mod = hypot(re, im);
    Real mpow(p);
    mpfr_pow_ui(mpow.get(), mod.get(), n, MPFR_RNDN);
    Real prod = dist * mpow;
    SmallPointRow row;
    row.n = n;
    row.degree = n + 1;
    row.alpha = re.to_ld();
    row.distance = dist.to_ld();
    row.inverse_power = (Real(1.0L, p) / mpow).to_ld();
    row.identity_residual = abs(prod - Real(1.0L, p)).to_ld();
    row.height = mahler_d1(f) / static_cast<long double>(n + 1);
    rows.push_back(row);
  }
  return rows;
}

inline void write_small_points_csv(std::ostream &out, const std::vector<SmallPointRow> &rows) {
  csv::Writer w(out, {"n", "deg", "dist_to_2", "inv_pow", "identity_residual", "height", "height_upper_bound"});
  for (const auto &r : rows)
    w.row(r.n, r.degree, r.distance, r.inverse_power, r.identity_residual, r.height, r.height_is_upper_bound);
}

} // namespace mahlerlab
