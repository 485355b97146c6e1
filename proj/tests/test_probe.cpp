#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numeric>
#include <set>
#include <sstream>

#include <mahlerlab/poly_io.hpp>
#include <mahlerlab/probe.hpp>

using namespace mahlerlab;

namespace {

using cd = std::complex<long double>;

cd root_of_unity(long k, std::uint64_t n) {
  const long double t = 2 * M_PIl * static_cast<long double>(k) / static_cast<long double>(n);
  return {std::cos(t), std::sin(t)};
}

std::uint64_t phi_oracle(std::uint64_t n) {
  std::uint64_t c = 0;
  for (std::uint64_t k = 1; k <= n; ++k)
    c += std::gcd(k, n) == 1;
  return c;
}

} // namespace

TEST(Census, NothingExceptionalForXMinusOne) {
  auto r = exceptional_census(parse_poly("x - 1"), 12, 0.5, 2);
  EXPECT_TRUE(r.exceptional.empty());
  ASSERT_EQ(r.on_variety.size(), 1u);
  EXPECT_EQ(r.on_variety[0].point.exps()[0], 0);
  EXPECT_EQ(r.unexceptional, 11u);
}

TEST(Census, ZerosOfOnePlusXPlusYAtThree) {
  auto r = exceptional_census(parse_poly("1 + x1 + x2"), 3, 0.1, 2);
  ASSERT_EQ(r.on_variety.size(), 2u);
  std::set<std::vector<std::int64_t>> pts;
  for (const auto &z : r.on_variety) {
    EXPECT_EQ(z.classification, Classification::OnVariety);
    pts.insert(z.point.exps());
  }
  EXPECT_EQ(pts, (std::set<std::vector<std::int64_t>>{{1, 2}, {2, 1}}));
  EXPECT_TRUE(r.exceptional.empty());
}

TEST(Census, DiagonalCosetAgainstExhaustiveOracle) {
  const std::uint64_t n = 30;
  const double eps = 0.1;
  auto r = exceptional_census(parse_poly("x1 - x2"), n, eps, 3);
  const long double thr = -eps * static_cast<long double>(phi_oracle(n));
  // brute force: |z1 - z2| with complex arithmetic
  std::set<std::vector<std::int64_t>> expect_low, expect_zero;
  for (long a = 0; a < static_cast<long>(n); ++a)
    for (long b = 0; b < static_cast<long>(n); ++b) {
      const long double v = std::abs(root_of_unity(a, n) - root_of_unity(b, n));
      if (a == b)
        expect_zero.insert({a, b});
      else if (std::log(v) < thr)
        expect_low.insert({a, b});
    }
  std::set<std::vector<std::int64_t>> got_low, got_zero;
  for (const auto &e : r.exceptional)
    got_low.insert(e.point.exps());
  for (const auto &e : r.on_variety)
    got_zero.insert(e.point.exps());
  EXPECT_EQ(got_zero, expect_zero);
  EXPECT_EQ(got_low, expect_low);
  ASSERT_FALSE(expect_low.empty());
  for (const auto &e : r.exceptional) {
    EXPECT_EQ(e.classification, Classification::OnTorsionCoset);
    ASSERT_TRUE(e.relation.has_value());
    EXPECT_EQ(e.relation->n, (std::vector<std::int64_t>{1, -1}));
    EXPECT_TRUE(satisfies(*e.relation, e.point));
    const std::int64_t c = ((e.point.exps()[0] - e.point.exps()[1]) % 30 + 30) % 30;
    EXPECT_EQ(e.relation->c, static_cast<std::uint64_t>(c));
  }
  EXPECT_EQ(r.contributing + r.on_variety.size(), n * n);
}

TEST(Census, LatticeCandidatesAboveEnumerationLimit) {
  // |x1^3 - x2| is small along the coset x2 = x1^3 * (near 1)
  CensusOptions opts;
  opts.enumeration_limit = 2;
  auto r = exceptional_census(parse_poly("x1^3 - x2"), 30, 0.1, 8, opts);
  ASSERT_FALSE(r.exceptional.empty());
  for (const auto &e : r.exceptional) {
    ASSERT_TRUE(e.relation.has_value()) << e.point.str();
    EXPECT_TRUE(satisfies(*e.relation, e.point));
    EXPECT_EQ(e.relation->n, (std::vector<std::int64_t>{3, -1}));
  }
}

TEST(Census, UnexplainedWhenNoRelationCovers) {
  // isolated small values of 1 + x1 + x2 near the zero set, B = 1 cannot
  // cover a whole coset
  auto r = exceptional_census(parse_poly("1 + x1 + x2"), 30, 0.02, 1);
  std::size_t unexplained = 0;
  for (const auto &e : r.exceptional) {
    if (e.classification == Classification::Unexplained)
      ++unexplained;
    if (e.relation)
      EXPECT_TRUE(satisfies(*e.relation, e.point));
  }
  EXPECT_EQ(unexplained, r.exceptional.size());
}

TEST(Census, CsvListsEveryRecord) {
  auto r = exceptional_census(parse_poly("x1 - x2"), 12, 0.1, 2);
  std::ostringstream os;
  write_census_csv(os, {r});
  std::size_t lines = 0;
  for (char c : os.str())
    lines += c == '\n';
  EXPECT_EQ(lines, 1 + r.exceptional.size() + r.on_variety.size());
  EXPECT_EQ(os.str().rfind("N,exps,log_abs,phiN,normalized,classification,relation", 0), 0u);
}

TEST(Census, RejectsBadArguments) {
  EXPECT_THROW(exceptional_census(parse_poly("x - 1"), 5, 0.0, 2), std::invalid_argument);
  EXPECT_THROW(exceptional_census(parse_poly("x - 1"), 5, 0.5, 0), std::invalid_argument);
}

TEST(UnitySums, TwoCubeRoots) {
  auto r = unity_sum_minima(2, 3);
  EXPECT_NEAR(static_cast<double>(r.min_nonzero), std::sqrt(3.0), 1e-12);
  EXPECT_EQ(r.exact_zero_count, 2u);
  ASSERT_TRUE(r.zero_witness.has_value());
  EXPECT_EQ(r.zero_witness->exps(), (std::vector<std::int64_t>{1, 2}));
  EXPECT_FALSE(r.sampled);
}

TEST(UnitySums, OneSquareRoot) {
  auto r = unity_sum_minima(1, 2);
  EXPECT_NEAR(static_cast<double>(r.min_nonzero), 2.0, 1e-15);
  EXPECT_EQ(r.exact_zero_count, 1u);
}

TEST(UnitySums, BruteForceFifthRoots) {
  const std::uint64_t n = 5;
  long double best = INFINITY;
  std::uint64_t zeros = 0;
  for (long a = 0; a < 5; ++a)
    for (long b = 0; b < 5; ++b) {
      const long double v = std::abs(cd(1) + root_of_unity(a, n) + root_of_unity(b, n));
      if (v < 1e-12L)
        ++zeros;
      else
        best = std::min(best, v);
    }
  auto r = unity_sum_minima(2, n);
  EXPECT_EQ(r.exact_zero_count, zeros);
  EXPECT_NEAR(static_cast<double>(r.min_nonzero), static_cast<double>(best), 1e-12);
  ASSERT_TRUE(r.witness.has_value());
  const auto &w = r.witness->exps();
  EXPECT_NEAR(static_cast<double>(std::abs(cd(1) + root_of_unity(w[0], n) + root_of_unity(w[1], n))),
              static_cast<double>(best), 1e-12);
}

TEST(UnitySums, VanishingSubsumReported) {
  // at N = 6 the minimum of 1 + z1 + z2 + z3 is attained at points where a
  // pair cancels (1 + z = 0 or z_i + z_j = 0) leaving a unit
  UnitySumOptions opts;
  opts.epsilon = 0.5;
  auto r = unity_sum_minima(3, 6, opts);
  ASSERT_TRUE(r.witness.has_value());
  for (const auto &s : r.small_subsums)
    if (s.exact_zero) {
      LaurentPoly q = detail::subsum_poly(3, s.subset);
      EXPECT_TRUE(is_zero_at(q, *r.witness));
    }
}

TEST(UnitySums, SamplingIsSeeded) {
  UnitySumOptions opts;
  opts.exhaustive_cap = 10;
  opts.samples = 2000;
  opts.seed = 7;
  auto a = unity_sum_minima(2, 97, opts);
  auto b = unity_sum_minima(2, 97, opts);
  EXPECT_TRUE(a.sampled);
  EXPECT_EQ(a.scanned, 2000u);
  EXPECT_EQ(a.min_nonzero, b.min_nonzero);
  EXPECT_EQ(a.witness->exps(), b.witness->exps());
}

TEST(Gelfond, LehmerRootStaysFarFromRootsOfUnity) {
  const UniPoly lehmer{1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1};
  std::vector<std::uint64_t> ns;
  for (std::uint64_t n = 1; n <= 5000; n += 7)
    ns.push_back(n);
  auto prof = gelfond_rate(lehmer, ns);
  EXPECT_TRUE(prof.unimodular_candidate);
  EXPECT_NEAR(static_cast<double>(prof.alpha_abs), 1.0, 1e-15);
  for (const auto &r : prof.rows) {
    EXPECT_TRUE(r.locally_optimal) << r.N;
    EXPECT_LE(r.distance_lo, r.distance);
    EXPECT_GE(r.distance_hi, r.distance);
    // the nearest root of unity is within half a step
    EXPECT_LE(r.distance, 2 * std::sin(M_PIl / (2 * static_cast<long double>(r.N))) + 1e-15);
    // independent check in long double complex arithmetic
    const cd alpha(prof.alpha_re, prof.alpha_im);
    long double best = INFINITY;
    for (std::uint64_t k = 0; k < r.N && r.N <= 200; ++k)
      best = std::min(best, std::abs(alpha - root_of_unity(static_cast<long>(k), r.N)));
    if (r.N <= 200)
      EXPECT_NEAR(static_cast<double>(r.distance), static_cast<double>(best), 1e-14);
  }
  EXPECT_LT(prof.max_ratio, 3.0L);
}

TEST(Gelfond, RealRootOutsideCircle) {
  auto prof = gelfond_rate(UniPoly{-2, 1}, {1, 2, 3, 10});
  EXPECT_FALSE(prof.unimodular_candidate);
  EXPECT_NEAR(static_cast<double>(prof.rows[0].distance), 1.0, 1e-15);
  for (const auto &r : prof.rows) {
    EXPECT_EQ(r.k, 0u);
    EXPECT_NEAR(static_cast<double>(r.distance), 1.0, 1e-15);
    EXPECT_NEAR(static_cast<double>(r.neg_log_distance), 0.0, 1e-15);
  }
}

TEST(Gelfond, SelectorsAndInsideRoot) {
  // (x - 2)(2x - 1): roots 2 and 1/2
  const UniPoly a{2, -5, 2};
  GelfondOptions opts;
  opts.selector = RootSelector::SmallestModulus;
  auto in = gelfond_rate(a, {4}, opts);
  EXPECT_NEAR(static_cast<double>(in.alpha_abs), 0.5, 1e-15);
  EXPECT_NEAR(static_cast<double>(in.rows[0].distance), 0.5, 1e-15);
  opts.selector = RootSelector::LargestModulus;
  auto out = gelfond_rate(a, {4}, opts);
  EXPECT_NEAR(static_cast<double>(out.alpha_abs), 2.0, 1e-15);
  opts.selector = RootSelector::Index;
  opts.index = 5;
  EXPECT_THROW(gelfond_rate(a, {4}, opts), std::invalid_argument);
}

TEST(Gelfond, RejectsPurelyCyclotomic) {
  EXPECT_THROW(gelfond_rate(UniPoly{1, 1, 1}, {5}), std::invalid_argument);
  // cyclotomic factors are skipped, the other root is used
  auto prof = gelfond_rate(UniPoly{-3, -2, -2, 1}, {6}); // (x^2 + x + 1)(x - 3)
  EXPECT_NEAR(static_cast<double>(prof.alpha_abs), 3.0, 1e-15);
}

TEST(Simultaneous, SingleEmbeddingMatchesMinProfile) {
  const LaurentPoly p = parse_poly("1 + x1 + x2");
  for (std::uint64_t n : {5u, 7u, 12u}) {
    auto prof = simultaneous_profile(p, n, 1);
    auto mp = min_profile(p, {n});
    EXPECT_EQ(prof.max_value, -mp[0].min_log) << n;
  }
}

TEST(Simultaneous, FullGaloisOrbitForXMinusOne) {
  // min over the whole orbit of -log|z - 1| equals -log of the largest
  // conjugate distance, which is at most log N / 1 after normalisation
  for (std::uint64_t n : {5u, 8u, 30u}) {
    const std::size_t s = phi_oracle(n);
    auto prof = simultaneous_profile(parse_poly("x - 1"), n, s);
    EXPECT_EQ(prof.zero_count, 1u);
    EXPECT_LE(prof.max_value, std::log(static_cast<long double>(n)));
    EXPECT_EQ(prof.rows.size(), n - 1);
  }
}

TEST(Simultaneous, OracleOnSmallGrid) {
  const std::uint64_t n = 9;
  const std::size_t s = 3;
  auto prof = simultaneous_profile(parse_poly("x - 1"), n, s);
  EXPECT_EQ(prof.sigma, (std::vector<std::uint64_t>{1, 2, 4}));
  for (const auto &r : prof.rows) {
    long double v = INFINITY;
    for (std::uint64_t sg : {1u, 2u, 4u})
      v = std::min(v, -std::log(std::abs(root_of_unity(r.point.exps()[0] * static_cast<long>(sg), n) - cd(1))));
    EXPECT_NEAR(static_cast<double>(r.value), static_cast<double>(v), 1e-12);
    EXPECT_NEAR(static_cast<double>(r.normalized), static_cast<double>(v / 2), 1e-12);
  }
}

TEST(Simultaneous, NoExceedanceAwayFromTheCircle) {
  auto prof = simultaneous_profile(parse_poly("x - 2"), 20, 4);
  EXPECT_EQ(prof.exceeding, 0u);
  EXPECT_EQ(prof.zero_count, 0u);
  EXPECT_THROW(simultaneous_profile(parse_poly("x - 2"), 20, 9), std::invalid_argument);
}

TEST(SmallPoints, FirstMemberIsOnePlusSqrtTwo) {
  auto rows = small_point_family({1});
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_NEAR(static_cast<double>(rows[0].alpha), 1 + std::sqrt(2.0), 1e-15);
  EXPECT_EQ(rows[0].degree, 2u);
  // x^2 - 2x - 1 has roots 1 +- sqrt2, so m = log(1 + sqrt 2)
  EXPECT_NEAR(static_cast<double>(rows[0].height), std::log(1 + std::sqrt(2.0)) / 2, 1e-15);
}

TEST(SmallPoints, DistanceIdentityAndDecay) {
  std::vector<std::uint64_t> ns;
  for (std::uint64_t n = 1; n <= 40; ++n)
    ns.push_back(n);
  auto rows = small_point_family(ns);
  for (const auto &r : rows) {
    EXPECT_LT(r.identity_residual, 1e-10L) << r.n;
    EXPECT_NEAR(static_cast<double>(r.distance / r.inverse_power), 1.0, 1e-10);
    EXPECT_TRUE(r.height_is_upper_bound);
  }
  for (std::size_t i = 1; i < rows.size(); ++i)
    EXPECT_LT(rows[i].distance, rows[i - 1].distance);
  // heights shrink roughly like log 2 / n
  EXPECT_LT(rows.back().height, rows.front().height / 5);
  EXPECT_LT(rows.back().height, 0.03L);
}

TEST(SmallPoints, Csv) {
  std::ostringstream os;
  write_small_points_csv(os, small_point_family({1, 2}));
  EXPECT_EQ(os.str().rfind("n,deg,dist_to_2,inv_pow,identity_residual,height,height_upper_bound", 0), 0u);
}
