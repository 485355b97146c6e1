#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <set>
#include <sstream>

#include <mahlerlab/poly_io.hpp>
#include <mahlerlab/sweep.hpp>

using namespace mahlerlab;

TEST(Sweep, MonomialHasNoZerosAndZeroLogs) {
  for (std::uint64_t n : {1, 2, 7, 30}) {
    auto s = sweep(parse_poly("x"), n, 0.0L);
    EXPECT_EQ(s.zero_count, 0u);
    EXPECT_LE(std::fabs(s.log_sum), 1e-18L * static_cast<long double>(n));
    EXPECT_LE(std::fabs(s.min_log), 1e-18L);
  }
}

TEST(Sweep, XMinusOneAtN8) {
  auto s = sweep(parse_poly("x - 1"), 8, -0.1L);
  EXPECT_EQ(s.zero_count, 1u);
  EXPECT_EQ(s.contributing, 7u);
  EXPECT_NEAR(static_cast<double>(s.min_log), std::log(2 * std::sin(M_PI / 8)), 1e-15);
  EXPECT_NEAR(static_cast<double>(s.log_sum), std::log(8.0), 1e-15);
  // the two chords next to 1 have log(0.765...) < -0.1
  ASSERT_EQ(s.near_min.size(), 2u);
  EXPECT_EQ(s.near_min[0].point.exps()[0], 1);
  EXPECT_EQ(s.near_min[1].point.exps()[0], 7);
  EXPECT_EQ(s.near_min[0].log_abs, s.near_min[1].log_abs);
  ASSERT_TRUE(s.argmin.has_value());
  EXPECT_EQ(s.argmin->exps()[0], 1);
}

TEST(Sweep, XMinusTwoMinimumIsZero) {
  for (std::uint64_t n : {1, 5, 16}) {
    auto s = sweep(parse_poly("x - 2"), n, 0.0L);
    EXPECT_NEAR(static_cast<double>(s.min_log), 0.0, 1e-18);
    EXPECT_NEAR(static_cast<double>(s.log_sum), std::log(std::pow(2.0, n) - 1), 1e-13);
  }
}

TEST(Sweep, BruteForceOracleTwoVariables) {
  // 144-point brute force with std::complex<double>, zeros excluded by
  // tolerance (the exact zeros of 1 + x + y are at (w, w^2), (w^2, w)).
  const auto p = parse_poly("1 + x1 + x2");
  const std::uint64_t n = 12;
  double min_log = INFINITY, sum = 0;
  int zeros = 0;
  for (std::uint64_t a = 0; a < n; ++a)
    for (std::uint64_t b = 0; b < n; ++b) {
      const auto v = 1.0 + std::polar(1.0, 2 * M_PI * a / n) + std::polar(1.0, 2 * M_PI * b / n);
      if (std::abs(v) < 1e-12) {
        ++zeros;
        continue;
      }
      min_log = std::min(min_log, std::log(std::abs(v)));
      sum += std::log(std::abs(v));
    }
  auto s = sweep(p, n, 0.0L);
  EXPECT_EQ(s.zero_count, static_cast<std::uint64_t>(zeros));
  EXPECT_EQ(zeros, 2);
  EXPECT_EQ(s.zero_count + s.contributing, n * n);
  EXPECT_NEAR(static_cast<double>(s.min_log), min_log, 1e-12);
  EXPECT_NEAR(static_cast<double>(s.log_sum), sum, 1e-11);
}

TEST(Sweep, NearMinClosedUnderConjugation) {
  for (const char *text : {"1 + x1 + x2", "x1^2 - 3*x1*x2 + x2^-1 + 1", "x - 1", "2 + x1 + x2^3"}) {
    const auto p = parse_poly(text);
    for (std::uint64_t n : {7, 12, 25}) {
      auto s = sweep(p, n, 0.0L);
      std::set<std::pair<TorsionPoint, long double>> seen;
      for (auto &e : s.near_min)
        seen.insert({e.point, e.log_abs});
      for (auto &e : s.near_min) {
        EXPECT_TRUE(seen.count({e.point.inverse(), e.log_abs})) << text << " N=" << n << " " << e.point.str();
        EXPECT_FALSE(is_zero_at(p, e.point));
      }
    }
  }
}

TEST(Sweep, PartitionIdentity) {
  const auto p = parse_poly("x1 - x2");
  for (std::uint64_t n : {1, 3, 10}) {
    auto s = sweep(p, n, 0.0L);
    EXPECT_EQ(s.zero_count, n); // the diagonal
    EXPECT_EQ(s.zero_count + s.contributing, n * n);
    EXPECT_TRUE(std::isfinite(s.log_sum));
  }
}

TEST(Sweep, DeterministicAcrossWorkersAndBlocks) {
  const auto p = parse_poly("1 + x1 + x2 - 3*x1*x2^2");
  SweepSummary ref;
  bool first = true;
  for (unsigned w : {1u, 4u, 8u})
    for (std::uint64_t bs : {1u, 97u, 4096u}) {
      SweepOptions o;
      o.workers = w;
      o.block_size = bs;
      auto s = sweep(p, 41, -0.5L, o);
      if (first) {
        ref = s;
        first = false;
        continue;
      }
      EXPECT_EQ(s.log_sum_exact, ref.log_sum_exact);
      EXPECT_EQ(s.zero_count, ref.zero_count);
      EXPECT_EQ(s.min_log, ref.min_log);
      EXPECT_EQ(*s.argmin, *ref.argmin);
      ASSERT_EQ(s.near_min.size(), ref.near_min.size());
      for (std::size_t i = 0; i < s.near_min.size(); ++i) {
        EXPECT_EQ(s.near_min[i].point, ref.near_min[i].point);
        EXPECT_EQ(s.near_min[i].log_abs, ref.near_min[i].log_abs);
      }
    }
}

TEST(Sweep, EscalatesForLargeCoefficients) {
  // The value at z = 1 is -1, hidden under coefficients of size 2^200.
  const auto p = parse_poly("1606938044258990275541962092341162602522202993782792835301376*x - 1606938044258990275541962092341162602522202993782792835301377");
  SweepOptions tight;
  tight.precision_cap = 128;
  try {
    sweep(p, 4, 0.0L, tight);
    FAIL() << "expected PrecisionExhausted";
  } catch (const PrecisionExhausted &e) {
    EXPECT_EQ(e.order(), 4u);
    EXPECT_EQ(e.exps(), std::vector<std::int64_t>{0});
  }
  auto s = sweep(p, 4, 0.0L);
  EXPECT_GE(s.max_precision_used, 256);
  EXPECT_EQ(s.min_log, 0.0L); // |-1|
}

TEST(Sweep, RejectsBadInput) {
  EXPECT_THROW(sweep(LaurentPoly(1), 3, 0.0L), std::invalid_argument);
  EXPECT_THROW(sweep(parse_poly("x"), 3, 0.5L), std::invalid_argument);
  EXPECT_THROW(sweep(parse_poly("x"), 0, 0.0L), std::invalid_argument);
}

TEST(MinProfile, ChordBound) {
  auto rows = min_profile(parse_poly("x - 1"), {3, 10, 100, 1000});
  for (auto &r : rows) {
    EXPECT_NEAR(static_cast<double>(r.min_log), std::log(2 * std::sin(M_PI / r.N)), 1e-13);
    EXPECT_EQ(r.normalized, r.min_log / euler_phi(r.N));
  }
  EXPECT_LT(-rows.back().normalized, -rows[1].normalized);
}

TEST(Sweep, CsvRow) {
  std::ostringstream out;
  csv::Writer w(out, sweep_csv_header());
  write_sweep_row(w, sweep(parse_poly("x - 1"), 8, -0.1L));
  const std::string text = out.str();
  EXPECT_EQ(text.substr(0, text.find('\n')), "N,d,zero_count,log_sum,min_log,argmin_exps,threshold,census_size");
  EXPECT_NE(text.find("\n8,1,1,2.0794415416798"), std::string::npos);
  EXPECT_EQ(text.substr(text.size() - 2), "2\n");
}
