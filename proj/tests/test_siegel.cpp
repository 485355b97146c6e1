#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>

#include <mahlerlab/matrix.hpp>
#include <mahlerlab/poly_io.hpp>
#include <mahlerlab/siegel.hpp>

using namespace mahlerlab;

namespace {

using SparseSystem = std::map<std::vector<std::int64_t>, std::map<std::size_t, BigInt>>;

SparseSystem as_map(const ConstraintSystem &sys) {
  SparseSystem out;
  for (std::size_t i = 0; i < sys.K(); ++i)
    for (const auto &[c, v] : sys.rows[i])
      out[sys.row_keys[i]][c] = v;
  return out;
}

// For P = y1 - lambda z (R = 1) the normal form is the Taylor expansion
// around y_t = lambda z: substitute y_t = u_t + lambda z and read off the
// coefficient of u^b z^j. Row key: [z][b_1..b_m][s_1..s_m] with s = 0.
SparseSystem taylor_oracle(long lambda, std::size_t m, std::size_t D, std::size_t n) {
  SparseSystem out;
  const std::size_t vars = m + 1;
  std::vector<std::int64_t> idx(vars, 0);
  std::size_t col = 0;
  while (true) {
    // iterate all b_t <= i_t
    std::vector<std::int64_t> b(m, 0);
    while (true) {
      std::int64_t bsum = 0, zexp = idx[m];
      BigInt c = 1;
      for (std::size_t t = 0; t < m; ++t) {
        bsum += b[t];
        zexp += idx[t] - b[t];
        BigInt binom;
        mpz_bin_uiui(binom.get_mpz_t(), static_cast<unsigned long>(idx[t]), static_cast<unsigned long>(b[t]));
        c *= binom * pow(BigInt(lambda), static_cast<unsigned long>(idx[t] - b[t]));
      }
      if (static_cast<std::size_t>(bsum) < n && sgn(c) != 0) {
        std::vector<std::int64_t> key{zexp};
        key.insert(key.end(), b.begin(), b.end());
        key.insert(key.end(), m, 0);
        out[key][col] += c;
      }
      std::size_t t = 0;
      while (t < m && b[t] == idx[t])
        b[t++] = 0;
      if (t == m)
        break;
      ++b[t];
    }
    ++col;
    std::size_t i = vars;
    while (i-- > 0) {
      if (static_cast<std::size_t>(++idx[i]) < D)
        break;
      idx[i] = 0;
    }
    if (i == static_cast<std::size_t>(-1))
      break;
  }
  return out;
}

// Lovasz and size conditions checked with exact rational Gram-Schmidt.
bool is_lll_reduced(const std::vector<IntVector> &b, double delta) {
  const std::size_t n = b.size();
  std::vector<std::vector<BigRational>> bs(n);
  std::vector<BigRational> norms(n);
  std::vector<std::vector<BigRational>> mu(n, std::vector<BigRational>(n));
  for (std::size_t i = 0; i < n; ++i) {
    bs[i].assign(b[i].begin(), b[i].end());
    for (std::size_t j = 0; j < i; ++j) {
      BigRational dp = 0;
      for (std::size_t c = 0; c < b[i].size(); ++c)
        dp += BigRational(b[i][c]) * bs[j][c];
      mu[i][j] = dp / norms[j];
      for (std::size_t c = 0; c < b[i].size(); ++c)
        bs[i][c] -= mu[i][j] * bs[j][c];
    }
    norms[i] = 0;
    for (auto &v : bs[i])
      norms[i] += v * v;
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (abs(mu[i][j]) > BigRational(1, 2))
        return false;
  for (std::size_t i = 1; i < n; ++i)
    if (norms[i] < (BigRational(delta) - mu[i][i - 1] * mu[i][i - 1]) * norms[i - 1])
      return false;
  return true;
}

IntMatrix to_matrix(const std::vector<IntVector> &rows) {
  IntMatrix m(rows.size(), rows.empty() ? 0 : rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      m(i, j) = rows[i][j];
  return m;
}

} // namespace

TEST(SeparateVariable, SpecExamples) {
  auto a = separate_variable(parse_poly("x1*x2 - 1"), 1);
  EXPECT_EQ(a.r, 1u);
  EXPECT_EQ(a.R, parse_poly("x2", 2));
  EXPECT_EQ(a.Rs[0], parse_poly("1", 2));
  auto b = separate_variable(parse_poly("x1^2 - x2"), 1);
  EXPECT_EQ(b.r, 2u);
  EXPECT_EQ(b.R, parse_poly("1", 2));
  EXPECT_EQ(b.Rs[0], parse_poly("x2", 2));
  EXPECT_TRUE(b.Rs[1].is_zero());
  auto c = separate_variable(parse_poly("x2*x1 + x2"), 1);
  EXPECT_EQ(c.R, parse_poly("x2", 2));
  EXPECT_EQ(c.Rs[0], parse_poly("-x2", 2));
  EXPECT_THROW(separate_variable(parse_poly("x2 - 1", 2), 1), std::invalid_argument);
  EXPECT_THROW(separate_variable(parse_poly("x1^-1 + x2"), 1), std::invalid_argument);
}

TEST(Lattice, LllIsReducedAndUnimodular) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> cd(-50, 50);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 2 + trial % 5;
    std::vector<IntVector> b(n, IntVector(n));
    do {
      for (auto &row : b)
        for (auto &v : row)
          v = cd(rng);
    } while (sgn(determinant(to_matrix(b))) == 0);
    auto r = b;
    lll_reduce(r);
    EXPECT_TRUE(is_lll_reduced(r, 0.99));
    EXPECT_EQ(abs(determinant(to_matrix(r))), abs(determinant(to_matrix(b))));
  }
}

TEST(Lattice, KernelIsExactAndSaturated) {
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int> cd(-6, 6);
  for (int trial = 0; trial < 15; ++trial) {
    const std::size_t rows = 1 + trial % 4, cols = rows + 1 + trial % 5;
    std::vector<IntVector> a(rows, IntVector(cols));
    for (auto &row : a)
      for (auto &v : row)
        v = 2 * cd(rng); // even entries make non-saturated bases likely
    auto ker = integer_kernel(a, cols);
    EXPECT_EQ(ker.size(), cols - rref(a, cols).rank());
    for (const auto &v : ker)
      for (const auto &row : a)
        EXPECT_EQ(dot(row, v), 0);
    if (!ker.empty())
      for (const auto &s : smith_normal_form(to_matrix(ker)).diagonal())
        EXPECT_EQ(s, 1);
  }
}

TEST(SolveSmallHeight, SpecExamples) {
  auto s = solve_small_height({{1, 2}}, 2);
  EXPECT_EQ(s.c, (IntVector{2, -1}));
  EXPECT_NEAR(s.achieved_height, std::log(2.0L), 1e-15L);
  EXPECT_NEAR(*s.bound, 2 * std::log(2.0L), 1e-15L);
  EXPECT_TRUE(s.bound_holds);
  auto t = solve_small_height({{1, 1, 1}}, 3);
  EXPECT_EQ(t.achieved_height, 0.0L);
  EXPECT_EQ(max_norm(t.c), 1);
  EXPECT_EQ(dot(IntVector{1, 1, 1}, t.c), 0);
  EXPECT_THROW(solve_small_height({{1, 0}, {0, 1}}, 2), ComputationError);
}

TEST(Rewrite, MembershipAtOrderOne) {
  auto spec = make_construction_spec(parse_poly("x1 - x2"), 1, 1, 2, std::nullopt, 1);
  auto sys = rewrite_and_expand(spec);
  EXPECT_EQ(sys.L(), 4u);
  IntVector c(sys.L(), BigInt(0));
  for (std::size_t col = 0; col < sys.L(); ++col) {
    if (sys.column_keys[col] == std::vector<std::int64_t>{1, 0})
      c[col] = 1;
    if (sys.column_keys[col] == std::vector<std::int64_t>{0, 1})
      c[col] = -1;
  }
  for (const auto &v : sys.apply(c))
    EXPECT_EQ(v, 0);
}

TEST(Rewrite, MatchesTaylorOracleOnTinyInstances) {
  struct Case {
    long lambda;
    std::size_t m, D, n;
  };
  for (auto cs : {Case{1, 1, 2, 1}, Case{1, 2, 3, 2}, Case{2, 2, 2, 1}, Case{-1, 1, 4, 3}, Case{3, 2, 3, 1}}) {
    LaurentPoly p = parse_poly("x1", 2) - parse_poly("x2", 2) * BigInt(cs.lambda);
    auto spec = make_construction_spec(p, 1, cs.m, cs.D, std::nullopt, cs.n);
    auto sys = rewrite_and_expand(spec);
    EXPECT_EQ(sys.L(), static_cast<std::size_t>(std::pow(cs.D, cs.m + 1)));
    auto oracle = taylor_oracle(cs.lambda, cs.m, cs.D, cs.n);
    EXPECT_EQ(sys.K(), oracle.size());
    EXPECT_EQ(as_map(sys), oracle) << "lambda=" << cs.lambda << " m=" << cs.m;
    // (2D)^{d-k} r^m #{b : sum b < n}
    EXPECT_EQ(sys.k_formula, BigInt(static_cast<long>(2 * cs.D * order_tuples_below(cs.m, cs.D, cs.n))));
  }
}

TEST(Rewrite, ConfluentAndTerminating) {
  struct Case {
    const char *p;
    std::size_t k, m, D, n;
  };
  for (auto cs : {Case{"x1*x2 - 1", 1, 2, 3, 1}, Case{"x1^2 - x2", 1, 2, 3, 2}, Case{"2*x1^2 + x1*x2 - 3", 1, 1, 4, 2},
                  Case{"1 + x1 + x2", 2, 1, 3, 2}, Case{"x2*x1 + x2 + 1", 1, 2, 2, 1}, Case{"x1 - 2", 1, 2, 4, 2}}) {
    auto spec = make_construction_spec(parse_poly(cs.p), cs.k, cs.m, cs.D, std::nullopt, cs.n);
    auto a = rewrite_and_expand(spec, {}, RewriteOrder::HighestFirst);
    auto b = rewrite_and_expand(spec, {}, RewriteOrder::DepthFirst);
    EXPECT_EQ(as_map(a), as_map(b)) << cs.p;
    for (const auto &key : a.row_keys)
      for (std::size_t t = 0; t < cs.m; ++t)
        EXPECT_LT(key[key.size() - cs.m + t], static_cast<std::int64_t>(a.sep.r));
  }
}

TEST(Rewrite, CapsAreEnforced) {
  auto spec = make_construction_spec(parse_poly("x1 - x2"), 1, 3, 2, std::nullopt, 1);
  EXPECT_THROW(rewrite_and_expand(spec), CapExceeded);
  SiegelCaps wide;
  wide.max_m = 3;
  EXPECT_NO_THROW(rewrite_and_expand(spec, wide));
}

TEST(SolveSmallHeight, ConstructionInstance) {
  auto spec = make_construction_spec(parse_poly("x1 - x2"), 1, 2, 3, std::nullopt, 2);
  auto sys = rewrite_and_expand(spec);
  ASSERT_LT(sys.K(), sys.L());
  auto sol = solve_small_height(sys);
  for (const auto &v : sys.apply(sol.c))
    EXPECT_EQ(v, 0);
  ASSERT_TRUE(sol.bound.has_value());
  EXPECT_TRUE(sol.bound_holds) << sol.achieved_height << " vs " << *sol.bound;
  auto f = construction_poly(sys, sol.c);
  auto rep = verify_construction(f, spec);
  EXPECT_TRUE(rep.degrees_ok);
  EXPECT_TRUE(rep.reconstitution_ok);
  EXPECT_TRUE(rep.membership_verified);
  auto j = construction_json(sys, sol, rep);
  for (const char *key : {"K", "L", "B", "siegel_bound", "achieved_height", "n", "membership_verified"})
    EXPECT_TRUE(j.contains(key)) << key;
}

TEST(VerifyConstruction, SpecExamples) {
  auto p = parse_poly("x1*x2 - 1");
  auto spec = make_construction_spec(p, 1, 1, 2, std::nullopt, 1);
  auto rep = verify_construction(p, spec);
  EXPECT_TRUE(rep.membership_verified);
  auto one = verify_construction(parse_poly("1", 2), spec);
  EXPECT_TRUE(one.reconstitution_ok);
  EXPECT_FALSE(one.membership_verified);
  EXPECT_GT(one.low_order_nonzero, 0u);
  // with n = 2, P alone is not in I^2
  auto spec2 = make_construction_spec(p, 1, 1, 2, std::nullopt, 2);
  EXPECT_FALSE(verify_construction(p, spec2).membership_verified);
  // P^2 has y1-degree 2 < D = 3 and lies in I^2
  auto spec3 = make_construction_spec(p, 1, 1, 3, std::nullopt, 2);
  EXPECT_TRUE(verify_construction(p * p, spec3).membership_verified);
}

TEST(VerifyConstruction, SolvedInstancesReverify) {
  struct Case {
    const char *p;
    std::size_t k, m, D, n;
  };
  for (auto cs : {Case{"x1*x2 - 1", 1, 2, 3, 1}, Case{"x1^2 - x2", 1, 1, 4, 1}, Case{"1 + x1 + x2", 1, 2, 3, 1},
                  Case{"x1 - 2", 1, 2, 4, 2}, Case{"1 + x1 + x2", 2, 1, 4, 2}}) {
    auto spec = make_construction_spec(parse_poly(cs.p), cs.k, cs.m, cs.D, std::nullopt, cs.n);
    auto sys = rewrite_and_expand(spec);
    if (sys.K() >= sys.L())
      continue;
    auto sol = solve_small_height(sys);
    EXPECT_TRUE(sol.bound_holds) << cs.p;
    auto rep = verify_construction(construction_poly(sys, sol.c), spec);
    EXPECT_TRUE(rep.membership_verified) << cs.p;
  }
}

TEST(ConstructionSpec, DefaultsFollowTheConstantChoice) {
  auto spec = make_construction_spec(parse_poly("x1^2 - x2"), 1, 2, 4);
  EXPECT_NEAR(spec.C, std::exp(2.0) * 2 * 2, 1e-12);
  EXPECT_TRUE(spec.c_invariant_holds());
  EXPECT_EQ(spec.n, 0u);
  auto small = make_construction_spec(parse_poly("x1^2 - x2"), 1, 2, 4, 1.0);
  EXPECT_FALSE(small.c_invariant_holds());
  EXPECT_EQ(small.n, 8u);
}

TEST(VolumeCount, SpecExamples) {
  auto v = volume_count(1, 2.0, 10);
  EXPECT_EQ(v.lattice_count, 5u);
  EXPECT_NEAR(v.bound, std::exp(1.0L) / 2 * 10, 1e-15L);
  EXPECT_NEAR(v.bound, 13.59L, 1e-2L);
  for (std::size_t m = 1; m <= 3; ++m)
    for (double a : {0.5, 1.0, 2.0, std::exp(1.0)}) {
      auto w = volume_count(m, a, 12);
      EXPECT_GE(w.bound, std::pow(12.0L, m) * (1 - 1e-15L));
      EXPECT_TRUE(w.within());
    }
  EXPECT_THROW(volume_count(5, 2.0, 10), CapExceeded);
  EXPECT_THROW(volume_count(2, 0.0, 10), std::invalid_argument);
}

TEST(VolumeCount, AgreesWithSumCountingAndRespectsBound) {
  for (std::size_t m = 1; m <= 3; ++m)
    for (std::size_t D : {1u, 5u, 17u, 40u})
      for (double a : {1.5, 3.0, 4.0, 7.0, 20.0}) {
        auto v = volume_count(m, a, D);
        // oracle: number of u in [0, D]^m by their sum s, counted by DP
        std::vector<std::uint64_t> ways(m * D + 1, 0);
        ways[0] = 1;
        for (std::size_t t = 0; t < m; ++t) {
          std::vector<std::uint64_t> next(m * D + 1, 0);
          for (std::size_t s = 0; s <= m * D; ++s)
            for (std::size_t u = 0; u <= D && s + u <= m * D; ++u)
              next[s + u] += ways[s];
          ways = next;
        }
        std::uint64_t count = 0;
        for (std::size_t s = 0; s <= m * D; ++s)
          if (static_cast<double>(s) * a < static_cast<double>(m * D))
            count += ways[s];
        EXPECT_EQ(v.lattice_count, count);
        EXPECT_TRUE(v.within()) << m << " " << D << " " << a;
      }
}
