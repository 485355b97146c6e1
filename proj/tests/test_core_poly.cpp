#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <random>

#include <mahlerlab/certified.hpp>
#include <mahlerlab/poly_io.hpp>
#include <mahlerlab/roots.hpp>
#include <mahlerlab/zero_test.hpp>

using namespace mahlerlab;
using cld = std::complex<long double>;

namespace {

// Direct evaluation with std::complex and libm exp, independent of the
// octant-reduced tables used by the library.
cld naive_value(const LaurentPoly &p, const TorsionPoint &z) {
  cld acc = 0;
  const long double two_pi = 2 * 3.141592653589793238462643383279502884L;
  for (const auto &[e, c] : p.terms()) {
    long double angle = 0;
    for (std::size_t i = 0; i < e.size(); ++i)
      angle += static_cast<long double>(e[i]) * z.exps()[i];
    angle = two_pi * angle / static_cast<long double>(z.order());
    acc += static_cast<long double>(c.get_d()) * std::polar(1.0L, angle);
  }
  return acc;
}

// Phi_n = (t^n - 1) / prod_{d | n, d < n} Phi_d, by exact division.
UniPoly cyclotomic_oracle(std::uint64_t n) {
  UniPoly q = UniPoly::x_pow_minus_one(n);
  for (std::uint64_t d = 1; d < n; ++d)
    if (n % d == 0)
      q = divexact(q, cyclotomic_oracle(d));
  return q;
}

LaurentPoly random_poly(std::mt19937_64 &rng, std::size_t dim, int terms, int emax,
                        int cmax) {
  std::uniform_int_distribution<int> ed(-emax, emax), cd(-cmax, cmax);
  LaurentPoly p(dim);
  while (p.is_zero())
    for (int t = 0; t < terms; ++t) {
      Exponent e(dim);
      for (auto &v : e)
        v = ed(rng);
      p.add_term(e, cd(rng));
    }
  return p;
}

UniPoly random_uni(std::mt19937_64 &rng, int deg, int cmax) {
  std::uniform_int_distribution<int> cd(-cmax, cmax);
  std::vector<BigInt> c(static_cast<std::size_t>(deg + 1));
  for (auto &v : c)
    v = cd(rng);
  if (sgn(c.back()) == 0)
    c.back() = 1;
  return UniPoly(c);
}

} // namespace

TEST(Evaluate, XMinusOneAtMinusOne) {
  auto p = parse_poly("x - 1");
  auto v = evaluate(p, TorsionPoint(2, {1}), 64);
  EXPECT_TRUE(v.contains_point(-2.0L, 0.0L));
  EXPECT_FALSE(v.contains_zero());
}

TEST(Evaluate, OnePlusXPlusYVanishesAtCubeRoots) {
  auto p = parse_poly("1 + x1 + x2");
  for (mpfr_prec_t prec : {64, 128, 512})
    EXPECT_TRUE(evaluate(p, TorsionPoint(3, {1, 2}), prec).contains_zero());
}

TEST(Evaluate, XMinusTwoAtEighthRoot) {
  auto p = parse_poly("x - 2");
  auto v = evaluate(p, TorsionPoint(8, {1}), 256);
  const long double expected = std::sqrt(5.0L - 2.0L * std::sqrt(2.0L));
  EXPECT_LE(v.abs_lower(), expected + 1e-15L);
  EXPECT_GE(v.abs_upper(), expected - 1e-15L);
  EXPECT_NEAR(v.abs_upper(), 1.4736258, 1e-6);
}

TEST(Evaluate, AgreesWithDirectComplexArithmetic) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t dim = 1 + trial % 3;
    auto p = random_poly(rng, dim, 5, 6, 9);
    std::uniform_int_distribution<std::uint64_t> nd(1, 40);
    const auto n = nd(rng);
    std::vector<std::int64_t> a(dim);
    for (auto &v : a)
      v = static_cast<std::int64_t>(rng() % n);
    TorsionPoint z(n, a);
    const cld ref = naive_value(p, z);
    for (mpfr_prec_t prec : {64, 200}) {
      auto v = evaluate(p, z, prec);
      // The naive oracle carries its own ~1e-16 error, so compare loosely.
      Real r = v.radius;
      const double slack = r.to_double() + 1e-14;
      EXPECT_NEAR(v.re.to_double(), static_cast<double>(ref.real()), slack);
      EXPECT_NEAR(v.im.to_double(), static_cast<double>(ref.imag()), slack);
    }
  }
}

TEST(Evaluate, RefinementIsNested) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t dim = 1 + trial % 2;
    auto p = random_poly(rng, dim, 6, 5, 20);
    const std::uint64_t n = 3 + rng() % 60;
    std::vector<std::int64_t> a(dim);
    for (auto &v : a)
      v = static_cast<std::int64_t>(rng() % n);
    TorsionPoint z(n, a);
    auto prev = evaluate(p, z, 64);
    for (mpfr_prec_t prec : {128, 256, 512, 1024}) {
      auto next = evaluate(p, z, prec);
      EXPECT_TRUE(prev.contains(next)) << to_text(p) << " at " << z.str() << " prec " << prec;
      Real ratio = next.radius / prev.radius;
      EXPECT_LE(ratio.to_double(), 0.5);
      prev = next;
    }
  }
}

TEST(Evaluate, RejectsLowPrecisionAndDimMismatch) {
  auto p = parse_poly("x1 + x2");
  EXPECT_THROW(evaluate(p, TorsionPoint(3, {1}), 64), std::invalid_argument);
  EXPECT_THROW(evaluate(p, TorsionPoint(3, {1, 1}), 16), std::invalid_argument);
}

TEST(SubstituteMonomial, SpecExamples) {
  EXPECT_EQ(substitute_monomial(parse_poly("x1*x2 - 1"), TorsionPoint(5, {1, 2})),
            (UniPoly{-1, 0, 0, 1}));
  EXPECT_TRUE(substitute_monomial(parse_poly("x - 1"), TorsionPoint(3, {0})).is_zero());
  EXPECT_EQ(substitute_monomial(parse_poly("x^2 + x"), TorsionPoint(5, {4})),
            (UniPoly{0, 0, 0, 1, 1}));
}

TEST(SubstituteMonomial, RespectsConjugation) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    auto p = random_poly(rng, 2, 4, 7, 5);
    const std::uint64_t n = 2 + rng() % 30;
    TorsionPoint z(n, {static_cast<std::int64_t>(rng() % n), static_cast<std::int64_t>(rng() % n)});
    for (auto j : units_mod(n)) {
      UniPoly lhs = substitute_monomial(p, galois_conjugate(z, static_cast<std::int64_t>(j)));
      // compose Q(t) with t -> t^j mod t^N - 1
      UniPoly q = substitute_monomial(p, z);
      std::vector<BigInt> c(n, BigInt(0));
      for (std::size_t i = 0; i < q.coeffs().size(); ++i)
        c[(i * j) % n] += q.coeffs()[i];
      EXPECT_EQ(lhs, UniPoly(c));
    }
  }
}

TEST(IsZeroAt, SpecExamples) {
  EXPECT_TRUE(is_zero_at(parse_poly("1 + x1 + x2"), TorsionPoint(3, {1, 2})));
  for (std::uint64_t n = 1; n < 30; ++n)
    for (std::uint64_t k = 0; k < n; ++k)
      EXPECT_FALSE(is_zero_at(parse_poly("x - 2"), TorsionPoint(n, {static_cast<std::int64_t>(k)})));
  EXPECT_TRUE(is_zero_at(parse_poly("x^2 + x + 1"), TorsionPoint(6, {2})));
  EXPECT_FALSE(is_zero_at(parse_poly("x^2 + x + 1"), TorsionPoint(6, {1})));
}

TEST(IsZeroAt, AgreesWithEnclosuresAndIsGaloisInvariant) {
  std::mt19937_64 rng(5);
  int zeros = 0;
  for (int trial = 0; trial < 300; ++trial) {
    // small supports make genuine zeros common
    auto p = random_poly(rng, 2, 3, 2, 1);
    const std::uint64_t n = 1 + rng() % 12;
    TorsionPoint z(n, {static_cast<std::int64_t>(rng() % n), static_cast<std::int64_t>(rng() % n)});
    const bool zero = is_zero_at(p, z);
    zeros += zero;
    if (zero) {
      EXPECT_TRUE(evaluate(p, z, 64).contains_zero());
      EXPECT_TRUE(evaluate(p, z, 1024).contains_zero());
    } else {
      EXPECT_FALSE(evaluate(p, z, 1024).contains_zero());
    }
    for (auto j : units_mod(n))
      EXPECT_EQ(zero, is_zero_at(p, galois_conjugate(z, static_cast<std::int64_t>(j))));
  }
  EXPECT_GT(zeros, 5);
}

TEST(Cyclotomic, SmallCases) {
  EXPECT_EQ(cyclotomic(1), (UniPoly{-1, 1}));
  EXPECT_EQ(cyclotomic(4), (UniPoly{1, 0, 1}));
  EXPECT_EQ(cyclotomic(6), (UniPoly{1, -1, 1}));
}

TEST(Cyclotomic, N105HasCoefficientMinusTwo) {
  auto c = cyclotomic(105);
  EXPECT_EQ(c.degree(), 48);
  EXPECT_NE(std::find(c.coeffs().begin(), c.coeffs().end(), BigInt(-2)), c.coeffs().end());
}

TEST(Cyclotomic, MatchesRecursiveDivisionOracle) {
  for (std::uint64_t n = 1; n <= 120; ++n) {
    auto c = cyclotomic(n);
    EXPECT_EQ(c, cyclotomic_oracle(n)) << n;
    EXPECT_EQ(static_cast<std::uint64_t>(c.degree()), euler_phi(n));
  }
}

TEST(Resultant, SpecExamples) {
  EXPECT_EQ(resultant(UniPoly{-2, 1}, UniPoly{-1, 0, 1}), 3);
  EXPECT_EQ(resultant(UniPoly{1, -1, 1}, UniPoly{1, 1, 1}), 4);
  EXPECT_EQ(resultant(UniPoly{-1, 1}, UniPoly{-1, 1}), 0);
  EXPECT_THROW(resultant(UniPoly{}, UniPoly{1, 1}), std::invalid_argument);
}

TEST(Resultant, SignConventionAndRootProduct) {
  // lead(A)^{deg B} prod B(alpha): A = 2t - 1 (root 1/2), B = t^2 + 3
  // => 2^2 * (1/4 + 3) = 13
  EXPECT_EQ(resultant(UniPoly{-1, 2}, UniPoly{3, 0, 1}), 13);
  // Res(B, A) = (-1)^{deg A deg B} Res(A, B)
  EXPECT_EQ(resultant(UniPoly{3, 0, 1}, UniPoly{-1, 2}), 13);
  EXPECT_EQ(resultant(UniPoly{3, 1}, UniPoly{0, 1}), -3);
  EXPECT_EQ(resultant(UniPoly{0, 1}, UniPoly{3, 1}), 3);
}

TEST(Resultant, Multiplicative) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    auto a = random_uni(rng, 1 + static_cast<int>(rng() % 5), 6);
    auto b = random_uni(rng, 1 + static_cast<int>(rng() % 4), 6);
    auto c = random_uni(rng, static_cast<int>(rng() % 4), 6);
    EXPECT_EQ(resultant(a, b * c), resultant(a, b) * resultant(a, c));
  }
}

TEST(CorePoly, HeightDegreeConjugate) {
  EXPECT_DOUBLE_EQ(height(parse_poly("3x - 2")), std::log(3.0));
  EXPECT_EQ(degree(parse_poly("x1^2*x2")), 3);
  EXPECT_EQ(galois_conjugate(TorsionPoint(5, {1, 2}), 2), TorsionPoint(5, {2, 4}));
  EXPECT_THROW(galois_conjugate(TorsionPoint(6, {1}), 2), std::invalid_argument);
}

TEST(Degree, LaurentConvention) {
  // each variable is shifted by its most negative exponent, then total degree
  EXPECT_EQ(degree(parse_poly("x + x^-1")), 2);
  EXPECT_EQ(degree(parse_poly("x1*x2^-1 + x2")), 2);
  EXPECT_EQ(degree(parse_poly("7")), 0);
}

TEST(Roots, Quadratic) {
  auto rep = roots_certified(UniPoly{1, -3, 1}, 128);
  ASSERT_EQ(rep.roots.size(), 2u);
  const double r1 = (3 - std::sqrt(5.0)) / 2, r2 = (3 + std::sqrt(5.0)) / 2;
  int inside = 0, outside = 0;
  for (auto &r : rep.roots) {
    const bool hit1 = r.disk.contains_point(r1, 0) || std::abs(r.disk.re.to_double() - r1) < 1e-15;
    const bool hit2 = r.disk.contains_point(r2, 0) || std::abs(r.disk.re.to_double() - r2) < 1e-15;
    EXPECT_TRUE(hit1 || hit2);
    inside += r.location == CircleLocation::Inside;
    outside += r.location == CircleLocation::Outside;
  }
  EXPECT_EQ(inside, 1);
  EXPECT_EQ(outside, 1);
  EXPECT_FALSE(rep.precision_exhausted());
}

TEST(Roots, CyclotomicRemovedExactly) {
  auto rep = roots_certified(UniPoly{1, 0, 1}, 64);
  ASSERT_EQ(rep.cyclotomic_factors.size(), 1u);
  EXPECT_EQ(rep.cyclotomic_factors[0].first, 4u);
  ASSERT_EQ(rep.roots.size(), 2u);
  for (auto &r : rep.roots) {
    EXPECT_EQ(r.location, CircleLocation::OnCircle);
    EXPECT_EQ(r.cyclotomic_order, 4u);
  }
  EXPECT_EQ(rep.unresolved_on_circle, 0u);
}

TEST(Roots, LehmerHasOneRootOutside) {
  UniPoly lehmer{1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1};
  auto rep = roots_certified(lehmer, 128);
  int outside = 0;
  for (auto &r : rep.roots) {
    if (r.location == CircleLocation::Outside) {
      ++outside;
      EXPECT_NEAR(abs(MpComplex(r.disk.re, r.disk.im)).to_double(), 1.17628081825991750654, 1e-15);
    }
  }
  EXPECT_EQ(outside, 1);
  // the 8 unimodular conjugates of a Salem number cannot be separated from the circle
  EXPECT_EQ(rep.unresolved_on_circle, 8u);
}

TEST(Roots, MultiplicityAndZeroRoots) {
  // t^2 (t - 3)^2 (t^2 + t + 1)
  UniPoly f = UniPoly::monomial(2) * UniPoly{-3, 1} * UniPoly{-3, 1} * UniPoly{1, 1, 1};
  auto rep = roots_certified(f, 64);
  EXPECT_EQ(rep.zero_multiplicity, 2u);
  int total = 0;
  for (auto &r : rep.roots)
    total += r.multiplicity;
  EXPECT_EQ(total, 6);
}

TEST(PolyIo, RoundTripTextAndJson) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t dim = 1 + trial % 3;
    auto p = random_poly(rng, dim, 5, 4, 1000);
    EXPECT_EQ(parse_poly(to_text(p), dim), p) << to_text(p);
    EXPECT_EQ(poly_from_json(to_json(p)), p);
  }
  EXPECT_EQ(parse_poly("2(x+1)^2"), parse_poly("2x^2 + 4x + 2"));
  EXPECT_EQ(parse_poly("x*y - 1"), parse_poly("x1*x2 - 1"));
  EXPECT_EQ(parse_poly("x^-1 + 1"), to_laurent(UniPoly{1, 1}) * LaurentPoly::monomial(1, {-1}, 1));
  auto big = parse_poly("123456789012345678901234567890*x - 1");
  EXPECT_EQ(big.coefficient({1}), parse_bigint("123456789012345678901234567890"));
  EXPECT_THROW(parse_poly("x +"), std::invalid_argument);
  EXPECT_THROW(parse_poly("(x+1)^-1"), std::invalid_argument);
  EXPECT_THROW(parse_poly("q"), std::invalid_argument);
}
