#pragma once
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "bigint.hpp"
#include "error.hpp"
#include "laurent_poly.hpp"
#include "lattice.hpp"

namespace mahlerlab {

//! P = R y1^r - sum_{s<r} R_s y1^s with R, R_s free of y1 = x1. All
//! polynomials live in the original d variables with exponent 0 in x1.
struct SeparatedForm {
  std::size_t r = 0;
  LaurentPoly R{1};
  std::vector<LaurentPoly> Rs;
  //! gcd of all integer coefficients of R, R_0, ..., R_{r-1} is 1
  bool primitive = true;
};

inline SeparatedForm separate_variable(const LaurentPoly &p, std::size_t k) {
  const std::size_t d = p.dim();
  if (k < 1 || k > d)
    throw std::invalid_argument("separate_variable: split index k must be in 1..d");
  if (p.is_zero() || !p.is_polynomial())
    throw std::invalid_argument("separate_variable: P must be a nonzero polynomial");
  const std::int64_t r = p.max_exponent(0);
  if (r < 1)
    throw std::invalid_argument("separate_variable: P does not involve y1");
  SeparatedForm f;
  f.r = static_cast<std::size_t>(r);
  f.R = LaurentPoly(d);
  f.Rs.assign(f.r, LaurentPoly(d));
  for (const auto &[e, c] : p.terms()) {
    Exponent rest = e;
    rest[0] = 0;
    if (e[0] == r)
      f.R.add_term(rest, c);
    else
      f.Rs[static_cast<std::size_t>(e[0])].add_term(rest, -c);
  }
  BigInt g = 0;
  for (const LaurentPoly *q : {&f.R}) {
    for (const auto &[e, c] : q->terms())
      g = gcd(g, c);
  }
  for (const auto &q : f.Rs)
    for (const auto &[e, c] : q.terms())
      g = gcd(g, c);
  f.primitive = g == 1;
  return f;
}

//! Parameters of the auxiliary construction: y = (x1..xk), z = (x_{k+1}..xd),
//! m blocks, partial degrees < D, vanishing order n.
struct ConstructionSpec {
  LaurentPoly P{1};
  std::size_t k = 1, m = 1, D = 2;
  double C = 0;
  std::size_t n = 0;

  std::size_t d() const { return P.dim(); }
  //! e^2 r 2^{d-1}
  double c_minimum() const {
    const auto r = static_cast<double>(P.max_exponent(0));
    return std::exp(2.0) * r * std::ldexp(1.0, static_cast<int>(d()) - 1);
  }
  bool c_invariant_holds() const { return C >= c_minimum() * (1 - 1e-12); }
};

//! C defaults to e^2 r 2^{d-1} and n to floor(mD/C). At desk scale that n
//! is usually 0, so callers normally pass n explicitly.
inline ConstructionSpec make_construction_spec(const LaurentPoly &p, std::size_t k, std::size_t m,
                                               std::size_t D, std::optional<double> C = std::nullopt,
                                               std::optional<std::size_t> n = std::nullopt) {
  ConstructionSpec s;
  s.P = p;
  s.k = k;
  s.m = m;
  s.D = D;
  separate_variable(p, k); // validates
  if (m < 1 || D < 1)
    throw std::invalid_argument("construction: m and D must be positive");
  s.C = C ? *C : s.c_minimum();
  if (!(s.C > 0))
    throw std::invalid_argument("construction: C must be positive");
  s.n = n ? *n : static_cast<std::size_t>(std::floor(static_cast<double>(m * D) / s.C));
  return s;
}

struct SiegelCaps {
  std::size_t max_d = 2, max_m = 2, max_D = 4;
  std::size_t max_columns = 4096;
  std::size_t max_rows = 1u << 20;
};

enum class RewriteOrder { HighestFirst, DepthFirst };

//! Normal form of R^D y1^a: map (b, s) -> G with R^D y1^a = sum G P^b y1^s,
//! s < r, G free of y1.
using BlockExpansion = std::map<std::pair<std::size_t, std::size_t>, LaurentPoly>;

inline BlockExpansion block_expansion(const SeparatedForm &sep, std::size_t D, std::size_t a,
                                      RewriteOrder order = RewriteOrder::HighestFirst) {
  const std::size_t d = sep.R.dim();
  const std::size_t r = sep.r;
  std::vector<LaurentPoly> rpow{LaurentPoly::constant(d, 1)};
  for (std::size_t e = 1; e <= D; ++e)
    rpow.push_back(rpow.back() * sep.R);
  BlockExpansion out;
  auto emit = [&](const LaurentPoly &c, std::size_t e, std::size_t y, std::size_t b) {
    auto [it, fresh] = out.try_emplace({b, y}, LaurentPoly(d));
    it->second += c * rpow[e];
  };
  if (order == RewriteOrder::HighestFirst) {
    // states (y1 degree, R power, P power) merged before they are rewritten;
    // each rewrite lowers the y1 degree, so the largest degree is final
    std::map<std::tuple<std::size_t, std::size_t, std::size_t>, LaurentPoly, std::greater<>> work;
    work.emplace(std::make_tuple(a, D, std::size_t{0}), LaurentPoly::constant(d, 1));
    while (!work.empty()) {
      auto node = work.extract(work.begin());
      auto [y, e, b] = node.key();
      const LaurentPoly &c = node.mapped();
      if (c.is_zero())
        continue;
      if (y < r) {
        emit(c, e, y, b);
        continue;
      }
      if (e == 0)
        throw ComputationError("rewrite: ran out of R factors");
      // R y1^r = P + sum R_s y1^s
      auto add = [&](std::tuple<std::size_t, std::size_t, std::size_t> key, const LaurentPoly &v) {
        auto [it, fresh] = work.try_emplace(key, LaurentPoly(d));
        it->second += v;
      };
      add({y - r, e - 1, b + 1}, c);
      for (std::size_t s = 0; s < r; ++s)
        if (!sep.Rs[s].is_zero())
          add({y - r + s, e - 1, b}, c * sep.Rs[s]);
    }
  } else {
    std::function<void(const LaurentPoly &, std::size_t, std::size_t, std::size_t)> go =
        [&](const LaurentPoly &c, std::size_t e, std::size_t y, std::size_t b) {
          if (y < r) {
            emit(c, e, y, b);
            return;
          }
          if (e == 0)
            throw ComputationError("rewrite: ran out of R factors");
          for (std::size_t s = 0; s < r; ++s)
            if (!sep.Rs[s].is_zero())
              go(c * sep.Rs[s], e - 1, y - r + s, b);
          go(c, e - 1, y - r, b + 1);
        };
    go(LaurentPoly::constant(d, 1), D, a, 0);
  }
  for (auto it = out.begin(); it != out.end();)
    it = it->second.is_zero() ? out.erase(it) : std::next(it);
  return out;
}

namespace detail {

//! Row key layout: [y'_1 .. y'_m (k-1 each)] [z (d-k)] [b_1..b_m] [s_1..s_m].
using Key = std::vector<std::int64_t>;

//! Expand one monomial prod_t y_t^{i_t} z^j of F (times prod R_t^D) into
//! normal-form coefficients, keeping keys with sum b < limit.
inline void expand_monomial(const std::vector<std::vector<std::int64_t>> &blocks,
                            const std::vector<std::int64_t> &j, const BigInt &coeff,
                            const std::vector<const BlockExpansion *> &ex, std::size_t k,
                            std::size_t d, std::size_t limit, std::map<Key, BigInt> &acc) {
  const std::size_t m = blocks.size();
  const std::size_t ky = (k - 1) * m, kz = d - k;
  Key key(ky + kz + 2 * m, 0);
  for (std::size_t i = 0; i < kz; ++i)
    key[ky + i] = j[i];
  std::function<void(std::size_t, std::size_t, const BigInt &)> go = [&](std::size_t t, std::size_t bsum,
                                                                          const BigInt &c) {
    if (t == m) {
      acc[key] += c;
      return;
    }
    for (const auto &[bs, g] : *ex[t]) {
      const auto [b, s] = bs;
      if (bsum + b >= limit)
        continue;
      key[ky + kz + t] = static_cast<std::int64_t>(b);
      key[ky + kz + m + t] = static_cast<std::int64_t>(s);
      for (const auto &[e, gc] : g.terms()) {
        for (std::size_t i = 1; i < k; ++i)
          key[t * (k - 1) + i - 1] = blocks[t][i] + e[i];
        for (std::size_t i = 0; i < kz; ++i)
          key[ky + i] += e[k + i];
        go(t + 1, bsum + b, c * gc);
        for (std::size_t i = 0; i < kz; ++i)
          key[ky + i] -= e[k + i];
      }
    }
  };
  go(0, 0, coeff);
}

inline void check_caps(const ConstructionSpec &spec, const SiegelCaps &caps) {
  if (spec.d() > caps.max_d || spec.m > caps.max_m || spec.D > caps.max_D)
    throw CapExceeded("siegel: instance (d=" + std::to_string(spec.d()) + ", m=" + std::to_string(spec.m) +
                      ", D=" + std::to_string(spec.D) + ") exceeds the desk-scale caps");
}

inline std::uint64_t upow(std::uint64_t b, std::uint64_t e) {
  std::uint64_t r = 1;
  while (e--)
    r *= b;
  return r;
}

} // namespace detail

//! Sparse integer system l_{I,j,r,s}(c) = 0 for r_1 + ... + r_m < n.
struct ConstraintSystem {
  ConstructionSpec spec;
  SeparatedForm sep;
  //! column key: i_1 (k entries), ..., i_m, j (d-k entries)
  std::vector<std::vector<std::int64_t>> column_keys;
  std::vector<detail::Key> row_keys;
  std::vector<std::vector<std::pair<std::size_t, BigInt>>> rows;
  BigInt B = 0;
  //! the count (2D)^{(k-1)m + d-k} r^m #{b in [0,D)^m : sum b < n}
  BigInt k_formula = 0;

  std::size_t K() const { return rows.size(); }
  std::size_t L() const { return column_keys.size(); }

  std::vector<IntVector> dense() const {
    std::vector<IntVector> a(rows.size(), IntVector(L(), BigInt(0)));
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (const auto &[c, v] : rows[i])
        a[i][c] = v;
    return a;
  }

  //! A c, row by row.
  IntVector apply(const IntVector &c) const {
    IntVector out(rows.size(), BigInt(0));
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (const auto &[col, v] : rows[i])
        out[i] += v * c[col];
    return out;
  }
};

//! Number of b in {0..D-1}^m with b_1 + ... + b_m < n.
inline std::uint64_t order_tuples_below(std::size_t m, std::size_t D, std::size_t n) {
  std::vector<std::uint64_t> ways(n, 0);
  if (n == 0)
    return 0;
  ways[0] = 1;
  for (std::size_t t = 0; t < m; ++t) {
    std::vector<std::uint64_t> next(n, 0);
    for (std::size_t s = 0; s < n; ++s)
      for (std::size_t b = 0; b < D && s + b < n; ++b)
        next[s + b] += ways[s];
    ways = std::move(next);
  }
  std::uint64_t total = 0;
  for (auto w : ways)
    total += w;
  return total;
}

inline ConstraintSystem rewrite_and_expand(const ConstructionSpec &spec, const SiegelCaps &caps = {},
                                           RewriteOrder order = RewriteOrder::HighestFirst) {
  detail::check_caps(spec, caps);
  const std::size_t d = spec.d(), k = spec.k, m = spec.m, D = spec.D;
  const std::uint64_t L = detail::upow(D, k * m + d - k);
  if (L > caps.max_columns)
    throw CapExceeded("siegel: " + std::to_string(L) + " unknowns exceed the column cap");
  ConstraintSystem sys;
  sys.spec = spec;
  sys.sep = separate_variable(spec.P, k);
  std::vector<BlockExpansion> ex;
  for (std::size_t a = 0; a < D; ++a)
    ex.push_back(block_expansion(sys.sep, D, a, order));

  const std::size_t vars = k * m + d - k;
  std::map<detail::Key, std::map<std::size_t, BigInt>> acc_rows;
  std::vector<std::int64_t> idx(vars, 0);
  for (std::uint64_t col = 0; col < L; ++col) {
    sys.column_keys.push_back(idx);
    std::vector<std::vector<std::int64_t>> blocks(m);
    std::vector<const BlockExpansion *> bex(m);
    for (std::size_t t = 0; t < m; ++t) {
      blocks[t].assign(idx.begin() + static_cast<std::ptrdiff_t>(t * k),
                       idx.begin() + static_cast<std::ptrdiff_t>((t + 1) * k));
      bex[t] = &ex[static_cast<std::size_t>(blocks[t][0])];
    }
    std::vector<std::int64_t> j(idx.begin() + static_cast<std::ptrdiff_t>(k * m), idx.end());
    std::map<detail::Key, BigInt> acc;
    detail::expand_monomial(blocks, j, BigInt(1), bex, k, d, spec.n, acc);
    for (const auto &[key, v] : acc)
      if (sgn(v) != 0)
        acc_rows[key][col] = v;
    if (acc_rows.size() > caps.max_rows)
      throw CapExceeded("siegel: constraint rows exceed the row cap");
    for (std::size_t i = vars; i-- > 0;) {
      if (static_cast<std::size_t>(++idx[i]) < D)
        break;
      idx[i] = 0;
    }
  }
  for (auto &[key, entries] : acc_rows) {
    sys.row_keys.push_back(key);
    std::vector<std::pair<std::size_t, BigInt>> row(entries.begin(), entries.end());
    for (const auto &[c, v] : row)
      if (abs(v) > sys.B)
        sys.B = abs(v);
    sys.rows.push_back(std::move(row));
  }
  sys.k_formula = BigInt(static_cast<unsigned long>(detail::upow(2 * D, (k - 1) * m + d - k))) *
                  BigInt(static_cast<unsigned long>(detail::upow(sys.sep.r, m))) *
                  BigInt(static_cast<unsigned long>(order_tuples_below(m, D, spec.n)));
  return sys;
}

//! log max |x_i| (0 for vectors in {-1, 0, 1}).
inline long double log_height(const IntVector &x) {
  const BigInt h = max_norm(x);
  if (sgn(h) == 0)
    throw std::invalid_argument("log_height: zero vector");
  return std::log(static_cast<long double>(h.get_d()));
}

//! (K / (L - K)) (log L + log B), defined when L > K.
inline std::optional<long double> siegel_bound(std::size_t K, std::size_t L, const BigInt &B) {
  if (L <= K)
    return std::nullopt;
  const long double ratio = static_cast<long double>(K) / static_cast<long double>(L - K);
  const long double lb = sgn(B) == 0 ? 0.0L : std::log(static_cast<long double>(B.get_d()));
  return ratio * (std::log(static_cast<long double>(L)) + lb);
}

struct SiegelSolution {
  IntVector c;
  long double achieved_height = 0;
  std::optional<long double> bound;
  bool bound_holds = false;
  std::size_t nullity = 0;
  std::size_t K = 0, L = 0;
  BigInt B = 0;
};

//! Small-height nonzero kernel vector of an integer matrix with L columns.
inline SiegelSolution solve_small_height(const std::vector<IntVector> &a, std::size_t L) {
  SiegelSolution out;
  out.K = a.size();
  out.L = L;
  for (const auto &row : a)
    for (const auto &v : row)
      if (abs(v) > out.B)
        out.B = abs(v);
  const auto basis = integer_kernel(a, L);
  if (basis.empty())
    throw ComputationError("solve_small_height: the system has only the trivial solution");
  out.nullity = basis.size();
  out.c = small_kernel_vector(basis);
  out.achieved_height = log_height(out.c);
  out.bound = siegel_bound(out.K, L, out.B);
  out.bound_holds = out.bound && out.achieved_height <= *out.bound + 1e-15L;
  return out;
}

inline SiegelSolution solve_small_height(const ConstraintSystem &sys) {
  return solve_small_height(sys.dense(), sys.L());
}

//! F = sum c_col * monomial(column key) in the km + d - k variables
//! (y_11..y_k1, ..., y_1m..y_km, z_1..z_{d-k}).
inline LaurentPoly construction_poly(const ConstraintSystem &sys, const IntVector &c) {
  const std::size_t vars = sys.spec.k * sys.spec.m + sys.spec.d() - sys.spec.k;
  LaurentPoly f(vars);
  for (std::size_t col = 0; col < sys.L(); ++col)
    if (sgn(c[col]) != 0)
      f.add_term(sys.column_keys[col], c[col]);
  return f;
}

struct ConstructionReport {
  bool degrees_ok = false;
  long double log_height = 0;
  //! -m + log(C m D); clause (i) asks log h(F) <= this
  long double clause_i_bound = 0;
  bool clause_i_holds = false;
  //! smallest D for which clause (i) would hold with this h(F)
  long double d_threshold = 0;
  bool reconstitution_ok = false;
  std::size_t low_order_nonzero = 0;
  bool membership_verified = false;
  bool c_invariant_holds = false;
};

namespace detail {

//! Embed a d-variable polynomial into the big ring with x1..xk -> block t
//! and x_{k+1}..x_d -> z.
inline LaurentPoly embed_block(const LaurentPoly &p, std::size_t t, std::size_t k, std::size_t m) {
  const std::size_t d = p.dim();
  LaurentPoly out(k * m + d - k);
  for (const auto &[e, c] : p.terms()) {
    Exponent f(k * m + d - k, 0);
    for (std::size_t i = 0; i < k; ++i)
      f[t * k + i] = e[i];
    for (std::size_t i = k; i < d; ++i)
      f[k * m + i - k] = e[i];
    out.add_term(f, c);
  }
  return out;
}

} // namespace detail

//! Check a candidate F against the construction: partial degrees < D,
//! clause (i) numerically, and membership of prod R_t^D F in I_m^n by an
//! independent depth-first re-expansion whose result is re-multiplied and
//! compared with prod R_t^D F exactly.
inline ConstructionReport verify_construction(const LaurentPoly &F, const ConstructionSpec &spec) {
  const std::size_t d = spec.d(), k = spec.k, m = spec.m, D = spec.D;
  const std::size_t vars = k * m + d - k;
  if (F.dim() != vars)
    throw std::invalid_argument("verify_construction: F must have km + d - k variables");
  ConstructionReport rep;
  rep.c_invariant_holds = spec.c_invariant_holds();
  rep.degrees_ok = true;
  BigInt h = 0;
  for (const auto &[e, c] : F.terms()) {
    for (auto v : e)
      rep.degrees_ok = rep.degrees_ok && v >= 0 && static_cast<std::size_t>(v) < D;
    if (abs(c) > h)
      h = abs(c);
  }
  const long double md = static_cast<long double>(m) * static_cast<long double>(D);
  rep.clause_i_bound = -static_cast<long double>(m) + std::log(static_cast<long double>(spec.C) * md);
  if (sgn(h) != 0) {
    rep.log_height = std::log(static_cast<long double>(h.get_d()));
    const long double lh = std::log(rep.log_height);
    rep.clause_i_holds = lh <= rep.clause_i_bound;
    rep.d_threshold = rep.log_height * std::exp(static_cast<long double>(m)) /
                      (static_cast<long double>(spec.C) * static_cast<long double>(m));
  } else {
    rep.clause_i_holds = true;
  }
  if (F.is_zero() || !rep.degrees_ok)
    return rep;

  const SeparatedForm sep = separate_variable(spec.P, k);
  std::vector<BlockExpansion> ex;
  for (std::size_t a = 0; a < D; ++a)
    ex.push_back(block_expansion(sep, D, a, RewriteOrder::DepthFirst));
  std::map<detail::Key, BigInt> nf;
  for (const auto &[e, c] : F.terms()) {
    std::vector<std::vector<std::int64_t>> blocks(m);
    std::vector<const BlockExpansion *> bex(m);
    for (std::size_t t = 0; t < m; ++t) {
      blocks[t].assign(e.begin() + static_cast<std::ptrdiff_t>(t * k),
                       e.begin() + static_cast<std::ptrdiff_t>((t + 1) * k));
      bex[t] = &ex[static_cast<std::size_t>(blocks[t][0])];
    }
    std::vector<std::int64_t> j(e.begin() + static_cast<std::ptrdiff_t>(k * m), e.end());
    detail::expand_monomial(blocks, j, c, bex, k, d, std::numeric_limits<std::size_t>::max(), nf);
  }
  // reassemble sum G_{b,s} prod P_t^{b_t} y_1t^{s_t} and compare
  std::vector<LaurentPoly> pt, rt;
  for (std::size_t t = 0; t < m; ++t) {
    pt.push_back(detail::embed_block(spec.P, t, k, m));
    rt.push_back(detail::embed_block(sep.R, t, k, m));
  }
  std::map<std::vector<std::int64_t>, LaurentPoly> groups;
  const std::size_t ky = (k - 1) * m, kz = d - k;
  for (const auto &[key, c] : nf) {
    if (sgn(c) == 0)
      continue;
    std::vector<std::int64_t> bs(key.begin() + static_cast<std::ptrdiff_t>(ky + kz), key.end());
    std::int64_t bsum = 0;
    for (std::size_t t = 0; t < m; ++t)
      bsum += bs[t];
    if (static_cast<std::size_t>(bsum) < spec.n)
      ++rep.low_order_nonzero;
    Exponent mono(vars, 0);
    for (std::size_t t = 0; t < m; ++t)
      for (std::size_t i = 1; i < k; ++i)
        mono[t * k + i] = key[t * (k - 1) + i - 1];
    for (std::size_t i = 0; i < kz; ++i)
      mono[k * m + i] = key[ky + i];
    auto [it, fresh] = groups.try_emplace(bs, LaurentPoly(vars));
    it->second.add_term(mono, c);
  }
  LaurentPoly lhs(vars);
  for (const auto &[bs, g] : groups) {
    LaurentPoly term = g;
    for (std::size_t t = 0; t < m; ++t) {
      term = term * pt[t].pow(static_cast<unsigned>(bs[t]));
      Exponent y(vars, 0);
      y[t * k] = bs[m + t];
      term = term * LaurentPoly::monomial(vars, y);
    }
    lhs += term;
  }
  LaurentPoly q = F;
  for (std::size_t t = 0; t < m; ++t)
    q = q * rt[t].pow(static_cast<unsigned>(D));
  rep.reconstitution_ok = lhs == q;
  rep.membership_verified = rep.reconstitution_ok && rep.low_order_nonzero == 0;
  return rep;
}

inline nlohmann::json construction_json(const ConstraintSystem &sys, const SiegelSolution &sol,
                                        const ConstructionReport &rep) {
  nlohmann::json j;
  j["K"] = sys.K();
  j["L"] = sys.L();
  j["B"] = to_string(sys.B);
  j["siegel_bound"] = sol.bound ? nlohmann::json(static_cast<double>(*sol.bound)) : nlohmann::json(nullptr);
  j["achieved_height"] = static_cast<double>(sol.achieved_height);
  j["bound_holds"] = sol.bound_holds;
  j["n"] = sys.spec.n;
  j["membership_verified"] = rep.membership_verified;
  j["nullity"] = sol.nullity;
  j["k_formula"] = to_string(sys.k_formula);
  j["C"] = sys.spec.C;
  j["c_invariant_holds"] = rep.c_invariant_holds;
  j["clause_i_holds"] = rep.clause_i_holds;
  j["clause_i_bound"] = static_cast<double>(rep.clause_i_bound);
  j["d_threshold"] = static_cast<double>(rep.d_threshold);
  j["asymptotic_regime_reached"] = false;
  nlohmann::json c = nlohmann::json::array();
  for (const auto &v : sol.c)
    c.push_back(to_string(v));
  j["solution"] = c;
  return j;
}

struct VolumeCount {
  std::uint64_t lattice_count = 0;
  //! (e/A)^m D^m
  long double bound = 0;
  //! ceil(bound) + m D^{m-1}
  long double discretized_bound = 0;
  bool within() const { return static_cast<long double>(lattice_count) <= discretized_bound; }
};

//! Integer points u in [0, D]^m with u_1 + ... + u_m < mD / A, by direct
//! enumeration.
inline VolumeCount volume_count(std::size_t m, double A, std::size_t D, std::size_t max_m = 4,
                                std::size_t max_D = 60) {
  if (!(A > 0))
    throw std::invalid_argument("volume_count: A must be positive");
  if (m < 1 || m > max_m || D > max_D)
    throw CapExceeded("volume_count: (m, D) exceeds the enumeration cap");
  const long double limit = static_cast<long double>(m) * static_cast<long double>(D);
  VolumeCount v;
  std::vector<std::size_t> u(m, 0);
  while (true) {
    std::size_t s = 0;
    for (auto x : u)
      s += x;
    if (static_cast<long double>(s) * static_cast<long double>(A) < limit)
      ++v.lattice_count;
    std::size_t i = 0;
    while (i < m && u[i] == D)
      u[i++] = 0;
    if (i == m)
      break;
    ++u[i];
  }
  const long double dm = std::pow(static_cast<long double>(D), static_cast<long double>(m));
  v.bound = std::pow(std::exp(1.0L) / static_cast<long double>(A), static_cast<long double>(m)) * dm;
  v.discretized_bound = std::ceil(v.bound) + static_cast<long double>(m) *
                                                 std::pow(static_cast<long double>(D), static_cast<long double>(m) - 1);
  return v;
}

} // namespace mahlerlab
