#pragma once
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "csv.hpp"
#include "dynamics.hpp"
#include "mahler.hpp"
#include "poly_io.hpp"
#include "sweep.hpp"

namespace mahlerlab {

//! Alexander polynomials Delta_0, Delta_1, ... of a knot or link in d
//! variables, with Delta_{i+1} | Delta_i.
struct AlexanderData {
  std::string name;
  std::size_t d = 1;
  std::vector<LaurentPoly> polys;
};

//! The first nonzero Alexander polynomial.
inline LaurentPoly first_nonzero(const AlexanderData &data) {
  for (const auto &p : data.polys) {
    if (p.dim() != data.d)
      throw std::invalid_argument("first_nonzero: polynomial has " + std::to_string(p.dim()) +
                                  " variables, expected " + std::to_string(data.d));
    if (!p.is_zero())
      return p;
  }
  throw std::invalid_argument("first_nonzero: all Alexander polynomials vanish");
}

struct TorsionOrder {
  BigInt order;
  //! some factor Delta(z), z != 1, vanished (positive first Betti number)
  bool betti_jump = false;
  //! number of N-th roots of unity z != 1 skipped because Delta(z) = 0
  std::uint64_t skipped = 0;
};

//! Order of the torsion in H_1 of the N-fold cyclic branched cover:
//! |prod over z^N = 1, z != 1, Delta(z) != 0 of Delta(z)|, computed as the
//! resultant of Delta with (t^N - 1) / (t - 1) stripped of the cyclotomic
//! factors it shares with Delta.
inline TorsionOrder torsion_order(const LaurentPoly &delta, std::uint64_t n) {
  if (delta.dim() != 1)
    throw std::invalid_argument("torsion_order: Delta must be univariate");
  if (delta.is_zero())
    throw std::invalid_argument("torsion_order: Delta must be nonzero");
  if (n == 0)
    throw std::invalid_argument("torsion_order: N must be positive");
  const UniPoly f = to_unipoly(delta).first;
  UniPoly g = divexact(UniPoly::x_pow_minus_one(n), UniPoly{-1, 1});
  TorsionOrder out;
  for (auto e : divisors(n)) {
    if (e == 1)
      continue;
    const UniPoly phi = cyclotomic(e);
    if (divides_monic(phi, f)) {
      g = divexact(g, phi);
      out.betti_jump = true;
      out.skipped += euler_phi(e);
    }
  }
  out.order = g.degree() <= 0 ? BigInt(1) : abs(resultant(g, f));
  return out;
}

struct TorsionGrowthOptions {
  ComponentCountOptions count;
  QuadratureOptions quadrature;
  std::optional<long double> target;
};

//! statistic = N^{-d} log|H_1(M_N)|_tors, target = m(first nonzero Delta).
//! For d = 1 the branched-cover order is used; for d >= 2 the full product
//! over mu_N^d with zeros skipped. aux carries order_digits, betti_jump
//! and skipped.
inline std::vector<ConvergenceRecord> torsion_growth(const AlexanderData &data,
                                                     const std::vector<std::uint64_t> &ns,
                                                     const TorsionGrowthOptions &opts = {}) {
  const LaurentPoly delta = first_nonzero(data);
  const long double target = opts.target ? *opts.target : mahler_target(delta, opts.quadrature);
  std::vector<ConvergenceRecord> rows;
  for (auto n : ns) {
    ConvergenceRecord rec;
    rec.N = n;
    rec.target = target;
    BigInt order;
    std::uint64_t skipped = 0;
    if (delta.dim() == 1) {
      auto t = torsion_order(delta, n);
      order = t.order;
      skipped = t.skipped;
    } else {
      order = component_count(CyclicAction(delta), n, opts.count);
      skipped = sweep(delta, n, kNoCensus, opts.count.sweep).zero_count;
    }
    const long double vol = std::pow(static_cast<long double>(n), static_cast<long double>(delta.dim()));
    rec.statistic = log_bigint(order) / vol;
    rec.gap = rec.statistic - target;
    rec.aux["order_digits"] = static_cast<long double>(decimal_digits(order));
    rec.aux["betti_jump"] = skipped > 0 ? 1 : 0;
    rec.aux["skipped"] = static_cast<long double>(skipped);
    rows.push_back(std::move(rec));
  }
  return rows;
}

inline void write_torsion_csv(std::ostream &out, const std::vector<ConvergenceRecord> &rows) {
  csv::Writer w(out, {"N", "order_digits", "statistic", "target", "gap", "betti_jump", "skipped"});
  for (const auto &r : rows)
    w.row_strings({csv::format(r.N), aux_field(r, "order_digits"), csv::format(r.statistic),
                   csv::format(r.target), csv::format(r.gap), aux_field(r, "betti_jump"),
                   aux_field(r, "skipped")});
}

//! Catalog of named knots and links. File format:
//! {"entries": [{"name": ..., "d": ..., "polys": [poly, ...]}]} where each
//! poly is either the JSON polynomial form or a text string.
using Catalog = std::map<std::string, AlexanderData>;

inline Catalog catalog_from_json(const nlohmann::json &j) {
  Catalog cat;
  for (const auto &e : j.at("entries")) {
    AlexanderData a;
    a.name = e.at("name").get<std::string>();
    a.d = e.at("d").get<std::size_t>();
    for (const auto &pj : e.at("polys"))
      a.polys.push_back(pj.is_string() ? parse_poly(pj.get<std::string>(), a.d) : poly_from_json(pj));
    if (a.polys.empty())
      throw std::invalid_argument("catalog entry '" + a.name + "' has no polynomials");
    cat[a.name] = std::move(a);
  }
  return cat;
}

inline nlohmann::json catalog_to_json(const Catalog &cat) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto &[name, a] : cat) {
    nlohmann::json polys = nlohmann::json::array();
    for (const auto &p : a.polys)
      polys.push_back(to_json(p));
    entries.push_back({{"name", name}, {"d", a.d}, {"polys", polys}});
  }
  return {{"entries", entries}};
}

inline std::string default_catalog_path() {
#ifdef MAHLERLAB_DATA_DIR
  return std::string(MAHLERLAB_DATA_DIR) + "/catalog.json";
#else
  return "data/catalog.json";
#endif
}

inline Catalog load_catalog(const std::string &path = default_catalog_path()) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot open catalog " + path);
  return catalog_from_json(nlohmann::json::parse(in));
}

inline AlexanderData catalog_entry(const Catalog &cat, const std::string &name) {
  auto it = cat.find(name);
  if (it == cat.end())
    throw std::invalid_argument("unknown knot or link '" + name + "'");
  return it->second;
}

} // namespace mahlerlab
