// Command-line front end: one experiment per process, results as CSV/JSON
// plus a manifest.json in the output directory.

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <mahlerlab/mahlerlab.hpp>

namespace ml = mahlerlab;
namespace ex = mahlerlab::experiment;
using nlohmann::json;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitComputation = 3;

struct Common {
  std::string config;
  std::string out = "mahlerlab-out";
  unsigned workers = 0;
  std::uint64_t block_size = 4096;
  long precision_cap = 8192;
  bool quiet = false;

  ml::SweepOptions sweep() const {
    ml::SweepOptions s;
    s.workers = workers;
    s.block_size = block_size;
    s.precision_cap = precision_cap;
    return s;
  }
};

//! A subcommand: its CLI11 handle and the action run after parsing.
struct Command {
  CLI::App *app = nullptr;
  std::function<void(ex::Manifest &, ex::OutputDir &)> run;
};

void add_common(CLI::App *sub, Common &c) {
  sub->add_option("--config", c.config, "JSON config file; flags override it");
  sub->add_option("-o,--out", c.out, "Output directory")->capture_default_str();
  sub->add_option("-w,--workers", c.workers, "Worker threads (0 = hardware)")->capture_default_str();
  sub->add_option("--block-size", c.block_size, "Points per sweep block")->capture_default_str();
  sub->add_option("--precision-cap", c.precision_cap, "Per-point precision cap in bits")->capture_default_str();
  sub->add_flag("-q,--quiet", c.quiet, "Only write files");
}

//! Fill options that were not given on the command line from the config
//! file: top-level keys first, then the subcommand's own section.
void apply_config(CLI::App *sub, const std::string &path) {
  const json cfg = ex::load_config(path);
  if (!cfg.is_object())
    throw ex::ConfigError("config: top level must be an object");
  const std::string name = sub->get_name();
  auto set = [&](const std::string &key, const std::string &value, bool strict) {
    if (key == "config")
      throw ex::ConfigError("config: nested config files are not supported");
    CLI::Option *opt = sub->get_option_no_throw("--" + key);
    if (opt == nullptr && key.size() == 1)
      opt = sub->get_option_no_throw("-" + key);
    if (opt == nullptr) {
      if (strict)
        throw ex::ConfigError("config: unknown key '" + key + "' for " + name);
      return;
    }
    if (opt->count() > 0)
      return;
    opt->clear();
    opt->add_result(value);
    opt->run_callback();
  };
  json top_only = json::object();
  for (auto it = cfg.begin(); it != cfg.end(); ++it)
    if (!it.value().is_object())
      top_only[it.key()] = it.value();
  for (const auto &[k, v] : ex::config_options(top_only, name))
    set(k, v, false);
  if (auto it = cfg.find(name); it != cfg.end()) {
    json section = json::object();
    section[name] = *it;
    for (const auto &[k, v] : ex::config_options(section, name))
      set(k, v, true);
  }
}

ml::LaurentPoly read_poly(const std::string &text, const std::string &file) {
  if (!file.empty()) {
    std::ifstream in(file);
    if (!in)
      throw ex::ConfigError("cannot open polynomial file '" + file + "'");
    std::string s((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && s[first] == '{')
      return ml::poly_from_json(json::parse(s));
    return ml::parse_poly(s);
  }
  if (text.empty())
    throw ex::ConfigError("a polynomial is required (-P or --poly-file)");
  return ml::parse_poly(text);
}

std::string fmt(long double v) { return ml::csv::format(v); }

json poly_input(const ml::LaurentPoly &p) { return {{"text", ml::to_text(p)}, {"json", ml::to_json(p)}}; }

json n_input(const std::vector<std::uint64_t> &ns) { return ns; }

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"mahlerlab: Mahler measures and torsion-point averages"};
  app.require_subcommand(1);
  app.set_version_flag("--version", MAHLERLAB_VERSION);
  Common common;
  std::vector<Command> commands;

  // ---- mahler
  struct {
    std::string poly, file, engine = "auto";
    std::uint64_t resolution = 2048;
    unsigned offsets = 4;
  } mahler;
  {
    auto *sub = app.add_subcommand("mahler", "Mahler measure m(P)");
    sub->add_option("-P,--poly", mahler.poly, "Polynomial text");
    sub->add_option("--poly-file", mahler.file, "Polynomial file (text or JSON)");
    sub->add_option("--engine", mahler.engine, "auto, jensen or quadrature")
        ->check(CLI::IsMember({"auto", "jensen", "quadrature"}))
        ->capture_default_str();
    sub->add_option("--resolution", mahler.resolution, "Quadrature grid points per axis")->capture_default_str();
    sub->add_option("--offsets", mahler.offsets, "Quadrature grid offsets")->capture_default_str();
    commands.push_back({sub, [&](ex::Manifest &man, ex::OutputDir &out) {
                          const auto p = read_poly(mahler.poly, mahler.file);
                          man.inputs = {{"poly", poly_input(p)}, {"engine", mahler.engine},
                                        {"resolution", mahler.resolution}, {"offsets", mahler.offsets}};
                          json res;
                          std::string engine = mahler.engine;
                          if (engine == "auto")
                            engine = p.dim() == 1 ? "jensen" : "quadrature";
                          if (engine == "jensen") {
                            if (p.dim() != 1)
                              throw ex::ConfigError("jensen engine needs a univariate polynomial");
                            auto [u, shift] = ml::to_unipoly(p);
                            (void)shift;
                            const auto v = ml::mahler_d1_certified(u);
                            res = {{"engine", "jensen"}, {"value", fmt(v.value)}, {"error_bound", fmt(v.error)},
                                   {"precision", v.precision}};
                            if (!common.quiet)
                              std::cout << "m(P) = " << fmt(v.value) << "  (+- " << fmt(v.error) << ")\n";
                          } else {
                            ml::QuadratureOptions q;
                            q.resolution = mahler.resolution;
                            q.offsets = mahler.offsets;
                            q.workers = common.workers;
                            const auto r = ml::mahler_quadrature(p, q);
                            json per = json::array();
                            for (auto v : r.per_offset)
                              per.push_back(fmt(v));
                            res = {{"engine", "quadrature"}, {"value", fmt(r.estimate)}, {"spread", fmt(r.spread)},
                                   {"per_offset", per}, {"retries", r.retries}};
                            if (!common.quiet)
                              std::cout << "m(P) ~= " << fmt(r.estimate) << "  (offset spread " << fmt(r.spread)
                                        << ")\n";
                          }
                          out.write("mahler.json", [&](std::ostream &os) { os << res.dump(2) << "\n"; });
                        }});
  }

  // ---- average
  struct {
    std::string poly, file, n;
    std::optional<long double> truncate, truncate_epsilon, target;
    std::uint64_t resolution = 2048;
  } average;
  {
    auto *sub = app.add_subcommand("average", "Torsion-point averages A_N(P)");
    sub->add_option("-P,--poly", average.poly, "Polynomial text");
    sub->add_option("--poly-file", average.file, "Polynomial file (text or JSON)");
    sub->add_option("-N,--N", average.n, "N list, e.g. 100 or 1..64 or 60,120,240");
    sub->add_option("--truncate", average.truncate, "Truncation level T: also census log|P| < -T");
    sub->add_option("--truncate-epsilon", average.truncate_epsilon, "Truncate at T = epsilon N for each N")
        ->excludes("--truncate");
    sub->add_option("--target", average.target, "Use this m(P) instead of computing it");
    sub->add_option("--resolution", average.resolution, "Quadrature resolution for the target (d >= 2)")
        ->capture_default_str();
    commands.push_back({sub, [&](ex::Manifest &man, ex::OutputDir &out) {
                          const auto p = read_poly(average.poly, average.file);
                          const auto ns = ex::parse_n_list(average.n);
                          man.inputs = {{"poly", poly_input(p)}, {"N", n_input(ns)}};
                          if (average.truncate)
                            man.inputs["truncate"] = fmt(*average.truncate);
                          ml::ConvergenceOptions opts;
                          opts.sweep = common.sweep();
                          opts.truncation = average.truncate;
                          opts.target = average.target;
                          opts.quadrature.resolution = average.resolution;
                          opts.quadrature.workers = common.workers;
                          if (average.truncate_epsilon)
                            man.inputs["truncate_epsilon"] = fmt(*average.truncate_epsilon);
                          std::vector<ml::ConvergenceRecord> rows;
                          if (average.truncate_epsilon) {
                            if (!opts.target)
                              opts.target = ml::mahler_target(p, opts.quadrature);
                            for (auto n : ns) {
                              opts.truncation = *average.truncate_epsilon * static_cast<long double>(n);
                              rows.push_back(ml::convergence_table(p, {n}, opts).front());
                            }
                          } else {
                            rows = ml::convergence_table(p, ns, opts);
                          }
                          if (!common.quiet)
                            for (const auto &r : rows)
                              std::cout << "A_" << r.N << " = " << fmt(r.statistic) << "\n";
                          out.write("average.csv", [&](std::ostream &os) { ml::write_convergence_csv(os, rows); });
                          out.write("gap_plot.csv", [&](std::ostream &os) { ml::write_gap_plot(os, rows); });
                        }});
  }

  // ---- growth
  struct {
    std::string poly, file, matrix, n;
    std::uint64_t resolution = 2048;
  } growth;
  {
    auto *sub = app.add_subcommand("growth", "Growth of periodic-point counts against the entropy");
    sub->add_option("-P,--poly", growth.poly, "Cyclic action R_d/(P)");
    sub->add_option("--poly-file", growth.file, "Polynomial file (text or JSON)");
    sub->add_option("-A,--matrix", growth.matrix, "Toral automorphism, rows ';' entries ',' (e.g. 0,1;1,1)");
    sub->add_option("-N,--N", growth.n, "N list");
    sub->add_option("--resolution", growth.resolution, "Quadrature resolution for the entropy (d >= 2)")
        ->capture_default_str();
    commands.push_back({sub, [&](ex::Manifest &man, ex::OutputDir &out) {
                          const auto ns = ex::parse_n_list(growth.n);
                          ml::GrowthOptions opts;
                          opts.count.sweep = common.sweep();
                          opts.quadrature.resolution = growth.resolution;
                          opts.quadrature.workers = common.workers;
                          std::vector<ml::ConvergenceRecord> rows;
                          if (!growth.matrix.empty()) {
                            const auto a = ex::parse_matrix(growth.matrix);
                            man.inputs = {{"matrix", growth.matrix}, {"N", n_input(ns)}};
                            rows = ml::growth_table(ml::Action(ml::ToralAction(a)), ns, opts);
                          } else {
                            const auto p = read_poly(growth.poly, growth.file);
                            man.inputs = {{"poly", poly_input(p)}, {"N", n_input(ns)}};
                            rows = ml::growth_table(ml::Action(ml::CyclicAction(p)), ns, opts);
                          }
                          if (!common.quiet)
                            for (const auto &r : rows)
                              std::cout << "N=" << r.N << " statistic=" << fmt(r.statistic) << " gap=" << fmt(r.gap)
                                        << "\n";
                          out.write("growth.csv", [&](std::ostream &os) { ml::write_growth_csv(os, rows); });
                          out.write("gap_plot.csv", [&](std::ostream &os) { ml::write_gap_plot(os, rows); });
                        }});
  }

  // ---- toral
  struct {
    std::string matrix, n;
    std::uint64_t points_cap = 1u << 16;
    bool points = false;
  } toral;
  {
    auto *sub = app.add_subcommand("toral", "Periodic points of a toral automorphism");
    sub->add_option("-A,--matrix", toral.matrix, "Integer matrix, rows ';' entries ','");
    sub->add_option("-N,--N", toral.n, "N list");
    sub->add_option("--points-cap", toral.points_cap, "Enumerate points only up to this count")
        ->capture_default_str();
    sub->add_flag("--points", toral.points, "Write the periodic points and their discrepancy");
    commands.push_back({sub, [&](ex::Manifest &man, ex::OutputDir &out) {
                          if (toral.matrix.empty())
                            throw ex::ConfigError("toral needs --matrix");
                          const auto a = ex::parse_matrix(toral.matrix);
                          const auto ns = ex::parse_n_list(toral.n);
                          man.inputs = {{"matrix", toral.matrix}, {"N", n_input(ns)}, {"points", toral.points}};
                          const ml::ToralAction act(a);
                          const ml::CyclicAction companion(ml::to_laurent(ml::charpoly(a)));
                          out.write("toral.csv", [&](std::ostream &os) {
                            ml::csv::Writer w(os, {"N", "toral_count", "companion_count", "agree", "invariant_factors",
                                                   "discrepancy"});
                            for (auto n : ns) {
                              const auto t = ml::toral_count(act, n);
                              const auto c = ml::component_count(companion, n);
                              std::string inv, disc;
                              if (toral.points) {
                                const auto pts = ml::periodic_points_toral(act, n, toral.points_cap);
                                for (const auto &f : pts.invariant_factors)
                                  inv += (inv.empty() ? "" : " ") + ml::to_string(f);
                                if (pts.enumerated) {
                                  disc = fmt(ml::discrepancy(ml::to_doubles(pts)));
                                  out.write("periodic_points_" + std::to_string(n) + ".csv",
                                            [&](std::ostream &ps) { ml::write_periodic_points_csv(ps, pts); });
                                }
                              }
                              const std::string ts = t ? ml::to_string(*t) : std::string("singular");
                              w.row_strings({std::to_string(n), ts, ml::to_string(c),
                                             t && *t == c ? "true" : "false", inv, disc});
                              if (!common.quiet)
                                std::cout << "N=" << n << " |Per_N| = " << ts << "\n";
                            }
                          });
                        }});
  }

  // ---- torsion
  struct {
    std::string knot, poly, catalog, n;
    std::uint64_t resolution = 1024;
  } torsion;
  {
    auto *sub = app.add_subcommand("torsion", "Torsion in homology of cyclic branched covers");
    sub->add_option("--knot", torsion.knot, "Catalog entry name (e.g. figure-eight)");
    sub->add_option("-P,--poly", torsion.poly, "Alexander polynomial text (instead of --knot)");
    sub->add_option("--catalog", torsion.catalog, "Catalog JSON (default: bundled catalog)");
    sub->add_option("-N,--N", torsion.n, "N list");
    sub->add_option("--resolution", torsion.resolution, "Quadrature resolution for the target (links)")
        ->capture_default_str();
    commands.push_back({sub, [&](ex::Manifest &man, ex::OutputDir &out) {
                          const auto ns = ex::parse_n_list(torsion.n);
                          ml::AlexanderData data;
                          if (!torsion.knot.empty()) {
                            const auto cat = ml::load_catalog(torsion.catalog.empty() ? ml::default_catalog_path()
                                                                                      : torsion.catalog);
                            data = ml::catalog_entry(cat, torsion.knot);
                          } else {
                            data.name = "custom";
                            data.polys = {read_poly(torsion.poly, "")};
                            data.d = data.polys[0].dim();
                          }
                          const auto delta = ml::first_nonzero(data);
                          man.inputs = {{"name", data.name}, {"delta", poly_input(delta)}, {"N", n_input(ns)}};
                          ml::TorsionGrowthOptions opts;
                          opts.count.sweep = common.sweep();
                          opts.quadrature.resolution = torsion.resolution;
                          opts.quadrature.workers = common.workers;
                          if (!common.quiet && delta.dim() == 1)
                            for (auto n : ns) {
                              const auto t = ml::torsion_order(delta, n);
                              if (ns.size() == 1)
                                std::cout << ml::to_string(t.order) << (t.betti_jump ? "  (betti jump)" : "") << "\n";
                              else
                                std::cout << "N=" << n << " order=" << ml::to_string(t.order)
                                          << (t.betti_jump ? "  (betti jump)" : "") << "\n";
                            }
                          const auto rows = ml::torsion_growth(data, ns, opts);
                          out.write("torsion.csv", [&](std::ostream &os) { ml::write_torsion_csv(os, rows); });
                          out.write("gap_plot.csv", [&](std::ostream &os) { ml::write_gap_plot(os, rows); });
                        }});
  }

  // ---- probe-census
  struct {
    std::string poly, file, n;
    double epsilon = 0.1, coverage = 1.0;
    std::int64_t B = 2;
    std::size_t simultaneous = 0;
  } census;
  {
    auto *sub = app.add_subcommand("probe-census", "Exceptional points where -log|P| > eps phi(N)");
    sub->add_option("-P,--poly", census.poly, "Polynomial text");
    sub->add_option("--poly-file", census.file, "Polynomial file (text or JSON)");
    sub->add_option("-N,--N", census.n, "N list");
    sub->add_option("-e,--epsilon", census.epsilon, "Threshold factor")->capture_default_str();
    sub->add_option("-B,--relation-bound", census.B, "Max |n|_1 of torsion-coset relations")->capture_default_str();
    sub->add_option("--coverage", census.coverage, "Coset coverage needed to explain a cluster")
        ->capture_default_str();
    sub->add_option("--simultaneous", census.simultaneous,
                    "Also write the simultaneous profile over s Galois embeddings (0 = off)");
    commands.push_back({sub, [&](ex::Manifest &man, ex::OutputDir &out) {
                          const auto p = read_poly(census.poly, census.file);
                          const auto ns = ex::parse_n_list(census.n);
                          man.inputs = {{"poly", poly_input(p)}, {"N", n_input(ns)}, {"epsilon", census.epsilon},
                                        {"B", census.B}, {"coverage", census.coverage}};
                          ml::CensusOptions opts;
                          opts.sweep = common.sweep();
                          opts.coverage = census.coverage;
                          std::vector<ml::CensusResult> results;
                          for (auto n : ns) {
                            results.push_back(ml::exceptional_census(p, n, census.epsilon, census.B, opts));
                            const auto &r = results.back();
                            std::size_t explained = 0;
                            for (const auto &e : r.exceptional)
                              explained += e.relation.has_value();
                            if (!common.quiet)
                              std::cout << "N=" << n << " exceptional=" << r.exceptional.size()
                                        << " on_torsion_coset=" << explained
                                        << " on_variety=" << r.on_variety.size() << "\n";
                          }
                          out.write("census.csv", [&](std::ostream &os) { ml::write_census_csv(os, results); });
                          if (census.simultaneous > 0) {
                            ml::SimultaneousOptions so;
                            so.sweep = common.sweep();
                            so.epsilon = census.epsilon;
                            out.write("simultaneous.csv", [&](std::ostream &os) {
                              ml::csv::Writer w(os, {"N", "s", "max_value", "max_normalized", "argmax", "exceeding",
                                                     "zero_count"});
                              for (auto n : ns) {
                                const std::size_t s = std::min<std::size_t>(census.simultaneous, ml::euler_phi(n));
                                const auto prof = ml::simultaneous_profile(p, n, s, so);
                                w.row(n, s, prof.max_value, prof.max_normalized,
                                      prof.argmax ? prof.argmax->str() : std::string(), prof.exceeding,
                                      prof.zero_count);
                              }
                            });
                          }
                        }});
  }

  // ---- probe-sums
  struct {
    std::size_t k = 2;
    std::string n;
    std::uint64_t cap = std::uint64_t{1} << 24, samples = std::uint64_t{1} << 20, seed = 1;
    double epsilon = 0.5;
  } sums;
  {
    auto *sub = app.add_subcommand("probe-sums", "Smallest nonzero sums 1 + z_1 + ... + z_k of N-th roots of unity");
    sub->add_option("-k", sums.k, "Number of roots")->capture_default_str();
    sub->add_option("-N,--N", sums.n, "N list");
    sub->add_option("--cap", sums.cap, "Largest N^k scanned exhaustively")->capture_default_str();
    sub->add_option("--samples", sums.samples, "Random tuples above the cap")->capture_default_str();
    sub->add_option("--seed", sums.seed, "Sampling seed")->capture_default_str();
    sub->add_option("-e,--epsilon", sums.epsilon, "Subsums below exp(-eps phi(N)) are reported")
        ->capture_default_str();
    commands.push_back({sub, [&](ex::Manifest &man, ex::OutputDir &out) {
                          const auto ns = ex::parse_n_list(sums.n);
                          man.inputs = {{"k", sums.k}, {"N", n_input(ns)}, {"cap", sums.cap},
                                        {"samples", sums.samples}, {"epsilon", sums.epsilon}};
                          man.seed = sums.seed;
                          ml::UnitySumOptions opts;
                          opts.sweep = common.sweep();
                          opts.exhaustive_cap = sums.cap;
                          opts.samples = sums.samples;
                          opts.seed = sums.seed;
                          opts.epsilon = sums.epsilon;
                          out.write("sums.csv", [&](std::ostream &os) {
                            ml::csv::Writer w(os, {"N", "k", "min_nonzero", "neg_log_min", "witness",
                                                   "exact_zero_count", "sampled", "scanned", "small_subsums"});
                            for (auto n : ns) {
                              const auto r = ml::unity_sum_minima(sums.k, n, opts);
                              std::string subs;
                              for (const auto &s : r.small_subsums) {
                                std::string idx;
                                for (auto i : s.subset)
                                  idx += (idx.empty() ? "" : ";") + std::to_string(i);
                                subs += (subs.empty() ? "" : " ") + std::string("{") + idx + "}" +
                                        (s.exact_zero ? "=0" : "");
                              }
                              w.row(n, sums.k, r.min_nonzero, 0.0L - std::log(r.min_nonzero),
                                    r.witness ? r.witness->str() : std::string(), r.exact_zero_count, r.sampled,
                                    r.scanned, subs);
                              if (!common.quiet)
                                std::cout << "N=" << n << " min|sum|=" << fmt(r.min_nonzero)
                                          << " zeros=" << r.exact_zero_count << (r.sampled ? " (sampled)" : "")
                                          << "\n";
                            }
                          });
                        }});
  }

  // ---- probe-gelfond
  struct {
    std::string poly, file, n, selector = "closest";
    std::size_t index = 0;
    long precision = 256;
  } gelfond;
  {
    auto *sub = app.add_subcommand("probe-gelfond", "Distance from a root of A to the N-th roots of unity");
    sub->add_option("-P,--poly", gelfond.poly, "Univariate polynomial A");
    sub->add_option("--poly-file", gelfond.file, "Polynomial file (text or JSON)");
    sub->add_option("-N,--N", gelfond.n, "N list");
    sub->add_option("--selector", gelfond.selector, "largest, smallest, closest or index")
        ->check(CLI::IsMember({"largest", "smallest", "closest", "index"}))
        ->capture_default_str();
    sub->add_option("--index", gelfond.index, "Root index for --selector index")->capture_default_str();
    sub->add_option("--precision", gelfond.precision, "Working precision in bits")->capture_default_str();
    commands.push_back({sub, [&](ex::Manifest &man, ex::OutputDir &out) {
                          const auto p = read_poly(gelfond.poly, gelfond.file);
                          if (p.dim() != 1)
                            throw ex::ConfigError("probe-gelfond needs a univariate polynomial");
                          const auto ns = ex::parse_n_list(gelfond.n);
                          man.inputs = {{"poly", poly_input(p)}, {"N", n_input(ns)}, {"selector", gelfond.selector},
                                        {"index", gelfond.index}};
                          ml::GelfondOptions opts;
                          opts.precision = gelfond.precision;
                          opts.index = gelfond.index;
                          opts.selector = gelfond.selector == "largest"    ? ml::RootSelector::LargestModulus
                                          : gelfond.selector == "smallest" ? ml::RootSelector::SmallestModulus
                                          : gelfond.selector == "index"    ? ml::RootSelector::Index
                                                                           : ml::RootSelector::ClosestToCircle;
                          auto [u, shift] = ml::to_unipoly(p);
                          (void)shift;
                          const auto prof = ml::gelfond_rate(u, ns, opts);
                          if (!common.quiet)
                            std::cout << "alpha = " << fmt(prof.alpha_re) << " + " << fmt(prof.alpha_im)
                                      << "i  |alpha| = " << fmt(prof.alpha_abs)
                                      << "\nmax -log(dist)/N = " << fmt(prof.max_ratio) << " at N=" << prof.argmax_N
                                      << "\n";
                          out.write("gelfond.csv", [&](std::ostream &os) { ml::write_gelfond_csv(os, prof); });
                          out.write("gelfond_plot.csv", [&](std::ostream &os) {
                            ml::csv::Writer w(os, {"x", "y"});
                            for (const auto &r : prof.rows)
                              w.row(r.N, r.ratio);
                          });
                        }});
  }

  // ---- probe-smallpoints
  struct {
    std::string n = "1..40";
  } small;
  {
    auto *sub = app.add_subcommand("probe-smallpoints", "Roots of x^(n+1) - 2x^n - 1 near 2");
    sub->add_option("-n,--n", small.n, "n list")->capture_default_str();
    commands.push_back({sub, [&](ex::Manifest &man, ex::OutputDir &out) {
                          const auto ns = ex::parse_n_list(small.n);
                          man.inputs = {{"n", n_input(ns)}};
                          const auto rows = ml::small_point_family(ns);
                          if (!common.quiet)
                            for (const auto &r : rows)
                              std::cout << "n=" << r.n << " |2-alpha|=" << fmt(r.distance)
                                        << " residual=" << fmt(r.identity_residual) << "\n";
                          out.write("smallpoints.csv", [&](std::ostream &os) { ml::write_small_points_csv(os, rows); });
                        }});
  }

  // ---- siegel
  struct {
    std::string poly, file;
    std::size_t k = 1, m = 2, D = 3;
    std::optional<std::size_t> n;
    std::optional<double> C;
    ml::SiegelCaps caps;
  } siegel;
  {
    auto *sub = app.add_subcommand("siegel", "Small-height auxiliary polynomial vanishing to order n");
    sub->add_option("-P,--poly", siegel.poly, "Polynomial text");
    sub->add_option("--poly-file", siegel.file, "Polynomial file (text or JSON)");
    sub->add_option("-k", siegel.k, "Number of leading variables per block")->capture_default_str();
    sub->add_option("-m", siegel.m, "Number of blocks")->capture_default_str();
    sub->add_option("-D", siegel.D, "Degree bound per variable")->capture_default_str();
    sub->add_option("-n,--order", siegel.n, "Vanishing order (default floor(mD/C))");
    sub->add_option("-C", siegel.C, "Constant C (default e^2 r 2^(d-1))");
    sub->add_option("--max-columns", siegel.caps.max_columns, "Column cap")->capture_default_str();
    sub->add_option("--max-D", siegel.caps.max_D, "Cap on D")->capture_default_str();
    sub->add_option("--max-m", siegel.caps.max_m, "Cap on m")->capture_default_str();
    commands.push_back({sub, [&](ex::Manifest &man, ex::OutputDir &out) {
                          const auto p = read_poly(siegel.poly, siegel.file);
                          const auto spec = ml::make_construction_spec(p, siegel.k, siegel.m, siegel.D, siegel.C,
                                                                       siegel.n);
                          man.inputs = {{"poly", poly_input(p)}, {"k", siegel.k}, {"m", siegel.m},
                                        {"D", siegel.D},         {"n", spec.n},  {"C", spec.C}};
                          const auto sys = ml::rewrite_and_expand(spec, siegel.caps);
                          const auto sol = ml::solve_small_height(sys);
                          const auto F = ml::construction_poly(sys, sol.c);
                          const auto rep = ml::verify_construction(F, spec);
                          json j = ml::construction_json(sys, sol, rep);
                          j["F"] = ml::to_text(F);
                          if (!common.quiet)
                            std::cout << "K=" << sys.K() << " L=" << sys.L() << " height=" << fmt(sol.achieved_height)
                                      << " bound=" << (sol.bound ? fmt(*sol.bound) : std::string("none"))
                                      << " verified=" << (rep.membership_verified ? "yes" : "no") << "\n";
                          out.write("siegel.json", [&](std::ostream &os) { os << j.dump(2) << "\n"; });
                          if (!rep.membership_verified)
                            throw ml::ComputationError("siegel: construction failed verification");
                        }});
  }

  // ---- catalog
  struct {
    std::string catalog, show;
  } catalog;
  {
    auto *sub = app.add_subcommand("catalog", "List the bundled knot and link catalog");
    sub->add_option("--catalog", catalog.catalog, "Catalog JSON (default: bundled catalog)");
    sub->add_option("--show", catalog.show, "Print one entry");
    commands.push_back({sub, [&](ex::Manifest &man, ex::OutputDir &out) {
                          const std::string path =
                              catalog.catalog.empty() ? ml::default_catalog_path() : catalog.catalog;
                          man.inputs = {{"catalog", path}};
                          const auto cat = ml::load_catalog(path);
                          if (!catalog.show.empty()) {
                            const auto e = ml::catalog_entry(cat, catalog.show);
                            for (const auto &q : e.polys)
                              std::cout << ml::to_text(q) << "\n";
                            return;
                          }
                          out.write("catalog.csv", [&](std::ostream &os) {
                            ml::csv::Writer w(os, {"name", "d", "delta"});
                            for (const auto &[name, e] : cat) {
                              const std::string d = ml::to_text(ml::first_nonzero(e));
                              w.row(name, e.d, d);
                              if (!common.quiet)
                                std::cout << name << "  (d=" << e.d << ")  " << d << "\n";
                            }
                          });
                        }});
  }

  for (auto &c : commands)
    add_common(c.app, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  const Command *chosen = nullptr;
  for (auto &c : commands)
    if (c.app->parsed())
      chosen = &c;

  ex::Manifest manifest;
  manifest.subcommand = chosen->app->get_name();
  std::unique_ptr<ex::OutputDir> out;
  try {
    if (!common.config.empty())
      apply_config(chosen->app, common.config);
    if (common.precision_cap < 64 || common.block_size == 0)
      throw ex::ConfigError("caps must be positive (precision-cap >= 64, block-size >= 1)");
    out = std::make_unique<ex::OutputDir>(common.out, manifest);
    chosen->run(manifest, *out);
    if (manifest.inputs.is_object()) {
      manifest.inputs["workers"] = common.workers;
      manifest.inputs["block_size"] = common.block_size;
      manifest.inputs["precision_cap"] = common.precision_cap;
      if (!common.config.empty())
        manifest.inputs["config"] = common.config;
    }
    out->write_manifest();
    return 0;
  } catch (const CLI::ParseError &e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument &e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ml::PrecisionExhausted &e) {
    std::cerr << "computation error: " << e.what() << " at " << ml::TorsionPoint(e.order(), e.exps()).str() << "\n";
    manifest.status = "precision_exhausted";
  } catch (const std::exception &e) {
    std::cerr << "computation error: " << e.what() << "\n";
    manifest.status = "computation_error";
  }
  if (out)
    out->write_manifest();
  return kExitComputation;
}
