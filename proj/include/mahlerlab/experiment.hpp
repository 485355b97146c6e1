#pragma once
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmp.h>
#include <json.hpp>
#include <mpfr.h>

#include "matrix.hpp"

#ifndef MAHLERLAB_VERSION
#define MAHLERLAB_VERSION "unknown"
#endif

//! Plumbing shared by the command-line tool: argument grammars, config
//! files and run manifests.

namespace mahlerlab::experiment {

//! Malformed configuration or flags.
class ConfigError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {

inline std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos)
    return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::uint64_t parse_u64(const std::string &s, const std::string &what) {
  const std::string t = trim(s);
  if (t.empty() || t.find_first_not_of("0123456789") != std::string::npos)
    throw ConfigError(what + ": expected a nonnegative integer, got '" + s + "'");
  try {
    return std::stoull(t);
  } catch (const std::out_of_range &) {
    throw ConfigError(what + ": integer out of range '" + s + "'");
  }
}

inline std::vector<std::string> split(const std::string &s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep))
    out.push_back(cur);
  if (!s.empty() && s.back() == sep)
    out.emplace_back();
  return out;
}

} // namespace detail

//! N lists: comma-separated items, each a single value, a range "a..b" or a
//! stepped range "a..b:step". Order is preserved; values must be positive.
inline std::vector<std::uint64_t> parse_n_list(const std::string &text) {
  if (detail::trim(text).empty())
    throw ConfigError("N list: empty");
  std::vector<std::uint64_t> out;
  for (const auto &raw : detail::split(text, ',')) {
    const std::string item = detail::trim(raw);
    if (item.empty())
      throw ConfigError("N list: empty item in '" + text + "'");
    const auto dots = item.find("..");
    if (dots == std::string::npos) {
      out.push_back(detail::parse_u64(item, "N list"));
    } else {
      std::string hi = item.substr(dots + 2);
      std::uint64_t step = 1;
      if (const auto colon = hi.find(':'); colon != std::string::npos) {
        step = detail::parse_u64(hi.substr(colon + 1), "N list step");
        hi = hi.substr(0, colon);
      }
      const auto a = detail::parse_u64(item.substr(0, dots), "N list");
      const auto b = detail::parse_u64(hi, "N list");
      if (step == 0 || b < a)
        throw ConfigError("N list: bad range '" + item + "'");
      if ((b - a) / step > (std::uint64_t{1} << 24))
        throw ConfigError("N list: range too long '" + item + "'");
      for (std::uint64_t n = a; n <= b; n += step)
        out.push_back(n);
    }
  }
  for (auto n : out)
    if (n == 0)
      throw ConfigError("N list: values must be positive");
  return out;
}

//! Integer matrix rows separated by ';', entries by ',' ("0,1;1,1").
inline IntMatrix parse_matrix(const std::string &text) {
  const auto rows = detail::split(text, ';');
  if (rows.empty())
    throw ConfigError("matrix: empty");
  std::vector<std::vector<BigInt>> vals;
  for (const auto &r : rows) {
    std::vector<BigInt> row;
    for (const auto &e : detail::split(r, ',')) {
      const std::string t = detail::trim(e);
      BigInt v;
      if (t.empty() || v.set_str(t, 10) != 0)
        throw ConfigError("matrix: bad entry '" + e + "'");
      row.push_back(v);
    }
    if (!vals.empty() && row.size() != vals.front().size())
      throw ConfigError("matrix: ragged rows");
    vals.push_back(std::move(row));
  }
  IntMatrix m(vals.size(), vals.front().size());
  for (std::size_t i = 0; i < vals.size(); ++i)
    for (std::size_t j = 0; j < vals[i].size(); ++j)
      m(i, j) = vals[i][j];
  return m;
}

//! Flat option map for one subcommand: top-level scalars first, then the
//! object named after the subcommand. Values are rendered as flag text.
inline std::map<std::string, std::string> config_options(const nlohmann::json &cfg,
                                                         const std::string &subcommand) {
  if (!cfg.is_object())
    throw ConfigError("config: top level must be an object");
  std::map<std::string, std::string> out;
  auto absorb = [&](const nlohmann::json &obj) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
      const auto &v = it.value();
      if (v.is_object())
        continue;
      if (v.is_string())
        out[it.key()] = v.get<std::string>();
      else if (v.is_boolean())
        out[it.key()] = v.get<bool>() ? "true" : "false";
      else if (v.is_number() || v.is_null())
        out[it.key()] = v.dump();
      else if (v.is_array()) {
        std::string s;
        for (const auto &x : v)
          s += (s.empty() ? "" : ",") + (x.is_string() ? x.get<std::string>() : x.dump());
        out[it.key()] = s;
      }
    }
  };
  absorb(cfg);
  if (auto it = cfg.find(subcommand); it != cfg.end()) {
    if (!it->is_object())
      throw ConfigError("config: section '" + subcommand + "' must be an object");
    absorb(*it);
  }
  return out;
}

inline nlohmann::json load_config(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError("config: cannot open '" + path + "'");
  try {
    return nlohmann::json::parse(in, nullptr, true, true);
  } catch (const nlohmann::json::parse_error &e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

//! Record of one run. Every output file is listed, so each CSV row can be
//! traced back to the inputs that produced it.
struct Manifest {
  std::string subcommand;
  nlohmann::json inputs = nlohmann::json::object();
  std::optional<std::uint64_t> seed;
  std::vector<std::string> outputs;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  std::string status = "ok";

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["tool"] = "mahlerlab";
    j["version"] = MAHLERLAB_VERSION;
    j["compiler"] = __VERSION__;
    j["gmp_version"] = gmp_version;
    j["mpfr_version"] = mpfr_get_version();
    j["subcommand"] = subcommand;
    j["inputs"] = inputs;
    j["seed"] = seed ? nlohmann::json(*seed) : nlohmann::json(nullptr);
    j["outputs"] = outputs;
    j["status"] = status;
    j["wall_time_s"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return j;
  }
};

//! Output directory handle that records each file it writes.
class OutputDir {
public:
  OutputDir(std::filesystem::path dir, Manifest &manifest) : dir_(std::move(dir)), manifest_(manifest) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec)
      throw ConfigError("output directory '" + dir_.string() + "': " + ec.message());
  }

  template <class Fn>
  void write(const std::string &name, Fn &&fn) {
    const auto path = dir_ / name;
    std::ofstream out(path, std::ios::binary);
    if (!out)
      throw ConfigError("cannot write '" + path.string() + "'");
    fn(out);
    manifest_.outputs.push_back(name);
  }

  void write_manifest() {
    std::ofstream out(dir_ / "manifest.json", std::ios::binary);
    out << manifest_.to_json().dump(2) << "\n";
  }

  const std::filesystem::path &path() const { return dir_; }

private:
  std::filesystem::path dir_;
  Manifest &manifest_;
};

} // namespace mahlerlab::experiment
