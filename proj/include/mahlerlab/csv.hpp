#pragma once
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

#include "bigint.hpp"

namespace mahlerlab::csv {

//! Decimal form of a real with 17 significant digits, `.` as separator.
//! Infinities print as inf / -inf.
inline std::string format(long double v) {
  if (std::isinf(v))
    return v > 0 ? "inf" : "-inf";
  if (std::isnan(v))
    return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17Lg", v);
  return buf;
}
inline std::string format(double v) { return format(static_cast<long double>(v)); }
inline std::string format(const BigInt &v) { return to_string(v); }
inline std::string format(const std::string &s) { return s; }
inline std::string format(const char *s) { return s; }
inline std::string format(bool b) { return b ? "true" : "false"; }
template <class Int>
  requires std::is_integral_v<Int>
std::string format(Int v) {
  return std::to_string(v);
}

//! Quote a field when it contains a separator, quote or newline.
inline std::string escape(const std::string &field) {
  if (field.find_first_of(",\"\n") == std::string::npos)
    return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"')
      out += '"';
    out += c;
  }
  return out + "\"";
}

class Writer {
public:
  Writer(std::ostream &out, const std::vector<std::string> &header) : out_(out), width_(header.size()) {
    write(header);
  }

  template <class... Ts>
  void row(const Ts &...fields) {
    static_assert(sizeof...(Ts) > 0);
    write({format(fields)...});
  }
  void row_strings(const std::vector<std::string> &fields) { write(fields); }

private:
  void write(const std::vector<std::string> &fields) {
    if (fields.size() != width_)
      throw std::invalid_argument("csv row has " + std::to_string(fields.size()) +
                                  " fields, header has " + std::to_string(width_));
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i)
        out_ << ',';
      out_ << escape(fields[i]);
    }
    out_ << '\n';
  }

  std::ostream &out_;
  std::size_t width_;
};

} // namespace mahlerlab::csv
