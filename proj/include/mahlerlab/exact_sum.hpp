#pragma once
#include <cmath>
#include <stdexcept>
#include <string>

namespace mahlerlab {

//! Fixed-point accumulator with quantum 2^-64 held in a 128-bit integer.
//!
//! Addition is exact and associative, so sums do not depend on how the
//! terms are grouped or which thread produced them.
class ExactSum {
public:
  static constexpr int kFractionBits = 64;

  ExactSum() = default;

  //! The multiple of 2^-64 nearest to v (ties to even).
  static __int128 quantize(long double v) {
    if (!std::isfinite(v) || std::fabs(v) >= 0x1p62L)
      throw std::overflow_error("ExactSum: value out of range");
    // Scaling by 2^64 is exact. Below 2^63 the x87 conversion rounds to
    // nearest-even like nearbyintl; above it every long double is an integer.
    const long double s = v * 0x1p64L;
    if (std::fabs(s) < 0x1p63L)
      return static_cast<__int128>(std::llrint(s));
    return static_cast<__int128>(s);
  }
  static long double dequantize(__int128 q) {
    return std::ldexp(static_cast<long double>(q), -kFractionBits);
  }

  void add(long double v) { acc_ += quantize(v); }
  void add_quantized(__int128 q) { acc_ += q; }

  __int128 raw() const { return acc_; }
  long double value() const { return dequantize(acc_); }

  ExactSum &operator+=(const ExactSum &o) {
    acc_ += o.acc_;
    return *this;
  }
  ExactSum &operator-=(const ExactSum &o) {
    acc_ -= o.acc_;
    return *this;
  }
  friend ExactSum operator+(ExactSum a, const ExactSum &b) { return a += b; }
  friend ExactSum operator-(ExactSum a, const ExactSum &b) { return a -= b; }
  friend bool operator==(const ExactSum &a, const ExactSum &b) { return a.acc_ == b.acc_; }

  //! Decimal digits of the raw integer, for manifests and debugging.
  std::string raw_string() const {
    __int128 v = acc_;
    if (v == 0)
      return "0";
    const bool neg = v < 0;
    unsigned __int128 u = neg ? static_cast<unsigned __int128>(-(v + 1)) + 1
                              : static_cast<unsigned __int128>(v);
    std::string s;
    while (u > 0) {
      s.insert(s.begin(), static_cast<char>('0' + static_cast<int>(u % 10)));
      u /= 10;
    }
    return neg ? "-" + s : s;
  }

private:
  __int128 acc_ = 0;
};

} // namespace mahlerlab
