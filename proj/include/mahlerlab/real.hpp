#pragma once
#include <mpfr.h>

#include <cmath>
#include <string>
#include <utility>

#include "bigint.hpp"

namespace mahlerlab {

//! RAII handle around an mpfr_t. Every value carries its own precision;
//! binary operators produce a result at the larger operand precision,
//! rounded to nearest.
class Real {
public:
  explicit Real(mpfr_prec_t prec = 64) {
    mpfr_init2(v_, prec);
    mpfr_set_zero(v_, 1);
  }
  Real(long double x, mpfr_prec_t prec) {
    mpfr_init2(v_, prec);
    mpfr_set_ld(v_, x, MPFR_RNDN);
  }
  Real(const BigInt &x, mpfr_prec_t prec, mpfr_rnd_t rnd = MPFR_RNDN) {
    mpfr_init2(v_, prec);
    mpfr_set_z(v_, x.get_mpz_t(), rnd);
  }
  Real(const Real &o) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  Real(Real &&o) noexcept {
    mpfr_init2(v_, MPFR_PREC_MIN);
    mpfr_swap(v_, o.v_);
  }
  Real &operator=(const Real &o) {
    if (this != &o) {
      mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  Real &operator=(Real &&o) noexcept {
    mpfr_swap(v_, o.v_);
    return *this;
  }
  ~Real() { mpfr_clear(v_); }

  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }
  mpfr_prec_t precision() const { return mpfr_get_prec(v_); }

  long double to_ld(mpfr_rnd_t rnd = MPFR_RNDN) const {
    return mpfr_get_ld(v_, rnd);
  }
  double to_double(mpfr_rnd_t rnd = MPFR_RNDN) const {
    return mpfr_get_d(v_, rnd);
  }
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }

  std::string str(int digits = 20) const {
    char *buf = nullptr;
    mpfr_asprintf(&buf, "%.*Rg", digits, v_);
    std::string s(buf);
    mpfr_free_str(buf);
    return s;
  }

private:
  mpfr_t v_;
};

namespace detail {
inline mpfr_prec_t max_prec(const Real &a, const Real &b) {
  return std::max(a.precision(), b.precision());
}
} // namespace detail

inline Real operator+(const Real &a, const Real &b) {
  Real r(detail::max_prec(a, b));
  mpfr_add(r.get(), a.get(), b.get(), MPFR_RNDN);
  return r;
}
inline Real operator-(const Real &a, const Real &b) {
  Real r(detail::max_prec(a, b));
  mpfr_sub(r.get(), a.get(), b.get(), MPFR_RNDN);
  return r;
}
inline Real operator*(const Real &a, const Real &b) {
  Real r(detail::max_prec(a, b));
  mpfr_mul(r.get(), a.get(), b.get(), MPFR_RNDN);
  return r;
}
inline Real operator/(const Real &a, const Real &b) {
  Real r(detail::max_prec(a, b));
  mpfr_div(r.get(), a.get(), b.get(), MPFR_RNDN);
  return r;
}
inline Real operator-(const Real &a) {
  Real r(a.precision());
  mpfr_neg(r.get(), a.get(), MPFR_RNDN);
  return r;
}
inline Real &operator+=(Real &a, const Real &b) {
  mpfr_add(a.get(), a.get(), b.get(), MPFR_RNDN);
  return a;
}
inline Real &operator-=(Real &a, const Real &b) {
  mpfr_sub(a.get(), a.get(), b.get(), MPFR_RNDN);
  return a;
}
inline Real &operator*=(Real &a, const Real &b) {
  mpfr_mul(a.get(), a.get(), b.get(), MPFR_RNDN);
  return a;
}
inline bool operator<(const Real &a, const Real &b) {
  return mpfr_less_p(a.get(), b.get()) != 0;
}
inline bool operator>(const Real &a, const Real &b) { return b < a; }
inline bool operator<=(const Real &a, const Real &b) {
  return mpfr_lessequal_p(a.get(), b.get()) != 0;
}

inline Real abs(const Real &a) {
  Real r(a.precision());
  mpfr_abs(r.get(), a.get(), MPFR_RNDN);
  return r;
}
inline Real sqrt(const Real &a) {
  Real r(a.precision());
  mpfr_sqrt(r.get(), a.get(), MPFR_RNDN);
  return r;
}
inline Real log(const Real &a) {
  Real r(a.precision());
  mpfr_log(r.get(), a.get(), MPFR_RNDN);
  return r;
}
inline Real hypot(const Real &a, const Real &b) {
  Real r(detail::max_prec(a, b));
  mpfr_hypot(r.get(), a.get(), b.get(), MPFR_RNDN);
  return r;
}
inline Real pi(mpfr_prec_t prec) {
  Real r(prec);
  mpfr_const_pi(r.get(), MPFR_RNDN);
  return r;
}
//! 2^e at the given precision.
inline Real exp2i(long e, mpfr_prec_t prec) {
  Real r(prec);
  mpfr_set_ui_2exp(r.get(), 1, e, MPFR_RNDN);
  return r;
}

//! Complex number with MPFR parts.
struct MpComplex {
  Real re;
  Real im;

  explicit MpComplex(mpfr_prec_t prec = 64) : re(prec), im(prec) {}
  MpComplex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}
  mpfr_prec_t precision() const { return re.precision(); }
};

inline MpComplex operator+(const MpComplex &a, const MpComplex &b) {
  return {a.re + b.re, a.im + b.im};
}
inline MpComplex operator-(const MpComplex &a, const MpComplex &b) {
  return {a.re - b.re, a.im - b.im};
}
inline MpComplex operator*(const MpComplex &a, const MpComplex &b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
inline MpComplex operator/(const MpComplex &a, const MpComplex &b) {
  Real den = b.re * b.re + b.im * b.im;
  return {(a.re * b.re + a.im * b.im) / den, (a.im * b.re - a.re * b.im) / den};
}
inline Real abs(const MpComplex &a) { return hypot(a.re, a.im); }

} // namespace mahlerlab
