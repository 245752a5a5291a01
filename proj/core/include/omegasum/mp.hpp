#pragma once

// Thin RAII wrappers around MPFR for the high-precision real and complex
// scalars used throughout the library. Every value carries its own precision;
// binary operations produce a result at the minimum precision of the two
// operands. Rounding is to nearest (ties to even) unless stated otherwise.

#include <gmpxx.h>
#include <mpfr.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

namespace omegasum {

class Real {
 public:
  explicit Real(mpfr_prec_t prec = 128) {
    mpfr_init2(v_, prec);
    mpfr_set_zero(v_, 1);
  }
  Real(const Real& o) {
    mpfr_init2(v_, o.prec());
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  Real(Real&& o) noexcept {
    mpfr_init2(v_, o.prec());
    mpfr_swap(v_, o.v_);
  }
  Real& operator=(const Real& o) {
    if (this != &o) {
      mpfr_set_prec(v_, o.prec());
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  Real& operator=(Real&& o) noexcept {
    if (this != &o) mpfr_swap(v_, o.v_);
    return *this;
  }
  ~Real() { mpfr_clear(v_); }

  static Real of(double d, mpfr_prec_t prec) {
    Real r(prec);
    mpfr_set_d(r.v_, d, MPFR_RNDN);
    return r;
  }
  static Real of(long n, mpfr_prec_t prec) {
    Real r(prec);
    mpfr_set_si(r.v_, n, MPFR_RNDN);
    return r;
  }
  static Real of(const mpz_class& z, mpfr_prec_t prec) {
    Real r(prec);
    mpfr_set_z(r.v_, z.get_mpz_t(), MPFR_RNDN);
    return r;
  }
  static Real of(const mpq_class& q, mpfr_prec_t prec) {
    Real r(prec);
    mpfr_set_q(r.v_, q.get_mpq_t(), MPFR_RNDN);
    return r;
  }
  // Parses a decimal string; throws on malformed input.
  static Real parse(const std::string& s, mpfr_prec_t prec);

  static Real pi(mpfr_prec_t prec) {
    Real r(prec);
    mpfr_const_pi(r.v_, MPFR_RNDN);
    return r;
  }
  static Real euler(mpfr_prec_t prec) {
    Real r(prec);
    mpfr_const_euler(r.v_, MPFR_RNDN);
    return r;
  }

  mpfr_prec_t prec() const { return mpfr_get_prec(v_); }
  // Changes precision, preserving the value (rounding if narrowed).
  void round_to_prec(mpfr_prec_t p) { mpfr_prec_round(v_, p, MPFR_RNDN); }

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  long to_long() const { return mpfr_get_si(v_, MPFR_RNDN); }
  // Nearest integer, ties to even.
  mpz_class round_to_int() const {
    mpz_class z;
    mpfr_get_z(z.get_mpz_t(), v_, MPFR_RNDN);
    return z;
  }
  // Shortest decimal string that round-trips at this precision.
  std::string to_string() const;
  // Scientific notation with exactly `digits` significant digits.
  std::string to_string(int digits) const;

  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  bool is_finite() const { return mpfr_number_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }
  int cmp(const Real& o) const { return mpfr_cmp(v_, o.v_); }
  int cmp(double d) const { return mpfr_cmp_d(v_, d); }

  friend bool operator<(const Real& a, const Real& b) { return a.cmp(b) < 0; }
  friend bool operator>(const Real& a, const Real& b) { return a.cmp(b) > 0; }
  friend bool operator<=(const Real& a, const Real& b) { return a.cmp(b) <= 0; }
  friend bool operator>=(const Real& a, const Real& b) { return a.cmp(b) >= 0; }
  friend bool operator==(const Real& a, const Real& b) { return a.cmp(b) == 0; }
  friend bool operator!=(const Real& a, const Real& b) { return a.cmp(b) != 0; }

  friend Real operator+(const Real& a, const Real& b) {
    Real r(minp(a, b));
    mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend Real operator-(const Real& a, const Real& b) {
    Real r(minp(a, b));
    mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend Real operator*(const Real& a, const Real& b) {
    Real r(minp(a, b));
    mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend Real operator/(const Real& a, const Real& b) {
    Real r(minp(a, b));
    mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend Real operator-(const Real& a) {
    Real r(a.prec());
    mpfr_neg(r.v_, a.v_, MPFR_RNDN);
    return r;
  }
  Real& operator+=(const Real& o) {
    mpfr_add(v_, v_, o.v_, MPFR_RNDN);
    return *this;
  }
  Real& operator-=(const Real& o) {
    mpfr_sub(v_, v_, o.v_, MPFR_RNDN);
    return *this;
  }
  Real& operator*=(const Real& o) {
    mpfr_mul(v_, v_, o.v_, MPFR_RNDN);
    return *this;
  }
  Real& operator/=(const Real& o) {
    mpfr_div(v_, v_, o.v_, MPFR_RNDN);
    return *this;
  }

  friend Real operator*(const Real& a, long n) {
    Real r(a.prec());
    mpfr_mul_si(r.v_, a.v_, n, MPFR_RNDN);
    return r;
  }
  friend Real operator/(const Real& a, long n) {
    Real r(a.prec());
    mpfr_div_si(r.v_, a.v_, n, MPFR_RNDN);
    return r;
  }
  friend Real operator+(const Real& a, long n) {
    Real r(a.prec());
    mpfr_add_si(r.v_, a.v_, n, MPFR_RNDN);
    return r;
  }
  friend Real operator-(const Real& a, long n) {
    Real r(a.prec());
    mpfr_sub_si(r.v_, a.v_, n, MPFR_RNDN);
    return r;
  }

  friend Real abs(const Real& a) {
    Real r(a.prec());
    mpfr_abs(r.v_, a.v_, MPFR_RNDN);
    return r;
  }
  friend Real sqrt(const Real& a) {
    Real r(a.prec());
    mpfr_sqrt(r.v_, a.v_, MPFR_RNDN);
    return r;
  }
  friend Real log(const Real& a) {
    Real r(a.prec());
    mpfr_log(r.v_, a.v_, MPFR_RNDN);
    return r;
  }
  friend Real exp(const Real& a) {
    Real r(a.prec());
    mpfr_exp(r.v_, a.v_, MPFR_RNDN);
    return r;
  }
  friend Real sin(const Real& a) {
    Real r(a.prec());
    mpfr_sin(r.v_, a.v_, MPFR_RNDN);
    return r;
  }
  friend Real cos(const Real& a) {
    Real r(a.prec());
    mpfr_cos(r.v_, a.v_, MPFR_RNDN);
    return r;
  }
  friend Real pow_si(const Real& a, long e) {
    Real r(a.prec());
    mpfr_pow_si(r.v_, a.v_, e, MPFR_RNDN);
    return r;
  }
  // a * 2^e
  friend Real ldexp2(const Real& a, long e) {
    Real r(a.prec());
    mpfr_mul_2si(r.v_, a.v_, e, MPFR_RNDN);
    return r;
  }
  friend void sin_cos(Real& s, Real& c, const Real& a) {
    mpfr_sin_cos(s.v_, c.v_, a.v_, MPFR_RNDN);
  }

  mpfr_ptr raw() { return v_; }
  mpfr_srcptr raw() const { return v_; }

 private:
  static mpfr_prec_t minp(const Real& a, const Real& b) {
    return std::min(a.prec(), b.prec());
  }
  mpfr_t v_;
};

class Complex {
 public:
  explicit Complex(mpfr_prec_t prec = 128) : re_(prec), im_(prec) {}
  Complex(Real re, Real im) : re_(std::move(re)), im_(std::move(im)) {}
  static Complex of(double re, double im, mpfr_prec_t prec) {
    return Complex(Real::of(re, prec), Real::of(im, prec));
  }

  const Real& re() const { return re_; }
  const Real& im() const { return im_; }
  Real& re() { return re_; }
  Real& im() { return im_; }
  mpfr_prec_t prec() const { return std::min(re_.prec(), im_.prec()); }

  bool is_finite() const { return re_.is_finite() && im_.is_finite(); }

  friend Complex operator+(const Complex& a, const Complex& b) {
    return Complex(a.re_ + b.re_, a.im_ + b.im_);
  }
  friend Complex operator-(const Complex& a, const Complex& b) {
    return Complex(a.re_ - b.re_, a.im_ - b.im_);
  }
  friend Complex operator-(const Complex& a) {
    return Complex(-a.re_, -a.im_);
  }
  friend Complex operator*(const Complex& a, const Complex& b) {
    return Complex(a.re_ * b.re_ - a.im_ * b.im_,
                   a.re_ * b.im_ + a.im_ * b.re_);
  }
  friend Complex operator*(const Complex& a, const Real& x) {
    return Complex(a.re_ * x, a.im_ * x);
  }
  friend Complex operator/(const Complex& a, const Complex& b) {
    Real d = norm_sq(b);
    return Complex((a.re_ * b.re_ + a.im_ * b.im_) / d,
                   (a.im_ * b.re_ - a.re_ * b.im_) / d);
  }
  Complex& operator+=(const Complex& o) {
    re_ += o.re_;
    im_ += o.im_;
    return *this;
  }
  Complex& operator-=(const Complex& o) {
    re_ -= o.re_;
    im_ -= o.im_;
    return *this;
  }
  Complex& operator*=(const Complex& o) { return *this = *this * o; }

  friend Complex conj(const Complex& a) { return Complex(a.re_, -a.im_); }
  friend Real norm_sq(const Complex& a) {
    return a.re_ * a.re_ + a.im_ * a.im_;
  }
  friend Real abs(const Complex& a) {
    Real r(a.prec());
    mpfr_hypot(r.raw(), a.re_.raw(), a.im_.raw(), MPFR_RNDN);
    return r;
  }
  friend Complex inv(const Complex& a) {
    Real d = norm_sq(a);
    return Complex(a.re_ / d, -a.im_ / d);
  }
  // exp(a) = e^re (cos im + i sin im)
  friend Complex cexp(const Complex& a) {
    Real m = exp(a.re_);
    Real s(a.prec()), c(a.prec());
    sin_cos(s, c, a.im_);
    return Complex(m * c, m * s);
  }
  // e^{i t}
  static Complex unit(const Real& t) {
    Real s(t.prec()), c(t.prec());
    sin_cos(s, c, t);
    return Complex(std::move(c), std::move(s));
  }
  friend Complex pow_ui(Complex base, unsigned long e) {
    Complex acc(base.prec());
    acc.re_ = Real::of(1L, base.prec());
    while (e) {
      if (e & 1) acc *= base;
      base *= base;
      e >>= 1;
    }
    return acc;
  }

  std::string to_string(int digits) const {
    return re_.to_string(digits) + (im_.sign() < 0 ? "" : "+") +
           im_.to_string(digits) + "i";
  }

 private:
  Real re_, im_;
};

// Copies to an explicit precision. Needed before mixing a low-precision value
// into a wider computation, since mixed operations take the minimum.
inline Real to_prec(const Real& x, mpfr_prec_t p) {
  Real r(p);
  mpfr_set(r.raw(), x.raw(), MPFR_RNDN);
  return r;
}
inline Complex to_prec(const Complex& z, mpfr_prec_t p) {
  return Complex(to_prec(z.re(), p), to_prec(z.im(), p));
}

// Number of guaranteed-correct mantissa bits conveyed by a decimal token with
// the given magnitude and count of fractional digits (assumes the printed
// value was correctly rounded).
int decimal_mantissa_bits(double magnitude, int fractional_digits);

}  // namespace omegasum
