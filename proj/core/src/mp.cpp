#include "omegasum/mp.hpp"

#include <cmath>
#include <cstdio>
#include <vector>

namespace omegasum {

Real Real::parse(const std::string& s, mpfr_prec_t prec) {
  Real r(prec);
  if (s.empty() || mpfr_set_str(r.v_, s.c_str(), 10, MPFR_RNDN) != 0)
    throw std::invalid_argument("not a decimal number: '" + s + "'");
  return r;
}

std::string Real::to_string() const {
  // prec bits carry about prec*log10(2) decimal digits; two extra digits
  // guarantee the round trip.
  int digits = static_cast<int>(std::ceil(prec() * 0.30102999566398) + 2);
  return to_string(digits);
}

std::string Real::to_string(int digits) const {
  if (!is_finite()) return mpfr_nan_p(v_) ? "nan" : (sign() < 0 ? "-inf" : "inf");
  if (digits < 2) digits = 2;
  std::vector<char> buf(digits + 32);
  mpfr_snprintf(buf.data(), buf.size(), "%.*Re", digits - 1, v_);
  return std::string(buf.data());
}

int decimal_mantissa_bits(double magnitude, int fractional_digits) {
  if (magnitude <= 0) return 0;
  // absolute error <= 0.5 * 10^-fractional_digits
  double bits = std::log2(magnitude) + fractional_digits * std::log2(10.0) + 1.0;
  if (bits < 0) return 0;
  return static_cast<int>(std::floor(bits));
}

}  // namespace omegasum
