#include "omegasum/series.hpp"

#include <stdexcept>

namespace omegasum {

PowerSeries ps_zero(int order) {
  PowerSeries s;
  s.truncation_order = order;
  s.coefficients.assign(order + 1, mpz_class(0));
  return s;
}

PowerSeries ps_const(long c, int order) {
  PowerSeries s = ps_zero(order);
  s[0] = c;
  return s;
}

PowerSeries ps_one_minus_qk(int k, int order) {
  PowerSeries s = ps_const(1, order);
  if (k <= order) s[k] = -1;
  return s;
}

PowerSeries ps_geometric_remainder(int order) {
  PowerSeries s = ps_const(1, order);
  for (int i = 1; i <= order; ++i) s[i] = -1;
  return s;
}

PowerSeries ps_mul(const PowerSeries& a, const PowerSeries& b) {
  if (a.truncation_order != b.truncation_order)
    throw std::invalid_argument("power series order mismatch");
  int K = a.truncation_order;
  PowerSeries r = ps_zero(K);
  for (int i = 0; i <= K; ++i) {
    if (a[i] == 0) continue;
    for (int j = 0; i + j <= K; ++j) {
      if (b[j] == 0) continue;
      r[i + j] += a[i] * b[j];
    }
  }
  return r;
}

PowerSeries ps_pow(const PowerSeries& a, unsigned long e) {
  PowerSeries acc = ps_const(1, a.truncation_order);
  PowerSeries base = a;
  while (e) {
    if (e & 1) acc = ps_mul(acc, base);
    e >>= 1;
    if (e) base = ps_mul(base, base);
  }
  return acc;
}

PowerSeries ps_div(const PowerSeries& num, const PowerSeries& den) {
  if (num.truncation_order != den.truncation_order)
    throw std::invalid_argument("power series order mismatch");
  if (den[0] != 1) throw std::invalid_argument("divisor constant term must be 1");
  int K = num.truncation_order;
  PowerSeries r = ps_zero(K);
  for (int j = 0; j <= K; ++j) {
    mpz_class acc = num[j];
    for (int i = 1; i <= j; ++i) {
      if (den[i] == 0) continue;
      acc -= den[i] * r[j - i];
    }
    r[j] = acc;
  }
  return r;
}

std::vector<mpz_class> compute_a_sequence(int K) {
  if (K < 1) throw std::invalid_argument("K must be >= 1");
  // Peel: after dividing out (1-q^j)^{a_j} for j < k, the remainder has zero
  // coefficients in degrees 1..k-1, so a_k is minus its degree-k coefficient.
  PowerSeries rem = ps_geometric_remainder(K);
  std::vector<mpz_class> a;
  a.reserve(K);
  for (int k = 1; k <= K; ++k) {
    mpz_class ak = -rem[k];
    a.push_back(ak);
    if (ak == 0) continue;
    if (!ak.fits_ulong_p())
      throw std::runtime_error("a_k exponent exceeds machine range");
    PowerSeries factor = ps_pow(ps_one_minus_qk(k, K), ak.get_ui());
    rem = ps_div(rem, factor);
  }
  return a;
}

PowerSeries fk_tail_coefficients(int k, int K) {
  if (k < 1 || k >= K) throw std::invalid_argument("need 1 <= k < K");
  std::vector<mpz_class> a = compute_a_sequence(k);
  PowerSeries den = ps_const(1, K);
  for (int j = 1; j <= k; ++j)
    den = ps_mul(den, ps_pow(ps_one_minus_qk(j, K), a[j - 1].get_ui()));
  return ps_div(ps_geometric_remainder(K), den);
}

}  // namespace omegasum
