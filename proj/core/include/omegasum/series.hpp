#pragma once

// Exact integer power-series algebra in one variable q, truncated at a fixed
// order. Supplies the exponent sequence a_k of the product identity
// prod_{k>=1} (1-q^k)^{a_k} = 1 - q - q^2 - q^3 - ... and the tail
// coefficients of the factors it induces.

#include <gmpxx.h>

#include <vector>

namespace omegasum {

struct PowerSeries {
  std::vector<mpz_class> coefficients;  // degree i at index i
  int truncation_order = 0;             // coefficients.size() == order + 1

  const mpz_class& operator[](int i) const { return coefficients[i]; }
  mpz_class& operator[](int i) { return coefficients[i]; }
};

PowerSeries ps_zero(int order);
// c + 0q + ...
PowerSeries ps_const(long c, int order);
// 1 - q^k
PowerSeries ps_one_minus_qk(int k, int order);
// 1 - q - q^2 - ... - q^order
PowerSeries ps_geometric_remainder(int order);

PowerSeries ps_mul(const PowerSeries& a, const PowerSeries& b);
PowerSeries ps_pow(const PowerSeries& a, unsigned long e);
// Requires den constant term 1; exact back-substitution.
PowerSeries ps_div(const PowerSeries& num, const PowerSeries& den);

// a_1..a_K of the defining product, found by peeling one factor per degree.
std::vector<mpz_class> compute_a_sequence(int K);

// Expansion of (1 - q - q^2 - ...) * prod_{j<=k} (1-q^j)^{-a_j} to order K.
// Degrees 1..k vanish; the survivors are the tail coefficients of F_k.
PowerSeries fk_tail_coefficients(int k, int K);

}  // namespace omegasum
