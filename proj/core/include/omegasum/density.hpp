#pragma once

// Density of integers whose two prime-divisor counts share a parity. The
// bracketing routines sum closed-form densities over families of prime sets;
// the Renyi product gives the same constant through a single Euler product.

#include <cstdint>
#include <string>
#include <vector>

#include "omegasum/mp.hpp"

namespace omegasum {

inline constexpr mpfr_prec_t kDensityBits = 256;

// Density of n whose powerful part has exactly the given set of prime
// divisors and whose divisor-count parities agree. Empty set allowed.
Real match_density(const std::vector<uint64_t>& primes,
                   mpfr_prec_t bits = kDensityBits);

// Same family but with disagreeing parities. Rejects the empty set.
Real nonmatch_density(const std::vector<uint64_t>& primes,
                      mpfr_prec_t bits = kDensityBits);

struct DensityBound {
  Real lower;
  Real upper;
  std::string config;
};

// Enumerates prime sets of size r = 1..limits.size() with every element at
// most limits[r-1]. lower sums match densities (plus the squarefree term),
// upper is one minus the nonmatch sum. Brackets are padded outward.
DensityBound beta_bounds_by_r(const std::vector<uint64_t>& limits,
                              mpfr_prec_t bits = kDensityBits, int workers = 1);

// Enumerates all prime sets with product at most product_bound via
// depth-first search over increasing primes.
DensityBound beta_bounds_by_product(uint64_t product_bound,
                                    mpfr_prec_t bits = kDensityBits,
                                    int workers = 1);

struct RenyiResult {
  Real value;           // truncated product with the tail folded back in
  Real truncated;       // plain product over p <= prime_bound, divided by zeta(2)
  Real tail_estimate;   // first-order bound on the relative tail effect
  uint64_t prime_bound = 0;
};

// R(z) = (1/zeta(2)) prod_p (1 + z/((p+1)(p-z))), |z| < 2. The generating
// value of the parity-agreement density: beta = (1 + R(-1))/2. The tail over
// p > prime_bound is restored through a short logarithmic series whose prime
// power sums come from the prime zeta function.
RenyiResult renyi_R(const Real& z, uint64_t prime_bound,
                    mpfr_prec_t bits = kDensityBits);

// Fraction of n <= x with agreeing parities, by dual sieve.
double empirical_beta(uint64_t x, uint64_t block_size = uint64_t(1) << 22,
                      int workers = 1);

}  // namespace omegasum
