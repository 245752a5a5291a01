#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace omegasum {

// Odd-only Eratosthenes sieve, returns all primes <= n.
std::vector<uint64_t> primes_up_to(uint64_t n);

// Calls fn(p) for every prime p <= n in increasing order. Segmented, so n may
// exceed what a full bitmap would allow.
void for_primes_up_to(uint64_t n, const std::function<void(uint64_t)>& fn);

// Deterministic Miller-Rabin for 64-bit inputs.
bool is_prime_u64(uint64_t n);

// Number of distinct prime factors and number of prime factors with
// multiplicity, by trial division. Meant for tests and small n.
struct OmegaPair {
  uint32_t distinct;
  uint32_t with_multiplicity;
};
OmegaPair factor_count(uint64_t n);

// (-1)^distinct, (-1)^multiplicity, and the Moebius value, by trial division.
int xi_slow(uint64_t n);
int lambda_slow(uint64_t n);
int mu_slow(uint64_t n);

}  // namespace omegasum
