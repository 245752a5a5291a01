#include "omegasum/primes.hpp"

#include <cmath>

namespace omegasum {

std::vector<uint64_t> primes_up_to(uint64_t n) {
  std::vector<uint64_t> out;
  if (n < 2) return out;
  out.push_back(2);
  if (n < 3) return out;
  uint64_t m = (n - 1) / 2;  // index i represents 2i+3
  std::vector<uint8_t> comp(m, 0);
  for (uint64_t i = 0;; ++i) {
    uint64_t p = 2 * i + 3;
    if (p * p > n) break;
    if (comp[i]) continue;
    for (uint64_t j = (p * p - 3) / 2; j < m; j += p) comp[j] = 1;
  }
  for (uint64_t i = 0; i < m; ++i)
    if (!comp[i]) out.push_back(2 * i + 3);
  return out;
}

void for_primes_up_to(uint64_t n, const std::function<void(uint64_t)>& fn) {
  if (n < 2) return;
  uint64_t root = static_cast<uint64_t>(std::sqrt(static_cast<double>(n)));
  while (root * root > n) --root;
  while ((root + 1) * (root + 1) <= n) ++root;
  std::vector<uint64_t> base = primes_up_to(root);
  for (uint64_t p : base) fn(p);

  const uint64_t seg = 1u << 20;
  std::vector<uint8_t> comp(seg);
  for (uint64_t lo = root + 1; lo <= n; lo += seg) {
    uint64_t hi = std::min(n, lo + seg - 1);
    uint64_t len = hi - lo + 1;
    std::fill(comp.begin(), comp.begin() + len, 0);
    for (uint64_t p : base) {
      if (p * p > hi) break;
      uint64_t start = ((lo + p - 1) / p) * p;
      if (start < p * p) start = p * p;
      for (uint64_t x = start; x <= hi; x += p) comp[x - lo] = 1;
    }
    for (uint64_t i = 0; i < len; ++i)
      if (!comp[i]) fn(lo + i);
  }
}

namespace {

uint64_t mulmod(uint64_t a, uint64_t b, uint64_t m) {
  return static_cast<uint64_t>(static_cast<__uint128_t>(a) * b % m);
}

uint64_t powmod(uint64_t a, uint64_t e, uint64_t m) {
  uint64_t r = 1;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

}  // namespace

bool is_prime_u64(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull,
                     29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // This witness set is deterministic for all n < 2^64.
  for (uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull,
                     29ull, 31ull, 37ull}) {
    uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

OmegaPair factor_count(uint64_t n) {
  OmegaPair out{0, 0};
  for (uint64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (n % p == 0) {
      ++out.distinct;
      while (n % p == 0) {
        n /= p;
        ++out.with_multiplicity;
      }
    }
  }
  if (n > 1) {
    ++out.distinct;
    ++out.with_multiplicity;
  }
  return out;
}

int xi_slow(uint64_t n) {
  return factor_count(n).distinct % 2 == 0 ? 1 : -1;
}

int lambda_slow(uint64_t n) {
  return factor_count(n).with_multiplicity % 2 == 0 ? 1 : -1;
}

int mu_slow(uint64_t n) {
  OmegaPair c = factor_count(n);
  if (c.distinct != c.with_multiplicity) return 0;
  return c.distinct % 2 == 0 ? 1 : -1;
}

}  // namespace omegasum
