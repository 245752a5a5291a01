#include "omegasum/density.hpp"

#include <sstream>
#include <stdexcept>

#include "omegasum/parallel.hpp"
#include "omegasum/primes.hpp"
#include "omegasum/sieve.hpp"
#include "omegasum/zeta.hpp"

namespace omegasum {

namespace {

void check_prime_set(const std::vector<uint64_t>& primes) {
  for (size_t i = 0; i < primes.size(); ++i) {
    if (!is_prime_u64(primes[i]))
      throw std::invalid_argument("prime set contains a composite");
    if (i > 0 && primes[i] <= primes[i - 1])
      throw std::invalid_argument("prime set must be strictly increasing");
  }
}

Real six_over_pi2(mpfr_prec_t bits) {
  Real pi = Real::pi(bits);
  return Real::of(6L, bits) / (pi * pi);
}

// The closed form splits into two geometric pieces:
//   prod 1/((p+1)(p^2-1)) * prod (1+p) = prod 1/(p^2-1)
//   prod 1/((p+1)(p^2-1)) * prod (1-p) = prod -1/(p+1)^2
// so match = (3/pi^2)(prod u + prod v) and nonmatch flips the sign of the
// second product, with u_p = 1/(p^2-1) and v_p = -1/(p+1)^2. Sums of these
// over all r-subsets of a prime pool are elementary symmetric functions,
// which is what the bracket builders below accumulate.
Real signed_density(const std::vector<uint64_t>& primes, int v_sign,
                    mpfr_prec_t bits) {
  Real pu = Real::of(1L, bits);
  Real pv = Real::of(1L, bits);
  for (uint64_t p : primes) {
    if (p > 2000000000ull)
      throw std::invalid_argument("prime beyond supported range");
    pu /= Real::of(static_cast<long>(p * p - 1), bits);
    pv /= Real::of(-static_cast<long>((p + 1) * (p + 1)), bits);
  }
  Real c3 = six_over_pi2(bits) / 2L;
  return v_sign > 0 ? c3 * (pu + pv) : c3 * (pu - pv);
}

}  // namespace

Real match_density(const std::vector<uint64_t>& primes, mpfr_prec_t bits) {
  check_prime_set(primes);
  return signed_density(primes, +1, bits);
}

Real nonmatch_density(const std::vector<uint64_t>& primes, mpfr_prec_t bits) {
  if (primes.empty())
    throw std::invalid_argument("nonmatch density needs a nonempty prime set");
  check_prime_set(primes);
  return signed_density(primes, -1, bits);
}

namespace {

DensityBound assemble_bracket(const Real& sum_u, const Real& sum_v,
                              mpfr_prec_t bits, std::string config) {
  Real c3 = six_over_pi2(bits) / 2L;
  Real lower = six_over_pi2(bits) + c3 * (sum_u + sum_v);
  Real upper = Real::of(1L, bits) - c3 * (sum_u - sum_v);
  // outward padding dominating every rounding error accumulated above
  Real pad = ldexp2(Real::of(1L, bits), -(static_cast<long>(bits) - 96));
  lower -= pad;
  upper += pad;
  return DensityBound{std::move(lower), std::move(upper), std::move(config)};
}

}  // namespace

DensityBound beta_bounds_by_r(const std::vector<uint64_t>& limits,
                              mpfr_prec_t bits, int workers) {
  if (limits.empty()) throw std::invalid_argument("need at least one cap");
  for (uint64_t cap : limits)
    if (cap > 100000000ull)
      throw std::invalid_argument("per-r cap beyond supported budget");

  const int R = static_cast<int>(limits.size());
  std::vector<Real> slot_u(R, Real(bits)), slot_v(R, Real(bits));
  parallel_for(R, workers, [&](int64_t job) {
    const int r = static_cast<int>(job) + 1;
    std::vector<Real> eu(r + 1, Real(bits)), ev(r + 1, Real(bits));
    eu[0] = Real::of(1L, bits);
    ev[0] = Real::of(1L, bits);
    for (uint64_t p : primes_up_to(limits[job])) {
      Real u = Real::of(1L, bits) / Real::of(static_cast<long>(p * p - 1), bits);
      Real v = Real::of(-1L, bits) /
               Real::of(static_cast<long>((p + 1) * (p + 1)), bits);
      for (int j = r; j >= 1; --j) {
        eu[j] += eu[j - 1] * u;
        ev[j] += ev[j - 1] * v;
      }
    }
    slot_u[job] = std::move(eu[r]);
    slot_v[job] = std::move(ev[r]);
  });

  Real sum_u(bits), sum_v(bits);
  for (int i = 0; i < R; ++i) {
    sum_u += slot_u[i];
    sum_v += slot_v[i];
  }
  std::ostringstream cfg;
  cfg << "family=by-r caps=";
  for (int i = 0; i < R; ++i) cfg << (i ? "," : "") << limits[i];
  cfg << " bits=" << bits;
  return assemble_bracket(sum_u, sum_v, bits, cfg.str());
}

DensityBound beta_bounds_by_product(uint64_t product_bound, mpfr_prec_t bits,
                                    int workers) {
  if (product_bound < 1) throw std::invalid_argument("product bound >= 1");
  if (product_bound > 1000000000ull)
    throw std::invalid_argument("product bound beyond supported budget");

  const std::vector<uint64_t> primes =
      product_bound >= 2 ? primes_up_to(product_bound)
                         : std::vector<uint64_t>{};
  const size_t chunk = 2048;
  const size_t njobs = (primes.size() + chunk - 1) / chunk;
  std::vector<Real> slot_u(njobs, Real(bits)), slot_v(njobs, Real(bits));

  parallel_for(static_cast<int64_t>(njobs), workers, [&](int64_t job) {
    Real su(bits), sv(bits);
    // su/sv collect prod u / prod v over every admissible set whose smallest
    // prime lies in this chunk of the prime list
    auto dfs = [&](auto&& self, size_t idx, uint64_t m, const Real& pu,
                   const Real& pv) -> void {
      su += pu;
      sv += pv;
      const uint64_t room = product_bound / m;
      for (size_t j = idx + 1; j < primes.size() && primes[j] <= room; ++j) {
        uint64_t q = primes[j];
        self(self, j, m * q,
             pu / Real::of(static_cast<long>(q * q - 1), bits),
             pv / Real::of(-static_cast<long>((q + 1) * (q + 1)), bits));
      }
    };
    size_t lo = static_cast<size_t>(job) * chunk;
    size_t hi = std::min(primes.size(), lo + chunk);
    for (size_t i = lo; i < hi; ++i) {
      uint64_t p = primes[i];
      dfs(dfs, i, p, Real::of(1L, bits) / Real::of(static_cast<long>(p * p - 1), bits),
          Real::of(-1L, bits) /
              Real::of(static_cast<long>((p + 1) * (p + 1)), bits));
    }
    slot_u[job] = std::move(su);
    slot_v[job] = std::move(sv);
  });

  Real sum_u(bits), sum_v(bits);
  for (size_t i = 0; i < njobs; ++i) {
    sum_u += slot_u[i];
    sum_v += slot_v[i];
  }
  std::ostringstream cfg;
  cfg << "family=by-product B=" << product_bound << " bits=" << bits;
  return assemble_bracket(sum_u, sum_v, bits, cfg.str());
}

namespace {

// truncated polynomial product, degree cap J
std::vector<Real> poly_mul(const std::vector<Real>& a,
                           const std::vector<Real>& b, size_t J,
                           mpfr_prec_t bits) {
  std::vector<Real> c(J + 1, Real(bits));
  for (size_t i = 0; i < a.size() && i <= J; ++i) {
    if (a[i].is_zero()) continue;
    for (size_t j = 0; j < b.size() && i + j <= J; ++j) c[i + j] += a[i] * b[j];
  }
  return c;
}

}  // namespace

RenyiResult renyi_R(const Real& z, uint64_t prime_bound, mpfr_prec_t bits) {
  if (abs(z).cmp(2.0) >= 0) throw std::domain_error("need |z| < 2");
  if (prime_bound < 2) throw std::invalid_argument("prime bound >= 2 required");

  const mpfr_prec_t wp = bits + 16;
  const Real zw = to_prec(z, wp);

  Real prod = Real::of(1L, wp);
  for_primes_up_to(prime_bound, [&](uint64_t p) {
    // 1 + z/((p+1)(p-z))
    Real den = Real::of(static_cast<long>(p), wp) - zw;
    den *= Real::of(static_cast<long>(p + 1), wp);
    prod *= Real::of(1L, wp) + zw / den;
  });
  Real pi = Real::pi(wp);
  Real truncated = prod * Real::of(6L, wp) / (pi * pi);

  // Tail of sum_p log(1 + w_p) as a series in x = 1/p:
  // w = z x^2 / ((1+x)(1-zx)), so [x^j] w = z * sum_{a+b=j-2} (-1)^a z^b.
  // Prime power sums over p > prime_bound come from the prime zeta function.
  const size_t J = 16;
  std::vector<Real> wser(J + 1, Real(wp));
  Real inner = Real::of(1L, wp);
  Real zpow = Real::of(1L, wp);
  for (size_t j = 2; j <= J; ++j) {
    wser[j] = zw * inner;
    inner = zpow * zw - inner;
    zpow *= zw;
  }
  std::vector<Real> lnser = wser;
  std::vector<Real> wpow = wser;
  for (long k = 2; 2 * static_cast<size_t>(k) <= J; ++k) {
    wpow = poly_mul(wpow, wser, J, wp);
    Real coeff = Real::of(k % 2 ? 1L : -1L, wp) / k;
    for (size_t j = 0; j <= J; ++j) lnser[j] += coeff * wpow[j];
  }

  ZetaEvaluator ev;
  Real correction(wp);
  for (size_t j = 2; j <= J; ++j)
    correction += lnser[j] * prime_power_tail(ev, static_cast<int>(j),
                                              prime_bound, wp);
  Real value = truncated * exp(correction);

  Real za = abs(to_prec(z, wp));
  Real tail2 = prime_power_tail(ev, 2, prime_bound, wp);
  Real tail_estimate =
      za * tail2 / (Real::of(1L, wp) - za / static_cast<long>(prime_bound));

  RenyiResult out;
  out.value = to_prec(value, bits);
  out.truncated = to_prec(truncated, bits);
  out.tail_estimate = to_prec(tail_estimate, bits);
  out.prime_bound = prime_bound;
  return out;
}

double empirical_beta(uint64_t x, uint64_t block_size, int workers) {
  if (x < 1) throw std::invalid_argument("x >= 1 required");
  uint64_t limit = suggested_table_limit(x);
  XiTable xi = XiTable::build(limit, SignFunc::XI);
  XiTable lam = XiTable::build(limit, SignFunc::LAMBDA);
  uint64_t agree = count_parity_agreement(x, block_size, xi, lam, workers);
  return static_cast<double>(agree) / static_cast<double>(x);
}

}  // namespace omegasum
