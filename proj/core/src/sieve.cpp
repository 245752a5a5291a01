#include "omegasum/sieve.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "omegasum/artifact.hpp"
#include "omegasum/parallel.hpp"
#include "omegasum/primes.hpp"

namespace omegasum {

const int8_t XiTable::kPos30[30] = {
    -1, 0,  -1, -1, -1, -1, -1, 1,  -1, -1, -1, 2,  -1, 3,  -1,
    -1, -1, 4,  -1, 5,  -1, -1, -1, 6,  -1, -1, -1, -1, -1, 7};

const uint8_t XiTable::kResidues30[8] = {1, 7, 11, 13, 17, 19, 23, 29};

std::string func_name(SignFunc f) {
  switch (f) {
    case SignFunc::XI: return "xi";
    case SignFunc::LAMBDA: return "lambda";
    case SignFunc::MU: return "mu";
  }
  return "?";
}

SignFunc parse_func(const std::string& s) {
  if (s == "xi") return SignFunc::XI;
  if (s == "lambda") return SignFunc::LAMBDA;
  if (s == "mu") return SignFunc::MU;
  throw std::invalid_argument("unknown sign function '" + s + "'");
}

namespace {

struct Stripped {
  uint64_t core;
  int distinct;
  int total;
};

inline Stripped strip235(uint64_t k) {
  Stripped s{k, 0, 0};
  if ((s.core & 1) == 0) {
    int z = std::countr_zero(s.core);
    s.core >>= z;
    s.distinct += 1;
    s.total += z;
  }
  if (s.core % 3 == 0) {
    s.distinct += 1;
    do {
      s.core /= 3;
      s.total += 1;
    } while (s.core % 3 == 0);
  }
  if (s.core % 5 == 0) {
    s.distinct += 1;
    do {
      s.core /= 5;
      s.total += 1;
    } while (s.core % 5 == 0);
  }
  return s;
}

inline void set2(std::vector<uint8_t>& v, uint64_t i, int st) {
  uint64_t byte = i >> 2;
  int sh = static_cast<int>(i & 3) * 2;
  v[byte] = static_cast<uint8_t>((v[byte] & ~(3u << sh)) | (unsigned(st) << sh));
}

inline int get2(const std::vector<uint8_t>& v, uint64_t i) {
  return (v[i >> 2] >> ((i & 3) * 2)) & 3;
}

uint64_t isqrt_u64(uint64_t n) {
  uint64_t r = static_cast<uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

uint64_t round_up30(uint64_t n) { return ((n + 29) / 30) * 30; }

}  // namespace

int BlockResult::value(uint64_t n) const {
  switch (raw_state(n)) {
    case kStatePlus: return 1;
    case kStateMinus: return -1;
    case kStateZero: return 0;
  }
  throw std::logic_error("block value still unknown");
}

XiTable XiTable::build(uint64_t limit_N, SignFunc func, uint64_t byte_cap) {
  if (func == SignFunc::MU)
    throw std::invalid_argument("xi table holds xi or lambda only");
  if (limit_N < 30 || limit_N % 30 != 0)
    throw std::invalid_argument("table limit must be a positive multiple of 30");
  if (limit_N / 30 > byte_cap)
    throw std::invalid_argument("table would exceed the byte cap");

  XiTable t;
  t.func_ = func;
  t.bytes_.assign(limit_N / 30, 0);
  // Seed byte over {1,7,11,13,17,19,23,29}: 1 maps to +1, the rest are prime.
  t.bytes_[0] = 0xfe;
  t.limit_ = 30;

  while (t.limit_ < limit_N) {
    uint64_t next = std::min(limit_N, t.limit_ * 2);
    BlockResult blk = sieve_block(t.limit_, next, t);
    for (uint64_t n = t.limit_; n < next; ++n) {
      int pos = kPos30[n % 30];
      if (pos < 0) continue;
      if (blk.value(n) < 0) t.bytes_[n / 30] |= uint8_t(1) << pos;
    }
    t.limit_ = next;
  }
  return t;
}

void XiTable::save(const std::filesystem::path& p) const {
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << "xitable v1 func=" << func_name(func_) << " limit=" << limit_ << "\n";
  out.write(reinterpret_cast<const char*>(bytes_.data()),
            static_cast<std::streamsize>(bytes_.size()));
  if (!out) throw std::runtime_error("write failed: " + p.string());
}

XiTable XiTable::load(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::string header;
  std::getline(in, header);
  std::istringstream hs(header);
  std::string magic, version, funckv, limitkv;
  hs >> magic >> version >> funckv >> limitkv;
  if (magic != "xitable" || version != "v1" ||
      funckv.rfind("func=", 0) != 0 || limitkv.rfind("limit=", 0) != 0)
    throw std::runtime_error("bad xi table header in " + p.string());
  XiTable t;
  t.func_ = parse_func(funckv.substr(5));
  t.limit_ = std::stoull(limitkv.substr(6));
  if (t.limit_ < 30 || t.limit_ % 30 != 0)
    throw std::runtime_error("bad xi table limit in " + p.string());
  t.bytes_.resize(t.limit_ / 30);
  in.read(reinterpret_cast<char*>(t.bytes_.data()),
          static_cast<std::streamsize>(t.bytes_.size()));
  if (in.gcount() != static_cast<std::streamsize>(t.bytes_.size()))
    throw std::runtime_error("truncated xi table " + p.string());
  return t;
}

BlockResult sieve_block(uint64_t a, uint64_t b, const XiTable& table) {
  if (a < 1 || a >= b) throw std::invalid_argument("need 1 <= a < b");
  uint64_t N = table.limit();
  if (static_cast<__uint128_t>(b) >
      static_cast<__uint128_t>(N - 1) * (N - 1))
    throw std::invalid_argument("block end beyond (table limit - 1)^2");

  const bool lambda_mode = table.func() == SignFunc::LAMBDA;
  const uint64_t len = b - a;
  BlockResult res;
  res.a = a;
  res.b = b;
  res.states.assign((len + 3) / 4, 0);

  const uint64_t sqrt_b = isqrt_u64(b - 1);
  const std::vector<uint64_t> primes = primes_up_to(sqrt_b);
  size_t first7 = 0;
  while (first7 < primes.size() && primes[first7] < 7) ++first7;
  const uint64_t hi_lo = (b + N - 2) / (N - 1);  // ceil(b/(N-1))

  // Phase 1: primes with cofactor below the table limit; one lookup each.
  for (size_t pi = first7; pi < primes.size(); ++pi) {
    uint64_t p = primes[pi];
    if (p < hi_lo) continue;
    for (uint64_t n = ((a + p - 1) / p) * p; n < b; n += p) {
      uint64_t i = n - a;
      if (get2(res.states, i) != kStateUnknown) continue;
      uint64_t k = n / p;
      Stripped s = strip235(k);
      int sign = table.value(s.core);
      int parity = lambda_mode ? s.total + 1
                               : s.distinct + (k % p == 0 ? 0 : 1);
      if (parity & 1) sign = -sign;
      set2(res.states, i, sign > 0 ? kStatePlus : kStateMinus);
    }
  }

  // Phase 2: descending trial-division pass. An entry still unknown at prime
  // p has no prime factor in (p, sqrt(b)], so after dividing out everything
  // up to p the leftover cofactor is 1, below the table limit, or prime.
  if (hi_lo >= 8) {
    size_t pi = primes.size();
    while (pi > first7 && primes[pi - 1] >= hi_lo) --pi;
    for (; pi > first7; --pi) {
      uint64_t p = primes[pi - 1];
      for (uint64_t n = ((a + p - 1) / p) * p; n < b; n += p) {
        uint64_t i = n - a;
        if (get2(res.states, i) != kStateUnknown) continue;
        Stripped s = strip235(n);
        uint64_t c = s.core;
        int dist = s.distinct, tot = s.total;
        for (size_t qi = first7; qi < primes.size() && primes[qi] <= p; ++qi) {
          if (c < N) break;
          uint64_t q = primes[qi];
          if (c % q == 0) {
            ++dist;
            do {
              c /= q;
              ++tot;
            } while (c % q == 0);
          }
        }
        if (c >= N) {
          if (!is_prime_u64(c))
            throw std::logic_error("sieve: leftover cofactor not prime");
          ++dist;
          ++tot;
          c = 1;
        }
        int sign = c == 1 ? 1 : table.value(c);
        int parity = lambda_mode ? tot : dist;
        if (parity & 1) sign = -sign;
        set2(res.states, i, sign > 0 ? kStatePlus : kStateMinus);
      }
    }
  }

  // Phase 3: survivors are 2^r 3^s 5^t times at most one large prime.
  int64_t sum = 0;
  for (uint64_t i = 0; i < len; ++i) {
    int st = get2(res.states, i);
    if (st == kStateUnknown) {
      uint64_t n = a + i;
      Stripped s = strip235(n);
      uint64_t c = s.core;
      int dist = s.distinct, tot = s.total;
      int sign;
      if (c == 1) {
        sign = 1;
      } else if (c < N) {
        sign = table.value(c);
      } else {
        if (!is_prime_u64(c))
          throw std::logic_error("sieve: residual cofactor not prime");
        sign = -1;
      }
      int parity = lambda_mode ? tot : dist;
      if (parity & 1) sign = -sign;
      st = sign > 0 ? kStatePlus : kStateMinus;
      set2(res.states, i, st);
    }
    sum += st == kStatePlus ? 1 : -1;
  }
  res.partial_sum = sum;
  return res;
}

BlockResult sieve_block_mu(uint64_t a, uint64_t b) {
  if (a < 1 || a >= b) throw std::invalid_argument("need 1 <= a < b");
  const uint64_t len = b - a;
  BlockResult res;
  res.a = a;
  res.b = b;
  res.states.assign((len + 3) / 4, 0);

  const uint64_t kSub = uint64_t(1) << 20;
  std::vector<uint64_t> rem;
  std::vector<int8_t> sgn;
  std::vector<uint8_t> zero;
  int64_t sum = 0;
  for (uint64_t lo = a; lo < b; lo += kSub) {
    uint64_t hi = std::min(b, lo + kSub);
    uint64_t L = hi - lo;
    rem.resize(L);
    std::iota(rem.begin(), rem.end(), lo);
    sgn.assign(L, 1);
    zero.assign(L, 0);
    for (uint64_t q : primes_up_to(isqrt_u64(hi - 1))) {
      uint64_t q2 = q * q;
      for (uint64_t m = ((lo + q2 - 1) / q2) * q2; m < hi; m += q2)
        zero[m - lo] = 1;
      for (uint64_t m = ((lo + q - 1) / q) * q; m < hi; m += q) {
        uint64_t i = m - lo;
        sgn[i] = -sgn[i];
        do {
          rem[i] /= q;
        } while (rem[i] % q == 0);
      }
    }
    for (uint64_t i = 0; i < L; ++i) {
      int st;
      if (zero[i]) {
        st = kStateZero;
      } else {
        int s = rem[i] > 1 ? -sgn[i] : sgn[i];
        st = s > 0 ? kStatePlus : kStateMinus;
        sum += s;
      }
      set2(res.states, lo - a + i, st);
    }
  }
  res.partial_sum = sum;
  return res;
}

namespace {

std::vector<uint64_t> checkpoint_xs(uint64_t x_max, uint64_t stride) {
  std::vector<uint64_t> xs;
  if (stride == 0) {
    // geometric, one checkpoint per factor e^0.01
    for (int k = 0;; ++k) {
      uint64_t x = static_cast<uint64_t>(std::llround(std::exp(0.01 * k)));
      if (x > x_max) break;
      if (xs.empty() || x > xs.back()) xs.push_back(x);
    }
  } else {
    for (uint64_t x = stride; x <= x_max; x += stride) xs.push_back(x);
  }
  if (xs.empty() || xs.back() != x_max) xs.push_back(x_max);
  return xs;
}

}  // namespace

uint64_t suggested_table_limit(uint64_t x_max) {
  uint64_t root = isqrt_u64(x_max) + 2;
  uint64_t want = std::max<uint64_t>(root * 16, 30030);
  want = std::min<uint64_t>(want, 300000000ull);
  want = std::max<uint64_t>(want, root + 2);
  return round_up30(want);
}

SummatorySeries summatory(uint64_t x_max, uint64_t block_size, SignFunc func,
                          uint64_t checkpoint_stride, const XiTable* table,
                          int workers) {
  if (x_max < 1) throw std::invalid_argument("x_max >= 1 required");
  if (block_size < 30) throw std::invalid_argument("block_size >= 30 required");

  std::optional<XiTable> own;
  if (func != SignFunc::MU) {
    if (table == nullptr) {
      own = XiTable::build(suggested_table_limit(x_max), func);
      table = &*own;
    } else if (table->func() != func) {
      throw std::invalid_argument("table function does not match request");
    }
  }

  std::vector<uint64_t> cps = checkpoint_xs(x_max, checkpoint_stride);
  uint64_t nblocks = (x_max + block_size - 1) / block_size;

  struct BlockOut {
    int64_t sum = 0;
    std::vector<int64_t> cp_prefix;  // aligned with checkpoints inside block
  };
  std::vector<BlockOut> outs(nblocks);

  // first checkpoint index per block, found once up front
  std::vector<size_t> cp_begin(nblocks + 1, cps.size());
  {
    size_t ci = 0;
    for (uint64_t bi = 0; bi < nblocks; ++bi) {
      uint64_t lo = 1 + bi * block_size;
      while (ci < cps.size() && cps[ci] < lo) ++ci;  // unreachable, safety
      cp_begin[bi] = ci;
      uint64_t hi = std::min(x_max + 1, lo + block_size);
      while (ci < cps.size() && cps[ci] < hi) ++ci;
    }
    cp_begin[nblocks] = cps.size();
  }

  parallel_for(static_cast<int64_t>(nblocks), workers, [&](int64_t bi) {
    uint64_t lo = 1 + static_cast<uint64_t>(bi) * block_size;
    uint64_t hi = std::min(x_max + 1, lo + block_size);
    BlockResult blk = func == SignFunc::MU ? sieve_block_mu(lo, hi)
                                           : sieve_block(lo, hi, *table);
    BlockOut& out = outs[bi];
    out.sum = blk.partial_sum;
    size_t ci = cp_begin[bi], ce = cp_begin[bi + 1];
    if (ci == ce) return;
    int64_t run = 0;
    uint64_t next_cp = cps[ci];
    for (uint64_t n = lo; n < hi; ++n) {
      run += blk.value(n);
      if (n == next_cp) {
        out.cp_prefix.push_back(run);
        if (++ci == ce) break;
        next_cp = cps[ci];
      }
    }
  });

  SummatorySeries series;
  series.func = func;
  series.x_max = x_max;
  series.checkpoints.reserve(cps.size());
  int64_t offset = 0;
  for (uint64_t bi = 0; bi < nblocks; ++bi) {
    const BlockOut& out = outs[bi];
    for (size_t j = 0; j < out.cp_prefix.size(); ++j)
      series.checkpoints.emplace_back(cps[cp_begin[bi] + j],
                                      offset + out.cp_prefix[j]);
    offset += out.sum;
  }
  return series;
}

void save_summatory(const std::filesystem::path& p,
                    const SummatorySeries& series,
                    const std::vector<std::pair<std::string, std::string>>&
                        extra_meta) {
  Artifact a = new_artifact();
  a.add("kind", "summatory");
  a.add("func", func_name(series.func));
  a.add("x_max", std::to_string(series.x_max));
  for (const auto& [k, v] : extra_meta) a.add(k, v);
  a.add("columns", "x,S");
  for (const auto& [x, S] : series.checkpoints)
    a.rows.push_back(std::to_string(x) + "," + std::to_string(S));
  save_artifact(p, a);
}

SummatorySeries load_summatory(const std::filesystem::path& p) {
  Artifact a = load_artifact(p);
  SummatorySeries s;
  s.func = parse_func(a.get("func"));
  s.x_max = std::stoull(a.get("x_max"));
  for (const auto& row : a.rows) {
    size_t comma = row.find(',');
    if (comma == std::string::npos)
      throw std::runtime_error("bad summatory row '" + row + "'");
    s.checkpoints.emplace_back(std::stoull(row.substr(0, comma)),
                               std::stoll(row.substr(comma + 1)));
  }
  return s;
}

std::vector<std::pair<double, double>> normalized_export(
    const SummatorySeries& series) {
  if (series.checkpoints.empty())
    throw std::invalid_argument("empty summatory series");
  std::vector<std::pair<double, double>> rows;
  rows.reserve(series.checkpoints.size());
  for (const auto& [x, S] : series.checkpoints) {
    double xd = static_cast<double>(x);
    rows.emplace_back(std::log(xd),
                      static_cast<double>(S) / std::sqrt(xd));
  }
  return rows;
}

std::pair<uint32_t, uint32_t> omega_pair_bruteforce(uint64_t n) {
  OmegaPair c = factor_count(n);
  return {c.distinct, c.with_multiplicity};
}

AverageOrderReport average_order_report(uint64_t x_max) {
  if (x_max < 16) throw std::invalid_argument("x_max >= 16 required");
  AverageOrderReport r;
  r.x = x_max;
  for_primes_up_to(x_max, [&](uint64_t p) {
    r.sum_omega += x_max / p;
    uint64_t pk = p;
    for (;;) {
      r.sum_big_omega += x_max / pk;
      if (pk > x_max / p) break;
      pk *= p;
    }
  });
  double x = static_cast<double>(x_max);
  double lll = x * std::log(std::log(x));
  r.A_est = (static_cast<double>(r.sum_omega) - lll) / x;
  r.B_est = (static_cast<double>(r.sum_big_omega) - lll) / x;
  return r;
}

uint64_t count_parity_agreement(uint64_t x, uint64_t block_size,
                                const XiTable& xi_table,
                                const XiTable& lambda_table, int workers) {
  if (x < 1) throw std::invalid_argument("x >= 1 required");
  if (xi_table.func() != SignFunc::XI ||
      lambda_table.func() != SignFunc::LAMBDA)
    throw std::invalid_argument("need one xi table and one lambda table");
  uint64_t nblocks = (x + block_size - 1) / block_size;
  std::vector<uint64_t> counts(nblocks, 0);
  parallel_for(static_cast<int64_t>(nblocks), workers, [&](int64_t bi) {
    uint64_t lo = 1 + static_cast<uint64_t>(bi) * block_size;
    uint64_t hi = std::min(x + 1, lo + block_size);
    BlockResult bx = sieve_block(lo, hi, xi_table);
    BlockResult bl = sieve_block(lo, hi, lambda_table);
    uint64_t c = 0;
    for (uint64_t n = lo; n < hi; ++n)
      if (bx.raw_state(n) == bl.raw_state(n)) ++c;
    counts[bi] = c;
  });
  uint64_t total = 0;
  for (uint64_t c : counts) total += c;
  return total;
}

}  // namespace omegasum
