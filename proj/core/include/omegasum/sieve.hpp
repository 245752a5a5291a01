#pragma once

// Table-accelerated segmented sieve for xi(n) = (-1)^omega(n) and
// lambda(n) = (-1)^Omega(n), a companion Moebius sieve, and checkpointed
// summatory series over [1, x_max].
//
// The acceleration table stores one sign bit per n coprime to 30 (so N/30
// bytes for range N) and is grown by bootstrap doubling from the seed byte
// for {1,7,11,13,17,19,23,29}. A block [a,b) is resolved in three phases:
// table lookups on cofactors for primes p in [b/(N-1), sqrt(b)], descending
// trial-division for smaller primes where the skip-known discipline bounds
// the work, and a residual pass for n = 2^r 3^s 5^t p^e with e <= 1.

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace omegasum {

enum class SignFunc { XI, LAMBDA, MU };

std::string func_name(SignFunc f);
SignFunc parse_func(const std::string& s);

class XiTable {
 public:
  // limit_N must be a positive multiple of 30. byte_cap bounds the table
  // allocation (limit_N/30 bytes).
  static XiTable build(uint64_t limit_N, SignFunc func,
                       uint64_t byte_cap = uint64_t(1) << 31);

  uint64_t limit() const { return limit_; }
  SignFunc func() const { return func_; }

  // n must satisfy gcd(n,30)=1 and n < limit().
  int value(uint64_t n) const {
    int pos = kPos30[n % 30];
    return (bytes_[n / 30] >> pos) & 1 ? -1 : 1;
  }

  void save(const std::filesystem::path& p) const;
  static XiTable load(const std::filesystem::path& p);

  static const int8_t kPos30[30];       // residue -> bit position, -1 if none
  static const uint8_t kResidues30[8];  // bit position -> residue

 private:
  XiTable() = default;
  uint64_t limit_ = 0;
  SignFunc func_ = SignFunc::XI;
  std::vector<uint8_t> bytes_;
};

// Block states: 2 bits per integer.
enum : int {
  kStateUnknown = 0,
  kStatePlus = 1,
  kStateMinus = 2,
  kStateZero = 3,  // Moebius only
};

struct BlockResult {
  uint64_t a = 0, b = 0;           // half-open [a,b)
  std::vector<uint8_t> states;     // 2 bits per n
  int64_t partial_sum = 0;

  int raw_state(uint64_t n) const {
    uint64_t i = n - a;
    return (states[i >> 2] >> ((i & 3) * 2)) & 3;
  }
  // +1/-1/0; n must be resolved.
  int value(uint64_t n) const;
};

// Assigns xi or lambda (per table.func()) to every n in [a,b).
// Requires 1 <= a < b and b <= (table.limit()-1)^2.
BlockResult sieve_block(uint64_t a, uint64_t b, const XiTable& table);

// Standard segmented squarefree+parity sieve for mu.
BlockResult sieve_block_mu(uint64_t a, uint64_t b);

struct SummatorySeries {
  SignFunc func = SignFunc::XI;
  uint64_t x_max = 0;
  std::vector<std::pair<uint64_t, int64_t>> checkpoints;  // (x, S(x))
};

// Checkpoints at every multiple of checkpoint_stride plus x_max; stride 0
// selects geometric spacing (one checkpoint per factor e^0.01). Blocks fan
// out across workers; the checkpoint merge is sequential in block order, so
// results do not depend on the worker count. table may be null (one of a
// default size is built) and is ignored for MU.
SummatorySeries summatory(uint64_t x_max, uint64_t block_size, SignFunc func,
                          uint64_t checkpoint_stride = 0,
                          const XiTable* table = nullptr, int workers = 1);

void save_summatory(const std::filesystem::path& p,
                    const SummatorySeries& series,
                    const std::vector<std::pair<std::string, std::string>>&
                        extra_meta = {});
SummatorySeries load_summatory(const std::filesystem::path& p);

// Rows (u, S(e^u)/e^(u/2)) = (log x, S(x)/sqrt(x)) at each checkpoint.
std::vector<std::pair<double, double>> normalized_export(
    const SummatorySeries& series);

// Table limit that keeps block work table-bound for sieving up to x_max:
// a multiple of 30 comfortably above sqrt(x_max), capped at 3e8.
uint64_t suggested_table_limit(uint64_t x_max);

// omega / Omega of n by trial division.
std::pair<uint32_t, uint32_t> omega_pair_bruteforce(uint64_t n);

struct AverageOrderReport {
  uint64_t x = 0;
  uint64_t sum_omega = 0;
  uint64_t sum_big_omega = 0;
  double A_est = 0.0;  // (sum_omega - x log log x)/x
  double B_est = 0.0;
};

// Exact sums via sum_{p^k <= x} floor(x/p^k); no per-n storage.
AverageOrderReport average_order_report(uint64_t x_max);

// Number of n <= x with omega(n) = Omega(n) mod 2, via parallel dual blocks.
uint64_t count_parity_agreement(uint64_t x, uint64_t block_size,
                                const XiTable& xi_table,
                                const XiTable& lambda_table, int workers);

}  // namespace omegasum
