#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "omegasum/artifact.hpp"
#include "omegasum/primes.hpp"
#include "omegasum/sieve.hpp"
#include "test_util.hpp"

using namespace omegasum;
using testutil::TempDir;

namespace {

int slow_value(SignFunc f, uint64_t n) {
  switch (f) {
    case SignFunc::XI: return xi_slow(n);
    case SignFunc::LAMBDA: return lambda_slow(n);
    default: return mu_slow(n);
  }
}

void check_block_range(const BlockResult& r, SignFunc f) {
  int64_t sum = 0;
  for (uint64_t n = r.a; n < r.b; ++n) {
    int v = r.value(n);
    CHECK(v == slow_value(f, n));
    sum += v;
  }
  CHECK(sum == r.partial_sum);
}

}  // namespace

TEST_SUITE("sieve") {

TEST_CASE("function names") {
  CHECK(func_name(SignFunc::XI) == "xi");
  CHECK(parse_func("lambda") == SignFunc::LAMBDA);
  CHECK(parse_func(func_name(SignFunc::MU)) == SignFunc::MU);
  CHECK_THROWS(parse_func("nu"));
}

TEST_CASE("residue tables are mutually inverse") {
  int hits = 0;
  for (int r = 0; r < 30; ++r) {
    if (XiTable::kPos30[r] >= 0) {
      CHECK(XiTable::kResidues30[XiTable::kPos30[r]] == r);
      ++hits;
    } else {
      CHECK(std::gcd(r, 30) > 1);
    }
  }
  CHECK(hits == 8);
}

TEST_CASE("acceleration table agrees with trial division") {
  XiTable xi = XiTable::build(30030, SignFunc::XI);
  XiTable la = XiTable::build(30030, SignFunc::LAMBDA);
  CHECK(xi.limit() == 30030);
  CHECK(xi.func() == SignFunc::XI);
  for (uint64_t n = 1; n < 30030; ++n) {
    if (std::gcd(n, uint64_t(30)) != 1) continue;
    CHECK(xi.value(n) == xi_slow(n));
    CHECK(la.value(n) == lambda_slow(n));
  }
}

TEST_CASE("table persists") {
  TempDir td;
  XiTable la = XiTable::build(60060, SignFunc::LAMBDA);
  auto p = td.file("lambda.tbl");
  la.save(p);
  XiTable back = XiTable::load(p);
  CHECK(back.limit() == 60060);
  CHECK(back.func() == SignFunc::LAMBDA);
  for (uint64_t n : {1ull, 7ull, 101ull, 30031ull, 60059ull})
    CHECK(back.value(n) == la.value(n));
}

TEST_CASE("blocks match trial division everywhere") {
  XiTable xi = XiTable::build(30030, SignFunc::XI);
  XiTable la = XiTable::build(30030, SignFunc::LAMBDA);
  for (auto [a, b] : std::vector<std::pair<uint64_t, uint64_t>>{
           {1, 1000}, {999983, 1000100}, {123456, 125000}, {2, 3}}) {
    check_block_range(sieve_block(a, b, xi), SignFunc::XI);
    check_block_range(sieve_block(a, b, la), SignFunc::LAMBDA);
    check_block_range(sieve_block_mu(a, b), SignFunc::MU);
  }
}

TEST_CASE("summatory values and known points") {
  XiTable xi = XiTable::build(30030, SignFunc::XI);
  BlockResult r = sieve_block(1, 11, xi);
  CHECK(r.partial_sum == -4);  // H(10)

  XiTable la = XiTable::build(30030, SignFunc::LAMBDA);
  BlockResult rl = sieve_block(1, 41, la);
  int64_t L = 0;
  for (uint64_t n = 1; n <= 40; ++n) {
    L += rl.value(n);
    if (n == 2 || n == 4 || n == 10 || n == 16 || n == 40) CHECK(L == 0);
  }
}

TEST_CASE("checkpoint series against prefix sums") {
  for (SignFunc f : {SignFunc::XI, SignFunc::LAMBDA, SignFunc::MU}) {
    SummatorySeries s = summatory(1000, 128, f, 100);
    std::vector<int64_t> prefix(1001, 0);
    for (uint64_t n = 1; n <= 1000; ++n)
      prefix[n] = prefix[n - 1] + slow_value(f, n);
    REQUIRE(!s.checkpoints.empty());
    CHECK(s.checkpoints.back().first == 1000);
    for (auto [x, v] : s.checkpoints) {
      CHECK(x % 100 == 0);
      CHECK(v == prefix[x]);
    }
  }
}

TEST_CASE("worker fanout changes nothing") {
  SummatorySeries a = summatory(20000, 1024, SignFunc::XI, 1000, nullptr, 1);
  SummatorySeries b = summatory(20000, 1024, SignFunc::XI, 1000, nullptr, 4);
  CHECK(a.checkpoints == b.checkpoints);
}

TEST_CASE("geometric checkpoints") {
  SummatorySeries s = summatory(1000, 256, SignFunc::LAMBDA);
  REQUIRE(s.checkpoints.size() >= 2);
  CHECK(s.checkpoints.back().first == 1000);
  for (size_t i = 1; i < s.checkpoints.size(); ++i)
    CHECK(s.checkpoints[i - 1].first < s.checkpoints[i].first);
}

TEST_CASE("summatory persists with extra metadata") {
  TempDir td;
  SummatorySeries s = summatory(500, 64, SignFunc::MU, 50);
  auto p = td.file("mu.sum");
  save_summatory(p, s, {{"note", "fixture"}});
  SummatorySeries back = load_summatory(p);
  CHECK(back.func == SignFunc::MU);
  CHECK(back.x_max == 500);
  CHECK(back.checkpoints == s.checkpoints);

  Artifact a = load_artifact(p);
  CHECK(a.get("note") == "fixture");
}

TEST_CASE("normalized export") {
  SummatorySeries s = summatory(400, 64, SignFunc::XI, 200);
  auto rows = normalized_export(s);
  REQUIRE(rows.size() == s.checkpoints.size());
  for (size_t i = 0; i < rows.size(); ++i) {
    double x = double(s.checkpoints[i].first);
    CHECK(rows[i].first == doctest::Approx(std::log(x)).epsilon(1e-12));
    CHECK(rows[i].second ==
          doctest::Approx(double(s.checkpoints[i].second) / std::sqrt(x))
              .epsilon(1e-12));
  }
}

TEST_CASE("suggested table limits") {
  CHECK(suggested_table_limit(100) == 30030);
  uint64_t t = suggested_table_limit(uint64_t(1e12));
  CHECK(t % 30 == 0);
  CHECK(t >= 16000000);
  CHECK(suggested_table_limit(uint64_t(4e16)) == 300000000);
}

TEST_CASE("factor pair brute force") {
  for (uint64_t n = 1; n <= 500; ++n) {
    auto [om, bg] = omega_pair_bruteforce(n);
    OmegaPair ref = factor_count(n);
    CHECK(om == ref.distinct);
    CHECK(bg == ref.with_multiplicity);
  }
}

TEST_CASE("average order sums are exact") {
  AverageOrderReport rep = average_order_report(1000);
  uint64_t so = 0, sb = 0;
  for (uint64_t n = 2; n <= 1000; ++n) {
    OmegaPair pr = factor_count(n);
    so += pr.distinct;
    sb += pr.with_multiplicity;
  }
  CHECK(rep.x == 1000);
  CHECK(rep.sum_omega == so);
  CHECK(rep.sum_big_omega == sb);
}

TEST_CASE("parity agreement counts") {
  XiTable xi = XiTable::build(30030, SignFunc::XI);
  XiTable la = XiTable::build(30030, SignFunc::LAMBDA);
  CHECK(count_parity_agreement(10, 16, xi, la, 1) == 8);
  uint64_t slow = 0;
  for (uint64_t n = 1; n <= 5000; ++n)
    if (xi_slow(n) == lambda_slow(n)) ++slow;
  CHECK(count_parity_agreement(5000, 256, xi, la, 1) == slow);
  CHECK(count_parity_agreement(5000, 256, xi, la, 3) == slow);
  CHECK_THROWS(count_parity_agreement(100, 16, xi, xi, 1));
}

}  // TEST_SUITE
