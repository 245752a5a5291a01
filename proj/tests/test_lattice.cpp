#include <doctest.h>

#include <gmpxx.h>

#include <filesystem>
#include <random>
#include <stdexcept>
#include <vector>

#include "omegasum/lattice.hpp"
#include "test_util.hpp"

using namespace omegasum;
using testutil::TempDir;

namespace {

const char* kFirstFive[] = {
    "14.1347251417346937904572519835624702707842571156992431756856",
    "21.0220396387715549926284795938969027773343405249027817546295",
    "25.0108575801456887632137909925628218186595496725579966724965",
    "30.4248761258595132103118975305840913201815600237154401809621",
    "32.9350615877391896906623689640749034888127156035170390092800",
};

ZeroTable five_zeros() {
  std::vector<ZeroRecord> recs;
  for (int i = 0; i < 5; ++i)
    recs.push_back({i + 1, Real::parse(kFirstFive[i], 220), 190});
  return ZeroTable(std::move(recs), "test fixture");
}

LatticeBasis square_basis(std::vector<std::vector<long>> rows) {
  LatticeBasis b;
  b.dim = int(rows.size());
  b.ambient = int(rows[0].size());
  for (auto& r : rows) b.rows.emplace_back(r.begin(), r.end());
  return b;
}

mpz_class det3(const std::vector<std::vector<mpz_class>>& m) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
         m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

// U * original == reduced, entrywise
bool transform_maps(const std::vector<std::vector<mpz_class>>& U,
                    const LatticeBasis& original, const LatticeBasis& reduced) {
  for (int i = 0; i < original.dim; ++i)
    for (int t = 0; t < original.ambient; ++t) {
      mpz_class acc = 0;
      for (int j = 0; j < original.dim; ++j)
        acc += U[i][j] * original.rows[j][t];
      if (acc != reduced.rows[i][t]) return false;
    }
  return true;
}

// exact size-reduction and Lovasz checks; valid for the exact engine output
void verify_invariants(const LatticeBasis& b, double delta) {
  int m = b.dim, amb = b.ambient;
  std::vector<std::vector<mpq_class>> gs(m, std::vector<mpq_class>(amb));
  std::vector<std::vector<mpq_class>> mu(m, std::vector<mpq_class>(m));
  std::vector<mpq_class> nsq(m);
  for (int i = 0; i < m; ++i) {
    for (int t = 0; t < amb; ++t) gs[i][t] = b.rows[i][t];
    for (int j = 0; j < i; ++j) {
      mpq_class num = 0;
      for (int t = 0; t < amb; ++t) num += mpq_class(b.rows[i][t]) * gs[j][t];
      mu[i][j] = num / nsq[j];
      for (int t = 0; t < amb; ++t) gs[i][t] -= mu[i][j] * gs[j][t];
    }
    nsq[i] = 0;
    for (int t = 0; t < amb; ++t) nsq[i] += gs[i][t] * gs[i][t];
    REQUIRE(nsq[i] > 0);
  }
  mpq_class half(1, 2), del(delta);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < i; ++j) CHECK(abs(mu[i][j]) <= half);
  for (int k = 1; k < m; ++k)
    CHECK(del * nsq[k - 1] <= nsq[k] + mu[k][k - 1] * mu[k][k - 1] * nsq[k - 1]);
}

}  // namespace

TEST_SUITE("lattice") {

TEST_CASE("bases carry the scaled ordinates") {
  std::vector<Real> g = {Real::of(1.5, 80), Real::of(2.25, 80)};
  LatticeBasis b = build_lattice(g, nullptr, 4);
  CHECK(b.dim == 2);
  CHECK(b.ambient == 3);
  CHECK(b.kind == LatticeKind::LAMBDA0);
  CHECK(b.rows[0] == std::vector<mpz_class>{1, 0, 24});
  CHECK(b.rows[1] == std::vector<mpz_class>{0, 1, 36});

  Real star = Real::of(3.0, 80);
  LatticeBasis bs = build_lattice(g, &star, 4);
  CHECK(bs.kind == LatticeKind::LAMBDA_I);
  CHECK(bs.dim == 3);
  CHECK(bs.rows[2] == std::vector<mpz_class>{0, 0, 1, 48});

  // 2^b gamma landing on .5 rounds to even
  std::vector<Real> ties = {Real::of(2.53125, 80), Real::of(2.59375, 80)};
  LatticeBasis bt = build_lattice(ties, nullptr, 4);
  CHECK(bt.rows[0][2] == 40);
  CHECK(bt.rows[1][2] == 42);

  CHECK_THROWS_AS(build_lattice({Real::of(1.5, 12)}, nullptr, 4),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_lattice({}, nullptr, 4), std::invalid_argument);
  CHECK_THROWS_AS(build_lattice(g, nullptr, 0), std::invalid_argument);
  std::vector<Real> dup = {Real::of(1.5, 80), Real::of(1.5, 80)};
  CHECK_THROWS_AS(build_lattice(dup, nullptr, 4), std::invalid_argument);
}

TEST_CASE("reduction is unimodular and reaches a short vector") {
  LatticeBasis basis = square_basis({{1, 1, 1}, {-1, 0, 2}, {3, 5, 6}});
  std::vector<std::vector<mpz_class>> U;
  LatticeBasis red = lll_reduce(basis, 0.75, &U);
  CHECK(abs(det3(U)) == 1);
  CHECK(transform_maps(U, basis, red));

  // this lattice contains (0,1,0); LLL must land within its guarantee
  mpz_class first = 0;
  for (const auto& e : red.rows[0]) first += e * e;
  CHECK(first <= 4);

  LatticeBasis exact = lll_reduce(basis, 0.75, nullptr, true);
  verify_invariants(exact, 0.75);

  CHECK_THROWS_AS(lll_reduce(basis, 1.5), std::invalid_argument);
  CHECK_THROWS_AS(lll_reduce(basis, 0.25), std::invalid_argument);
}

TEST_CASE("float and exact engines agree on ordinate lattices") {
  ZeroTable t = five_zeros();
  std::vector<Real> g;
  for (int i = 1; i <= 4; ++i) g.push_back(t.gamma(i));
  LatticeBasis basis = build_lattice(g, &t.gamma(5), 48);
  LatticeBasis fast = lll_reduce(basis, 0.99);
  LatticeBasis slow = lll_reduce(basis, 0.99, nullptr, true);
  CHECK(fast.rows == slow.rows);
  verify_invariants(slow, 0.99);
}

TEST_CASE("gram schmidt floor") {
  CHECK(gram_schmidt_min_norm_sq(square_basis({{3, 0, 0}, {1, 2, 0}})) == 4);
  CHECK(gram_schmidt_min_norm_sq(square_basis({{2, 3}})) == 13);
  CHECK_THROWS_AS(
      gram_schmidt_min_norm_sq(square_basis({{1, 2, 3}, {2, 4, 6}})),
      std::invalid_argument);
}

TEST_CASE("certification thresholds") {
  CHECK(certify_N(mpq_class(33), 4, LatticeKind::LAMBDA0) == 2);
  CHECK(certify_N(mpq_class(33), 4, LatticeKind::LAMBDA_I) == 1);
  CHECK(certify_N(mpq_class(1), 4, LatticeKind::LAMBDA0) == 0);
  CHECK(certify_N(mpq_class(33, 2), 4, LatticeKind::LAMBDA0) == 1);
  CHECK(certify_N(mpq_class(1000000), 4, LatticeKind::LAMBDA0) == 353);
  CHECK_THROWS_AS(certify_N(mpq_class(33), 0, LatticeKind::LAMBDA0),
                  std::invalid_argument);
  CHECK_THROWS_AS(certify_N(mpq_class(0), 4, LatticeKind::LAMBDA0),
                  std::invalid_argument);
}

TEST_CASE("planted relations block certification") {
  // exact relation g3 = g1 + g2 at any scale
  std::vector<Real> g = {Real::of(1.25, 128), Real::of(2.75, 128),
                         Real::of(4.0, 128)};
  LatticeBasis red = lll_reduce(build_lattice(g, nullptr, 20), 0.99);
  mpq_class floor_sq = gram_schmidt_min_norm_sq(red);
  CHECK(floor_sq <= 3);
  CHECK(certify_N(floor_sq, 3, LatticeKind::LAMBDA0) == 0);

  std::mt19937_64 rng(20240817);
  for (int trial = 0; trial < 5; ++trial) {
    // grid ordinates make the planted relation survive rounding exactly
    auto grid = [&] {
      return Real::of(double(2 + rng() % 100000) / 1024.0, 128);
    };
    Real a = grid(), b = grid(), c = grid();
    Real planted = a + b * 2L - c;
    if (planted.sign() <= 0 || planted == a || planted == b || planted == c)
      continue;
    std::vector<Real> gs = {a, b, c, planted};
    LatticeBasis r = lll_reduce(build_lattice(gs, nullptr, 30), 0.99);
    // (1,2,-1,-1,0) witnesses the relation, so the floor cannot exceed 7
    mpq_class fl = gram_schmidt_min_norm_sq(r);
    CHECK(fl <= 7);
    CHECK(certify_N(fl, 4, LatticeKind::LAMBDA0) == 0);
  }

  // generic ordinates at the same scale certify comfortably
  ZeroTable t = five_zeros();
  std::vector<Real> real_g;
  for (int i = 1; i <= 4; ++i) real_g.push_back(t.gamma(i));
  LatticeBasis rg = lll_reduce(build_lattice(real_g, nullptr, 48), 0.99);
  CHECK(certify_N(gram_schmidt_min_norm_sq(rg), 4, LatticeKind::LAMBDA0) >= 1);
}

TEST_CASE("pipeline certifies and persists") {
  ZeroTable t = five_zeros();
  ResidueSet rs =
      compute_residues(t, Problem::MERTENS, Line::HALF, 5, 0, 96, 1);
  Real eps = Real::of(1e-9, 128);

  IndependenceCertificate cert = run_certification(
      Problem::MERTENS, 2, 3, 48, 0.99, eps, t, rs, Kernel::JURKAT_PEYERIMHOFF);
  CHECK(cert.n == 2);
  CHECK(cert.m == 3);
  REQUIRE(cert.selected_indices.size() == 2);
  CHECK(cert.selected_indices[0] < cert.selected_indices[1]);
  REQUIRE(cert.lattices.size() == 2);  // base plus one star
  CHECK(cert.lattices[0].star_index == 0);
  CHECK(cert.lattices[1].star_index >= 1);
  CHECK(cert.certified_N >= 1);
  CHECK(cert.T < t.gamma(4));
  CHECK(t.gamma(3) < cert.T);

  IndependenceCertificate par = run_certification(
      Problem::MERTENS, 2, 3, 48, 0.99, eps, t, rs,
      Kernel::JURKAT_PEYERIMHOFF, {}, 2);
  CHECK(par.certified_N == cert.certified_N);
  for (size_t i = 0; i < 2; ++i) {
    CHECK(par.lattices[i].star_index == cert.lattices[i].star_index);
    CHECK(par.lattices[i].min_gs_norm_sq == cert.lattices[i].min_gs_norm_sq);
    CHECK(par.lattices[i].N == cert.lattices[i].N);
  }

  TempDir td;
  IndependenceCertificate first = run_certification(
      Problem::MERTENS, 2, 3, 48, 0.99, eps, t, rs,
      Kernel::JURKAT_PEYERIMHOFF, td.path);
  CHECK(std::filesystem::exists(td.path / "lat00000.rec"));
  IndependenceCertificate resumed = run_certification(
      Problem::MERTENS, 2, 3, 48, 0.99, eps, t, rs,
      Kernel::JURKAT_PEYERIMHOFF, td.path);
  CHECK(resumed.certified_N == first.certified_N);
  for (size_t i = 0; i < 2; ++i) {
    // a cache hit replays the recorded timing verbatim
    CHECK(resumed.lattices[i].seconds == first.lattices[i].seconds);
    CHECK(resumed.lattices[i].min_gs_norm_sq ==
          first.lattices[i].min_gs_norm_sq);
  }

  auto cp = td.file("cert.txt");
  save_certificate(cp, cert);
  IndependenceCertificate back = load_certificate(cp);
  CHECK(back.problem == Problem::MERTENS);
  CHECK(back.n == cert.n);
  CHECK(back.m == cert.m);
  CHECK(back.b_bits == cert.b_bits);
  CHECK(back.delta == cert.delta);
  CHECK(back.kernel == cert.kernel);
  CHECK(back.selected_indices == cert.selected_indices);
  CHECK(back.certified_N == cert.certified_N);
  REQUIRE(back.lattices.size() == cert.lattices.size());
  for (size_t i = 0; i < back.lattices.size(); ++i) {
    CHECK(back.lattices[i].star_index == cert.lattices[i].star_index);
    CHECK(back.lattices[i].min_gs_norm_sq == cert.lattices[i].min_gs_norm_sq);
    CHECK(back.lattices[i].N == cert.lattices[i].N);
  }

  CHECK_THROWS_AS(run_certification(Problem::MERTENS, 4, 3, 48, 0.99, eps, t,
                                    rs),
                  std::invalid_argument);
  CHECK_THROWS_AS(run_certification(Problem::MERTENS, 2, 5, 48, 0.99, eps, t,
                                    rs),
                  std::invalid_argument);
  CHECK_THROWS_AS(run_certification(Problem::MERTENS, 2, 3, 185, 0.99, eps, t,
                                    rs),
                  std::invalid_argument);
  CHECK_THROWS_AS(run_certification(Problem::MERTENS, 2, 3, 48, 0.99,
                                    Real::of(0L, 64), t, rs),
                  std::invalid_argument);
  CHECK_THROWS_AS(run_certification(Problem::POLYA, 2, 3, 48, 0.99, eps, t,
                                    rs),
                  std::invalid_argument);
}

}  // TEST_SUITE
