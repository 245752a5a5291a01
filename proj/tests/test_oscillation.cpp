#include <doctest.h>

#include <stdexcept>
#include <vector>

#include "omegasum/oscillation.hpp"
#include "test_util.hpp"

using namespace omegasum;
using testutil::near;

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

KernelSpec fejer(double T) { return {Kernel::FEJER, Real::of(T, 192)}; }
KernelSpec jp(double T) {
  return {Kernel::JURKAT_PEYERIMHOFF, Real::of(T, 192)};
}

// Re(r e^{i g u})
Real rot_re(const Complex& r, const Real& g, const Real& u) {
  Complex e = Complex::unit(to_prec(g, 192) * to_prec(u, 192));
  return r.re() * e.re() - r.im() * e.im();
}

}  // namespace

TEST_SUITE("oscillation") {

TEST_CASE("kernel names") {
  CHECK(kernel_name(Kernel::FEJER) == "fejer");
  CHECK(parse_kernel("jp") == Kernel::JURKAT_PEYERIMHOFF);
  CHECK(parse_kernel("jurkat-peyerimhoff") == Kernel::JURKAT_PEYERIMHOFF);
  CHECK(parse_kernel(kernel_name(Kernel::FEJER)) == Kernel::FEJER);
  CHECK_THROWS(parse_kernel("box"));
}

TEST_CASE("kernel shapes") {
  KernelSpec f = fejer(100.0);
  CHECK(kernel_eval(f, Real::of(0L, 128)) == Real::of(1L, 128));
  CHECK(kernel_eval(f, Real::of(50L, 128)) == Real::of(0.5, 128));
  CHECK(kernel_eval(f, Real::of(-50L, 128)) == Real::of(0.5, 128));
  CHECK(kernel_eval(f, Real::of(100L, 128)).is_zero());
  CHECK(kernel_eval(f, Real::of(250L, 128)).is_zero());

  KernelSpec j = jp(100.0);
  CHECK(kernel_eval(j, Real::of(0L, 128)) == Real::of(1L, 128));
  // (1-x)cos(pi x) + sin(pi x)/pi at x = 1/2 collapses to 1/pi
  Real mid = kernel_eval(j, Real::of(50L, 192));
  CHECK(near(mid, Real::of(1L, 192) / Real::pi(192), 180));
  CHECK(kernel_eval(j, Real::of(100L, 128)).is_zero());
  // positive inside the support
  for (double t : {10.0, 35.0, 60.0, 85.0, 99.0})
    CHECK(kernel_eval(j, Real::of(t, 128)).sign() > 0);

  KernelSpec bad{Kernel::FEJER, Real::of(1L, 128)};
  CHECK_THROWS_AS(kernel_eval(bad, Real::of(0.5, 128)), std::invalid_argument);
}

TEST_CASE("weighting residues") {
  ZeroTable t = five_zeros();
  ResidueSet rs = compute_residues(t, Problem::POLYA, Line::HALF, 5, 0, 96, 1);

  WeightedResidueSet w = weight_residues(rs, fejer(30.0));
  REQUIRE(w.entries.size() == 3);  // zeros 4 and 5 sit beyond T
  for (size_t i = 0; i < 3; ++i) {
    CHECK(w.entries[i].index == int(i) + 1);
    CHECK(w.entries[i].weight ==
          kernel_eval(w.kernel, rs.entries[i].gamma));
  }

  std::vector<int> two = {2};
  WeightedResidueSet ws = weight_residues(rs, fejer(30.0), &two);
  REQUIRE(ws.entries.size() == 1);
  CHECK(ws.entries[0].index == 2);

  std::vector<int> beyond = {4};
  CHECK_THROWS_AS(weight_residues(rs, fejer(30.0), &beyond),
                  std::invalid_argument);
  std::vector<int> absent = {9};
  CHECK_THROWS_AS(weight_residues(rs, fejer(30.0), &absent),
                  std::invalid_argument);
}

TEST_CASE("leading terms") {
  CHECK(leading_term(Problem::MERTENS, 128).is_zero());
  CHECK(leading_term(Problem::OMEGA, 128).is_zero());
  Real inv_zeta_half =
      Real::of(1L, 220) /
      Real::parse("-1.4603545088095868128894991525152980124672293310125814905"
                  "4289",
                  220);
  CHECK(near(leading_term(Problem::POLYA, 192), inv_zeta_half, 180));
}

TEST_CASE("smoothed sum against a hand-rolled evaluation") {
  ZeroTable t = five_zeros();
  ResidueSet rs = compute_residues(t, Problem::POLYA, Line::HALF, 5, 0, 96, 1);
  KernelSpec k = fejer(30.0);
  Real u = Real::of(1.5, 192);

  Real manual = leading_term(Problem::POLYA, 192);
  for (int i = 0; i < 3; ++i) {
    Real w = kernel_eval(k, rs.entries[i].gamma);
    manual += rot_re(rs.entries[i].value, rs.entries[i].gamma, u) * w * 2L;
  }
  CHECK(near(b_star(Problem::POLYA, k, u, t, rs), manual, 80));

  // missing coverage below T must be caught
  ResidueSet gap = rs;
  gap.entries.resize(2);
  CHECK_THROWS_AS(b_star(Problem::POLYA, k, u, t, gap), std::invalid_argument);

  ResidueSet quarter =
      compute_residues(t, Problem::OMEGA, Line::QUARTER, 5, 200, 96, 1);
  CHECK_THROWS_AS(b_star(Problem::OMEGA, k, u, t, quarter),
                  std::invalid_argument);
}

TEST_CASE("sharp estimate with and without the quarter-line term") {
  ZeroTable t = five_zeros();
  ResidueSet half =
      compute_residues(t, Problem::OMEGA, Line::HALF, 5, 200, 96, 1);
  ResidueSet quarter =
      compute_residues(t, Problem::OMEGA, Line::QUARTER, 5, 200, 96, 1);
  Real u = Real::of(2.0, 192);
  Real T = Real::of(25.1, 192);  // keeps the first three zeros

  Real manual(192);
  for (int i = 0; i < 3; ++i)
    manual += rot_re(half.entries[i].value, half.entries[i].gamma, u) * 2L;
  Real got = explicit_estimate(Problem::OMEGA, u, T, t, half);
  CHECK(near(got, manual, 80));

  Real damp = exp(-to_prec(u, 192) / 4L);
  Real qsum(192);
  for (int i = 0; i < 3; ++i)
    qsum += rot_re(quarter.entries[i].value, quarter.entries[i].gamma,
                   to_prec(u, 192) / 2L) *
            2L;
  Real with_q =
      explicit_estimate(Problem::OMEGA, u, T, t, half, true, &quarter);
  CHECK(near(with_q, manual + qsum * damp, 80));

  ResidueSet polya = compute_residues(t, Problem::POLYA, Line::HALF, 5, 0, 96, 1);
  CHECK_THROWS_AS(explicit_estimate(Problem::MERTENS, u, T, t, polya),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      explicit_estimate(Problem::POLYA, u, T, t, polya, true, &quarter),
      std::invalid_argument);
  CHECK_THROWS_AS(explicit_estimate(Problem::OMEGA, u, T, t, half, true),
                  std::invalid_argument);
}

TEST_CASE("independence bound arithmetic") {
  ZeroTable t = five_zeros();
  ResidueSet rs = compute_residues(t, Problem::POLYA, Line::HALF, 5, 0, 96, 1);
  WeightedResidueSet w = weight_residues(rs, jp(30.0));

  OscillationBound b = anderson_stark_bound(w, 3);
  Real amp(192);
  for (const WeightedEntry& e : w.entries) amp += e.weight * abs(e.value);
  amp = amp * 2L * 3L / 4L;
  Real r0 = leading_term(Problem::POLYA, 192);
  CHECK(near(b.limsup_lower, r0 + amp, 100));
  CHECK(near(b.liminf_upper, r0 - amp, 100));
  CHECK(b.liminf_upper < b.limsup_lower);

  OscillationBound wide = anderson_stark_bound(w, 4000);
  CHECK(b.limsup_lower < wide.limsup_lower);
  CHECK(wide.liminf_upper < b.liminf_upper);

  CHECK_THROWS_AS(anderson_stark_bound(w, 0), std::invalid_argument);
  WeightedResidueSet empty;
  CHECK_THROWS_AS(anderson_stark_bound(empty, 3), std::invalid_argument);
}

TEST_CASE("selection orders by weighted size") {
  ResidueSet rs;
  rs.problem = Problem::POLYA;
  rs.line = Line::HALF;
  rs.precision_bits = 96;
  rs.entries.push_back({1, Real::of(5L, 128), Complex::of(1, 0, 128)});
  rs.entries.push_back({2, Real::of(10L, 128), Complex::of(0, 3, 128)});
  rs.entries.push_back({3, Real::of(15L, 128), Complex::of(-3, 0, 128)});

  KernelSpec k = fejer(20.0);
  // scores 0.75, 1.5, 0.75: the tie resolves toward the smaller ordinate
  CHECK(select_gamma_prime(rs, k, 2) == std::vector<int>{2, 1});
  CHECK(select_gamma_prime(rs, k, 3) == std::vector<int>{2, 1, 3});
  CHECK_THROWS_AS(select_gamma_prime(rs, k, 4), std::invalid_argument);

  rs.entries.push_back({4, Real::of(25L, 128), Complex::of(1, 0, 128)});
  CHECK_THROWS_AS(select_gamma_prime(rs, k, 1), std::invalid_argument);
}

}  // TEST_SUITE
