#include <doctest.h>

#include <gmpxx.h>

#include <stdexcept>

#include "omegasum/zeta.hpp"
#include "test_util.hpp"

using namespace omegasum;
using testutil::near;

namespace {

// first zero ordinate, 60 digits
const char* kGamma1 =
    "14.1347251417346937904572519835624702707842571156992431756856";

Complex rho1(mpfr_prec_t prec) {
  return Complex(Real::of(0.5, prec), Real::parse(kGamma1, prec));
}

}  // namespace

TEST_SUITE("zeta") {

TEST_CASE("names parse both ways") {
  CHECK(problem_name(Problem::OMEGA) == "omega");
  CHECK(parse_problem("mertens") == Problem::MERTENS);
  CHECK(parse_problem(problem_name(Problem::POLYA)) == Problem::POLYA);
  CHECK(line_name(Line::QUARTER) == "quarter");
  CHECK(parse_line(line_name(Line::HALF)) == Line::HALF);
  CHECK_THROWS(parse_problem("liouville?"));
  CHECK_THROWS(parse_line(""));
}

TEST_CASE("real axis values against closed forms") {
  ZetaEvaluator ev;
  Real pi = Real::pi(320);
  CHECK(near(ev.zeta_real(Real::of(2L, 320), 300), pi * pi / 6L, 290));
  CHECK(near(ev.zeta_real(Real::of(4L, 320), 300), pow_si(pi, 4) / 90L, 290));
  CHECK(near(ev.zeta_real(Real::of(3L, 256), 220),
             Real::parse("1.20205690315959428539973816151144999076498629234"
                         "049888179227",
                         256),
             195));
  CHECK(near(ev.zeta_real(Real::of(0.5, 256), 220),
             Real::parse("-1.4603545088095868128894991525152980124672293310"
                         "1258149054289",
                         256),
             195));
}

TEST_CASE("complex evaluation is consistent with the real path") {
  ZetaEvaluator ev;
  Complex z = ev.zeta(Complex::of(2.0, 0.0, 256), 200);
  CHECK(near(z.re(), ev.zeta_real(Real::of(2L, 256), 200), 190));
  CHECK(abs(z.im()).cmp(1e-55) < 0);
}

TEST_CASE("conjugate symmetry and precision scaling") {
  ZetaEvaluator ev;
  Complex s = Complex(Real::of(0.5, 256), Real::of(100.25, 256));
  Complex z = ev.zeta(s, 160);
  Complex zc = ev.zeta(conj(s), 160);
  CHECK(near(z.re(), zc.re(), 150));
  CHECK(near(z.im(), -zc.im(), 150));

  Complex z64 = ev.zeta(s, 64);
  CHECK(near(z64.re(), z.re(), 58));
  CHECK(near(z64.im(), z.im(), 58));
}

TEST_CASE("derivative against a central difference") {
  ZetaEvaluator ev;
  Complex s = Complex(Real::of(0.5, 256), Real::of(20L, 256));
  Complex dz = ev.zeta_derivative(s, 200);

  Real h = ldexp2(Real::of(1L, 256), -40);
  Complex up = ev.zeta(Complex(s.re() + h, s.im()), 200);
  Complex dn = ev.zeta(Complex(s.re() - h, s.im()), 200);
  Complex fd = (up - dn) * inv(Complex(h + h, Real::of(0L, 256)));
  CHECK(near(dz.re(), fd.re(), 64));
  CHECK(near(dz.im(), fd.im(), 64));

  // and on the real line against the known slope
  Real d2 = ev.zeta_derivative(Complex::of(2.0, 0.0, 256), 200).re();
  CHECK(near(d2,
             Real::parse("-0.9375482543158437537025740945678649778978602886"
                         "148299258854335",
                         256),
             195));
}

TEST_CASE("pair evaluation matches the single calls") {
  ZetaEvaluator ev;
  Complex s = Complex(Real::of(0.5, 192), Real::of(50.5, 192));
  Complex z(192), dz(192);
  ev.zeta_pair(s, 150, &z, &dz);
  Complex z1 = ev.zeta(s, 150);
  Complex dz1 = ev.zeta_derivative(s, 150);
  CHECK(near(z.re(), z1.re(), 140));
  CHECK(near(z.im(), z1.im(), 140));
  CHECK(near(dz.re(), dz1.re(), 140));
  CHECK(near(dz.im(), dz1.im(), 140));
}

TEST_CASE("vanishes at the first zero ordinate") {
  ZetaEvaluator ev;
  CHECK(abs(ev.zeta(rho1(256), 200)).cmp(1e-55) < 0);
}

TEST_CASE("prime zeta values") {
  ZetaEvaluator ev;
  CHECK(near(prime_zeta(ev, 2, 256),
             Real::parse("0.45224742004106549850654336483224793417323134323"
                         "9892421736419",
                         256),
             195));
  CHECK(near(prime_zeta(ev, 3, 256),
             Real::parse("0.17476263929944353642311331466570670097541212192"
                         "6149289888672",
                         256),
             195));
}

TEST_CASE("prime power tail equals P(k) minus the finite part") {
  ZetaEvaluator ev;
  mpq_class finite =
      mpq_class(1, 4) + mpq_class(1, 9) + mpq_class(1, 25) + mpq_class(1, 49);
  Real expect = prime_zeta(ev, 2, 256) - Real::of(finite, 256);
  CHECK(near(prime_power_tail(ev, 2, 10, 256), expect, 195));
  // beyond the bound nothing is subtracted twice
  CHECK(prime_power_tail(ev, 2, 10, 128) >
        prime_power_tail(ev, 2, 11, 128));
}

TEST_CASE("f6 single prime factor against exact rationals") {
  ZetaEvaluator ev;
  // p = 2, s = 2, x = 1/4
  mpq_class x(1, 4);
  mpq_class f = (1 - 2 * x);
  mpq_class xx = x;
  int expo[] = {2, 1, 2, 3, 6, 9};
  for (int k = 1; k <= 6; ++k) {
    mpq_class one_minus = 1 - xx;
    for (int e = 0; e < expo[k - 1]; ++e) f /= one_minus;
    xx *= x;
  }
  Complex got = ev.f6(Complex::of(2.0, 0.0, 256), 2, 200);
  CHECK(near(got.re(), Real::of(f, 256), 190));
  CHECK(abs(got.im()).cmp(1e-55) < 0);
}

TEST_CASE("f6 tail bound covers the truncation error") {
  ZetaEvaluator ev;
  Complex s = Complex::of(2.0, 5.0, 192);
  Real tb(192);
  Complex small = ev.f6(s, 100, 160, &tb);
  Complex big = ev.f6(s, 10000, 160);
  CHECK(tb.sign() > 0);
  Real err = abs(big - small);
  CHECK(err < tb * abs(small) * 4L);
}

TEST_CASE("residues reject ordinates away from zeros") {
  ZetaEvaluator ev;
  CHECK_THROWS_AS(residue_mertens(ev, Real::of(15.0, 128), 96),
                  std::domain_error);
  CHECK_THROWS_AS(residue_omega(ev, Real::of(14.0, 128), 100, 96),
                  std::domain_error);
}

TEST_CASE("residue compositions at the first zero") {
  ZetaEvaluator ev;
  Real g = Real::parse(kGamma1, 256);
  Complex rho = rho1(256);
  Complex dz = ev.zeta_derivative(rho, 170);
  Complex denom_half = rho * dz;

  Residue rm = residue_mertens(ev, g, 96);
  Complex manual_m = inv(denom_half);
  CHECK(near(rm.value.re(), manual_m.re(), 80));
  CHECK(near(rm.value.im(), manual_m.im(), 80));
  CHECK(rm.problem == Problem::MERTENS);

  Residue rp = residue_polya(ev, g, 96);
  Complex manual_p = ev.zeta(rho + rho, 170) / denom_half;
  CHECK(near(rp.value.re(), manual_p.re(), 80));
  CHECK(near(rp.value.im(), manual_p.im(), 80));

  Residue ro = residue_omega(ev, g, 1000, 96);
  Complex denom_o = ev.zeta(rho * Complex::of(2, 0, 256), 170);
  denom_o *= pow_ui(ev.zeta(rho * Complex::of(3, 0, 256), 170), 2);
  denom_o *= pow_ui(ev.zeta(rho * Complex::of(4, 0, 256), 170), 3);
  denom_o *= pow_ui(ev.zeta(rho * Complex::of(5, 0, 256), 170), 6);
  denom_o *= pow_ui(ev.zeta(rho * Complex::of(6, 0, 256), 170), 9);
  Complex manual_o = ev.f6(rho, 1000, 170) / (denom_o * denom_half);
  CHECK(near(ro.value.re(), manual_o.re(), 78));
  CHECK(near(ro.value.im(), manual_o.im(), 78));

  Residue rq = residue_omega_quarter(ev, g, 1000, 96);
  Complex half = Complex::of(0.5, 0.0, 256);
  Complex denom_q = ev.zeta(rho * half, 170);
  denom_q *= pow_ui(ev.zeta(rho * Complex::of(1.5, 0, 256), 170), 2);
  denom_q *= pow_ui(ev.zeta(rho * Complex::of(2, 0, 256), 170), 3);
  denom_q *= pow_ui(ev.zeta(rho * Complex::of(2.5, 0, 256), 170), 6);
  denom_q *= pow_ui(ev.zeta(rho * Complex::of(3, 0, 256), 170), 9);
  Complex manual_q = ev.f6(rho * half, 1000, 170) / (denom_q * denom_half);
  CHECK(near(rq.value.re(), manual_q.re(), 78));
  CHECK(near(rq.value.im(), manual_q.im(), 78));
  CHECK(rq.line == Line::QUARTER);
}

}  // TEST_SUITE
