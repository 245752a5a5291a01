#include "omegasum/zeta.hpp"

#include <cmath>
#include <memory>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include "omegasum/artifact.hpp"
#include "omegasum/parallel.hpp"
#include "omegasum/primes.hpp"
#include "omegasum/zeros.hpp"

namespace omegasum {

std::string problem_name(Problem p) {
  switch (p) {
    case Problem::MERTENS: return "mertens";
    case Problem::POLYA: return "polya";
    case Problem::OMEGA: return "omega";
  }
  return "?";
}

Problem parse_problem(const std::string& s) {
  if (s == "mertens" || s == "m") return Problem::MERTENS;
  if (s == "polya" || s == "l") return Problem::POLYA;
  if (s == "omega" || s == "h") return Problem::OMEGA;
  throw std::invalid_argument("unknown problem '" + s + "'");
}

std::string line_name(Line l) {
  return l == Line::HALF ? "half" : "quarter";
}

Line parse_line(const std::string& s) {
  if (s == "half") return Line::HALF;
  if (s == "quarter") return Line::QUARTER;
  throw std::invalid_argument("unknown line '" + s + "'");
}

namespace {

// Shared table of B_j / j! from the generating-function recurrence
//   c_0 = 1,  c_m = -sum_{j<m} c_j/(m+1-j)!   (m >= 1).
// Snapshots are immutable; growth copies under a lock.
std::mutex bern_mu;
std::shared_ptr<const std::vector<mpq_class>> bern_cache;

std::shared_ptr<const std::vector<mpq_class>> bernoulli_upto(int max_j) {
  std::lock_guard<std::mutex> lk(bern_mu);
  if (bern_cache && static_cast<int>(bern_cache->size()) > max_j)
    return bern_cache;
  auto next = std::make_shared<std::vector<mpq_class>>(
      bern_cache ? *bern_cache : std::vector<mpq_class>{});
  auto& c = *next;
  if (c.empty()) c.emplace_back(1);
  while (static_cast<int>(c.size()) <= max_j) {
    int m = static_cast<int>(c.size());
    mpq_class acc = 0;
    mpz_class factk = 2;  // (m+1-j)! for j = m-1
    int k = 2;
    for (int j = m - 1; j >= 0; --j) {
      acc += c[j] / mpq_class(factk);
      if (j > 0) {
        ++k;
        factk *= k;
      }
    }
    c.push_back(-acc);
  }
  bern_cache = next;
  return bern_cache;
}

Complex add_si(const Complex& a, long b) {
  return Complex(a.re() + b, a.im());
}

Complex mul_si(const Complex& a, long b) {
  return Complex(a.re() * b, a.im() * b);
}

Complex one_at(mpfr_prec_t p) { return Complex(Real::of(1L, p), Real(p)); }

}  // namespace

ZetaEvaluator::ZetaEvaluator(ZetaConfig cfg) : cfg_(cfg) {}

const Real& ZetaEvaluator::ln_of(uint64_t n, mpfr_prec_t prec) const {
  if (prec > ln_cache_prec_) {
    ln_cache_.clear();
    ln_cache_prec_ = prec;
  }
  if (ln_cache_.size() <= n) ln_cache_.resize(n + 1, Real(4));
  Real& slot = ln_cache_[n];
  if (n >= 2 && slot.is_zero()) {
    slot = Real(ln_cache_prec_);
    mpfr_set_ui(slot.raw(), n, MPFR_RNDN);
    mpfr_log(slot.raw(), slot.raw(), MPFR_RNDN);
  }
  return slot;
}

void ZetaEvaluator::em_core(const Complex& s_in, mpfr_prec_t target,
                            bool want_deriv, Complex* zout,
                            Complex* dzout) const {
  bool flip = s_in.im().sign() < 0;
  double t_abs = std::fabs(s_in.im().to_double());
  double sigma = s_in.re().to_double();
  if (t_abs > cfg_.height_ceiling)
    throw std::domain_error("zeta: |Im s| above configured height ceiling");
  if (std::hypot(sigma - 1.0, t_abs) < 1e-25)
    throw std::domain_error("zeta: pole at s=1");

  int K = static_cast<int>(target / 2) + 8;
  if (2 * K + 2 > cfg_.max_bernoulli_index)
    throw std::domain_error("zeta: target precision beyond Bernoulli depth");
  long N = std::max<long>(
      {static_cast<long>(K), 16,
       static_cast<long>(std::ceil((t_abs + 2.0 * K) / 3.0))});
  mpfr_prec_t wp =
      target +
      2 * static_cast<mpfr_prec_t>(std::ceil(std::log2(double(N) + 2))) + 32;
  auto bern = bernoulli_upto(2 * K);

  Complex s = to_prec(flip ? conj(s_in) : s_in, wp);
  Complex msum = one_at(wp);  // n = 1 term
  Complex dsum(wp);
  for (long n = 2; n < N; ++n) {
    const Real& ln_n = ln_of(n, wp);
    Complex e = cexp(-(s * ln_n));
    msum += e;
    if (want_deriv) dsum -= e * ln_n;
  }

  const Real one = Real::of(1L, wp);
  const Real& lnN = ln_of(N, wp);
  Complex NmS = cexp(-(s * lnN));         // N^-s
  Complex N1mS = NmS * Real::of(N, wp);   // N^(1-s)
  Complex sm1 = add_si(s, -1);
  Complex z = msum + NmS * Real::of(0.5, wp) + N1mS / sm1;
  Complex dz(wp);
  if (want_deriv) {
    Complex g = -(sm1 * lnN);  // d/ds of N^(1-s)/(s-1) = N^(1-s)(g-1)/(s-1)^2
    dz = dsum - NmS * (lnN * Real::of(0.5, wp)) +
         N1mS * add_si(g, -1) / (sm1 * sm1);
  }

  // Correction terms c_2k (s)_(2k-1) N^(1-s-2k), derivatives tracked through
  // the Pochhammer recurrence.
  Real invN2 = pow_si(Real::of(N, wp), -2);
  Complex Nfac = N1mS;
  Complex pochP = s;
  Complex pochD = one_at(wp);
  for (int k = 1; k <= K; ++k) {
    Nfac = Nfac * invN2;
    Real c2k = Real::of((*bern)[2 * k], wp);
    Complex term = (pochP * c2k) * Nfac;
    z += term;
    if (want_deriv) dz += (pochD * c2k) * Nfac - term * lnN;
    if (k < K) {
      Complex u = add_si(s, 2 * k - 1) * add_si(s, 2 * k);
      pochD = pochD * u + pochP * add_si(mul_si(s, 2), 4 * k - 1);
      pochP = pochP * u;
    }
  }

  if (flip) {
    z = conj(z);
    if (want_deriv) dz = conj(dz);
  }
  if (zout) *zout = to_prec(z, target);
  if (want_deriv && dzout) *dzout = to_prec(dz, target);
}

Complex ZetaEvaluator::zeta(const Complex& s, mpfr_prec_t target_bits) const {
  Complex z;
  em_core(s, target_bits, false, &z, nullptr);
  return z;
}

Complex ZetaEvaluator::zeta_derivative(const Complex& s,
                                       mpfr_prec_t target_bits) const {
  Complex z, dz;
  em_core(s, target_bits, true, &z, &dz);
  return dz;
}

void ZetaEvaluator::zeta_pair(const Complex& s, mpfr_prec_t target_bits,
                              Complex* z, Complex* dz) const {
  em_core(s, target_bits, true, z, dz);
}

Real ZetaEvaluator::zeta_real(const Real& x, mpfr_prec_t target_bits) const {
  mpfr_prec_t wp = std::max(x.prec(), target_bits + 8);
  return zeta(Complex(to_prec(x, wp), Real(wp)), target_bits).re();
}

Complex ZetaEvaluator::f6(const Complex& s, uint64_t prime_bound,
                          mpfr_prec_t target_bits, Real* tail_bound) const {
  double sigma = s.re().to_double();
  if (sigma < 1.0 / 6.0 - 1e-12)
    throw std::domain_error("f6: Re s below 1/6");
  if (prime_bound < 2) throw std::domain_error("f6: prime bound below 2");

  mpfr_prec_t wp = target_bits + 32;
  Complex sw = to_prec(s, wp);
  if (prime_bound > prime_cache_bound_) {
    prime_cache_ = primes_up_to(prime_bound);
    prime_cache_bound_ = prime_bound;
  }
  Complex result = one_at(wp);
  Real lnp(wp);
  for (uint64_t p : prime_cache_) {
    if (p > prime_bound) break;
    mpfr_set_ui(lnp.raw(), p, MPFR_RNDN);
    mpfr_log(lnp.raw(), lnp.raw(), MPFR_RNDN);
    Complex x = cexp(-(sw * lnp));
    Complex x2 = x * x;
    Complex x3 = x2 * x;
    Complex y1 = one_at(wp) - x;
    Complex y2 = one_at(wp) - x2;
    Complex y3 = one_at(wp) - x3;
    Complex y4 = one_at(wp) - x2 * x2;
    Complex y5 = one_at(wp) - x3 * x2;
    Complex y6 = one_at(wp) - x3 * x3;
    Complex den = (y1 * y1) * y2 * (y3 * y3) * pow_ui(y4, 3) * pow_ui(y5, 6) *
                  pow_ui(y6, 9);
    result *= (one_at(wp) - mul_si(x, 2)) / den;
  }
  if (tail_bound) {
    // 18 sum_{p>P} p^(-7 sigma), bounded by the integral plus one term, with
    // a geometric margin for the higher series coefficients (ratio < 2).
    double P = static_cast<double>(prime_bound);
    double a = 7.0 * sigma;
    double raw = std::pow(P, 1.0 - a) / (a - 1.0) + std::pow(P, -a);
    double lead = 2.0 * std::pow(P, -sigma);
    double margin = lead < 0.5 ? 1.0 / (1.0 - lead) : 1e9;
    *tail_bound = Real::of(18.0 * raw * margin, 64);
  }
  return to_prec(result, target_bits);
}

Real prime_zeta(const ZetaEvaluator& ev, int k, mpfr_prec_t prec) {
  if (k < 2) throw std::domain_error("prime_zeta: k >= 2 required");
  mpfr_prec_t wp = prec + 32;
  Real acc(wp);
  long jmax = (static_cast<long>(prec) + 40) / k;
  for (long j = 1; j <= jmax; ++j) {
    int m = mu_slow(j);
    if (m == 0) continue;
    Real lz = log(ev.zeta_real(Real::of(k * j, wp), wp));
    Real term = lz / j;
    if (m > 0)
      acc += term;
    else
      acc -= term;
  }
  return to_prec(acc, prec);
}

Real prime_power_tail(const ZetaEvaluator& ev, int k, uint64_t bound,
                      mpfr_prec_t prec) {
  mpfr_prec_t wp = prec + 32;
  Real finite(wp);
  std::vector<uint64_t> ps = primes_up_to(bound);
  for (uint64_t p : ps) {
    mpz_class pk;
    mpz_ui_pow_ui(pk.get_mpz_t(), p, k);
    finite += Real::of(1L, wp) / Real::of(pk, wp);
  }
  return to_prec(prime_zeta(ev, k, wp) - finite, prec);
}

namespace {

Complex rho_of(const Real& gamma, mpfr_prec_t wp) {
  return Complex(Real::of(0.5, wp), to_prec(gamma, wp));
}

void check_on_zero(const ZetaEvaluator& ev, const Complex& rho) {
  Complex z = ev.zeta(rho, 64);
  if (abs(z).cmp(1e-8) >= 0)
    throw std::domain_error("residue: |zeta(rho)| >= 1e-8, not a zero ordinate");
}

Complex inv_rho_zeta_prime(const ZetaEvaluator& ev, const Complex& rho,
                           mpfr_prec_t wp) {
  Complex dz = ev.zeta_derivative(rho, wp);
  if (abs(dz).cmp(1e-12) < 0)
    throw std::runtime_error(
        "residue: zeta'(rho) vanishes at working precision");
  return inv(rho * dz);
}

Complex zeta_power_checked(const ZetaEvaluator& ev, const Complex& arg,
                           unsigned e, mpfr_prec_t wp) {
  Complex z = ev.zeta(arg, wp);
  if (abs(z).cmp(1e-12) < 0)
    throw std::runtime_error(
        "residue: zeta factor vanishes off the half line (precision failure)");
  return pow_ui(z, e);
}

}  // namespace

Residue residue_mertens(const ZetaEvaluator& ev, const Real& gamma,
                        mpfr_prec_t bits) {
  mpfr_prec_t wp = bits + 16;
  Complex rho = rho_of(gamma, wp);
  check_on_zero(ev, rho);
  return Residue{gamma, inv_rho_zeta_prime(ev, rho, wp), Problem::MERTENS,
                 Line::HALF};
}

Residue residue_polya(const ZetaEvaluator& ev, const Real& gamma,
                      mpfr_prec_t bits) {
  mpfr_prec_t wp = bits + 16;
  Complex rho = rho_of(gamma, wp);
  check_on_zero(ev, rho);
  Complex val = ev.zeta(mul_si(rho, 2), wp) * inv_rho_zeta_prime(ev, rho, wp);
  return Residue{gamma, val, Problem::POLYA, Line::HALF};
}

Residue residue_omega(const ZetaEvaluator& ev, const Real& gamma,
                      uint64_t prime_bound, mpfr_prec_t bits) {
  mpfr_prec_t wp = bits + 16;
  Complex rho = rho_of(gamma, wp);
  check_on_zero(ev, rho);
  Complex den = zeta_power_checked(ev, mul_si(rho, 2), 1, wp) *
                zeta_power_checked(ev, mul_si(rho, 3), 2, wp) *
                zeta_power_checked(ev, mul_si(rho, 4), 3, wp) *
                zeta_power_checked(ev, mul_si(rho, 5), 6, wp) *
                zeta_power_checked(ev, mul_si(rho, 6), 9, wp);
  Complex val =
      ev.f6(rho, prime_bound, wp) / den * inv_rho_zeta_prime(ev, rho, wp);
  return Residue{gamma, val, Problem::OMEGA, Line::HALF};
}

Residue residue_omega_quarter(const ZetaEvaluator& ev, const Real& gamma,
                              uint64_t prime_bound, mpfr_prec_t bits) {
  mpfr_prec_t wp = bits + 16;
  Complex rho = rho_of(gamma, wp);
  check_on_zero(ev, rho);
  Complex half_rho = rho * Real::of(0.5, wp);
  Complex den = zeta_power_checked(ev, half_rho, 1, wp) *
                zeta_power_checked(ev, mul_si(half_rho, 3), 2, wp) *
                zeta_power_checked(ev, mul_si(rho, 2), 3, wp) *
                zeta_power_checked(ev, mul_si(half_rho, 5), 6, wp) *
                zeta_power_checked(ev, mul_si(rho, 3), 9, wp);
  Complex val = ev.f6(half_rho, prime_bound, wp) / den *
                inv_rho_zeta_prime(ev, rho, wp);
  return Residue{gamma, val, Problem::OMEGA, Line::QUARTER};
}

ResidueSet compute_residues(const ZeroTable& zeros, Problem problem, Line line,
                            int count, uint64_t prime_bound, mpfr_prec_t bits,
                            int workers, const ZetaConfig& base_cfg) {
  if (count < 0 || count > zeros.count())
    throw std::invalid_argument("compute_residues: count beyond table");
  if (line == Line::QUARTER && problem != Problem::OMEGA)
    throw std::invalid_argument("compute_residues: quarter line is OMEGA-only");

  ResidueSet rs;
  rs.problem = problem;
  rs.line = line;
  rs.prime_bound = problem == Problem::OMEGA ? prime_bound : 0;
  rs.precision_bits = bits;
  rs.entries.resize(count);
  if (count == 0) return rs;

  double gmax = zeros.gamma(count).to_double();
  double need = gmax * (problem == Problem::OMEGA
                            ? (line == Line::HALF ? 6.05 : 3.05)
                        : problem == Problem::POLYA ? 2.05
                                                    : 1.05);
  ZetaConfig cfg = base_cfg;
  cfg.height_ceiling = std::max(cfg.height_ceiling, need + 10.0);

  if (workers < 1) workers = 1;
  std::vector<std::unique_ptr<ZetaEvaluator>> evs;
  for (int w = 0; w < workers; ++w)
    evs.push_back(std::make_unique<ZetaEvaluator>(cfg));

  parallel_for_wid(count, workers, [&](int64_t i, int w) {
    const ZeroRecord& zr = zeros.record(static_cast<int>(i) + 1);
    const ZetaEvaluator& ev = *evs[w];
    Residue r;
    switch (problem) {
      case Problem::MERTENS:
        r = residue_mertens(ev, zr.gamma, bits);
        break;
      case Problem::POLYA:
        r = residue_polya(ev, zr.gamma, bits);
        break;
      case Problem::OMEGA:
        r = line == Line::HALF
                ? residue_omega(ev, zr.gamma, prime_bound, bits)
                : residue_omega_quarter(ev, zr.gamma, prime_bound, bits);
        break;
    }
    rs.entries[i] = ResidueEntry{zr.index, zr.gamma, r.value};
  });
  return rs;
}

void save_residues(const std::filesystem::path& p, const ResidueSet& rs,
                   const std::string& input_digest) {
  Artifact a = new_artifact();
  a.add("kind", "residues");
  a.add("problem", problem_name(rs.problem));
  a.add("line", line_name(rs.line));
  a.add("count", std::to_string(rs.entries.size()));
  a.add("precision_bits", std::to_string(rs.precision_bits));
  a.add("prime_bound", std::to_string(rs.prime_bound));
  a.add("input_digest", input_digest);
  a.add("columns", "index,gamma,re,im,problem,line,precision_bits,prime_bound");
  int digits =
      static_cast<int>(std::ceil(rs.precision_bits * 0.30103)) + 2;
  for (const auto& e : rs.entries) {
    std::ostringstream row;
    row << e.index << ',' << e.gamma.to_string() << ','
        << e.value.re().to_string(digits) << ','
        << e.value.im().to_string(digits) << ',' << problem_name(rs.problem)
        << ',' << line_name(rs.line) << ',' << rs.precision_bits << ','
        << rs.prime_bound;
    a.rows.push_back(row.str());
  }
  save_artifact(p, a);
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

ResidueSet load_residues(const std::filesystem::path& p) {
  Artifact a = load_artifact(p);
  ResidueSet rs;
  rs.precision_bits = std::stol(a.get("precision_bits"));
  rs.prime_bound = std::stoull(a.get("prime_bound"));
  rs.problem = parse_problem(a.get("problem"));
  rs.line = parse_line(a.get("line"));
  mpfr_prec_t gp = rs.precision_bits + 32;
  for (const auto& row : a.rows) {
    std::vector<std::string> f = split_csv(row);
    if (f.size() != 8) throw std::runtime_error("residue row needs 8 columns");
    ResidueEntry e;
    e.index = std::stoi(f[0]);
    e.gamma = Real::parse(f[1], gp);
    e.value = Complex(Real::parse(f[2], gp), Real::parse(f[3], gp));
    rs.entries.push_back(std::move(e));
  }
  return rs;
}

}  // namespace omegasum
