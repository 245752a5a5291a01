#pragma once

// Euler-Maclaurin evaluation of zeta and its derivative on the critical
// strip, the Euler-product factor F6 absorbing the sixth-stage factorization
// remainder, and the per-zero residues for the three summatory problems.

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "omegasum/mp.hpp"

namespace omegasum {

enum class Problem { MERTENS, POLYA, OMEGA };
enum class Line { HALF, QUARTER };

std::string problem_name(Problem p);
Problem parse_problem(const std::string& s);
std::string line_name(Line l);
Line parse_line(const std::string& s);

struct ZetaConfig {
  // Largest |Im s| accepted by the Euler-Maclaurin evaluator. Residue
  // pipelines raise this to cover the 6*rho arguments they need.
  double height_ceiling = 5000.0;
  // Cap on the Bernoulli depth 2K, bounding attainable target precision.
  int max_bernoulli_index = 4096;
};

// High-precision zeta evaluator. Holds mutable log/prime caches, so instances
// are not thread-safe; construct one per worker (cheap, the Bernoulli table
// is shared and immutable once grown).
class ZetaEvaluator {
 public:
  explicit ZetaEvaluator(ZetaConfig cfg = {});

  // Absolute error < 2^(1-target_bits) * max(1, |zeta(s)|).
  Complex zeta(const Complex& s, mpfr_prec_t target_bits) const;
  Complex zeta_derivative(const Complex& s, mpfr_prec_t target_bits) const;
  // One pass for both values.
  void zeta_pair(const Complex& s, mpfr_prec_t target_bits, Complex* z,
                 Complex* dz) const;
  Real zeta_real(const Real& x, mpfr_prec_t target_bits) const;

  // prod_{p <= prime_bound} of the exact local factor
  //   (1-2x)(1-x)^-2 (1-x^2)^-1 (1-x^3)^-2 (1-x^4)^-3 (1-x^5)^-6 (1-x^6)^-9,
  // x = p^-s. Requires Re s >= 1/6. If tail_bound is given it receives an
  // upper estimate for the relative truncation error.
  Complex f6(const Complex& s, uint64_t prime_bound, mpfr_prec_t target_bits,
             Real* tail_bound = nullptr) const;

  const ZetaConfig& config() const { return cfg_; }

 private:
  void em_core(const Complex& s, mpfr_prec_t target_bits, bool want_deriv,
               Complex* z, Complex* dz) const;
  const Real& ln_of(uint64_t n, mpfr_prec_t prec) const;

  ZetaConfig cfg_;
  mutable std::vector<Real> ln_cache_;
  mutable mpfr_prec_t ln_cache_prec_ = 0;
  mutable std::vector<uint64_t> prime_cache_;
  mutable uint64_t prime_cache_bound_ = 0;
};

// Prime zeta P(k) = sum_p p^-k for integer k >= 2, via the Moebius series
// sum_j mu(j)/j log zeta(k j).
Real prime_zeta(const ZetaEvaluator& ev, int k, mpfr_prec_t prec);

// sum_{p > bound} p^-k for integer k >= 2: P(k) minus the finite part over
// sieved primes.
Real prime_power_tail(const ZetaEvaluator& ev, int k, uint64_t bound,
                      mpfr_prec_t prec);

struct Residue {
  Real gamma;
  Complex value;
  Problem problem = Problem::MERTENS;
  Line line = Line::HALF;
};

// All residue routines check |zeta(1/2+i gamma)| < 1e-8 first and throw
// std::domain_error when gamma is not close to a zero ordinate.
Residue residue_mertens(const ZetaEvaluator& ev, const Real& gamma,
                        mpfr_prec_t bits);
Residue residue_polya(const ZetaEvaluator& ev, const Real& gamma,
                      mpfr_prec_t bits);
Residue residue_omega(const ZetaEvaluator& ev, const Real& gamma,
                      uint64_t prime_bound, mpfr_prec_t bits);
// Pole at rho/2 contributed by the zeta(2s) factor; the consumer applies the
// e^(-u/4) relative damping.
Residue residue_omega_quarter(const ZetaEvaluator& ev, const Real& gamma,
                              uint64_t prime_bound, mpfr_prec_t bits);

struct ResidueEntry {
  int index = 0;  // 1-based zero index
  Real gamma;
  Complex value;
};

struct ResidueSet {
  Problem problem = Problem::MERTENS;
  Line line = Line::HALF;
  uint64_t prime_bound = 0;  // 0 when the problem has no F6 factor
  mpfr_prec_t precision_bits = 0;
  std::vector<ResidueEntry> entries;  // ascending index
};

class ZeroTable;  // zeros.hpp

// Residues for zero indices 1..count, fanned out across workers with a
// deterministic ordered merge.
ResidueSet compute_residues(const ZeroTable& zeros, Problem problem, Line line,
                            int count, uint64_t prime_bound, mpfr_prec_t bits,
                            int workers, const ZetaConfig& base_cfg = {});

void save_residues(const std::filesystem::path& p, const ResidueSet& rs,
                   const std::string& input_digest);
ResidueSet load_residues(const std::filesystem::path& p);

}  // namespace omegasum
