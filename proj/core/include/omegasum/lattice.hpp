#pragma once

// Integer lattices whose short vectors encode small integer relations among
// scaled zero ordinates, LLL reduction with exact basis arithmetic, exact
// rational Gram-Schmidt floors, and the certification pipeline turning a
// reduced-basis norm floor into an independence level N.

#include <gmpxx.h>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "omegasum/mp.hpp"
#include "omegasum/oscillation.hpp"
#include "omegasum/zeros.hpp"
#include "omegasum/zeta.hpp"

namespace omegasum {

enum class LatticeKind { LAMBDA0, LAMBDA_I };

struct LatticeBasis {
  int dim = 0;      // basis vectors (rows)
  int ambient = 0;  // row length, dim + 1
  LatticeKind kind = LatticeKind::LAMBDA0;
  int b_bits = 0;
  int star_index = 0;  // zero index behind the appended ordinate, 0 if none
  std::vector<std::vector<mpz_class>> rows;
};

// Identity block augmented with the column of nearest integers to 2^b gamma
// (ties to even). With gamma_star present the extra ordinate is appended as
// one more row. Every gamma must carry at least b_bits + 10 bits.
LatticeBasis build_lattice(const std::vector<Real>& gammas_prime,
                           const Real* gamma_star, int b_bits);

// LLL with exact integer rows. Gram-Schmidt bookkeeping runs on floats
// backed by an exact integer Gram matrix (or on exact rationals with
// exact=true, the slow oracle mode). If transform is given it receives the
// unimodular change-of-basis matrix.
LatticeBasis lll_reduce(const LatticeBasis& basis, double delta,
                        std::vector<std::vector<mpz_class>>* transform =
                            nullptr,
                        bool exact = false);

// Smallest squared Gram-Schmidt norm over the basis rows, exact. Throws on
// linearly dependent rows.
mpq_class gram_schmidt_min_norm_sq(const LatticeBasis& basis);

// Largest N whose violating-vector norm bound stays strictly below
// min_norm_sq; 0 when even N = 1 fails. n is the size of the selected
// ordinate set, not the lattice dimension.
mpz_class certify_N(const mpq_class& min_norm_sq, int n, LatticeKind kind);

struct LatticeRecord {
  int star_index = 0;  // 0 for the base lattice
  mpq_class min_gs_norm_sq;
  mpz_class N;
  double seconds = 0.0;
};

struct IndependenceCertificate {
  Problem problem = Problem::MERTENS;
  int n = 0;
  int m = 0;
  int b_bits = 0;
  double delta = 0.0;
  Real epsilon;
  Real T;
  Kernel kernel = Kernel::JURKAT_PEYERIMHOFF;
  std::vector<int> selected_indices;  // ascending
  std::vector<LatticeRecord> lattices;
  mpz_class certified_N;  // min over per-lattice N, 0 when any fails
};

// Full pipeline: select the n strongest ordinates below T = gamma_{m+1} -
// epsilon, build the base lattice plus one star lattice per unselected zero
// index <= m, reduce, extract exact norm floors, certify. Per-lattice records
// land in resume_dir (when given) before aggregation and short-circuit reruns.
IndependenceCertificate run_certification(
    Problem problem, int n, int m, int b_bits, double delta,
    const Real& epsilon, const ZeroTable& zeros, const ResidueSet& residues,
    Kernel kernel = Kernel::JURKAT_PEYERIMHOFF,
    const std::filesystem::path& resume_dir = {}, int workers = 1);

void save_certificate(const std::filesystem::path& p,
                      const IndependenceCertificate& cert);
IndependenceCertificate load_certificate(const std::filesystem::path& p);

}  // namespace omegasum
