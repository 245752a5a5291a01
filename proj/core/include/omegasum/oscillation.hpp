#pragma once

// Kernel-weighted sums over zeta zeros: the smoothed almost-periodic
// trigonometric polynomial B*_T(u), sharp-cutoff explicit estimates for the
// normalized summatory functions, and oscillation bounds assembled from an
// N-independence certificate.

#include <cstdint>
#include <string>
#include <vector>

#include "omegasum/mp.hpp"
#include "omegasum/zeros.hpp"
#include "omegasum/zeta.hpp"

namespace omegasum {

// Default precision for kernel cutoffs and evaluation points fed into the
// zero sums. The sums themselves widen from the residue precision.
inline constexpr mpfr_prec_t kOscillationBits = 192;

enum class Kernel { FEJER, JURKAT_PEYERIMHOFF };

std::string kernel_name(Kernel k);
Kernel parse_kernel(const std::string& s);

struct KernelSpec {
  Kernel kind = Kernel::FEJER;
  Real T;  // support radius, > 1
};

// Piecewise kernel weight; exactly 0 for |t| >= T.
Real kernel_eval(const KernelSpec& spec, const Real& t);

struct WeightedEntry {
  int index = 0;
  Real gamma;
  Complex value;
  Real weight;
};

struct WeightedResidueSet {
  Problem problem = Problem::MERTENS;
  KernelSpec kernel;
  std::vector<WeightedEntry> entries;
};

// Attaches kernel weights. With indices null, takes every residue entry with
// gamma < T; otherwise exactly the listed zero indices (all must be present
// in the set and below T).
WeightedResidueSet weight_residues(const ResidueSet& residues,
                                   const KernelSpec& kernel,
                                   const std::vector<int>* indices = nullptr);

// 1/zeta(1/2) for POLYA, zero otherwise.
Real leading_term(Problem problem, mpfr_prec_t bits);

// B*_T(u) = r0 + 2 Re sum_{gamma < T} k_T(gamma) r_gamma e^{i gamma u}.
// Requires the residue set to cover every table zero below kernel.T.
Real b_star(Problem problem, const KernelSpec& kernel, const Real& u,
            const ZeroTable& zeros, const ResidueSet& residues);

// Sharp-cutoff estimate r0 + 2 sum Re(r_gamma e^{i gamma u}) over gamma <= T.
// With include_quarter set (OMEGA only) adds the quarter-line correction
// 2 sum Re(r e^{i gamma u/2}) e^{-u/4} from the supplied quarter residues.
Real explicit_estimate(Problem problem, const Real& u, const Real& T,
                       const ZeroTable& zeros, const ResidueSet& residues,
                       bool include_quarter = false,
                       const ResidueSet* quarter = nullptr);

struct OscillationBound {
  Real limsup_lower;
  Real liminf_upper;
};

// r0 +- 2 (N/(N+1)) sum k_T(gamma) |r_gamma| over the weighted entries,
// valid once the selected ordinates are certified N-independent.
OscillationBound anderson_stark_bound(const WeightedResidueSet& weighted,
                                      uint64_t N);

// Zero indices of the n largest k_T(gamma)|r_gamma|, score-descending, ties
// toward the smaller ordinate.
std::vector<int> select_gamma_prime(const ResidueSet& residues,
                                    const KernelSpec& kernel, size_t n);

}  // namespace omegasum
