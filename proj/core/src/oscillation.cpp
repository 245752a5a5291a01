#include "omegasum/oscillation.hpp"

#include <algorithm>
#include <stdexcept>

namespace omegasum {

std::string kernel_name(Kernel k) {
  return k == Kernel::FEJER ? "fejer" : "jp";
}

Kernel parse_kernel(const std::string& s) {
  if (s == "fejer") return Kernel::FEJER;
  if (s == "jp" || s == "jurkat-peyerimhoff") return Kernel::JURKAT_PEYERIMHOFF;
  throw std::invalid_argument("unknown kernel '" + s + "'");
}

Real kernel_eval(const KernelSpec& spec, const Real& t) {
  if (spec.T.cmp(1.0) <= 0) throw std::invalid_argument("kernel needs T > 1");
  const mpfr_prec_t p = std::max(t.prec(), spec.T.prec());
  Real a = abs(to_prec(t, p));
  if (a >= to_prec(spec.T, p)) return Real(p);
  Real x = a / to_prec(spec.T, p);  // in [0, 1)
  if (spec.kind == Kernel::FEJER) return Real::of(1L, p) - x;
  Real pi = Real::pi(p);
  Real s(p), c(p);
  sin_cos(s, c, pi * x);
  return (Real::of(1L, p) - x) * c + s / pi;
}

WeightedResidueSet weight_residues(const ResidueSet& residues,
                                   const KernelSpec& kernel,
                                   const std::vector<int>* indices) {
  WeightedResidueSet out;
  out.problem = residues.problem;
  out.kernel = kernel;
  auto push = [&](const ResidueEntry& e) {
    if (!(e.gamma < kernel.T))
      throw std::invalid_argument("residue ordinate at or beyond kernel T");
    out.entries.push_back(
        WeightedEntry{e.index, e.gamma, e.value, kernel_eval(kernel, e.gamma)});
  };
  if (indices == nullptr) {
    for (const ResidueEntry& e : residues.entries)
      if (e.gamma < kernel.T) push(e);
  } else {
    for (int idx : *indices) {
      if (idx < 1 || static_cast<size_t>(idx) > residues.entries.size() ||
          residues.entries[idx - 1].index != idx)
        throw std::invalid_argument("residue set lacks zero index " +
                                    std::to_string(idx));
      push(residues.entries[idx - 1]);
    }
  }
  return out;
}

Real leading_term(Problem problem, mpfr_prec_t bits) {
  if (problem != Problem::POLYA) return Real(bits);
  ZetaEvaluator ev;
  return Real::of(1L, bits) / ev.zeta_real(Real::of(0.5, bits), bits);
}

namespace {

// pairwise reduction, worker-count independent by construction
Real tree_sum(std::vector<Real> v, mpfr_prec_t bits) {
  if (v.empty()) return Real(bits);
  while (v.size() > 1) {
    size_t h = 0;
    for (size_t i = 0; i + 1 < v.size(); i += 2) v[h++] = v[i] + v[i + 1];
    if (v.size() & 1) v[h++] = std::move(v.back());
    v.resize(h);
  }
  return to_prec(v[0], bits);
}

// entries 1..n_below of the residue set must be exactly the table zeros
// below the cutoff
void check_coverage(const ZeroTable& zeros, const ResidueSet& residues,
                    double cutoff) {
  int below = zeros.count_below(cutoff);
  if (static_cast<size_t>(below) > residues.entries.size())
    throw std::invalid_argument("residue set does not cover all zeros below T");
  for (int i = 0; i < below; ++i)
    if (residues.entries[i].index != i + 1)
      throw std::invalid_argument("residue set has an index gap below T");
}

}  // namespace

Real b_star(Problem problem, const KernelSpec& kernel, const Real& u,
            const ZeroTable& zeros, const ResidueSet& residues) {
  if (residues.problem != problem)
    throw std::invalid_argument("residue set is for a different problem");
  if (residues.line != Line::HALF)
    throw std::invalid_argument("b_star takes half-line residues");
  check_coverage(zeros, residues, kernel.T.to_double());

  const mpfr_prec_t wp =
      std::max<mpfr_prec_t>(residues.precision_bits + 16, 128);
  const Real uw = to_prec(u, wp);
  std::vector<Real> terms;
  terms.reserve(residues.entries.size());
  for (const ResidueEntry& e : residues.entries) {
    if (!(e.gamma < kernel.T)) break;
    Real w = kernel_eval(kernel, e.gamma);
    Complex rot = Complex::unit(to_prec(e.gamma, wp) * uw);
    // Re(r e^{i gamma u})
    Real re = e.value.re() * rot.re() - e.value.im() * rot.im();
    terms.push_back(to_prec(re * w, wp));
  }
  return leading_term(problem, wp) + ldexp2(tree_sum(std::move(terms), wp), 1);
}

Real explicit_estimate(Problem problem, const Real& u, const Real& T,
                       const ZeroTable& zeros, const ResidueSet& residues,
                       bool include_quarter, const ResidueSet* quarter) {
  if (problem == Problem::MERTENS)
    throw std::invalid_argument("estimate covers the POLYA and OMEGA problems");
  if (residues.problem != problem || residues.line != Line::HALF)
    throw std::invalid_argument("half-line residue set mismatch");
  if (include_quarter) {
    if (problem != Problem::OMEGA)
      throw std::invalid_argument("quarter-line term applies to OMEGA only");
    if (quarter == nullptr || quarter->problem != Problem::OMEGA ||
        quarter->line != Line::QUARTER)
      throw std::invalid_argument("quarter-line residue set required");
  }
  check_coverage(zeros, residues, T.to_double());
  if (include_quarter) check_coverage(zeros, *quarter, T.to_double());

  const mpfr_prec_t wp =
      std::max<mpfr_prec_t>(residues.precision_bits + 16, 128);
  const Real uw = to_prec(u, wp);
  const Real Tw = to_prec(T, wp);
  std::vector<Real> terms;
  terms.reserve(residues.entries.size());
  for (const ResidueEntry& e : residues.entries) {
    if (to_prec(e.gamma, wp) > Tw) break;
    Complex rot = Complex::unit(to_prec(e.gamma, wp) * uw);
    terms.push_back(
        to_prec(e.value.re() * rot.re() - e.value.im() * rot.im(), wp));
  }
  Real total = leading_term(problem, wp) + ldexp2(tree_sum(std::move(terms), wp), 1);

  if (include_quarter) {
    Real damp = exp(-uw / 4L);
    Real half_u = uw / 2L;
    std::vector<Real> qterms;
    qterms.reserve(quarter->entries.size());
    for (const ResidueEntry& e : quarter->entries) {
      if (to_prec(e.gamma, wp) > Tw) break;
      Complex rot = Complex::unit(to_prec(e.gamma, wp) * half_u);
      qterms.push_back(
          to_prec(e.value.re() * rot.re() - e.value.im() * rot.im(), wp));
    }
    total += ldexp2(tree_sum(std::move(qterms), wp), 1) * damp;
  }
  return total;
}

OscillationBound anderson_stark_bound(const WeightedResidueSet& weighted,
                                      uint64_t N) {
  if (weighted.entries.empty())
    throw std::invalid_argument("no weighted residues");
  if (N < 1) throw std::invalid_argument("independence level N >= 1 required");

  const mpfr_prec_t wp = 192;
  std::vector<Real> terms;
  terms.reserve(weighted.entries.size());
  for (const WeightedEntry& e : weighted.entries)
    terms.push_back(to_prec(e.weight * abs(e.value), wp));
  Real sum = tree_sum(std::move(terms), wp);
  Real amp = ldexp2(sum, 1) * Real::of(static_cast<long>(N), wp) /
             Real::of(static_cast<long>(N + 1), wp);
  Real r0 = leading_term(weighted.problem, wp);
  return OscillationBound{r0 + amp, r0 - amp};
}

std::vector<int> select_gamma_prime(const ResidueSet& residues,
                                    const KernelSpec& kernel, size_t n) {
  if (n > residues.entries.size())
    throw std::invalid_argument("selection larger than residue set");
  struct Scored {
    int index;
    Real score;
    const Real* gamma;
  };
  std::vector<Scored> scored;
  scored.reserve(residues.entries.size());
  for (const ResidueEntry& e : residues.entries) {
    if (!(e.gamma < kernel.T))
      throw std::invalid_argument("residue ordinate at or beyond kernel T");
    scored.push_back(
        Scored{e.index, kernel_eval(kernel, e.gamma) * abs(e.value), &e.gamma});
  }
  std::stable_sort(scored.begin(), scored.end(),
                   [](const Scored& a, const Scored& b) {
                     int c = a.score.cmp(b.score);
                     if (c != 0) return c > 0;
                     return *a.gamma < *b.gamma;
                   });
  std::vector<int> out;
  out.reserve(n);
  for (size_t i = 0; i < n; ++i) out.push_back(scored[i].index);
  return out;
}

}  // namespace omegasum
