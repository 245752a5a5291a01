// Recomputes the kernel-weighted residue ranking over the first 2365 zeros
// and checks that the 239 strongest indices match the shipped selection.
//
// Usage: selection_check <data_dir>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "omegasum/artifact.hpp"
#include "omegasum/mp.hpp"
#include "omegasum/oscillation.hpp"
#include "omegasum/zeros.hpp"
#include "omegasum/zeta.hpp"

namespace fs = std::filesystem;
using namespace omegasum;

int main(int argc, char** argv) {
  if (argc != 2) {
    std::fprintf(stderr, "usage: %s <data_dir>\n", argv[0]);
    return 2;
  }
  fs::path data = argv[1];

  std::vector<int> want = load_index_list(data / "h_zero_selection_239.txt");
  if (want.size() != 239) {
    std::fprintf(stderr, "selection file has %zu indices\n", want.size());
    return 1;
  }
  std::sort(want.begin(), want.end());

  ZeroTable zeros = load_zeros(data / "zeros_4620_60d.txt", 190);
  ResidueSet rs = compute_residues(zeros, Problem::OMEGA, Line::HALF, 2365,
                                   100000, 64, 1);
  const Real& g = zeros.gamma(2366);
  KernelSpec k{Kernel::JURKAT_PEYERIMHOFF, g - Real::parse("1e-10", g.prec())};
  std::vector<int> got = select_gamma_prime(rs, k, 239);
  std::sort(got.begin(), got.end());

  if (got != want) {
    int shown = 0;
    for (size_t i = 0; i < want.size() && shown < 10; ++i)
      if (got[i] != want[i]) {
        std::fprintf(stderr, "position %zu: got %d, want %d\n", i, got[i],
                     want[i]);
        ++shown;
      }
    return 1;
  }
  std::printf("selection check: 239 indices reproduced\n");
  return 0;
}
