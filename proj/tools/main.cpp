// Command line front end. One process per run; every subcommand resolves its
// full configuration, echoes it into the output header, and writes artifacts
// whose bytes depend only on the configuration and the input files.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "omegasum/artifact.hpp"
#include "omegasum/density.hpp"
#include "omegasum/lattice.hpp"
#include "omegasum/oscillation.hpp"
#include "omegasum/parallel.hpp"
#include "omegasum/series.hpp"
#include "omegasum/sieve.hpp"
#include "omegasum/zeros.hpp"
#include "omegasum/zeta.hpp"

namespace {

using namespace omegasum;

std::string dstr(double d) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, d);
  return std::string(buf, res.ptr);
}

// Writes the artifact when a path was given, otherwise prints it.
void deliver(const std::string& out_path, const Artifact& a) {
  if (!out_path.empty()) {
    save_artifact(out_path, a);
    return;
  }
  for (const auto& [k, v] : a.meta) std::cout << "# " << k << ": " << v << "\n";
  for (const auto& r : a.rows) std::cout << r << "\n";
}

std::vector<double> resolve_grid(const std::vector<double>& us, double from,
                                 double to, int points) {
  std::vector<double> grid = us;
  if (points > 0) {
    if (points == 1) {
      grid.push_back(from);
    } else {
      for (int i = 0; i < points; ++i)
        grid.push_back(from + (to - from) * i / (points - 1));
    }
  }
  if (grid.empty())
    throw CLI::ValidationError("--u or a --points grid is required");
  return grid;
}

int decimal_digits(mpfr_prec_t bits) {
  return static_cast<int>(static_cast<double>(bits) * 0.30103) + 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "summatory sign functions, parity density brackets, explicit sums over "
      "zeta zeros, and lattice independence certificates"};
  app.set_version_flag("--version",
                       std::string(kToolName) + " " + kToolVersion);
  app.require_subcommand(1);

  int workers = 1;
  app.add_option("--workers", workers, "worker thread count")
      ->check(CLI::PositiveNumber);

  // zeros ------------------------------------------------------------------
  auto* zeros_cmd = app.add_subcommand("zeros", "ordinate table operations");
  zeros_cmd->require_subcommand(1);
  struct {
    std::string in, out;
    int min_bits = 64;
    double tolerance = 1e-6;
    int count = 100;
    int digits = 30;
  } z;
  auto* zl = zeros_cmd->add_subcommand("load", "parse and summarize a table");
  zl->add_option("--in", z.in, "table file")->required();
  zl->add_option("--min-bits", z.min_bits, "required precision floor");
  zl->add_option("--out", z.out, "re-save destination");
  auto* zv = zeros_cmd->add_subcommand(
      "validate", "evaluate zeta at every ordinate and check the magnitude");
  zv->add_option("--in", z.in, "table file")->required();
  zv->add_option("--min-bits", z.min_bits, "required precision floor");
  zv->add_option("--tolerance", z.tolerance, "pass threshold on |zeta|");
  zv->add_option("--out", z.out, "report destination");
  auto* zg = zeros_cmd->add_subcommand(
      "generate", "find the first ordinates from scratch");
  zg->add_option("--count", z.count, "number of zeros")->required();
  zg->add_option("--digits", z.digits, "correct decimal digits");
  zg->add_option("--out", z.out, "table destination")->required();

  // sieve ------------------------------------------------------------------
  auto* sieve_cmd =
      app.add_subcommand("sieve", "segmented summatory computation");
  struct {
    std::string func;
    uint64_t xmax = 0;
    uint64_t block = uint64_t(1) << 22;
    uint64_t stride = 0;
    uint64_t table_limit = 0;
    std::string out, plot;
  } sv;
  sieve_cmd->add_option("--func", sv.func, "xi, lambda, or mu")->required();
  sieve_cmd->add_option("--xmax", sv.xmax, "upper limit")->required();
  sieve_cmd->add_option("--block", sv.block, "block length");
  sieve_cmd->add_option("--stride", sv.stride,
                        "checkpoint stride, 0 for geometric spacing");
  sieve_cmd->add_option("--table-limit", sv.table_limit,
                        "sign table limit, 0 for automatic");
  sieve_cmd->add_option("--out", sv.out, "checkpoint artifact");
  sieve_cmd->add_option("--plot", sv.plot,
                        "normalized (log x, S/sqrt x) CSV destination");

  // beta -------------------------------------------------------------------
  auto* beta_cmd =
      app.add_subcommand("beta", "parity agreement density brackets");
  struct {
    std::string mode;
    std::vector<uint64_t> caps;
    uint64_t B = 10000000;
    double zv = -1.0;
    uint64_t prime_bound = 1000000;
    uint64_t x = 0;
    uint64_t block = uint64_t(1) << 22;
    int bits = 256;
    std::string out;
  } bt;
  beta_cmd
      ->add_option("--mode", bt.mode, "by-r, by-product, renyi, or empirical")
      ->required();
  beta_cmd->add_option("--caps", bt.caps, "per-r prime caps for by-r")
      ->delimiter(',');
  beta_cmd->add_option("--B", bt.B, "product bound for by-product");
  beta_cmd->add_option("--z", bt.zv, "evaluation point for renyi");
  beta_cmd->add_option("--prime-bound", bt.prime_bound,
                       "product truncation for renyi");
  beta_cmd->add_option("--x", bt.x, "range for empirical");
  beta_cmd->add_option("--block", bt.block, "sieve block for empirical");
  beta_cmd->add_option("--bits", bt.bits, "working precision")
      ->envname("OMEGASUM_BITS");
  beta_cmd->add_option("--out", bt.out, "artifact destination");

  // residues ---------------------------------------------------------------
  auto* res_cmd = app.add_subcommand("residues", "per-zero residue tables");
  struct {
    std::string problem;
    std::string line = "half";
    int count = 0;
    int bits = 96;
    uint64_t prime_bound = 100000;
    std::string zeros, out;
  } rs;
  res_cmd->add_option("--problem", rs.problem, "m, l, or h")->required();
  res_cmd->add_option("--line", rs.line, "half or quarter");
  res_cmd->add_option("--count", rs.count, "zero indices 1..count")
      ->required();
  res_cmd->add_option("--bits", rs.bits, "target precision")
      ->envname("OMEGASUM_BITS");
  res_cmd->add_option("--prime-bound", rs.prime_bound,
                      "Euler factor truncation (h only)");
  res_cmd->add_option("--zeros", rs.zeros, "ordinate table")->required();
  res_cmd->add_option("--out", rs.out, "residue artifact")->required();

  // oscillate --------------------------------------------------------------
  auto* osc_cmd = app.add_subcommand("oscillate", "sums over zeros");
  osc_cmd->require_subcommand(1);
  struct {
    std::string problem;
    std::string kernel = "fejer";
    double T = 0;
    std::vector<double> us;
    double u_from = 0, u_to = 0;
    int points = 0;
    std::string zeros, residues, quarter, indices, out;
    int m = 0;
    int n = 0;
    uint64_t N = 0;
    double epsilon = 1e-10;
  } os;
  auto* ob = osc_cmd->add_subcommand("bstar", "kernel-weighted zero sum");
  ob->add_option("--problem", os.problem, "m, l, or h")->required();
  ob->add_option("--kernel", os.kernel, "fejer or jp");
  ob->add_option("--T", os.T, "truncation height")->required();
  ob->add_option("--u", os.us, "evaluation points");
  ob->add_option("--u-from", os.u_from, "grid start");
  ob->add_option("--u-to", os.u_to, "grid end");
  ob->add_option("--points", os.points, "grid size");
  ob->add_option("--zeros", os.zeros, "ordinate table")->required();
  ob->add_option("--residues", os.residues, "residue artifact")->required();
  ob->add_option("--out", os.out, "CSV destination");
  auto* oe = osc_cmd->add_subcommand(
      "estimate", "sharp-cutoff estimate of the normalized summatory value");
  oe->add_option("--problem", os.problem, "l or h")->required();
  oe->add_option("--T", os.T, "truncation height")->required();
  oe->add_option("--u", os.us, "evaluation points");
  oe->add_option("--u-from", os.u_from, "grid start");
  oe->add_option("--u-to", os.u_to, "grid end");
  oe->add_option("--points", os.points, "grid size");
  oe->add_option("--zeros", os.zeros, "ordinate table")->required();
  oe->add_option("--residues", os.residues, "half-line residues")->required();
  oe->add_option("--quarter", os.quarter,
                 "quarter-line residues, enables the correction term");
  oe->add_option("--out", os.out, "CSV destination");
  auto* og = osc_cmd->add_subcommand(
      "bound", "oscillation bound from an independence level");
  og->add_option("--problem", os.problem, "m, l, or h")->required();
  og->add_option("--kernel", os.kernel, "fejer or jp");
  og->add_option("--m", os.m, "zero count below the cutoff")->required();
  og->add_option("--epsilon", os.epsilon, "cutoff back-off from the next zero");
  og->add_option("--N", os.N, "certified independence level")->required();
  og->add_option("--n", os.n, "selection size when choosing by score");
  og->add_option("--indices", os.indices, "explicit zero index list file");
  og->add_option("--zeros", os.zeros, "ordinate table")->required();
  og->add_option("--residues", os.residues, "residue artifact")->required();
  og->add_option("--out", os.out, "artifact destination");

  // certify ----------------------------------------------------------------
  auto* cert_cmd =
      app.add_subcommand("certify", "lattice independence certification");
  struct {
    std::string problem;
    int n = 0, m = 0, bits = 0;
    double delta = 0.99;
    double epsilon = 1e-10;
    std::string kernel = "jp";
    std::string zeros, residues, resume_dir, out;
  } ct;
  cert_cmd->add_option("--problem", ct.problem, "m, l, or h")->required();
  cert_cmd->add_option("--n", ct.n, "selected ordinate count")->required();
  cert_cmd->add_option("--m", ct.m, "zeros below the cutoff")->required();
  cert_cmd->add_option("--bits", ct.bits, "scaling bits b")->required();
  cert_cmd->add_option("--delta", ct.delta, "LLL quality parameter");
  cert_cmd->add_option("--epsilon", ct.epsilon, "cutoff back-off");
  cert_cmd->add_option("--kernel", ct.kernel, "selection kernel");
  cert_cmd->add_option("--zeros", ct.zeros, "ordinate table")->required();
  cert_cmd->add_option("--residues", ct.residues, "residue artifact")
      ->required();
  cert_cmd->add_option("--resume-dir", ct.resume_dir,
                       "per-lattice record directory");
  cert_cmd->add_option("--out", ct.out, "certificate destination");

  // series -----------------------------------------------------------------
  auto* ser_cmd = app.add_subcommand("series", "exact power series data");
  ser_cmd->require_subcommand(1);
  struct {
    int K = 9;
    int k = 6;
    std::string out;
  } se;
  auto* sa = ser_cmd->add_subcommand("a-sequence",
                                     "exponents of the product identity");
  sa->add_option("--K", se.K, "last index");
  sa->add_option("--out", se.out, "artifact destination");
  auto* sf = ser_cmd->add_subcommand("fk-tail",
                                     "tail coefficients after k stages");
  sf->add_option("--k", se.k, "stage");
  sf->add_option("--K", se.K, "truncation order");
  sf->add_option("--out", se.out, "artifact destination");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    // zeros
    if (zl->parsed() || zv->parsed()) {
      ZeroTable t = load_zeros(z.in, z.min_bits);
      Artifact a = new_artifact();
      a.add("kind", zv->parsed() ? "zero-validation" : "zero-summary");
      a.add("input", z.in);
      a.add("input_digest", file_digest(z.in));
      a.add("min_bits", std::to_string(z.min_bits));
      a.add("count", std::to_string(t.count()));
      a.add("gamma_first", t.gamma(1).to_string(20));
      a.add("gamma_last", t.gamma(t.count()).to_string(20));
      if (zv->parsed()) {
        a.add("tolerance", dstr(z.tolerance));
        ZetaConfig cfg;
        cfg.height_ceiling = std::max(
            cfg.height_ceiling, t.gamma(t.count()).to_double() + 10.0);
        ZetaEvaluator ev(cfg);
        ZeroValidation v = validate_zeros(t, ev, z.tolerance, workers);
        a.add("all_pass", v.all_pass ? "1" : "0");
        a.add("columns", "index,abs_zeta,pass");
        char buf[64];
        for (const ZeroCheck& c : v.checks) {
          std::snprintf(buf, sizeof buf, "%d,%.6e,%d", c.index, c.abs_zeta,
                        c.pass ? 1 : 0);
          a.rows.push_back(buf);
        }
        deliver(z.out, a);
        return v.all_pass ? 0 : 1;
      }
      if (!z.out.empty()) save_zeros(z.out, t);
      deliver("", a);
      return 0;
    }
    if (zg->parsed()) {
      ZeroTable t = generate_zeros(z.count, z.digits, ZetaConfig{}, workers);
      save_zeros(z.out, t);
      std::cout << "wrote " << t.count() << " ordinates, last "
                << t.gamma(t.count()).to_string(z.digits) << "\n";
      return 0;
    }

    // sieve
    if (sieve_cmd->parsed()) {
      SignFunc f = parse_func(sv.func);
      std::optional<XiTable> table;
      const XiTable* tp = nullptr;
      if (sv.table_limit > 0 && f != SignFunc::MU) {
        table = XiTable::build(sv.table_limit, f);
        tp = &*table;
      }
      SummatorySeries s =
          summatory(sv.xmax, sv.block, f, sv.stride, tp, workers);
      std::vector<std::pair<std::string, std::string>> extra = {
          {"xmax", std::to_string(sv.xmax)},
          {"block", std::to_string(sv.block)},
          {"stride", std::to_string(sv.stride)},
          {"table_limit", std::to_string(sv.table_limit)}};
      if (!sv.out.empty()) {
        save_summatory(sv.out, s, extra);
      } else {
        Artifact a = new_artifact();
        a.add("kind", "summatory");
        a.add("func", func_name(s.func));
        for (const auto& [k, v] : extra) a.add(k, v);
        a.add("columns", "x,S");
        for (const auto& [x, S] : s.checkpoints)
          a.rows.push_back(std::to_string(x) + "," + std::to_string(S));
        deliver("", a);
      }
      if (!sv.plot.empty()) {
        Artifact a = new_artifact();
        a.add("kind", "summatory-normalized");
        a.add("func", func_name(s.func));
        for (const auto& [k, v] : extra) a.add(k, v);
        a.add("columns", "log_x,S_over_sqrt_x");
        for (const auto& [u, y] : normalized_export(s))
          a.rows.push_back(dstr(u) + "," + dstr(y));
        save_artifact(sv.plot, a);
      }
      return 0;
    }

    // beta
    if (beta_cmd->parsed()) {
      Artifact a = new_artifact();
      a.add("kind", "beta");
      a.add("mode", bt.mode);
      int digits = decimal_digits(bt.bits);
      if (bt.mode == "by-r") {
        if (bt.caps.empty())
          throw CLI::ValidationError("--caps required for by-r");
        DensityBound b = beta_bounds_by_r(bt.caps, bt.bits, workers);
        a.add("config", b.config);
        a.rows.push_back("lower," + b.lower.to_string(digits));
        a.rows.push_back("upper," + b.upper.to_string(digits));
      } else if (bt.mode == "by-product") {
        DensityBound b = beta_bounds_by_product(bt.B, bt.bits, workers);
        a.add("config", b.config);
        a.rows.push_back("lower," + b.lower.to_string(digits));
        a.rows.push_back("upper," + b.upper.to_string(digits));
      } else if (bt.mode == "renyi") {
        RenyiResult r =
            renyi_R(Real::of(bt.zv, bt.bits), bt.prime_bound, bt.bits);
        a.add("z", dstr(bt.zv));
        a.add("prime_bound", std::to_string(bt.prime_bound));
        a.add("bits", std::to_string(bt.bits));
        a.rows.push_back("value," + r.value.to_string(digits));
        a.rows.push_back("truncated," + r.truncated.to_string(digits));
        a.rows.push_back("tail_estimate," + r.tail_estimate.to_string(8));
        Real beta =
            (Real::of(1L, bt.bits) + r.value) / 2L;
        a.rows.push_back("beta_from_value," + beta.to_string(digits));
      } else if (bt.mode == "empirical") {
        if (bt.x < 1) throw CLI::ValidationError("--x required for empirical");
        double ratio = empirical_beta(bt.x, bt.block, workers);
        a.add("x", std::to_string(bt.x));
        a.rows.push_back("ratio," + dstr(ratio));
      } else {
        throw CLI::ValidationError("unknown --mode '" + bt.mode + "'");
      }
      deliver(bt.out, a);
      return 0;
    }

    // residues
    if (res_cmd->parsed()) {
      ZeroTable t = load_zeros(rs.zeros, 64);
      ResidueSet set =
          compute_residues(t, parse_problem(rs.problem), parse_line(rs.line),
                           rs.count, rs.prime_bound, rs.bits, workers);
      save_residues(rs.out, set, file_digest(rs.zeros));
      std::cout << "wrote " << set.entries.size() << " residues\n";
      return 0;
    }

    // oscillate
    if (ob->parsed() || oe->parsed()) {
      Problem problem = parse_problem(os.problem);
      ZeroTable t = load_zeros(os.zeros, 64);
      ResidueSet half = load_residues(os.residues);
      std::vector<double> grid = resolve_grid(os.us, os.u_from, os.u_to,
                                              os.points);
      Artifact a = new_artifact();
      a.add("kind", ob->parsed() ? "bstar" : "estimate");
      a.add("problem", problem_name(problem));
      a.add("T", dstr(os.T));
      a.add("zeros_digest", file_digest(os.zeros));
      a.add("residues_digest", file_digest(os.residues));
      std::vector<Real> vals(grid.size(), Real(64));
      if (ob->parsed()) {
        KernelSpec spec{parse_kernel(os.kernel),
                        Real::of(os.T, kOscillationBits)};
        a.add("kernel", kernel_name(spec.kind));
        parallel_for(static_cast<int64_t>(grid.size()), workers,
                     [&](int64_t i) {
                       vals[i] = b_star(problem, spec,
                                        Real::of(grid[i], kOscillationBits), t,
                                        half);
                     });
      } else {
        ResidueSet quarter;
        bool with_quarter = !os.quarter.empty();
        if (with_quarter) {
          quarter = load_residues(os.quarter);
          a.add("quarter_digest", file_digest(os.quarter));
        }
        Real T = Real::of(os.T, kOscillationBits);
        parallel_for(static_cast<int64_t>(grid.size()), workers,
                     [&](int64_t i) {
                       vals[i] = explicit_estimate(
                           problem, Real::of(grid[i], kOscillationBits), T, t,
                           half, with_quarter,
                           with_quarter ? &quarter : nullptr);
                     });
      }
      a.add("columns", "u,value");
      for (size_t i = 0; i < grid.size(); ++i)
        a.rows.push_back(dstr(grid[i]) + "," + vals[i].to_string(24));
      deliver(os.out, a);
      return 0;
    }
    if (og->parsed()) {
      Problem problem = parse_problem(os.problem);
      ZeroTable t = load_zeros(os.zeros, 64);
      ResidueSet half = load_residues(os.residues);
      if (t.count() < os.m + 1)
        throw std::runtime_error("zero table must reach index m+1");
      const Real& next = t.gamma(os.m + 1);
      Real T = next - to_prec(Real::of(os.epsilon, 64), next.prec());
      KernelSpec spec{parse_kernel(os.kernel), T};
      std::vector<int> indices;
      if (!os.indices.empty()) {
        indices = load_index_list(os.indices);
      } else {
        if (os.n < 1)
          throw CLI::ValidationError("--n or --indices required");
        ResidueSet sub = half;
        if (static_cast<int>(sub.entries.size()) > os.m)
          sub.entries.resize(os.m);
        indices = select_gamma_prime(sub, spec, os.n);
      }
      WeightedResidueSet weighted = weight_residues(half, spec, &indices);
      OscillationBound b = anderson_stark_bound(weighted, os.N);
      Artifact a = new_artifact();
      a.add("kind", "oscillation-bound");
      a.add("problem", problem_name(problem));
      a.add("kernel", kernel_name(spec.kind));
      a.add("m", std::to_string(os.m));
      a.add("epsilon", dstr(os.epsilon));
      a.add("N", std::to_string(os.N));
      a.add("T", T.to_string(30));
      a.add("entries", std::to_string(weighted.entries.size()));
      a.add("zeros_digest", file_digest(os.zeros));
      a.add("residues_digest", file_digest(os.residues));
      a.rows.push_back("limsup_lower," + b.limsup_lower.to_string(20));
      a.rows.push_back("liminf_upper," + b.liminf_upper.to_string(20));
      deliver(os.out, a);
      return 0;
    }

    // certify
    if (cert_cmd->parsed()) {
      ZeroTable t = load_zeros(ct.zeros, ct.bits + 10);
      ResidueSet half = load_residues(ct.residues);
      IndependenceCertificate cert = run_certification(
          parse_problem(ct.problem), ct.n, ct.m, ct.bits, ct.delta,
          Real::of(ct.epsilon, 96), t, half, parse_kernel(ct.kernel),
          ct.resume_dir, workers);
      if (!ct.out.empty()) save_certificate(ct.out, cert);
      std::cout << "certified_N " << cert.certified_N.get_str() << "\n";
      for (const LatticeRecord& r : cert.lattices)
        std::cout << "lattice " << r.star_index << " N "
                  << r.N.get_str() << "\n";
      return cert.certified_N > 0 ? 0 : 1;
    }

    // series
    if (sa->parsed()) {
      std::vector<mpz_class> seq = compute_a_sequence(se.K);
      Artifact a = new_artifact();
      a.add("kind", "a-sequence");
      a.add("K", std::to_string(se.K));
      a.add("columns", "k,a_k");
      for (int i = 0; i < static_cast<int>(seq.size()); ++i)
        a.rows.push_back(std::to_string(i + 1) + "," + seq[i].get_str());
      deliver(se.out, a);
      return 0;
    }
    if (sf->parsed()) {
      PowerSeries ps = fk_tail_coefficients(se.k, se.K);
      Artifact a = new_artifact();
      a.add("kind", "fk-tail");
      a.add("k", std::to_string(se.k));
      a.add("K", std::to_string(se.K));
      a.add("columns", "degree,coefficient");
      for (int i = 0; i <= ps.truncation_order; ++i)
        a.rows.push_back(std::to_string(i) + "," + ps[i].get_str());
      deliver(se.out, a);
      return 0;
    }
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
