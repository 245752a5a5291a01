#include "omegasum/lattice.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "omegasum/artifact.hpp"
#include "omegasum/parallel.hpp"

namespace omegasum {

LatticeBasis build_lattice(const std::vector<Real>& gammas_prime,
                           const Real* gamma_star, int b_bits) {
  if (b_bits < 1) throw std::invalid_argument("b_bits >= 1 required");
  if (gammas_prime.empty()) throw std::invalid_argument("empty ordinate set");
  auto scale = [&](const Real& g) {
    if (g.prec() < b_bits + 10)
      throw std::invalid_argument("ordinate precision below b_bits + 10");
    return ldexp2(g, b_bits).round_to_int();
  };
  for (size_t i = 0; i < gammas_prime.size(); ++i)
    for (size_t j = i + 1; j < gammas_prime.size(); ++j)
      if (gammas_prime[i] == gammas_prime[j])
        throw std::invalid_argument("duplicate ordinate");

  std::vector<mpz_class> col;
  col.reserve(gammas_prime.size() + 1);
  for (const Real& g : gammas_prime) col.push_back(scale(g));
  if (gamma_star) col.push_back(scale(*gamma_star));

  LatticeBasis basis;
  basis.kind = gamma_star ? LatticeKind::LAMBDA_I : LatticeKind::LAMBDA0;
  basis.dim = static_cast<int>(col.size());
  basis.ambient = basis.dim + 1;
  basis.b_bits = b_bits;
  basis.rows.assign(basis.dim, std::vector<mpz_class>(basis.ambient, 0));
  for (int i = 0; i < basis.dim; ++i) {
    basis.rows[i][i] = 1;
    basis.rows[i][basis.dim] = col[i];
  }
  return basis;
}

namespace {

struct RealOps {
  mpfr_prec_t p;
  using S = Real;
  S zero() const { return Real(p); }
  S from(const mpz_class& z) const { return Real::of(z, p); }
  S from_double(double d) const { return Real::of(d, p); }
  mpz_class round(const S& x) const { return x.round_to_int(); }
};

struct RatOps {
  using S = mpq_class;
  S zero() const { return mpq_class(0); }
  S from(const mpz_class& z) const { return mpq_class(z); }
  S from_double(double d) const { return mpq_class(d); }
  mpz_class round(const S& x) const {
    mpz_class q0, rem;
    mpz_fdiv_qr(q0.get_mpz_t(), rem.get_mpz_t(), x.get_num_mpz_t(),
                x.get_den_mpz_t());
    mpz_class twice = 2 * rem;
    int c = cmp(twice, mpz_class(x.get_den()));
    if (c < 0) return q0;
    if (c > 0) return q0 + 1;
    return mpz_odd_p(q0.get_mpz_t()) ? mpz_class(q0 + 1) : q0;
  }
};

// LLL over exact integer rows. Gram-Schmidt data lives in the scalar type S
// and is recomputed lazily per row from the exact Gram matrix, so scalar
// error never outlives one visit. Cohen's classic control flow.
template <typename Ops>
void lll_engine(std::vector<std::vector<mpz_class>>& rows,
                std::vector<std::vector<mpz_class>>* U, double delta,
                const Ops& ops) {
  using S = typename Ops::S;
  const int m = static_cast<int>(rows.size());
  if (m <= 1) return;

  std::vector<std::vector<mpz_class>> G(m, std::vector<mpz_class>(m));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j <= i; ++j) {
      mpz_class s = 0;
      for (size_t t = 0; t < rows[i].size(); ++t) s += rows[i][t] * rows[j][t];
      G[i][j] = G[j][i] = s;
    }

  std::vector<std::vector<S>> r(m, std::vector<S>(m, ops.zero()));
  std::vector<std::vector<S>> mu(m, std::vector<S>(m, ops.zero()));
  std::vector<S> B(m, ops.zero());
  auto compute_row = [&](int i) {
    for (int j = 0; j <= i; ++j) {
      S t = ops.from(G[i][j]);
      for (int k = 0; k < j; ++k) t = t - mu[j][k] * r[i][k];
      r[i][j] = t;
      if (j < i) mu[i][j] = r[i][j] / B[j];
    }
    B[i] = r[i][i];
    if (!(ops.zero() < B[i]))
      throw std::runtime_error(
          "Gram-Schmidt breakdown during reduction; raise precision");
  };
  int valid = -1;  // rows 0..valid carry current Gram-Schmidt data
  auto ensure = [&](int k) {
    for (int i = valid + 1; i <= k; ++i) compute_row(i);
    valid = std::max(valid, k);
  };
  auto row_op = [&](int k, int l, const mpz_class& q) {
    for (size_t t = 0; t < rows[k].size(); ++t) rows[k][t] -= q * rows[l][t];
    if (U)
      for (size_t t = 0; t < (*U)[k].size(); ++t) (*U)[k][t] -= q * (*U)[l][t];
    for (int t = 0; t < m; ++t) G[k][t] -= q * G[l][t];
    for (int t = 0; t < m; ++t) G[t][k] -= q * G[t][l];
  };

  const S deltaS = ops.from_double(delta);
  long iterations = 0;
  int k = 1;
  while (k < m) {
    if (++iterations > 100000000L)
      throw std::runtime_error("lattice reduction did not converge");
    ensure(k - 1);
    compute_row(k);
    for (int l = k - 1; l >= 0; --l) {
      mpz_class q = ops.round(mu[k][l]);
      if (q == 0) continue;
      row_op(k, l, q);
      S qs = ops.from(q);
      for (int j = 0; j < l; ++j) {
        r[k][j] = r[k][j] - qs * r[l][j];
        mu[k][j] = mu[k][j] - qs * mu[l][j];
      }
      r[k][l] = r[k][l] - qs * r[l][l];
      mu[k][l] = mu[k][l] - qs;
    }
    S rhs = (deltaS - mu[k][k - 1] * mu[k][k - 1]) * B[k - 1];
    if (!(B[k] < rhs)) {
      ++k;
    } else {
      std::swap(rows[k - 1], rows[k]);
      if (U) std::swap((*U)[k - 1], (*U)[k]);
      std::swap(G[k - 1], G[k]);
      for (int t = 0; t < m; ++t) std::swap(G[t][k - 1], G[t][k]);
      valid = k - 2;
      k = std::max(1, k - 1);
    }
  }
}

}  // namespace

LatticeBasis lll_reduce(const LatticeBasis& basis, double delta,
                        std::vector<std::vector<mpz_class>>* transform,
                        bool exact) {
  if (!(delta > 0.25 && delta < 1.0))
    throw std::invalid_argument("delta must lie in (1/4, 1)");
  LatticeBasis out = basis;
  if (transform) {
    transform->assign(out.dim, std::vector<mpz_class>(out.dim, 0));
    for (int i = 0; i < out.dim; ++i) (*transform)[i][i] = 1;
  }
  if (out.dim <= 1) return out;
  if (exact) {
    lll_engine(out.rows, transform, delta, RatOps{});
  } else {
    size_t maxbits = 1;
    for (const auto& row : out.rows)
      for (const auto& e : row)
        maxbits = std::max(maxbits, mpz_sizeinbase(e.get_mpz_t(), 2));
    // Gram entries need ~2*maxbits bits; the rest absorbs cancellation
    RealOps ops{static_cast<mpfr_prec_t>(2 * maxbits + 4 * out.rows.size() +
                                         64)};
    lll_engine(out.rows, transform, delta, ops);
  }
  return out;
}

mpq_class gram_schmidt_min_norm_sq(const LatticeBasis& basis) {
  const int m = basis.dim;
  if (m < 1) throw std::invalid_argument("empty basis");
  const int amb = basis.ambient;
  std::vector<std::vector<mpq_class>> gs(m, std::vector<mpq_class>(amb));
  std::vector<mpq_class> nsq(m);
  mpq_class best;
  for (int i = 0; i < m; ++i) {
    for (int t = 0; t < amb; ++t) gs[i][t] = basis.rows[i][t];
    for (int j = 0; j < i; ++j) {
      mpq_class num = 0;
      for (int t = 0; t < amb; ++t) num += gs[i][t] * gs[j][t];
      mpq_class coeff = num / nsq[j];
      for (int t = 0; t < amb; ++t) gs[i][t] -= coeff * gs[j][t];
    }
    mpq_class sq = 0;
    for (int t = 0; t < amb; ++t) sq += gs[i][t] * gs[i][t];
    if (sq == 0) throw std::invalid_argument("linearly dependent rows");
    nsq[i] = sq;
    if (i == 0 || sq < best) best = sq;
  }
  return best;
}

mpz_class certify_N(const mpq_class& min_norm_sq, int n, LatticeKind kind) {
  if (n < 1) throw std::invalid_argument("n >= 1 required");
  if (!(min_norm_sq > 0))
    throw std::invalid_argument("norm floor must be positive");
  // violating-vector bounds, cleared of denominators:
  //   LAMBDA0:  (n^2+4n) N^2                     < 4 min_norm_sq
  //   LAMBDA_I: (n^2+4n) N^2 + (2n+8) N + 5      < 4 min_norm_sq
  const long a = static_cast<long>(n) * n + 4L * n;
  const mpq_class four = 4 * min_norm_sq;
  auto admissible = [&](const mpz_class& N) {
    mpz_class lhs = a * N * N;
    if (kind == LatticeKind::LAMBDA_I) lhs += (2L * n + 8) * N + 5;
    return mpq_class(lhs) < four;
  };
  if (!admissible(1)) return 0;
  mpz_class cap = four.get_num() / (four.get_den() * a);
  mpz_class est = sqrt(cap) + 2;
  while (est > 1 && !admissible(est)) --est;
  while (admissible(est + 1)) ++est;
  return est;
}

namespace {

bool try_load_record(const std::filesystem::path& p, LatticeRecord* out) {
  std::ifstream in(p);
  if (!in) return false;
  std::string norm;
  LatticeRecord r;
  if (!(in >> r.star_index >> norm >> r.N >> r.seconds)) return false;
  try {
    r.min_gs_norm_sq = mpq_class(norm);
    r.min_gs_norm_sq.canonicalize();
  } catch (const std::exception&) {
    return false;
  }
  *out = std::move(r);
  return true;
}

void write_record(const std::filesystem::path& p, const LatticeRecord& r) {
  std::filesystem::path tmp = p;
  tmp += ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << r.star_index << ' ' << r.min_gs_norm_sq.get_str() << ' '
        << r.N.get_str() << ' ' << r.seconds << '\n';
  }
  std::filesystem::rename(tmp, p);
}

std::string double_str(double d) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, d);
  return std::string(buf, res.ptr);
}

}  // namespace

IndependenceCertificate run_certification(
    Problem problem, int n, int m, int b_bits, double delta,
    const Real& epsilon, const ZeroTable& zeros, const ResidueSet& residues,
    Kernel kernel, const std::filesystem::path& resume_dir, int workers) {
  if (n < 1 || m < n) throw std::invalid_argument("need 1 <= n <= m");
  if (zeros.count() < m + 1)
    throw std::invalid_argument("zero table must reach index m+1");
  if (residues.problem != problem || residues.line != Line::HALF)
    throw std::invalid_argument("half-line residue set for the same problem "
                                "required");
  if (static_cast<int>(residues.entries.size()) < m)
    throw std::invalid_argument("residue set must cover zero indices 1..m");
  for (int i = 0; i < m; ++i)
    if (residues.entries[i].index != i + 1)
      throw std::invalid_argument("residue set has an index gap below m");
  if (epsilon.sign() <= 0)
    throw std::invalid_argument("epsilon must be positive");
  for (int i = 1; i <= m; ++i)
    if (zeros.record(i).precision_bits < b_bits + 10)
      throw std::invalid_argument("ordinate " + std::to_string(i) +
                                  " has fewer than b_bits + 10 correct bits");

  const Real& next = zeros.gamma(m + 1);
  Real T = next - to_prec(epsilon, next.prec());
  if (!(zeros.gamma(m) < T))
    throw std::invalid_argument("epsilon swallows the top ordinate gap");

  ResidueSet sub;
  sub.problem = residues.problem;
  sub.line = residues.line;
  sub.prime_bound = residues.prime_bound;
  sub.precision_bits = residues.precision_bits;
  sub.entries.assign(residues.entries.begin(), residues.entries.begin() + m);
  KernelSpec spec{kernel, T};
  std::vector<int> selected = select_gamma_prime(sub, spec, n);
  std::sort(selected.begin(), selected.end());

  std::vector<Real> gam;
  gam.reserve(n);
  for (int idx : selected) gam.push_back(zeros.gamma(idx));
  std::vector<int> stars;
  stars.reserve(m - n);
  for (int i = 1; i <= m; ++i)
    if (!std::binary_search(selected.begin(), selected.end(), i))
      stars.push_back(i);

  if (!resume_dir.empty()) std::filesystem::create_directories(resume_dir);
  const size_t njobs = 1 + stars.size();
  std::vector<LatticeRecord> records(njobs);
  parallel_for(static_cast<int64_t>(njobs), workers, [&](int64_t j) {
    const int star = j == 0 ? 0 : stars[j - 1];
    std::filesystem::path rec;
    if (!resume_dir.empty()) {
      char name[32];
      std::snprintf(name, sizeof name, "lat%05d.rec", star);
      rec = resume_dir / name;
      LatticeRecord cached;
      if (try_load_record(rec, &cached) && cached.star_index == star) {
        records[j] = std::move(cached);
        return;
      }
    }
    auto t0 = std::chrono::steady_clock::now();
    LatticeBasis basis =
        star == 0 ? build_lattice(gam, nullptr, b_bits)
                  : build_lattice(gam, &zeros.gamma(star), b_bits);
    basis.star_index = star;
    LatticeBasis reduced = lll_reduce(basis, delta);
    LatticeRecord r;
    r.star_index = star;
    r.min_gs_norm_sq = gram_schmidt_min_norm_sq(reduced);
    r.N = certify_N(r.min_gs_norm_sq, n, basis.kind);
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                              t0)
                    .count();
    records[j] = r;
    if (!rec.empty()) write_record(rec, r);
  });

  IndependenceCertificate cert;
  cert.problem = problem;
  cert.n = n;
  cert.m = m;
  cert.b_bits = b_bits;
  cert.delta = delta;
  cert.epsilon = epsilon;
  cert.T = std::move(T);
  cert.kernel = kernel;
  cert.selected_indices = std::move(selected);
  cert.lattices = std::move(records);
  cert.certified_N = cert.lattices.front().N;
  for (const LatticeRecord& r : cert.lattices)
    if (r.N < cert.certified_N) cert.certified_N = r.N;
  return cert;
}

void save_certificate(const std::filesystem::path& p,
                      const IndependenceCertificate& cert) {
  Artifact a = new_artifact();
  a.add("kind", "independence-certificate");
  a.add("problem", problem_name(cert.problem));
  a.add("n", std::to_string(cert.n));
  a.add("m", std::to_string(cert.m));
  a.add("b_bits", std::to_string(cert.b_bits));
  a.add("delta", double_str(cert.delta));
  a.add("epsilon", cert.epsilon.to_string());
  a.add("T", cert.T.to_string());
  a.add("kernel", kernel_name(cert.kernel));
  std::ostringstream sel;
  for (size_t i = 0; i < cert.selected_indices.size(); ++i)
    sel << (i ? "," : "") << cert.selected_indices[i];
  a.add("selected", sel.str());
  a.add("certified_N", cert.certified_N.get_str());
  a.add("columns", "star_index,min_gs_norm_sq,N");
  for (const LatticeRecord& r : cert.lattices)
    a.rows.push_back(std::to_string(r.star_index) + "," +
                     r.min_gs_norm_sq.get_str() + "," + r.N.get_str());
  save_artifact(p, a);
}

IndependenceCertificate load_certificate(const std::filesystem::path& p) {
  Artifact a = load_artifact(p);
  if (a.get("kind") != "independence-certificate")
    throw std::runtime_error("not a certificate file: " + p.string());
  IndependenceCertificate cert;
  cert.problem = parse_problem(a.get("problem"));
  cert.n = std::stoi(a.get("n"));
  cert.m = std::stoi(a.get("m"));
  cert.b_bits = std::stoi(a.get("b_bits"));
  cert.delta = std::stod(a.get("delta"));
  std::string eps = a.get("epsilon"), T = a.get("T");
  cert.epsilon =
      Real::parse(eps, static_cast<mpfr_prec_t>(eps.size() * 4 + 32));
  cert.T = Real::parse(T, static_cast<mpfr_prec_t>(T.size() * 4 + 32));
  cert.kernel = parse_kernel(a.get("kernel"));
  std::istringstream sel(a.get("selected"));
  for (std::string tok; std::getline(sel, tok, ',');)
    cert.selected_indices.push_back(std::stoi(tok));
  cert.certified_N = mpz_class(a.get("certified_N"));
  for (const std::string& row : a.rows) {
    std::istringstream rs(row);
    std::string star, norm, N;
    if (!std::getline(rs, star, ',') || !std::getline(rs, norm, ',') ||
        !std::getline(rs, N, ','))
      throw std::runtime_error("bad certificate row '" + row + "'");
    LatticeRecord r;
    r.star_index = std::stoi(star);
    r.min_gs_norm_sq = mpq_class(norm);
    r.min_gs_norm_sq.canonicalize();
    r.N = mpz_class(N);
    cert.lattices.push_back(std::move(r));
  }
  return cert;
}

}  // namespace omegasum
