#include "omegasum/zeros.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "omegasum/artifact.hpp"
#include "omegasum/parallel.hpp"
#include "omegasum/zeta.hpp"

namespace omegasum {

ZeroTable::ZeroTable(std::vector<ZeroRecord> records, std::string source)
    : records_(std::move(records)), source_(std::move(source)) {
  for (size_t i = 0; i < records_.size(); ++i) {
    if (records_[i].index != static_cast<int>(i) + 1)
      throw std::invalid_argument("zero table: indices must run 1..count");
    if (records_[i].gamma.sign() <= 0)
      throw std::invalid_argument("zero table: ordinates must be positive");
    if (i > 0 && !(records_[i - 1].gamma < records_[i].gamma))
      throw std::invalid_argument("zero table: ordinates must increase");
  }
}

const ZeroRecord& ZeroTable::record(int index) const {
  if (index < 1 || index > count())
    throw std::out_of_range("zero table: index " + std::to_string(index) +
                            " outside 1.." + std::to_string(count()));
  return records_[index - 1];
}

int ZeroTable::count_below(double T) const {
  int n = 0;
  while (n < count() && records_[n].gamma.cmp(T) < 0) ++n;
  return n;
}

namespace {

struct Token {
  std::string text;
  int fractional_digits = 0;
  int significant_digits = 0;
};

Token analyze_decimal(const std::string& s) {
  Token t;
  t.text = s;
  bool seen_point = false, seen_nonzero = false;
  for (char ch : s) {
    if (ch == '.') {
      seen_point = true;
      continue;
    }
    if (ch == '+' || ch == '-') continue;
    if (!std::isdigit(static_cast<unsigned char>(ch)))
      throw std::invalid_argument("malformed decimal '" + s + "'");
    if (ch != '0') seen_nonzero = true;
    if (seen_nonzero) ++t.significant_digits;
    if (seen_point) ++t.fractional_digits;
  }
  return t;
}

}  // namespace

ZeroTable load_zeros(const std::filesystem::path& p, int min_precision_bits) {
  std::ifstream in(p);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::vector<ZeroRecord> recs;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string trimmed = line;
    size_t h = trimmed.find('#');
    if (h != std::string::npos) trimmed.resize(h);
    std::istringstream ss(trimmed);
    std::vector<std::string> tokens;
    std::string tok;
    while (ss >> tok) tokens.push_back(tok);
    if (tokens.empty()) continue;
    std::string ordinate;
    if (tokens.size() == 1) {
      ordinate = tokens[0];
    } else if (tokens.size() == 2) {
      // leading index column; must match the running rank
      long idx = 0;
      try {
        idx = std::stol(tokens[0]);
      } catch (const std::exception&) {
        throw std::runtime_error(p.string() + ":" + std::to_string(lineno) +
                                 ": malformed index column");
      }
      if (idx != static_cast<long>(recs.size()) + 1)
        throw std::runtime_error(p.string() + ":" + std::to_string(lineno) +
                                 ": index column out of sequence");
      ordinate = tokens[1];
    } else {
      throw std::runtime_error(p.string() + ":" + std::to_string(lineno) +
                               ": expected one ordinate per line");
    }

    Token t = analyze_decimal(ordinate);
    mpfr_prec_t parse_prec = static_cast<mpfr_prec_t>(
        std::ceil(t.significant_digits * 3.3220) + 16);
    ZeroRecord r;
    r.index = static_cast<int>(recs.size()) + 1;
    try {
      r.gamma = Real::parse(ordinate, parse_prec);
    } catch (const std::exception&) {
      throw std::runtime_error(p.string() + ":" + std::to_string(lineno) +
                               ": malformed ordinate '" + ordinate + "'");
    }
    if (r.gamma.sign() <= 0)
      throw std::runtime_error(p.string() + ":" + std::to_string(lineno) +
                               ": ordinates must be positive");
    r.precision_bits =
        decimal_mantissa_bits(r.gamma.to_double(), t.fractional_digits);
    if (r.precision_bits < min_precision_bits)
      throw std::runtime_error(
          p.string() + ":" + std::to_string(lineno) + ": ordinate carries " +
          std::to_string(r.precision_bits) + " bits, need " +
          std::to_string(min_precision_bits));
    if (!recs.empty() && !(recs.back().gamma < r.gamma))
      throw std::runtime_error(p.string() + ":" + std::to_string(lineno) +
                               ": ordinates not strictly increasing");
    recs.push_back(std::move(r));
  }
  return ZeroTable(std::move(recs), "file:" + p.string());
}

void save_zeros(const std::filesystem::path& p, const ZeroTable& t) {
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  int max_digits = 0;
  for (const auto& r : t.records()) {
    // enough fractional digits to reconstruct precision_bits exactly
    int frac = static_cast<int>(
        std::ceil((r.precision_bits + 1 - std::log2(r.gamma.to_double())) *
                  0.30103) +
        2);
    if (frac < 1) frac = 1;
    std::vector<char> buf(frac + 48);
    mpfr_snprintf(buf.data(), buf.size(), "%d %.*Rf", r.index, frac,
                  r.gamma.raw());
    out << buf.data() << "\n";
    int digits = static_cast<int>(std::floor(std::log10(
                     std::max(1.0, r.gamma.to_double())))) + 1 + frac;
    max_digits = std::max(max_digits, digits);
  }
  if (!out) throw std::runtime_error("write failed: " + p.string());
  out.close();

  Artifact meta = new_artifact();
  meta.add("kind", "zero-table-meta");
  meta.add("source", t.source());
  meta.add("count", std::to_string(t.count()));
  meta.add("digits", std::to_string(max_digits));
  save_artifact(p.string() + ".meta", meta);
}

ZeroValidation validate_zeros(const ZeroTable& t, const ZetaEvaluator& ev,
                              double tolerance, int workers) {
  if (tolerance <= 0) throw std::invalid_argument("tolerance must be > 0");
  ZeroValidation v;
  v.checks.resize(t.count());
  if (t.count() == 0) return v;

  ZetaConfig cfg = ev.config();
  double need = t.gamma(t.count()).to_double() + 10.0;
  cfg.height_ceiling = std::max(cfg.height_ceiling, need);
  if (workers < 1) workers = 1;
  std::vector<std::unique_ptr<ZetaEvaluator>> evs;
  for (int w = 0; w < workers; ++w)
    evs.push_back(std::make_unique<ZetaEvaluator>(cfg));

  parallel_for_wid(t.count(), workers, [&](int64_t i, int w) {
    const ZeroRecord& r = t.record(static_cast<int>(i) + 1);
    mpfr_prec_t wp = std::max<mpfr_prec_t>(96, r.precision_bits + 8);
    Complex rho(Real::of(0.5, wp), to_prec(r.gamma, wp));
    double az = abs(evs[w]->zeta(rho, wp)).to_double();
    v.checks[i] = ZeroCheck{r.index, az, az < tolerance};
  });
  for (const auto& c : v.checks) v.all_pass = v.all_pass && c.pass;
  return v;
}

namespace {

// Riemann-Siegel theta by asymptotic expansion; plenty for rotating zeta on
// the line (theta errors only tilt the rotation, they do not move zeros).
Real theta_asym(const Real& t) {
  mpfr_prec_t wp = t.prec();
  Real two_pi = Real::pi(wp) * 2L;
  Real half_t = t * Real::of(0.5, wp);
  Real th = half_t * log(t / two_pi) - half_t - Real::pi(wp) / 8L;
  Real inv_t = Real::of(1L, wp) / t;
  Real inv_t2 = inv_t * inv_t;
  th += inv_t / 48L;
  th += inv_t * inv_t2 * Real::of(7L, wp) / 5760L;
  th += inv_t * inv_t2 * inv_t2 * Real::of(31L, wp) / 80640L;
  return th;
}

Real theta_deriv(const Real& t) {
  mpfr_prec_t wp = t.prec();
  Real two_pi = Real::pi(wp) * 2L;
  Real dth = log(t / two_pi) * Real::of(0.5, wp);
  Real inv_t2 = Real::of(1L, wp) / (t * t);
  dth -= inv_t2 / 48L;
  return dth;
}

// Z(t) = Re(e^{i theta} zeta(1/2+it)) and its t-derivative.
void hardy_z(const ZetaEvaluator& ev, const Real& t, mpfr_prec_t bits, Real* z,
             Real* dz) {
  mpfr_prec_t wp = bits + 32;
  Real tw = to_prec(t, wp);
  Complex rho(Real::of(0.5, wp), tw);
  Complex zv, zd;
  if (dz)
    ev.zeta_pair(rho, bits, &zv, &zd);
  else
    zv = ev.zeta(rho, bits);
  Complex rot = Complex::unit(theta_asym(tw));
  *z = (rot * to_prec(zv, wp)).re();
  if (dz) {
    // dZ/dt = Re(i e^{i theta} (theta' zeta + zeta'))
    Complex inner = to_prec(zv, wp) * theta_deriv(tw) + to_prec(zd, wp);
    Complex w = rot * inner;
    *dz = -w.im();
  }
}

double theta_double(double t) {
  return 0.5 * t * std::log(t / (2 * M_PI)) - 0.5 * t - M_PI / 8 +
         1.0 / (48 * t);
}

}  // namespace

ZeroTable generate_zeros(int count, int digits, const ZetaConfig& cfg,
                         int workers) {
  if (count < 1) throw std::invalid_argument("generate_zeros: count >= 1");
  if (digits < 10) throw std::invalid_argument("generate_zeros: digits >= 10");

  // Height that should contain count zeros plus a couple of spares, per the
  // counting estimate theta(T)/pi + 1.
  double T_stop = 20.0;
  while (theta_double(T_stop) / M_PI + 1.0 < count + 3) T_stop *= 1.5;
  {
    double lo = T_stop / 1.5, hi = T_stop;
    for (int i = 0; i < 50; ++i) {
      double mid = 0.5 * (lo + hi);
      (theta_double(mid) / M_PI + 1.0 < count + 3 ? lo : hi) = mid;
    }
    T_stop = hi;
  }
  ZetaConfig gen_cfg = cfg;
  gen_cfg.height_ceiling = std::max(gen_cfg.height_ceiling, T_stop + 50.0);

  ZetaEvaluator scan_ev(gen_cfg);
  auto zsign = [&scan_ev](double t) {
    Real z(96);
    hardy_z(scan_ev, Real::of(t, 96), 72, &z, nullptr);
    return z.sign();
  };
  auto avg_gap = [](double t) {
    return 2.0 * M_PI / std::log(std::max(t, 14.0) / (2.0 * M_PI));
  };
  auto estimate = [](double t) { return theta_double(t) / M_PI + 1.0; };

  // Base scan: one probe per sixth of the local mean zero spacing.
  std::vector<std::pair<double, double>> brackets;
  {
    double t_prev = 10.0;
    int s_prev = zsign(t_prev);
    while (t_prev < T_stop) {
      double t1 = std::min(t_prev + avg_gap(t_prev) / 6.0, T_stop);
      int s1 = zsign(t1);
      if (s1 != 0 && s_prev != 0 && s1 != s_prev)
        brackets.emplace_back(t_prev, t1);
      t_prev = t1;
      if (s1 != 0) s_prev = s1;
    }
  }

  auto rescan = [&](double a, double b, double div) {
    std::vector<std::pair<double, double>> found;
    int n =
        std::max(2, static_cast<int>(std::ceil((b - a) / (avg_gap(a) / div))));
    int s_prev = zsign(a);
    double t_prev = a;
    for (int i = 1; i <= n; ++i) {
      double t1 = a + (b - a) * i / n;
      int s1 = zsign(t1);
      if (s1 != 0 && s_prev != 0 && s1 != s_prev) found.emplace_back(t_prev, t1);
      t_prev = t1;
      if (s1 != 0) s_prev = s1;
    }
    return found;
  };

  // A close zero pair can hide between two probes. Every miss shifts the
  // running discrepancy (zeros found below t) - estimate(t) down by 2 for
  // good, while the genuine fluctuation S(t) stays within roughly +-1.3 at
  // these heights and washes out under a moving average. Hunt for downward
  // steps in the smoothed discrepancy and rescan their neighborhoods finer
  // until the staircase is gone.
  for (int wave = 0; wave < 64; ++wave) {
    int nb = static_cast<int>(brackets.size());
    std::vector<double> sm(nb);
    {
      std::vector<double> disc(nb);
      for (int i = 0; i < nb; ++i)
        disc[i] =
            (i + 1) - estimate(0.5 * (brackets[i].first + brackets[i].second));
      for (int i = 0; i < nb; ++i) {
        int lo = std::max(0, i - 7), hi = std::min(nb - 1, i + 7);
        double s = 0;
        for (int k = lo; k <= hi; ++k) s += disc[k];
        sm[i] = s / (hi - lo + 1);
      }
    }
    double base = 0;
    int head = std::min(nb, 40);
    for (int i = 0; i < head; ++i) base += sm[i];
    base /= std::max(1, head);
    int step_at = -1;
    for (int i = 0; i < nb; ++i)
      if (sm[i] < base - 1.2) {
        step_at = i;
        break;
      }
    if (step_at < 0) break;

    int lo_i = std::max(0, step_at - 40);
    int hi_i = std::min(nb - 1, step_at + 8);
    bool found_any = false;
    for (double div : {48.0, 192.0, 768.0}) {
      std::vector<std::pair<double, double>> add;
      double from = lo_i == 0 ? 10.0 : brackets[lo_i - 1].second;
      for (int i = lo_i; i <= hi_i; ++i) {
        double to = brackets[i].first;
        if ((theta_double(to) - theta_double(from)) / M_PI > 0.6)
          for (auto& br : rescan(from, to, div)) add.push_back(br);
        from = brackets[i].second;
      }
      if (!add.empty()) {
        for (auto& br : add)
          brackets.insert(
              std::lower_bound(brackets.begin(), brackets.end(), br), br);
        found_any = true;
        break;
      }
    }
    if (!found_any)
      throw std::runtime_error(
          "generate_zeros: running zero count steps down near t = " +
          std::to_string(0.5 * (brackets[step_at].first +
                                brackets[step_at].second)) +
          " but no hidden sign change was found");
  }

  if (static_cast<int>(brackets.size()) < count)
    throw std::runtime_error(
        "generate_zeros: scan ended with too few sign changes");
  brackets.resize(count);

  // Global backstop on the kept prefix.
  double s_apparent = count - estimate(brackets.back().second);
  if (std::abs(s_apparent) > 1.45)
    throw std::runtime_error(
        "generate_zeros: sign-change count strays from the counting estimate "
        "(apparent S(T) = " +
        std::to_string(s_apparent) + ")");

  mpfr_prec_t target = static_cast<mpfr_prec_t>(digits * 3.3220) + 8;
  if (workers < 1) workers = 1;
  std::vector<std::unique_ptr<ZetaEvaluator>> evs;
  for (int w = 0; w < workers; ++w)
    evs.push_back(std::make_unique<ZetaEvaluator>(gen_cfg));

  std::vector<Real> roots(count, Real(4));
  parallel_for_wid(count, workers, [&](int64_t i, int w) {
    const ZetaEvaluator& ev = *evs[w];
    double lo = brackets[i].first, hi = brackets[i].second;
    // bisect at double precision
    Real zlo(96);
    hardy_z(ev, Real::of(lo, 96), 72, &zlo, nullptr);
    int slo = zlo.sign();
    for (int it = 0; it < 40 && hi - lo > 1e-12; ++it) {
      double mid = 0.5 * (lo + hi);
      Real zm(96);
      hardy_z(ev, Real::of(mid, 96), 72, &zm, nullptr);
      if (zm.sign() == slo)
        lo = mid;
      else
        hi = mid;
    }
    // Newton ladder, doubling working precision up to target
    Real x = Real::of(0.5 * (lo + hi), target + 32);
    for (mpfr_prec_t p = 96; p / 2 < target + 32; p *= 2) {
      mpfr_prec_t pb = std::min<mpfr_prec_t>(p, target + 32);
      for (int it = 0; it < 3; ++it) {
        Real z(pb + 32), dz(pb + 32);
        hardy_z(ev, to_prec(x, pb + 32), pb, &z, &dz);
        x = to_prec(x, pb + 32) - z / dz;
      }
      if (pb == target + 32) break;
    }
    roots[i] = to_prec(x, target);
  });

  std::vector<ZeroRecord> recs(count);
  for (int i = 0; i < count; ++i) {
    recs[i].index = i + 1;
    recs[i].gamma = roots[i];
    recs[i].precision_bits = static_cast<int>(digits * 3.3219) - 2;
  }
  return ZeroTable(std::move(recs),
                   "generated: critical-line sign scan + Newton, " +
                       std::to_string(digits) + " digits");
}

}  // namespace omegasum
