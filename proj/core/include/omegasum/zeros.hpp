#pragma once

// Ingest, validate, persist, and (for desk-scale tables) generate ordinates
// of nontrivial zeta zeros. Tables are immutable after load and shared
// read-only across workers.

#include <filesystem>
#include <string>
#include <vector>

#include "omegasum/mp.hpp"

namespace omegasum {

class ZetaEvaluator;
struct ZetaConfig;

struct ZeroRecord {
  int index = 0;  // 1-based rank
  Real gamma;
  int precision_bits = 0;  // guaranteed correct mantissa bits
};

class ZeroTable {
 public:
  ZeroTable() = default;
  ZeroTable(std::vector<ZeroRecord> records, std::string source);

  int count() const { return static_cast<int>(records_.size()); }
  const ZeroRecord& record(int index) const;  // 1-based
  const Real& gamma(int index) const { return record(index).gamma; }
  const std::string& source() const { return source_; }
  const std::vector<ZeroRecord>& records() const { return records_; }

  // Number of ordinates strictly below T.
  int count_below(double T) const;

 private:
  std::vector<ZeroRecord> records_;
  std::string source_;
};

// One decimal ordinate per line, optional leading index column
// (auto-detected). Throws on parse failure, on precision below
// min_precision_bits, and on non-increasing ordinates.
ZeroTable load_zeros(const std::filesystem::path& p, int min_precision_bits);

// Same plaintext format plus a sidecar '<p>.meta' with source, count, digits.
void save_zeros(const std::filesystem::path& p, const ZeroTable& t);

struct ZeroCheck {
  int index = 0;
  double abs_zeta = 0.0;
  bool pass = false;
};

struct ZeroValidation {
  std::vector<ZeroCheck> checks;
  bool all_pass = true;
};

ZeroValidation validate_zeros(const ZeroTable& t, const ZetaEvaluator& ev,
                              double tolerance, int workers = 1);

// Root finder on the critical line: scans sign changes of the rotated
// real-valued combination Z(t) = Re(e^{i theta(t)} zeta(1/2+it)), brackets by
// bisection, polishes with Newton steps, and cross-checks the count against
// the argument-principle estimate theta(T)/pi + 1.
ZeroTable generate_zeros(int count, int digits, const ZetaConfig& cfg,
                         int workers = 1);

}  // namespace omegasum
