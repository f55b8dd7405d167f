#pragma once

#include "mwsharp/a1.hpp"
#include "mwsharp/operators.hpp"
#include "mwsharp/step_weight.hpp"

#include <json.hpp>

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace mwsharp {

/// Verification report for one constructed weight: exact unit mass on
/// [0,1], the A1 constant and its ratio to N, the superlevel measure
/// against its closed form, the per-block mass identity, and the jump
/// audit (which records the measured jumps 4 and 8 exceeding the
/// doubling of adjacent in-tail levels).
struct VerifyReport {
  int N = 0;
  Rat integral01;
  bool integral01_pass = false;
  Rat a1;
  double a1_over_n = 0;
  std::optional<Rat> a1_bruteforce_value;  // cross-checked for N <= 4
  bool a1_oracle_pass = true;
  Rat superlevel;
  Rat superlevel_closed_form;
  bool superlevel_pass = false;
  bool blocks_pass = false;
  JumpAudit jumps;
  bool jumps_pass = false;
  bool asymptotic_regime = false;  // N > 20
  bool pass() const {
    return integral01_pass && superlevel_pass && blocks_pass && jumps_pass && a1_oracle_pass;
  }
};
VerifyReport verify_theorem(int N, int threads = 1);
nlohmann::json verify_report_to_json(const VerifyReport& r);

/// One row of the N-sweep.
struct SweepRecord {
  int N = 0;
  size_t piece_count = 0;
  Rat a1;
  double a1_float = 0;
  Rat lambda_m;
  double lambda_m_float = 0;
  std::optional<double> lambda_h;
  std::optional<double> lambda_h_err;
  Rat h_lower;
  Rat superlevel;
  double ratio_m = 0;  // lambda_M / a1^2
  std::optional<double> ratio_h;
  long ms_build = 0;
  long ms_a1 = 0;
  long ms_wn = 0;
  bool truncated = false;
};

/// Deterministic per-N records (timing columns excepted). Operators:
/// subset of {M, H}; M is always computed (the exact path also feeds the
/// ratio columns). On a resource limit the sweep stops early and marks the
/// last record truncated.
std::vector<SweepRecord> sweep(int n_min, int n_max, const std::set<OperatorKind>& ops,
                               int threads = 1);

/// Frozen CSV column order:
/// N,pieces,a1,a1_float,lambda_M,lambda_M_float,lambda_H,lambda_H_err,
/// h_lower,superlevel,ratio_M,ratio_H,ms_build,ms_a1,ms_wn
std::string sweep_csv(const std::vector<SweepRecord>& records);
nlohmann::json sweep_json(const std::vector<SweepRecord>& records);
std::vector<SweepRecord> sweep_records_from_json(const nlohmann::json& j);

/// Shortest round-trip decimal formatting (the CSV determinism contract).
std::string format_double(double v);

struct FitResult {
  double slope = 0;
  double intercept = 0;
  double r_squared = 0;
  std::string x_name, y_name;
  int points = 0;
};

/// Ordinary least squares of log(y_field) against log(x_field).
/// Fields: N, pieces, a1, lambda_M, lambda_H, h_lower, superlevel.
FitResult fit_exponent(const std::vector<SweepRecord>& records, const std::string& x_field,
                       const std::string& y_field);

double record_field(const SweepRecord& r, const std::string& field);

/// Per-N ratio lambda_T / a1^2 with the spread max/min; the consistency
/// check is that the spread stays bounded.
struct RatioTable {
  struct Row {
    int N;
    double ratio_m;
    std::optional<double> ratio_h;
  };
  std::vector<Row> rows;
  double max_over_min_m = 0;
  std::optional<double> max_over_min_h;
};
RatioTable theorem_a_ratio(const std::vector<SweepRecord>& records);

}  // namespace mwsharp
