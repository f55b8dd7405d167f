#include "mwsharp/harness.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <future>
#include <sstream>
#include <stdexcept>

namespace mwsharp {

namespace {

long ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() -
                                                               t0)
      .count();
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

VerifyReport verify_theorem(int N, int threads) {
  if (N < 2) throw std::invalid_argument("verify_theorem: N must be >= 2");
  VerifyReport r;
  r.N = N;
  r.asymptotic_regime = N > 20;
  StepWeight w = build_sharp_weight(N);

  r.integral01 = integral(w, Dyadic(0), Dyadic(1));
  r.integral01_pass = r.integral01 == Rat(1);

  r.a1 = a1_exact(w, 3, threads).value;
  r.a1_over_n = (r.a1 / Rat(N)).to_double();
  if (N <= 4) {
    r.a1_bruteforce_value = a1_bruteforce(w, 2000);
    r.a1_oracle_pass = *r.a1_bruteforce_value <= r.a1;
  }

  r.superlevel = superlevel_vs_identity(w);
  r.superlevel_closed_form = Rat(BigInt(N) * (N + 1), 2) - Rat(1);
  r.superlevel_pass = r.superlevel == r.superlevel_closed_form;

  r.blocks_pass = true;
  try {
    for (int k = 2; k <= N; ++k) block_mass(w, k);
  } catch (const std::logic_error&) {
    r.blocks_pass = false;
  }

  r.jumps = jump_audit(w);
  r.jumps_pass = true;
  for (const Rat& ratio : r.jumps.distinct_ratios)
    if (!(ratio == Rat(1) || ratio == Rat(2) || ratio == Rat(4) || ratio == Rat(8)))
      r.jumps_pass = false;
  if (!r.jumps.eight_only_at_pm4) r.jumps_pass = false;
  if (!(r.jumps.max_intra_tail_ratio <= Rat(2))) r.jumps_pass = false;
  return r;
}

nlohmann::json verify_report_to_json(const VerifyReport& r) {
  nlohmann::json j;
  j["N"] = r.N;
  j["integral01"] = r.integral01.str();
  j["integral01_pass"] = r.integral01_pass;
  j["a1"] = r.a1.str();
  j["a1_float"] = r.a1.to_double();
  j["a1_over_N"] = r.a1_over_n;
  if (r.a1_bruteforce_value) {
    j["a1_bruteforce"] = r.a1_bruteforce_value->str();
    j["a1_bruteforce_dominated"] = r.a1_oracle_pass;
  }
  j["superlevel"] = r.superlevel.str();
  j["superlevel_closed_form"] = r.superlevel_closed_form.str();
  j["superlevel_pass"] = r.superlevel_pass;
  j["blocks_pass"] = r.blocks_pass;
  nlohmann::json ratios = nlohmann::json::array();
  for (const Rat& q : r.jumps.distinct_ratios) ratios.push_back(q.str());
  j["jump"] = {{"ratios_seen", ratios},
               {"max_ratio", r.jumps.max_ratio.str()},
               {"eight_only_at_pm4", r.jumps.eight_only_at_pm4},
               {"max_intra_tail_ratio", r.jumps.max_intra_tail_ratio.str()},
               {"note", r.jumps.note}};
  j["jumps_pass"] = r.jumps_pass;
  j["asymptotic_regime"] = r.asymptotic_regime;
  if (!r.asymptotic_regime)
    j["notice"] = "N <= 20: asymptotic claims stabilize only for larger N";
  j["pass"] = r.pass();
  return j;
}

std::vector<SweepRecord> sweep(int n_min, int n_max, const std::set<OperatorKind>& ops,
                               int threads) {
  if (n_min < 2 || n_min > n_max) throw std::invalid_argument("sweep: need 2 <= n_min <= n_max");
  std::vector<SweepRecord> out;
  bool want_h = ops.count(OperatorKind::H) > 0;
  for (int N = n_min; N <= n_max; ++N) {
    SweepRecord rec;
    rec.N = N;
    try {
      auto t0 = std::chrono::steady_clock::now();
      StepWeight w = build_sharp_weight(N);
      rec.ms_build = ms_since(t0);
      rec.piece_count = w.pieces().size();

      t0 = std::chrono::steady_clock::now();
      rec.a1 = a1_exact(w, 3, threads).value;
      rec.ms_a1 = ms_since(t0);
      rec.a1_float = rec.a1.to_double();

      t0 = std::chrono::steady_clock::now();
      rec.lambda_m = weak_norm_m(w).value;
      rec.lambda_m_float = rec.lambda_m.to_double();
      if (want_h) {
        WeakNormH wh = weak_norm_h(w);
        rec.lambda_h = wh.value;
        rec.lambda_h_err = wh.abs_error;
      }
      rec.ms_wn = ms_since(t0);

      rec.h_lower = hilbert_weak_lower(w);
      rec.superlevel = superlevel_vs_identity(w);
      if (rec.lambda_m < rec.superlevel)
        throw std::logic_error("sweep: lambda_M below the alpha=1 witness");
      rec.ratio_m = rec.lambda_m_float / (rec.a1_float * rec.a1_float);
      if (rec.lambda_h) rec.ratio_h = *rec.lambda_h / (rec.a1_float * rec.a1_float);
      out.push_back(std::move(rec));
    } catch (const std::runtime_error&) {
      rec.truncated = true;
      out.push_back(std::move(rec));
      break;
    }
  }
  return out;
}

std::string sweep_csv(const std::vector<SweepRecord>& records) {
  std::ostringstream os;
  os << "N,pieces,a1,a1_float,lambda_M,lambda_M_float,lambda_H,lambda_H_err,h_lower,"
        "superlevel,ratio_M,ratio_H,ms_build,ms_a1,ms_wn\n";
  for (const SweepRecord& r : records) {
    if (r.truncated) {
      os << r.N << ",TRUNCATED,,,,,,,,,,,,,\n";
      continue;
    }
    os << r.N << ',' << r.piece_count << ',' << r.a1.str() << ',' << format_double(r.a1_float)
       << ',' << r.lambda_m.str() << ',' << format_double(r.lambda_m_float) << ','
       << (r.lambda_h ? format_double(*r.lambda_h) : "") << ','
       << (r.lambda_h_err ? format_double(*r.lambda_h_err) : "") << ',' << r.h_lower.str() << ','
       << r.superlevel.str() << ',' << format_double(r.ratio_m) << ','
       << (r.ratio_h ? format_double(*r.ratio_h) : "") << ',' << r.ms_build << ',' << r.ms_a1
       << ',' << r.ms_wn << '\n';
  }
  return os.str();
}

nlohmann::json sweep_json(const std::vector<SweepRecord>& records) {
  nlohmann::json arr = nlohmann::json::array();
  for (const SweepRecord& r : records) {
    nlohmann::json j;
    j["N"] = r.N;
    j["truncated"] = r.truncated;
    if (!r.truncated) {
      j["pieces"] = r.piece_count;
      j["a1"] = r.a1.str();
      j["a1_float"] = r.a1_float;
      j["lambda_M"] = r.lambda_m.str();
      j["lambda_M_float"] = r.lambda_m_float;
      if (r.lambda_h) j["lambda_H"] = *r.lambda_h;
      if (r.lambda_h_err) j["lambda_H_err"] = *r.lambda_h_err;
      j["h_lower"] = r.h_lower.str();
      j["superlevel"] = r.superlevel.str();
      j["ratio_M"] = r.ratio_m;
      if (r.ratio_h) j["ratio_H"] = *r.ratio_h;
      j["ms_build"] = r.ms_build;
      j["ms_a1"] = r.ms_a1;
      j["ms_wn"] = r.ms_wn;
    }
    arr.push_back(std::move(j));
  }
  return arr;
}

std::vector<SweepRecord> sweep_records_from_json(const nlohmann::json& arr) {
  std::vector<SweepRecord> out;
  for (const auto& j : arr) {
    SweepRecord r;
    r.N = j.at("N").get<int>();
    r.truncated = j.value("truncated", false);
    if (!r.truncated) {
      r.piece_count = j.at("pieces").get<size_t>();
      r.a1 = Rat::parse(j.at("a1").get<std::string>());
      r.a1_float = j.at("a1_float").get<double>();
      r.lambda_m = Rat::parse(j.at("lambda_M").get<std::string>());
      r.lambda_m_float = j.at("lambda_M_float").get<double>();
      if (j.contains("lambda_H")) r.lambda_h = j.at("lambda_H").get<double>();
      if (j.contains("lambda_H_err")) r.lambda_h_err = j.at("lambda_H_err").get<double>();
      r.h_lower = Rat::parse(j.at("h_lower").get<std::string>());
      r.superlevel = Rat::parse(j.at("superlevel").get<std::string>());
      r.ratio_m = j.at("ratio_M").get<double>();
      if (j.contains("ratio_H")) r.ratio_h = j.at("ratio_H").get<double>();
    }
    out.push_back(std::move(r));
  }
  return out;
}

double record_field(const SweepRecord& r, const std::string& field) {
  if (field == "N") return r.N;
  if (field == "pieces") return static_cast<double>(r.piece_count);
  if (field == "a1") return r.a1_float;
  if (field == "lambda_M") return r.lambda_m_float;
  if (field == "lambda_H") {
    if (!r.lambda_h) throw std::invalid_argument("record has no lambda_H");
    return *r.lambda_h;
  }
  if (field == "h_lower") return r.h_lower.to_double();
  if (field == "superlevel") return r.superlevel.to_double();
  throw std::invalid_argument("unknown field: " + field);
}

FitResult fit_exponent(const std::vector<SweepRecord>& records, const std::string& x_field,
                       const std::string& y_field) {
  std::vector<double> xs, ys;
  for (const SweepRecord& r : records) {
    if (r.truncated) continue;
    double x = record_field(r, x_field);
    double y = record_field(r, y_field);
    if (!(x > 0) || !(y > 0))
      throw std::invalid_argument("fit_exponent: fields must be strictly positive");
    xs.push_back(std::log(x));
    ys.push_back(std::log(y));
  }
  if (xs.size() < 3) throw std::invalid_argument("fit_exponent: need at least 3 records");
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
    syy += ys[i] * ys[i];
  }
  double denom = n * sxx - sx * sx;
  if (denom == 0) throw std::invalid_argument("fit_exponent: degenerate x values");
  FitResult fr;
  fr.slope = (n * sxy - sx * sy) / denom;
  fr.intercept = (sy - fr.slope * sx) / n;
  double ss_tot = syy - sy * sy / n;
  double ss_res = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    double e = ys[i] - (fr.slope * xs[i] + fr.intercept);
    ss_res += e * e;
  }
  fr.r_squared = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
  fr.x_name = x_field;
  fr.y_name = y_field;
  fr.points = static_cast<int>(xs.size());
  return fr;
}

RatioTable theorem_a_ratio(const std::vector<SweepRecord>& records) {
  RatioTable t;
  double min_m = 0, max_m = 0, min_h = 0, max_h = 0;
  bool any_h = false;
  for (const SweepRecord& r : records) {
    if (r.truncated) continue;
    t.rows.push_back({r.N, r.ratio_m, r.ratio_h});
    if (t.rows.size() == 1 || r.ratio_m < min_m) min_m = r.ratio_m;
    if (t.rows.size() == 1 || r.ratio_m > max_m) max_m = r.ratio_m;
    if (r.ratio_h) {
      if (!any_h || *r.ratio_h < min_h) min_h = *r.ratio_h;
      if (!any_h || *r.ratio_h > max_h) max_h = *r.ratio_h;
      any_h = true;
    }
  }
  if (t.rows.empty()) throw std::invalid_argument("theorem_a_ratio: no records");
  t.max_over_min_m = max_m / min_m;
  if (any_h) t.max_over_min_h = max_h / min_h;
  return t;
}

}  // namespace mwsharp
