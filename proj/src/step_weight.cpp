#include "mwsharp/step_weight.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

namespace mwsharp {

StepWeight::StepWeight(std::vector<Piece> pieces, Dyadic period, std::string label)
    : pieces_(std::move(pieces)), period_(std::move(period)), label_(std::move(label)) {
  if (pieces_.empty()) throw std::invalid_argument("weight needs at least one piece");
  if (!(period_ > Dyadic(0))) throw std::invalid_argument("period must be positive");
  if (!(pieces_.front().start == Dyadic(0)))
    throw std::invalid_argument("first piece must start at 0");
  if (!(pieces_.back().end == period_))
    throw std::invalid_argument("last piece must end at the period");
  prefix_.reserve(pieces_.size() + 1);
  prefix_.push_back(Rat(0));
  max_value_ = pieces_.front().value;
  min_value_ = pieces_.front().value;
  for (size_t i = 0; i < pieces_.size(); ++i) {
    const Piece& p = pieces_[i];
    if (!(p.start < p.end)) throw std::invalid_argument("piece with nonpositive length");
    if (!p.value.is_positive()) throw std::invalid_argument("piece with nonpositive value");
    if (i + 1 < pieces_.size() && !(p.end == pieces_[i + 1].start))
      throw std::invalid_argument("pieces must tile the period contiguously");
    prefix_.push_back(prefix_.back() + p.value * (p.end - p.start).to_rat());
    max_value_ = max(max_value_, p.value);
    min_value_ = min(min_value_, p.value);
  }
}

size_t StepWeight::index_at(const Dyadic& x) const {
  // Last piece with start <= x.
  auto it = std::upper_bound(pieces_.begin(), pieces_.end(), x,
                             [](const Dyadic& v, const Piece& p) { return v < p.start; });
  if (it == pieces_.begin()) throw std::logic_error("index_at: x below first piece");
  return static_cast<size_t>(it - pieces_.begin()) - 1;
}

Dyadic StepWeight::reduce_mod_period(const Dyadic& x) const {
  if (Dyadic(0) <= x && x < period_) return x;
  // floor(x / period) via integer division of aligned mantissas.
  Rat q = x.to_rat() / period_.to_rat();
  BigInt k, r;
  boost::multiprecision::divide_qr(q.num(), q.den(), k, r);
  if (r != 0 && q.num() < 0) --k;
  Dyadic shift = period_ * Dyadic(std::move(k), 0);
  Dyadic out = x - shift;
  if (!(Dyadic(0) <= out && out < period_)) throw std::logic_error("mod reduction failed");
  return out;
}

Rat value_at(const StepWeight& w, const Dyadic& x) {
  Dyadic xr = w.reduce_mod_period(x);
  return w.pieces()[w.index_at(xr)].value;
}

namespace {

// Integral over [0, x] for x in [0, period].
Rat prefix_integral(const StepWeight& w, const Dyadic& x) {
  if (x == w.period()) return w.period_mass();
  size_t i = w.index_at(x);
  const Piece& p = w.pieces()[i];
  return w.prefix_mass(i) + p.value * (x - p.start).to_rat();
}

}  // namespace

Rat integral(const StepWeight& w, const Dyadic& a, const Dyadic& b) {
  if (b < a) throw std::invalid_argument("integral: a > b");
  if (a == b) return Rat(0);
  // F(x) = k*W + prefix(x mod period) is a primitive of w.
  auto F = [&](const Dyadic& x) {
    Dyadic xr = w.reduce_mod_period(x);
    Dyadic k_shift = x - xr;  // k * period, k integer
    Rat k = k_shift.to_rat() / w.period().to_rat();
    return k * w.period_mass() + prefix_integral(w, xr);
  };
  return F(b) - F(a);
}

Rat essinf(const StepWeight& w, const Dyadic& a, const Dyadic& b) {
  if (!(a < b)) throw std::invalid_argument("essinf: requires a < b");
  if (w.period() <= b - a) return w.min_value();
  Dyadic ar = w.reduce_mod_period(a);
  Dyadic br = ar + (b - a);
  const auto& pcs = w.pieces();
  Rat m = w.max_value();
  // Scan pieces meeting (ar, min(br, period)) in positive measure, then wrap.
  // index_at(ar) has end > ar, so the intersection is positive for every
  // scanned piece.
  for (size_t i = w.index_at(ar); i < pcs.size() && pcs[i].start < br; ++i)
    m = min(m, pcs[i].value);
  if (w.period() < br) {
    Dyadic br2 = br - w.period();
    for (size_t j = 0; j < pcs.size() && pcs[j].start < br2; ++j) m = min(m, pcs[j].value);
  }
  return m;
}

Rat superlevel_vs_identity(const StepWeight& w) {
  // On period copy m the piece [s, e) + m*period contributes
  // |(max(s + mP, 1), min(e + mP, v))| whenever v exceeds the left end.
  Rat total(0);
  Rat P = w.period().to_rat();
  Rat vmax = w.max_value();
  for (Rat base(0); base < vmax; base += P) {
    for (const Piece& p : w.pieces()) {
      Rat lo = max(base + p.start.to_rat(), Rat(1));
      Rat hi = min(base + p.end.to_rat(), p.value);
      if (lo < hi) total += hi - lo;
    }
  }
  return total;
}

Rat block_mass_closed_form(int k) {
  Rat two_k = pow2_rat(k);
  Rat kk(k);
  return pow2_rat(k + 1) * kk + Rat(k - 1) * (two_k - kk) + Rat(2) * (two_k - kk);
}

Rat block_mass(const StepWeight& w, int k) {
  int N = sharp_level_from_period(w);
  if (k < 2 || k > N) throw std::invalid_argument("block_mass: k out of range");
  Rat by_pieces = integral(w, Dyadic(BigInt(1) << static_cast<unsigned>(k), 0),
                           Dyadic(BigInt(1) << static_cast<unsigned>(k + 1), 0));
  Rat closed = block_mass_closed_form(k);
  if (!(by_pieces == closed))
    throw std::logic_error("block_mass: piece summation and closed form disagree at k=" +
                           std::to_string(k));
  return by_pieces;
}

size_t sharp_weight_piece_count(int N) {
  size_t half = 1;
  for (int k = 2; k <= N; ++k) half += 2 * static_cast<size_t>(k) + 1;
  return 2 * half;
}

int sharp_level_from_period(const StepWeight& w) {
  const Dyadic& P = w.period();
  if (P.exponent() != 0 || P.mantissa() <= 0)
    throw std::invalid_argument("weight period is not an integral power of two");
  const BigInt& m = P.mantissa();
  unsigned low = boost::multiprecision::lsb(m);
  unsigned high = boost::multiprecision::msb(m);
  if (low != high || high < 4)
    throw std::invalid_argument("weight period is not 2^(N+2) with N >= 2");
  return static_cast<int>(high) - 2;
}

StepWeight build_sharp_weight(int N) {
  if (N < 2) throw std::invalid_argument("build_sharp_weight: N must be >= 2");
  std::vector<Piece> half;
  half.reserve(sharp_weight_piece_count(N) / 2);
  half.push_back({Dyadic(0), Dyadic(4), Rat(1)});
  for (int k = 2; k <= N; ++k) {
    BigInt two_k = BigInt(1) << static_cast<unsigned>(k);
    Dyadic block_start(two_k, 0);
    Dyadic block_end(two_k << 1, 0);
    Dyadic cursor = block_start;

    // I_k = [2^k, 2^k + k) at level 2^(k+1).
    Dyadic ik_end = block_start + Dyadic(k);
    half.push_back({cursor, ik_end, pow2_rat(k + 1)});
    cursor = ik_end;

    // Left tail of lengths (2^k - k)/2^(j+1): the deepest plateau sits
    // directly right of I_k, levels rise towards the block center.
    Dyadic l_total(two_k - k, 0);  // |L_k| = 2^k - k
    auto sub_len = [&](int j) {
      // |(L_k^-)^j| = |L_k|/2^(j+1) for j < k, and |L_k|/2^k for j = k.
      return l_total.div_pow2(static_cast<unsigned>(j == k ? k : j + 1));
    };
    for (int j = k; j >= 1; --j) {
      Dyadic next = cursor + sub_len(j);
      half.push_back({cursor, next, pow2_rat(j)});
      cursor = next;
    }
    // Right tail mirrors the left one: levels fall away from the center.
    for (int j = 1; j <= k; ++j) {
      Dyadic next = cursor + sub_len(j);
      half.push_back({cursor, next, pow2_rat(j)});
      cursor = next;
    }
    if (!(cursor == block_end))
      throw std::logic_error("sharp weight block does not tile [2^k, 2^(k+1))");
  }

  Dyadic period(BigInt(1) << static_cast<unsigned>(N + 2), 0);
  std::vector<Piece> pieces = half;
  for (auto it = half.rbegin(); it != half.rend(); ++it)
    pieces.push_back({period - it->end, period - it->start, it->value});
  return StepWeight(std::move(pieces), period, "MW-sharp N=" + std::to_string(N));
}

StepWeight scale_weight(const StepWeight& w, const Rat& c) {
  if (!c.is_positive()) throw std::invalid_argument("scale_weight: c must be positive");
  std::vector<Piece> pcs = w.pieces();
  for (Piece& p : pcs) p.value = p.value * c;
  return StepWeight(std::move(pcs), w.period(), w.label() + " x" + c.str());
}

nlohmann::json weight_to_json(const StepWeight& w) {
  nlohmann::json j;
  j["label"] = w.label();
  j["period"] = w.period().str();
  nlohmann::json arr = nlohmann::json::array();
  for (const Piece& p : w.pieces())
    arr.push_back({{"start", p.start.str()}, {"end", p.end.str()}, {"value", p.value.str()}});
  j["pieces"] = std::move(arr);
  return j;
}

StepWeight weight_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("period") || !j.contains("pieces"))
    throw std::invalid_argument("weight JSON must have 'period' and 'pieces'");
  std::vector<Piece> pcs;
  for (const auto& pj : j.at("pieces"))
    pcs.push_back({Dyadic::parse(pj.at("start").get<std::string>()),
                   Dyadic::parse(pj.at("end").get<std::string>()),
                   Rat::parse(pj.at("value").get<std::string>())});
  std::string label = j.value("label", std::string("weight"));
  return StepWeight(std::move(pcs), Dyadic::parse(j.at("period").get<std::string>()),
                    std::move(label));
}

void save_weight(const StepWeight& w, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::invalid_argument("cannot open for writing: " + path);
  f << weight_to_json(w).dump(2) << "\n";
}

StepWeight load_weight(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::invalid_argument("cannot open weight file: " + path);
  nlohmann::json j;
  f >> j;
  return weight_from_json(j);
}

}  // namespace mwsharp
