#include "mwsharp/a1.hpp"

#include <algorithm>
#include <future>
#include <random>
#include <stdexcept>
#include <thread>
#include <vector>

namespace mwsharp {

Rat interval_ratio(const StepWeight& w, const Dyadic& a, const Dyadic& b) {
  if (!(a < b)) throw std::invalid_argument("interval_ratio: requires a < b");
  return integral(w, a, b) / ((b - a).to_rat() * essinf(w, a, b));
}

namespace {

struct RangeBest {
  bool valid = false;
  Rat value;
  size_t first = 0, last = 0;
  A1Certificate::Sliver sliver = A1Certificate::Sliver::none;
  size_t sliver_piece = 0;

  // Deterministic preference: larger value, then smaller witness tuple.
  bool beats(const RangeBest& o) const {
    if (!o.valid) return valid;
    if (!valid) return false;
    if (value != o.value) return value > o.value;
    auto rank = [](A1Certificate::Sliver s) { return static_cast<int>(s); };
    return std::tuple(first, last, rank(sliver)) < std::tuple(o.first, o.last, rank(o.sliver));
  }
};

struct Window {
  std::vector<Rat> value;    // piece values, tiled
  std::vector<Rat> pref_len; // prefix lengths
  std::vector<Rat> pref_mass;
  size_t per_period = 0;
};

Window make_window(const StepWeight& w, int periods) {
  Window win;
  win.per_period = w.pieces().size();
  size_t n = win.per_period * static_cast<size_t>(periods);
  win.value.reserve(n);
  win.pref_len.reserve(n + 1);
  win.pref_mass.reserve(n + 1);
  win.pref_len.push_back(Rat(0));
  win.pref_mass.push_back(Rat(0));
  for (int c = 0; c < periods; ++c) {
    for (const Piece& p : w.pieces()) {
      Rat len = (p.end - p.start).to_rat();
      win.value.push_back(p.value);
      win.pref_len.push_back(win.pref_len.back() + len);
      win.pref_mass.push_back(win.pref_mass.back() + p.value * len);
    }
  }
  return win;
}

// candidate = mass / (len * m); compares against incumbent without building
// the reduced rational (cross-multiplication on raw parts).
bool improves(const Rat& mass, const Rat& len, const Rat& m, const RangeBest& inc) {
  if (!inc.valid) return true;
  BigInt lhs = mass.num() * inc.value.den() * len.den() * m.den();
  BigInt rhs = inc.value.num() * mass.den() * len.num() * m.num();
  return lhs > rhs;
}

RangeBest scan_starts(const StepWeight& w, const Window& win, size_t i_begin, size_t i_end) {
  const size_t n = win.value.size();
  RangeBest best;
  for (size_t i = i_begin; i < i_end; ++i) {
    const Rat& left_neighbor = win.value[(i + n - 1) % n];
    Rat run_min = win.value[i];
    for (size_t j = i; j < n; ++j) {
      run_min = min(run_min, win.value[j]);
      const Rat& right_neighbor = win.value[(j + 1) % n];
      const Rat* m = &run_min;
      auto sliver = A1Certificate::Sliver::none;
      if (left_neighbor < *m) {
        m = &left_neighbor;
        sliver = A1Certificate::Sliver::left;
      }
      if (right_neighbor < *m) {
        m = &right_neighbor;
        sliver = A1Certificate::Sliver::right;
      }
      Rat mass = win.pref_mass[j + 1] - win.pref_mass[i];
      Rat len = win.pref_len[j + 1] - win.pref_len[i];
      if (improves(mass, len, *m, best)) {
        best.valid = true;
        best.value = mass / (len * *m);
        best.first = i;
        best.last = j;
        best.sliver = sliver;
        best.sliver_piece = sliver == A1Certificate::Sliver::left ? (i + n - 1) % n
                            : sliver == A1Certificate::Sliver::right ? (j + 1) % n
                                                                     : 0;
      }
    }
  }
  return best;
}

}  // namespace

A1Certificate a1_exact(const StepWeight& w, int window_periods, int threads) {
  if (window_periods < 3) throw std::invalid_argument("a1_exact: window_periods must be >= 3");
  A1Certificate cert;
  cert.window_periods = window_periods;
  if (w.pieces().size() == 1) {  // constant weight
    cert.value = Rat(1);
    return cert;
  }
  Window win = make_window(w, window_periods);
  const size_t n = win.value.size();

  RangeBest best;
  if (threads <= 1) {
    best = scan_starts(w, win, 0, n);
  } else {
    size_t chunks = std::min<size_t>(static_cast<size_t>(threads), n);
    std::vector<std::future<RangeBest>> futs;
    for (size_t c = 0; c < chunks; ++c) {
      size_t lo = n * c / chunks, hi = n * (c + 1) / chunks;
      futs.push_back(std::async(std::launch::async,
                                [&w, &win, lo, hi] { return scan_starts(w, win, lo, hi); }));
    }
    for (auto& f : futs) {
      RangeBest b = f.get();
      if (b.beats(best)) best = b;
    }
  }

  cert.value = best.value;
  cert.first_piece = best.first;
  cert.last_piece = best.last;
  cert.sliver = best.sliver;
  cert.sliver_piece = best.sliver_piece;
  return cert;
}

Rat recompute_certificate(const StepWeight& w, const A1Certificate& cert) {
  Window win = make_window(w, cert.window_periods);
  if (cert.last_piece >= win.value.size() || cert.first_piece > cert.last_piece)
    throw std::invalid_argument("certificate range out of window");
  Rat mass = win.pref_mass[cert.last_piece + 1] - win.pref_mass[cert.first_piece];
  Rat len = win.pref_len[cert.last_piece + 1] - win.pref_len[cert.first_piece];
  Rat m = win.value[cert.first_piece];
  for (size_t i = cert.first_piece; i <= cert.last_piece; ++i) m = min(m, win.value[i]);
  if (cert.sliver != A1Certificate::Sliver::none) m = min(m, win.value[cert.sliver_piece]);
  return mass / (len * m);
}

Rat a1_bruteforce(const StepWeight& w, int samples, std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("a1_bruteforce: samples must be >= 1");
  // Breakpoints of three concatenated periods.
  std::vector<Dyadic> bps;
  for (int c = 0; c < 3; ++c) {
    Dyadic base = w.period() * Dyadic(c);
    for (const Piece& p : w.pieces()) bps.push_back(base + p.start);
  }
  bps.push_back(w.period() * Dyadic(3));

  Rat best(0);
  for (size_t i = 0; i + 1 < bps.size(); ++i)
    for (size_t j = i + 1; j < bps.size(); ++j)
      best = max(best, interval_ratio(w, bps[i], bps[j]));

  // Random rational-endpoint intervals inside the same window.
  std::mt19937_64 rng(seed);
  Dyadic span = w.period() * Dyadic(3);
  for (int s = 0; s < samples; ++s) {
    // Random dyadics with 20 fractional bits.
    auto rnd = [&] {
      BigInt num = BigInt(rng() % (1ull << 40));
      return Dyadic(num, 20);  // in [0, 2^20)
    };
    Dyadic a = rnd(), b = rnd();
    // Scale into [0, 3 periods).
    auto scale = [&](const Dyadic& t) {
      Rat r = t.to_rat() * span.to_rat() * pow2_rat(-20);
      return *Dyadic::from_rat(r);
    };
    a = scale(a);
    b = scale(b);
    if (b < a) std::swap(a, b);
    if (a == b) continue;
    best = max(best, interval_ratio(w, a, b));
  }
  return best;
}

std::pair<Rat, Dyadic> max_adjacent_jump(const StepWeight& w) {
  const auto& pcs = w.pieces();
  Rat best(1);
  Dyadic where(0);
  for (size_t i = 0; i < pcs.size(); ++i) {
    const Rat& v1 = pcs[i].value;
    const Rat& v2 = pcs[(i + 1) % pcs.size()].value;
    Rat ratio = max(v1 / v2, v2 / v1);
    if (ratio > best) {
      best = ratio;
      where = (i + 1 < pcs.size()) ? pcs[i + 1].start : Dyadic(0);
    }
  }
  return {best, where};
}

JumpAudit jump_audit(const StepWeight& w) {
  JumpAudit audit;
  const auto& pcs = w.pieces();
  audit.max_ratio = Rat(1);
  audit.max_intra_tail_ratio = Rat(1);

  int N = sharp_level_from_period(w);
  Dyadic period = w.period();

  // The L_k tail regions on both halves of the period.
  std::vector<std::pair<Dyadic, Dyadic>> tails;
  for (int k = 2; k <= N; ++k) {
    Dyadic lo(BigInt(1) << static_cast<unsigned>(k), 0);
    Dyadic hi(BigInt(1) << static_cast<unsigned>(k + 1), 0);
    lo += Dyadic(k);
    tails.push_back({lo, hi});
    tails.push_back({period - hi, period - lo});
  }

  for (size_t i = 0; i < pcs.size(); ++i) {
    size_t jn = (i + 1) % pcs.size();
    const Rat& v1 = pcs[i].value;
    const Rat& v2 = pcs[jn].value;
    Rat ratio = max(v1 / v2, v2 / v1);
    Dyadic where = jn == 0 ? Dyadic(0) : pcs[jn].start;
    if (std::find(audit.distinct_ratios.begin(), audit.distinct_ratios.end(), ratio) ==
        audit.distinct_ratios.end())
      audit.distinct_ratios.push_back(ratio);
    audit.max_ratio = max(audit.max_ratio, ratio);
    if (ratio == Rat(8) && !(where == Dyadic(4) || where == period - Dyadic(4)))
      audit.eight_only_at_pm4 = false;
    if (jn != 0) {
      for (const auto& [lo, hi] : tails)
        if (lo <= pcs[i].start && pcs[jn].end <= hi) {
          audit.max_intra_tail_ratio = max(audit.max_intra_tail_ratio, ratio);
          break;
        }
    }
  }
  std::sort(audit.distinct_ratios.begin(), audit.distinct_ratios.end());
  audit.note =
      "adjacent levels double inside each tail region, but the measured jump is 4 at "
      "block boundaries and 8 at |x| = 4; only the constant in per-piece estimates is "
      "affected, none of the asymptotics";
  return audit;
}

}  // namespace mwsharp
