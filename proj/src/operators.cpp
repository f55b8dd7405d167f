#include "mwsharp/operators.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace mwsharp {

Rat maximal_chi01(const Rat& x) {
  if (x.is_negative()) return (Rat(1) - x).reciprocal();
  if (x <= Rat(1)) return Rat(1);
  return x.reciprocal();
}

HilbertValue hilbert_chi01(const Rat& x) {
  if (x.is_zero() || x == Rat(1))
    throw std::domain_error("hilbert_chi01: logarithmic singularity at 0 and 1");
  // |log|x/(x-1)|| via log1p with an exact rational argument, so the
  // relative error never suffers from cancellation:
  //   x > 1:       log(x/(x-1))      = log1p(1/(x-1))
  //   x < 0:       log((1-x)/(-x))   = log1p(1/(-x))
  //   0 < x < 1:   log(x/(1-x))      = log1p((2x-1)/(1-x))
  Rat t;
  if (x > Rat(1))
    t = (x - Rat(1)).reciprocal();
  else if (x.is_negative())
    t = (-x).reciprocal();
  else
    t = (Rat(2) * x - Rat(1)) / (Rat(1) - x);
  double td = t.to_double();
  double v = std::log1p(td);
  double mag = std::fabs(v);
  // Conversion of t is within 1/2 ulp; through d(log1p)/dt = 1/(1+t) that is
  // at most |t/(1+t)| * eps/2 absolute, plus ~1 ulp from log1p itself.
  double err = std::fabs(td / (1.0 + td)) * (DBL_EPSILON / 2) + 2 * DBL_EPSILON * mag +
               DBL_MIN;
  return {mag, err};
}

// ---------------------------------------------------------------------------
// Level sets for the maximal path (exact).
// ---------------------------------------------------------------------------

namespace {

// Shared enumeration: for every piece copy that can meet the level set,
// report the contributing sub-interval. Strictness only matters on the
// [0,1] plateaus.
template <typename Sink>
void scan_levelset_m(const StepWeight& w, const Rat& alpha, bool strict, Sink&& sink) {
  if (!alpha.is_positive()) throw std::invalid_argument("levelset: alpha must be > 0");
  const Rat P = w.period().to_rat();
  const Rat& vmax = w.max_value();
  const Rat one(1);

  // Right branch x > 1: w(x)/x > alpha on x < v/alpha. Copies with
  // base >= vmax/alpha cannot contribute.
  for (long m = 0; Rat(m) * P < vmax / alpha; ++m) {
    Rat base = Rat(m) * P;
    for (size_t i = 0; i < w.pieces().size(); ++i) {
      const Piece& p = w.pieces()[i];
      Rat lo = max(base + p.start.to_rat(), one);
      Rat hi = min(base + p.end.to_rat(), p.value / alpha);
      if (lo < hi) sink(m, i, 'R', lo, hi);
    }
  }
  // Left branch x < 0: w(x)/(1-x) > alpha on x > 1 - v/alpha. Copy m of a
  // piece occupies [s - (m+1)P, e - (m+1)P).
  for (long m = 0; Rat(m) * P < vmax / alpha; ++m) {
    Rat shift = Rat(m + 1) * P;
    for (size_t i = 0; i < w.pieces().size(); ++i) {
      const Piece& p = w.pieces()[i];
      Rat lo = max(p.start.to_rat() - shift, one - p.value / alpha);
      Rat hi = min(p.end.to_rat() - shift, Rat(0));
      if (lo < hi) sink(-(m + 1), i, 'L', lo, hi);
    }
  }
  // Middle region [0,1]: w(x) > alpha (or >= for the left limit).
  for (long m = 0; Rat(m) * P < one; ++m) {
    Rat base = Rat(m) * P;
    for (size_t i = 0; i < w.pieces().size(); ++i) {
      const Piece& p = w.pieces()[i];
      bool in = strict ? p.value > alpha : p.value >= alpha;
      if (!in) continue;
      Rat lo = max(base + p.start.to_rat(), Rat(0));
      Rat hi = min(base + p.end.to_rat(), one);
      if (lo < hi) sink(m, i, 'C', lo, hi);
    }
  }
}

}  // namespace

Rat levelset_measure_m(const StepWeight& w, const Rat& alpha, bool strict) {
  Rat total(0);
  scan_levelset_m(w, alpha, strict,
                  [&](long, size_t, char, const Rat& lo, const Rat& hi) { total += hi - lo; });
  return total;
}

std::vector<LevelContribution> levelset_contributions_m(const StepWeight& w, const Rat& alpha,
                                                        bool strict) {
  std::vector<LevelContribution> out;
  scan_levelset_m(w, alpha, strict,
                  [&](long m, size_t i, char region, const Rat& lo, const Rat& hi) {
                    out.push_back({m, i, region, lo, hi, hi - lo});
                  });
  return out;
}

// ---------------------------------------------------------------------------
// Exact weak norm for the maximal path.
// ---------------------------------------------------------------------------

namespace {

// Piecewise model swept from alpha = +inf downwards: on the current segment
//   phi(alpha)   = A*alpha + B          (exact part, window copies)
//   cap(alpha)   = C + D*alpha          (tail upper bound; 0 above all cap
//                                        activation points)
struct SweepEvent {
  Rat alpha;
  Rat dA, dB, dC, dD;
};

struct Candidate {
  Rat alpha;  // 0 for the zero-limit
  Rat value;
  bool exact;
  WeakNormM::AlphaKind kind;
};

void build_events_m(const StepWeight& w, int window, std::vector<SweepEvent>& ev) {
  ev.clear();
  const Rat P = w.period().to_rat();
  const Rat one(1);
  auto push = [&](Rat a, Rat dA, Rat dB, Rat dC, Rat dD) {
    ev.push_back({std::move(a), std::move(dA), std::move(dB), std::move(dC), std::move(dD)});
  };
  for (long m = 0; m <= window; ++m) {
    Rat base = Rat(m) * P;
    for (const Piece& p : w.pieces()) {
      const Rat& v = p.value;
      Rat s = p.start.to_rat(), e = p.end.to_rat();
      // Right copy portion in (1, inf).
      Rat e1 = e + base;
      if (one < e1) {
        Rat s1 = max(s + base, one);
        push(v / s1, -s1, v, 0, 0);   // enters partially below v/s1
        push(v / e1, e1, -v, 0, 0);   // fully covered below v/e1
      }
      // Left copy [s,e) - (m+1)P, entirely in x <= 0.
      Rat shift = Rat(m + 1) * P;
      Rat s2 = s - shift, e2 = e - shift;
      push(v / (one - e2), e2 - one, v, 0, 0);
      push(v / (one - s2), one - s2, -v, 0, 0);
      // Plateau from the [0,1] overlap (period copies while they reach it).
      if (s + base < one) {
        Rat len = min(e1, one) - (s + base);
        if (len.is_positive()) push(v, len, 0, 0, 0);
      }
    }
  }
  // Sawtooth tail caps for the copies beyond the window:
  //   alpha * tail_p(alpha) <= (len_p/P) * max(0, v_p - alpha * c_p).
  for (const Piece& p : w.pieces()) {
    const Rat& v = p.value;
    Rat s = p.start.to_rat(), e = p.end.to_rat();
    Rat len = e - s;
    Rat c_r = e + Rat(window) * P;
    push(v / c_r, 0, 0, len * v / P, -(len * c_r / P));
    Rat c_l = one - s + Rat(window + 1) * P;
    push(v / c_l, 0, 0, len * v / P, -(len * c_l / P));
  }
  std::sort(ev.begin(), ev.end(),
            [](const SweepEvent& a, const SweepEvent& b) { return a.alpha > b.alpha; });
}

}  // namespace

WeakNormM weak_norm_m(const StepWeight& w) {
  const Rat P = w.period().to_rat();
  const Rat two_means = Rat(2) * w.period_mass() / P;  // lim_{alpha->0+} phi(alpha)

  std::vector<SweepEvent> ev;
  for (int window = 1; window <= (1 << 20); window *= 2) {
    build_events_m(w, window, ev);

    Rat A(0), B(0), C(0), D(0);
    Candidate best{Rat(0), two_means, true, WeakNormM::AlphaKind::zero_limit};
    Rat upper = two_means;

    size_t i = 0;
    while (i < ev.size()) {
      const Rat alpha = ev[i].alpha;
      auto value_here = [&] { return A * alpha + B + C + D * alpha; };
      auto cap_here = [&] { return C + D * alpha; };

      Rat pre = value_here();
      Rat pre_cap = cap_here();
      if (pre > upper) upper = pre;
      if (pre_cap.is_zero() && pre > best.value)
        best = {alpha, pre, true, WeakNormM::AlphaKind::attained};

      while (i < ev.size() && ev[i].alpha == alpha) {
        A += ev[i].dA;
        B += ev[i].dB;
        C += ev[i].dC;
        D += ev[i].dD;
        ++i;
      }

      Rat post = value_here();
      Rat post_cap = cap_here();
      if (post > upper) upper = post;
      if (post_cap.is_zero() && post > best.value)
        best = {alpha, post, true,
                post == pre ? WeakNormM::AlphaKind::attained : WeakNormM::AlphaKind::left_limit};
    }

    if (!B.is_zero() || !(C == two_means))
      throw std::logic_error("weak_norm_m: sweep bookkeeping out of balance");

    if (upper <= best.value) {
      WeakNormM out;
      out.value = best.value;
      out.alpha_star = best.alpha;
      out.kind = best.kind;
      out.window_periods_used = window;
      if (best.kind != WeakNormM::AlphaKind::zero_limit)
        out.contributions = levelset_contributions_m(
            w, best.alpha, best.kind != WeakNormM::AlphaKind::left_limit);
      return out;
    }
  }
  throw std::runtime_error("weak_norm_m: window certification did not converge");
}

// ---------------------------------------------------------------------------
// Hilbert path (floating point with certified window).
// ---------------------------------------------------------------------------

namespace {

struct PieceF {
  double s, e, v, len;
};

struct HGeometry {
  std::vector<PieceF> pieces;
  double P = 0;
  double W = 0;
  double vmax = 0;
};

HGeometry h_geometry(const StepWeight& w) {
  HGeometry g;
  g.P = w.period().to_double();
  g.W = w.period_mass().to_double();
  g.vmax = w.max_value().to_double();
  for (const Piece& p : w.pieces()) {
    double s = p.start.to_double(), e = p.end.to_double();
    g.pieces.push_back({s, e, p.value.to_double(), e - s});
  }
  return g;
}

// Threshold x*(alpha, v) = 1/(1 - exp(-alpha/v)): w * |H chi| > alpha on
// (1, x*) along the right branch and on (1 - x*, 0) along the left one.
double h_threshold(double alpha, double v) { return 1.0 / -std::expm1(-alpha / v); }

double mu_h(const HGeometry& g, double alpha, int window) {
  std::vector<double> terms;
  std::map<double, double> xcache;  // per distinct piece value
  auto thresh = [&](double v) {
    auto it = xcache.find(v);
    if (it != xcache.end()) return it->second;
    double x = h_threshold(alpha, v);
    xcache.emplace(v, x);
    return x;
  };
  for (int m = 0; m <= window; ++m) {
    double base = m * g.P;
    for (const PieceF& p : g.pieces) {
      double X = thresh(p.v);
      // right
      double lo = std::max(p.s + base, 1.0), hi = std::min(p.e + base, X);
      if (hi > lo) terms.push_back(hi - lo);
      // left: x > 1 - X
      double s2 = p.s - base - g.P, e2 = p.e - base - g.P;
      lo = std::max(s2, 1.0 - X);
      hi = std::min(e2, 0.0);
      if (hi > lo) terms.push_back(hi - lo);
      // middle portion of [0,1]
      if (p.s + base < 1.0) {
        double q = 1.0 / (1.0 + std::exp(alpha / p.v));
        double ms = std::max(p.s + base, 0.0), me = std::min(p.e + base, 1.0);
        double a = std::min(me, q) - ms;
        if (a > 0) terms.push_back(a);
        double b = me - std::max(ms, 1.0 - q);
        if (b > 0) terms.push_back(b);
      }
    }
  }
  std::sort(terms.begin(), terms.end());
  double sum = 0;
  for (double t : terms) sum += t;
  return sum;
}

double phi_h(const HGeometry& g, double alpha, int window) {
  return alpha * mu_h(g, alpha, window);
}

double caps_h(const HGeometry& g, double alpha, int window) {
  double cap = 0;
  for (const PieceF& p : g.pieces) {
    double cr = p.e - 1.0 + window * g.P;
    double t = p.v - alpha * cr;
    if (t > 0) cap += p.len / g.P * t;
    double cl = (window + 1) * g.P - p.s;
    t = p.v - alpha * cl;
    if (t > 0) cap += p.len / g.P * t;
  }
  return cap;
}

// Golden-section maximization of f on [a, b].
template <typename F>
std::pair<double, double> golden_max(F&& f, double a, double b, int iters = 100) {
  const double gr = 0.6180339887498949;
  double c = b - gr * (b - a), d = a + gr * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < iters && b - a > 1e-15 * (std::fabs(a) + 1); ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = f(d);
    }
  }
  return fc > fd ? std::make_pair(c, fc) : std::make_pair(d, fd);
}

}  // namespace

WeakNormH weak_norm_h(const StepWeight& w) {
  HGeometry g = h_geometry(w);
  const double limit0 = 2 * g.W / g.P;

  double prev_best = -1;
  for (int window = 1; window <= (1 << 14); window *= 2) {
    // Critical candidates: v * |H chi| evaluated at every copy endpoint.
    std::vector<double> alphas;
    auto push_alpha = [&](double a) {
      if (std::isfinite(a) && a > 0) alphas.push_back(a);
    };
    for (int m = 0; m <= window; ++m) {
      double base = m * g.P;
      for (const PieceF& p : g.pieces) {
        double e1 = p.e + base;
        double s1 = std::max(p.s + base, 1.0);
        if (e1 > 1) {
          if (s1 > 1) push_alpha(p.v * std::log1p(1.0 / (s1 - 1.0)));
          push_alpha(p.v * std::log1p(1.0 / (e1 - 1.0)));
        }
        double y1 = 1.0 - (p.e - base - g.P);  // = 1 - e2 >= 1
        double y2 = 1.0 - (p.s - base - g.P);
        if (y1 > 1) push_alpha(p.v * std::log1p(1.0 / (y1 - 1.0)));
        push_alpha(p.v * std::log1p(1.0 / (y2 - 1.0)));
        if (p.s + base < 1.0) {
          for (double b : {p.s + base, p.e + base}) {
            if (b > 0 && b < 1 && b != 0.5) push_alpha(p.v * std::fabs(std::log(b / (1 - b))));
          }
        }
      }
    }
    std::sort(alphas.begin(), alphas.end());
    alphas.erase(std::unique(alphas.begin(), alphas.end()), alphas.end());

    double best = limit0, best_alpha = 0;
    double upper = limit0;
    std::vector<std::pair<double, size_t>> scored;  // (phi, index)
    for (size_t i = 0; i < alphas.size(); ++i) {
      double v = phi_h(g, alphas[i], window);
      double cap = caps_h(g, alphas[i], window);
      if (cap == 0 && v > best) {
        best = v;
        best_alpha = alphas[i];
      }
      upper = std::max(upper, v + cap);
      scored.push_back({v + cap, i});
    }
    // Refine the segments around the strongest candidates.
    std::sort(scored.rbegin(), scored.rend());
    size_t refine = std::min<size_t>(scored.size(), 12);
    for (size_t r = 0; r < refine; ++r) {
      size_t i = scored[r].second;
      double lo = i > 0 ? alphas[i - 1] : alphas[i] * 0.5;
      double hi = i + 1 < alphas.size() ? alphas[i + 1] : alphas[i] * 2;
      auto [am, vm] = golden_max([&](double a) { return phi_h(g, a, window); }, lo, hi);
      double cap = caps_h(g, am, window);
      if (cap == 0 && vm > best) {
        best = vm;
        best_alpha = am;
      }
      upper = std::max(upper, vm + cap);
    }

    bool capped_tail_below_best = upper <= best * (1 + 1e-12) + 1e-300;
    bool stable = prev_best >= 0 && std::fabs(best - prev_best) <= 1e-12 * best;
    if (capped_tail_below_best || (stable && window >= 4)) {
      WeakNormH out;
      out.value = best;
      out.alpha_star = best_alpha;
      out.window_periods_used = window;
      double slack = std::max(0.0, upper - best);
      out.abs_error = std::max(1e-9 * best, slack);
      return out;
    }
    prev_best = best;
  }
  throw std::runtime_error("weak_norm_h: window certification did not converge");
}

HMeasure levelset_measure_h(const StepWeight& w, const Rat& alpha) {
  if (!alpha.is_positive()) throw std::invalid_argument("levelset: alpha must be > 0");
  HGeometry g = h_geometry(w);
  double a = alpha.to_double();
  // The same self-terminating bound as the exact path: nothing contributes
  // beyond x*(alpha, vmax) (plus one period of slack).
  double reach = h_threshold(a, g.vmax);
  int window = static_cast<int>(reach / g.P) + 2;
  double v = mu_h(g, a, window);
  // Threshold relative error ~4 ulp propagates through each clamp.
  double err = 4 * DBL_EPSILON * reach * static_cast<double>(w.pieces().size()) +
               DBL_EPSILON * v * static_cast<double>(w.pieces().size());
  return {v, err};
}

Rat hilbert_weak_lower(const StepWeight& w) { return superlevel_vs_identity(w); }

}  // namespace mwsharp
