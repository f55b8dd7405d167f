#pragma once

#include "mwsharp/step_weight.hpp"

#include <string>
#include <vector>

namespace mwsharp {

enum class OperatorKind { M, H };

/// Uncentered maximal function of the unit indicator: sup over intervals I
/// containing x of |I ∩ [0,1]| / |I|. Equals 1 on [0,1], 1/x for x > 1 and
/// 1/(1-x) for x < 0. Exact.
Rat maximal_chi01(const Rat& x);

/// |H(chi_[0,1])(x)| = |log|x/(x-1)|| (principal value), as a double with a
/// certified absolute error bound. Throws std::domain_error at x in {0, 1}.
struct HilbertValue {
  double value = 0;
  double abs_error = 0;
};
HilbertValue hilbert_chi01(const Rat& x);

/// Exact measure of {x : w(x) * maximal_chi01(x) > alpha} (strict by
/// convention; the non-strict variant ">=" differs only on the plateaus
/// contributed by [0,1] and is used for one-sided limits). Requires
/// alpha > 0. The enumeration stops by itself: no piece copy beyond
/// |x| > max(w)/alpha can contribute.
Rat levelset_measure_m(const StepWeight& w, const Rat& alpha, bool strict = true);

/// The individual contributions behind levelset_measure_m, for reporting.
/// region is 'L' (x < 0), 'C' (x in [0,1]) or 'R' (x > 1).
struct LevelContribution {
  long period_index = 0;
  size_t piece_index = 0;
  char region = 'R';
  Rat lo, hi;  // the contributing sub-interval
  Rat measure;
};
std::vector<LevelContribution> levelset_contributions_m(const StepWeight& w, const Rat& alpha,
                                                        bool strict = true);

/// Error-bounded measure of {x : w(x) * |H chi_[0,1](x)| > alpha}.
struct HMeasure {
  double value = 0;
  double abs_error = 0;
};
HMeasure levelset_measure_h(const StepWeight& w, const Rat& alpha);

/// Exact weak-type quasinorm sup_{alpha>0} alpha * |{w * M chi_[0,1] > alpha}|.
///
/// phi(alpha) = alpha * mu(alpha) is piecewise linear between the critical
/// values {v * g(breakpoint)} (g the branch symbol 1/x, 1/(1-x) or 1), so on
/// any alpha-range on which the contributing piece copies are known the
/// supremum is a maximum over critical values and one-sided limits at the
/// plateau discontinuities of mu. Copies of the periodic weight reach
/// arbitrarily far out, so the solver works window by window: copies within
/// M periods contribute exact critical candidates, while the remaining tail
/// is dominated per piece by the sawtooth bound
///     alpha * tail_p(alpha) <= (len_p / P) * max(0, v_p - alpha * c_p),
/// c_p the first tail completion point. Candidates whose tail cap vanishes
/// are exact values of phi; the window doubles until no capped candidate
/// exceeds the best exact one. As alpha -> 0+, phi(alpha) -> 2W/P (W the
/// period mass): the same sawtooth bound gives |phi - 2W/P| = O(alpha), so
/// the limit enters as an exact candidate of its own ("zero_limit"). The
/// supremum may be attained, approached from the left at a plateau critical
/// ("left_limit"), or approached at alpha -> 0 ("zero_limit").
struct WeakNormM {
  enum class AlphaKind { attained, left_limit, zero_limit };
  Rat value;
  Rat alpha_star;
  AlphaKind kind = AlphaKind::attained;
  int window_periods_used = 0;
  std::vector<LevelContribution> contributions;
};
WeakNormM weak_norm_m(const StepWeight& w);

/// Weak-type quasinorm for the Hilbert transform path. Critical candidates
/// are computed in doubles, every segment between consecutive criticals near
/// the incumbent is refined by golden-section search on the smooth closed
/// form, and the same sawtooth tail caps as in the exact path certify the
/// window. Reported with an absolute error bound (1e-9 relative target).
struct WeakNormH {
  double value = 0;
  double abs_error = 0;
  double alpha_star = 0;
  int window_periods_used = 0;
};
WeakNormH weak_norm_h(const StepWeight& w);

/// The alpha = 1 lower bound for the Hilbert path: since |H chi(x)| > 1/x on
/// (1, inf), the set {x > 1 : w(x)/x > 1} is contained in the level set, so
/// this equals superlevel_vs_identity(w) and is a certified lower bound for
/// weak_norm_h.
Rat hilbert_weak_lower(const StepWeight& w);

}  // namespace mwsharp
