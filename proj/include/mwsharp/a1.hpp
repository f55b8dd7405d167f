#pragma once

#include "mwsharp/step_weight.hpp"

#include <cstdint>
#include <utility>

namespace mwsharp {

/// Witness for a computed A1 constant. The value is the supremum over all
/// real intervals of avg(I) / essinf(I); it need not be attained. The
/// witness names a contiguous range of pieces (indices into the
/// window_periods-fold concatenated piece list) whose average realizes the
/// supremum, together with an optional "sliver": a neighboring piece a
/// vanishing portion of which is included to lower the essential infimum
/// without changing the average in the limit.
struct A1Certificate {
  enum class Sliver { none, left, right };
  Rat value;
  size_t first_piece = 0;
  size_t last_piece = 0;
  Sliver sliver = Sliver::none;
  size_t sliver_piece = 0;
  int window_periods = 3;
};

/// Exact (integral over [a,b]) / ((b-a) * essinf(a,b)); requires a < b.
Rat interval_ratio(const StepWeight& w, const Dyadic& a, const Dyadic& b);

/// Exact A1 constant with witness.
///
/// Enumerates every contiguous whole-piece range U inside window_periods
/// concatenated periods; the candidate for U is avg(U) / m with m the
/// minimum of (a) the smallest value inside U and (b) the values of the two
/// pieces adjacent to U on the periodic line (sliver limits). This is
/// exhaustive:
///  (i)  for a fixed set of touched pieces the average is a ratio of affine
///       functions of each endpoint, hence monotone in each endpoint, so
///       extremes occur when boundary pieces are either fully included or
///       shrink to a vanishing sliver;
///  (ii) a vanishing sliver changes the essential infimum to the adjacent
///       value while leaving the average unchanged in the limit, and the
///       supremum of the ratio family equals that limit value;
///  (iii) an interval longer than two periods contains a global-minimum
///       piece, and dropping one full period replaces its average by a
///       mediant partner: avg(I) lies between avg(I minus one period) and
///       the period average, so the ratio is dominated by one of the two;
///       induction reduces every interval to length <= 2 periods, which a
///       3-period window covers at every phase.
///
/// The range enumeration is embarrassingly parallel over the starting piece
/// index; the merged result is independent of the thread count (ties are
/// broken towards the lexicographically smallest witness).
A1Certificate a1_exact(const StepWeight& w, int window_periods = 3, int threads = 1);

/// Lower-bound oracle: max of interval_ratio over all breakpoint pairs
/// within 3 periods plus `samples` random rational-endpoint intervals.
/// Always <= a1_exact(w).value (strictly below when the supremum needs a
/// sliver).
Rat a1_bruteforce(const StepWeight& w, int samples, std::uint64_t seed = 0x5eed);

/// Re-evaluates a certificate against the weight it was computed from.
Rat recompute_certificate(const StepWeight& w, const A1Certificate& cert);

/// Maximum over adjacent piece pairs (periodic wrap included) of
/// max(v1/v2, v2/v1), with the witness breakpoint.
std::pair<Rat, Dyadic> max_adjacent_jump(const StepWeight& w);

/// Jump audit for constructed weights: the set of adjacent-piece ratios,
/// whether the maximal ratio 8 occurs only at x == +-4 (mod period), and the
/// largest jump strictly inside the tail regions [2^k + k, 2^(k+1)) and
/// their mirror images.
struct JumpAudit {
  std::vector<Rat> distinct_ratios;  // sorted ascending
  Rat max_ratio;
  bool eight_only_at_pm4 = true;
  Rat max_intra_tail_ratio;  // over adjacent pairs inside one L_k
  std::string note;
};
JumpAudit jump_audit(const StepWeight& w);

}  // namespace mwsharp
