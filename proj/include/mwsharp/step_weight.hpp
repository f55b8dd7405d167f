#pragma once

#include "mwsharp/dyadic.hpp"
#include "mwsharp/rational.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace mwsharp {

/// One constant piece of a step weight: the half-open interval
/// [start, end) with a positive value.
struct Piece {
  Dyadic start;
  Dyadic end;
  Rat value;
};

/// A periodic, piecewise-constant weight. The stored pieces tile one
/// period [0, period) contiguously; the extension to the whole line is
/// arithmetic (x mod period) and never materialized. Immutable after
/// construction, safe for concurrent readers.
class StepWeight {
 public:
  StepWeight(std::vector<Piece> pieces, Dyadic period, std::string label);

  const std::vector<Piece>& pieces() const { return pieces_; }
  const Dyadic& period() const { return period_; }
  const std::string& label() const { return label_; }

  /// Integral of w over one period.
  const Rat& period_mass() const { return prefix_.back(); }
  /// Integral of w over [0, pieces()[i].start).
  const Rat& prefix_mass(size_t i) const { return prefix_[i]; }
  const Rat& max_value() const { return max_value_; }
  const Rat& min_value() const { return min_value_; }

  /// Index of the piece whose half-open interval contains x; requires
  /// 0 <= x < period.
  size_t index_at(const Dyadic& x) const;

  /// x reduced into [0, period).
  Dyadic reduce_mod_period(const Dyadic& x) const;

 private:
  std::vector<Piece> pieces_;
  Dyadic period_;
  std::string label_;
  std::vector<Rat> prefix_;  // size pieces+1
  Rat max_value_;
  Rat min_value_;
};

/// w(x) for arbitrary x (reduced mod period).
Rat value_at(const StepWeight& w, const Dyadic& x);

/// Exact integral of w over [a, b]; requires a <= b.
Rat integral(const StepWeight& w, const Dyadic& a, const Dyadic& b);

/// Minimum piece value over pieces meeting (a, b) in positive measure;
/// requires a < b. Endpoint touching does not count.
Rat essinf(const StepWeight& w, const Dyadic& a, const Dyadic& b);

/// Exact Lebesgue measure of {x in (1, inf) : w(x) > x}. Finite because
/// w is bounded by its maximal piece value.
Rat superlevel_vs_identity(const StepWeight& w);

/// Exact integral of w over the block [2^k, 2^(k+1)), validated against the
/// closed form 2^(k+1) k + (k-1)(2^k - k) + 2(2^k - k); throws
/// std::logic_error if the two routes disagree. Only meaningful for weights
/// from build_sharp_weight.
Rat block_mass(const StepWeight& w, int k);

/// Closed form for the block mass above.
Rat block_mass_closed_form(int k);

/// Constructs the extremal weight of level N (N >= 2): on [0, 2^(N+1)) the
/// sum of the unit weight on [0,4) and, for k = 2..N, the block of level
/// 2^(k+1) on I_k = [2^k, 2^k + k) surrounded by geometrically shrinking
/// plateaus of levels 2^j on the two halves of [2^k + k, 2^(k+1)); mirrored
/// onto [2^(N+1), 2^(N+2)) by reflecting the half-open pieces, then
/// extended periodically with period 2^(N+2).
StepWeight build_sharp_weight(int N);

/// Number of pieces per period of build_sharp_weight(N): 2 (1 + sum_{k=2}^N (2k+1)).
size_t sharp_weight_piece_count(int N);

/// Recovers N from a weight with period 2^(N+2); throws std::invalid_argument
/// if the period is not such a power of two.
int sharp_level_from_period(const StepWeight& w);

/// Weight with every value multiplied by c > 0.
StepWeight scale_weight(const StepWeight& w, const Rat& c);

nlohmann::json weight_to_json(const StepWeight& w);
StepWeight weight_from_json(const nlohmann::json& j);
void save_weight(const StepWeight& w, const std::string& path);
StepWeight load_weight(const std::string& path);

}  // namespace mwsharp
