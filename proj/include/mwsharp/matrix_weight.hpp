#pragma once

#include "mwsharp/a1.hpp"
#include "mwsharp/step_weight.hpp"

#include <vector>

namespace mwsharp {

/// Diagonal matrix weight W = diag(w_1, ..., w_n). All entries share the
/// same period and, after construction, the same piece breakpoints (inputs
/// are refined onto the merged grid). Positive definiteness is inherited
/// from the positivity of the scalar entries.
class DiagMatrixWeight {
 public:
  explicit DiagMatrixWeight(std::vector<StepWeight> entries);

  int dimension() const { return static_cast<int>(entries_.size()); }
  const std::vector<StepWeight>& entries() const { return entries_; }
  const Dyadic& period() const { return entries_.front().period(); }
  /// Common breakpoints; entry i has value_matrix()[i][j] on piece j.
  const std::vector<Piece>& grid() const { return entries_.front().pieces(); }
  /// values_[i][j] = value of entry i on grid piece j.
  const std::vector<std::vector<Rat>>& values() const { return values_; }

 private:
  std::vector<StepWeight> entries_;
  std::vector<std::vector<Rat>> values_;
};

/// Compactly supported vector-valued step function (the test functions of
/// the diagonal reduction): n components, finitely many pieces each.
struct VectorStepFunction {
  struct Part {
    Dyadic start, end;
    std::vector<Rat> component_values;  // size n
  };
  int dimension = 1;
  std::vector<Part> parts;  // ordered, disjoint
};

/// sqrt-closed exact scalar: factor * sqrt(radicand), factor >= 0,
/// radicand > 0. Rational iff radicand is a perfect square of a rational.
struct SqrtRat {
  Rat factor;
  Rat radicand{1};
  bool equals_rat(const Rat& r) const {
    if (factor.is_zero()) return r.is_zero();
    return !r.is_negative() && factor * factor * radicand == r * r;
  }
  double to_double() const;
};

/// W = w I_n.
DiagMatrixWeight embed_scalar(const StepWeight& w, int n);

/// Exact matrix A1 constant for diagonal weights:
///   sup_Q esssup_{y in Q} (1/|Q|) int_Q ||W(x) W(y)^{-1}|| dx,
/// where for diagonal W the operator norm is max_i w_i(x)/w_i(y). The same
/// piece-range enumeration as the scalar solver applies, with the
/// essential-supremum point y ranging over the pieces of the range and the
/// two sliver neighbors; dominated y-candidates (componentwise larger value
/// vectors) are pruned, which is exact because max_i w_i(x)/w_i(y) is
/// monotone in the y-vector.
Rat matrix_a1_diag(const DiagMatrixWeight& W, int window_periods = 3);

/// Exact pointwise maximal function
///   sup_{I contains x} (1/|I|) int_I |W(x) W(y)^{-1} f(y)| dy.
/// The integrand is a step function of y whose piece norms must share a
/// common radicand (always true when f has a single nonzero component);
/// throws std::invalid_argument otherwise.
SqrtRat matrix_maximal_at(const DiagMatrixWeight& W, const VectorStepFunction& f, const Rat& x);

/// f = (w chi_[0,1], 0, ..., 0)^t as a VectorStepFunction.
VectorStepFunction lemma_test_function(const StepWeight& w, int n);

/// Checks, at each sample point, that |M_W f(x)| equals w(x) M(chi_[0,1])(x)
/// for f = (w chi_[0,1], 0, ..., 0)^t and W = w I_n, and that the diagonal
/// matrix A1 constant of the embedding equals the scalar one.
struct Lemma21Report {
  int n = 1;
  size_t samples = 0;
  size_t mismatches = 0;
  std::vector<Rat> mismatch_points;
  Rat a1_scalar;
  Rat a1_matrix;
  bool a1_equal = false;
  bool pass() const { return mismatches == 0 && a1_equal; }
};
Lemma21Report lemma21_check(const StepWeight& w, int n, const std::vector<Rat>& sample_points);

}  // namespace mwsharp
