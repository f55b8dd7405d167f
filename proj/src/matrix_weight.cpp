#include "mwsharp/matrix_weight.hpp"

#include "mwsharp/operators.hpp"

#include <boost/multiprecision/integer.hpp>

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace mwsharp {

double SqrtRat::to_double() const {
  return factor.to_double() * std::sqrt(radicand.to_double());
}

DiagMatrixWeight::DiagMatrixWeight(std::vector<StepWeight> entries) {
  if (entries.empty()) throw std::invalid_argument("matrix weight needs dimension >= 1");
  for (const StepWeight& e : entries)
    if (!(e.period() == entries.front().period()))
      throw std::invalid_argument("matrix weight entries must share one period");

  // Refine all entries onto the merged breakpoint grid.
  std::set<Dyadic> cuts;
  for (const StepWeight& e : entries)
    for (const Piece& p : e.pieces()) cuts.insert(p.start);
  cuts.insert(entries.front().period());
  std::vector<Dyadic> grid(cuts.begin(), cuts.end());

  for (StepWeight& e : entries) {
    std::vector<Piece> pcs;
    for (size_t g = 0; g + 1 < grid.size(); ++g)
      pcs.push_back({grid[g], grid[g + 1], value_at(e, grid[g])});
    e = StepWeight(std::move(pcs), e.period(), e.label());
  }
  entries_ = std::move(entries);
  values_.resize(entries_.size());
  for (size_t i = 0; i < entries_.size(); ++i)
    for (const Piece& p : entries_[i].pieces()) values_[i].push_back(p.value);
}

DiagMatrixWeight embed_scalar(const StepWeight& w, int n) {
  if (n < 1) throw std::invalid_argument("embed_scalar: n must be >= 1");
  return DiagMatrixWeight(std::vector<StepWeight>(static_cast<size_t>(n), w));
}

namespace {

// max_i v_i(piece p) / v_i(piece q) over the common grid.
Rat pair_norm(const DiagMatrixWeight& W, size_t p, size_t q) {
  const auto& vals = W.values();
  Rat best = vals[0][p] / vals[0][q];
  for (size_t i = 1; i < vals.size(); ++i) best = max(best, vals[i][p] / vals[i][q]);
  return best;
}

// q-candidates for the essential supremum over a growing range: the
// componentwise-minimal (Pareto) piece vectors seen so far, with running
// sums of len_p * pair_norm(p, q).
struct ParetoSet {
  std::vector<size_t> members;      // grid indices mod grid size
  std::vector<Rat> sums;            // aligned with members
};

bool dominates(const DiagMatrixWeight& W, size_t a, size_t b) {
  // true if piece a's value vector is componentwise <= piece b's
  for (size_t i = 0; i < W.values().size(); ++i)
    if (W.values()[i][a] > W.values()[i][b]) return false;
  return true;
}

// One directional pass: enumerate ranges [i..j] of the tiled grid and for
// each consider y in the Pareto set of the range plus the left neighbor
// (slivers on the right are caught by the mirrored pass).
Rat directional_scan(const DiagMatrixWeight& W, int window) {
  const auto& grid = W.grid();
  const size_t C = grid.size();
  const size_t n = C * static_cast<size_t>(window);
  std::vector<Rat> len(n), pref_len(n + 1, Rat(0));
  for (size_t t = 0; t < n; ++t) {
    len[t] = (grid[t % C].end - grid[t % C].start).to_rat();
    pref_len[t + 1] = pref_len[t] + len[t];
  }
  auto gi = [&](size_t t) { return t % C; };

  Rat best(1);
  for (size_t i = 0; i < n; ++i) {
    ParetoSet ps;
    size_t left = gi(i + n - 1);
    Rat left_sum(0);
    for (size_t j = i; j < n; ++j) {
      size_t pj = gi(j);
      // extend all candidate sums by the new piece
      for (size_t c = 0; c < ps.members.size(); ++c)
        ps.sums[c] += len[j] * pair_norm(W, pj, ps.members[c]);
      left_sum += len[j] * pair_norm(W, pj, left);
      // insert pj as a candidate unless dominated; drop members it dominates
      bool insert = true;
      for (size_t c = 0; c < ps.members.size() && insert; ++c)
        if (dominates(W, ps.members[c], pj)) insert = false;
      if (insert) {
        for (size_t c = 0; c < ps.members.size();) {
          if (dominates(W, pj, ps.members[c])) {
            ps.members.erase(ps.members.begin() + static_cast<long>(c));
            ps.sums.erase(ps.sums.begin() + static_cast<long>(c));
          } else {
            ++c;
          }
        }
        Rat sum(0);
        for (size_t t = i; t <= j; ++t) sum += len[t] * pair_norm(W, gi(t), pj);
        ps.members.push_back(pj);
        ps.sums.push_back(std::move(sum));
      }
      Rat total_len = pref_len[j + 1] - pref_len[i];
      for (const Rat& s : ps.sums) best = max(best, s / total_len);
      best = max(best, left_sum / total_len);
    }
  }
  return best;
}

DiagMatrixWeight reversed(const DiagMatrixWeight& W) {
  std::vector<StepWeight> entries;
  for (const StepWeight& e : W.entries()) {
    std::vector<Piece> pcs;
    const Dyadic& P = e.period();
    for (auto it = e.pieces().rbegin(); it != e.pieces().rend(); ++it)
      pcs.push_back({P - it->end, P - it->start, it->value});
    entries.push_back(StepWeight(std::move(pcs), P, e.label()));
  }
  return DiagMatrixWeight(std::move(entries));
}

}  // namespace

Rat matrix_a1_diag(const DiagMatrixWeight& W, int window_periods) {
  if (window_periods < 3)
    throw std::invalid_argument("matrix_a1_diag: window_periods must be >= 3");
  if (W.grid().size() == 1) return Rat(1);
  // Forward pass covers y inside the range and left slivers; the pass on
  // the reflected weight covers right slivers (the A1 functional is
  // invariant under reflection).
  Rat fwd = directional_scan(W, window_periods);
  Rat bwd = directional_scan(reversed(W), window_periods);
  return max(fwd, bwd);
}

VectorStepFunction lemma_test_function(const StepWeight& w, int n) {
  if (n < 1) throw std::invalid_argument("lemma_test_function: n must be >= 1");
  VectorStepFunction f;
  f.dimension = n;
  // w * chi_[0,1] in the first slot; w has period >= 1 in every constructed
  // case, but clip generically.
  Dyadic one(1);
  for (const Piece& p : w.pieces()) {
    if (!(p.start < one)) break;
    Dyadic end = p.end < one ? p.end : one;
    VectorStepFunction::Part part;
    part.start = p.start;
    part.end = end;
    part.component_values.assign(static_cast<size_t>(n), Rat(0));
    part.component_values[0] = p.value;
    f.parts.push_back(std::move(part));
  }
  return f;
}

namespace {

BigInt isqrt_exact(const BigInt& v) {
  // returns r with r*r == v, or -1
  if (v < 0) return -1;
  BigInt r = boost::multiprecision::sqrt(v);
  return r * r == v ? r : BigInt(-1);
}

// w(x) for rational x: reduce mod period, then locate the piece by
// cross-comparing against the dyadic breakpoints.
Rat value_at_rat(const StepWeight& w, const Rat& x) {
  Rat P = w.period().to_rat();
  Rat q = x / P;
  BigInt k, r;
  boost::multiprecision::divide_qr(q.num(), q.den(), k, r);
  if (r != 0 && q.num() < 0) --k;
  Rat xr = x - Rat(k) * P;
  const auto& pcs = w.pieces();
  size_t lo = 0, hi = pcs.size();
  while (hi - lo > 1) {
    size_t mid = (lo + hi) / 2;
    if (pcs[mid].start.to_rat() <= xr)
      lo = mid;
    else
      hi = mid;
  }
  return pcs[lo].value;
}

// sqrt(a/b) as an exact rational if possible.
bool sqrt_rational(const Rat& r, Rat& out) {
  BigInt sn = isqrt_exact(r.num());
  if (sn < 0) return false;
  BigInt sd = isqrt_exact(r.den());
  if (sd < 0) return false;
  out = Rat(sn, sd);
  return true;
}

}  // namespace

SqrtRat matrix_maximal_at(const DiagMatrixWeight& W, const VectorStepFunction& f, const Rat& x) {
  if (f.dimension != W.dimension())
    throw std::invalid_argument("matrix_maximal_at: dimension mismatch");

  // Refine f against the weight grid and evaluate the squared norm of
  // W(x) W(y)^{-1} f(y) on each refined piece.
  std::vector<Rat> wx(W.values().size());
  for (size_t i = 0; i < W.entries().size(); ++i) wx[i] = value_at_rat(W.entries()[i], x);

  struct Cell {
    Rat start, end;
    Rat norm_sq;
  };
  std::vector<Cell> cells;
  for (const auto& part : f.parts) {
    // split [part.start, part.end) on the weight grid
    Dyadic cur = part.start;
    while (cur < part.end) {
      Dyadic curm = W.entries().front().reduce_mod_period(cur);
      size_t gidx = W.entries().front().index_at(curm);
      Dyadic piece_end = cur + (W.grid()[gidx].end - curm);
      Dyadic end = piece_end < part.end ? piece_end : part.end;
      Rat nsq(0);
      for (size_t i = 0; i < wx.size(); ++i) {
        const Rat& fy = part.component_values[i];
        if (fy.is_zero()) continue;
        Rat c = wx[i] * fy / W.values()[i][gidx];
        nsq += c * c;
      }
      cells.push_back({cur.to_rat(), end.to_rat(), std::move(nsq)});
      cur = end;
    }
  }
  if (cells.empty()) return {Rat(0), Rat(1)};

  // Common radicand: cell norms must be rational multiples of one sqrt.
  Rat base_sq(0);
  for (const Cell& c : cells)
    if (c.norm_sq.is_positive()) {
      base_sq = c.norm_sq;
      break;
    }
  if (base_sq.is_zero()) return {Rat(0), Rat(1)};
  std::vector<Rat> coeff(cells.size(), Rat(0));  // norm = coeff * sqrt(base_sq)
  for (size_t c = 0; c < cells.size(); ++c) {
    if (cells[c].norm_sq.is_zero()) continue;
    Rat ratio = cells[c].norm_sq / base_sq;
    Rat root;
    if (!sqrt_rational(ratio, root))
      throw std::invalid_argument(
          "matrix_maximal_at: integrand norms with incommensurable radicands");
    coeff[c] = root;
  }

  // Maximize the average of the step function coeff over intervals
  // containing x: endpoints among the cell breakpoints and x itself.
  std::vector<Rat> bps;
  for (const Cell& c : cells) {
    bps.push_back(c.start);
    bps.push_back(c.end);
  }
  std::vector<Rat> lefts, rights;
  for (const Rat& b : bps) {
    if (b <= x) lefts.push_back(b);
    if (b >= x) rights.push_back(b);
  }
  lefts.push_back(x);
  rights.push_back(x);

  auto mass_to = [&](const Rat& t) {  // integral of coeff over (-inf, t]
    Rat m(0);
    for (size_t c = 0; c < cells.size(); ++c) {
      Rat hi = min(t, cells[c].end);
      if (cells[c].start < hi) m += coeff[c] * (hi - cells[c].start);
    }
    return m;
  };

  Rat best(0);
  for (const Rat& a : lefts)
    for (const Rat& b : rights) {
      if (!(a < b)) continue;
      Rat avg = (mass_to(b) - mass_to(a)) / (b - a);
      best = max(best, avg);
    }

  // Fold perfect-square radicands into the factor.
  Rat root;
  if (sqrt_rational(base_sq, root)) return {best * root, Rat(1)};
  return {best, base_sq};
}

Lemma21Report lemma21_check(const StepWeight& w, int n, const std::vector<Rat>& sample_points) {
  Lemma21Report rep;
  rep.n = n;
  rep.samples = sample_points.size();
  DiagMatrixWeight W = embed_scalar(w, n);
  VectorStepFunction f = lemma_test_function(w, n);

  for (const Rat& x : sample_points) {
    SqrtRat lhs = matrix_maximal_at(W, f, x);
    Rat rhs = value_at_rat(w, x) * maximal_chi01(x);
    if (!lhs.equals_rat(rhs)) {
      ++rep.mismatches;
      if (rep.mismatch_points.size() < 8) rep.mismatch_points.push_back(x);
    }
  }
  rep.a1_scalar = a1_exact(w).value;
  rep.a1_matrix = matrix_a1_diag(W);
  rep.a1_equal = rep.a1_scalar == rep.a1_matrix;
  return rep;
}

}  // namespace mwsharp
