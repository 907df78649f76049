#pragma once

#include "coarse/partial_translation.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>

namespace coarse {

struct KappaCaps {
  int exact_size = 10;                    // largest |X| accepted in exact mode
  std::int64_t node_limit = 20'000'000;   // backtracking branch budget
};

struct CapsExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct KappaResult {
  bool exact = false;  // true when lower == upper is the exact invariant
  int lower = 1;
  int upper = 1;
  std::int64_t nodes = 0;
  std::optional<AtlasChart> witness;  // verified chart achieving `upper`
};

/// Exact translation invariant at radius R. The search backtracks over
/// disjoint families of partial translations covering the strict
/// R-neighborhood of the diagonal while building a multiplicity-one
/// cotranslation system by constraint propagation; the propagation closes
/// each candidate family under the cotranslation action, so covers that need
/// pairs beyond the R-neighborhood are reached as well. A returned value of
/// 1 is exact unconditionally (the multiplicity of any chart is at least 1
/// and the witness is re-verified); if no multiplicity-one chart exists the
/// result degrades to verified bounds. Errors instead of approximating when
/// the caps are exceeded.
KappaResult kappa_search_exact(const FiniteMetricSpace& X, Dist R,
                               const KappaCaps& caps = {});

/// Interval bounds: lower bound 1, upper bound witnessed by pulling the
/// canonical structure of a cyclic group of order m back through the index
/// injection p_i -> i. m defaults to |X|*diam + 1.
KappaResult kappa_search_bound(const FiniteMetricSpace& X, Dist R, int group_order = 0);

}  // namespace coarse
