#pragma once

#include "coarse/group.hpp"
#include "coarse/metric_space.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace coarse {

/// A set of ordered point pairs (x,y) with both coordinate projections
/// injective. Pairs are read left to right: the bijection maps x to y.
/// Stored sorted by first coordinate, so equality is structural.
class PartialBijection {
public:
  PartialBijection() = default;
  explicit PartialBijection(std::vector<std::pair<int, int>> pairs);

  static PartialBijection diagonal(int n);

  const std::vector<std::pair<int, int>>& pairs() const { return pairs_; }
  bool empty() const { return pairs_.empty(); }
  int size() const { return static_cast<int>(pairs_.size()); }

  std::optional<int> apply(int x) const;
  std::optional<int> preimage(int y) const;
  bool contains(int x, int y) const;

  bool operator==(const PartialBijection& o) const { return pairs_ == o.pairs_; }
  bool operator<(const PartialBijection& o) const { return pairs_ < o.pairs_; }

private:
  std::vector<std::pair<int, int>> pairs_;             // sorted by first coordinate
  std::vector<std::pair<int, int>> by_second_;         // sorted by second coordinate
};

/// Relational composition: (x,z) whenever (x,y) in s and (y,z) in t.
PartialBijection pb_compose(const PartialBijection& s, const PartialBijection& t);

/// Pair reversal; an involution.
PartialBijection pb_inverse(const PartialBijection& t);

/// Maximum displacement d(x,y) over the pairs of t (0 for the empty set).
/// Every partial bijection of a finite space is a partial translation; this
/// reports its displacement bound.
Dist check_translation(const FiniteMetricSpace& X, const PartialBijection& t);

/// True iff sigma maps every translation of T into itself: for each t in T
/// and (x,y) in t with sigma defined on both, (sigma x, sigma y) lies in t.
bool check_cotranslation(const PartialBijection& sigma,
                         const std::vector<PartialBijection>& T);

/// One chart of an atlas: the disjoint translations T_R and the
/// cotranslations Sigma_R for one radius.
struct AtlasChart {
  Dist radius = 0;
  std::vector<PartialBijection> translations;
  std::vector<PartialBijection> cotranslations;
};

struct Atlas {
  std::vector<AtlasChart> charts;
};

struct ChartReport {
  Dist radius = 0;
  bool axiom1 = false;        // translations cover the strict R-neighborhood
  bool axiom2 = true;         // finite multiplicity (always on finite data)
  bool axiom3 = false;        // cotranslations act transitively on each translation
  bool cotranslations_valid = false;
  int multiplicity = 0;       // exact k: max #sigma with sigma x = x'
  bool free = false;          // multiplicity == 1
  bool globally_controlled = false;
  std::string witness;        // first failure found, empty when all pass
  bool pass() const { return axiom1 && axiom2 && axiom3 && cotranslations_valid; }
};

struct AtlasReport {
  std::vector<ChartReport> charts;
  bool pass() const;
};

/// Checks Definition-style axioms chart by chart. Throws on malformed charts
/// (overlapping translations). Coverage is checked against the strict
/// R-neighborhood d < R; global control is checked for every point pair.
AtlasReport verify_atlas(const FiniteMetricSpace& X, const Atlas& A);

/// Atlas from a separation coloring: classes that are (2R+1)-separated give
/// translations t_ij (pairs within distance R between class i and class j),
/// with cotranslations the powers of one transitive cycle per t_ij, the cycle
/// ordered by first coordinate. Multiplicity is at most n(n+1)/2 for n classes.
Atlas build_atlas_coloring(const FiniteMetricSpace& X, const std::vector<Dist>& radii);

/// The canonical atlas of a finite group on its word metric space: for each
/// radius the translations are right multiplications t_g = {(h,hg)} with
/// |g| < R and the cotranslations are all left multiplications. Free and
/// globally controlled.
Atlas canonical_atlas(const FiniteGroup& G, const std::vector<Dist>& radii);

/// Pulls the canonical structure back through an injective map phi into a
/// group: translations are the partially defined right actions g with
/// |g| <= forward(R), cotranslations the partially defined left actions.
/// Free and globally controlled for every injective phi.
Atlas pullback_atlas(const FiniteMetricSpace& X, const std::vector<int>& phi,
                     const FiniteGroup& G, const std::vector<Dist>& radii);

}  // namespace coarse
