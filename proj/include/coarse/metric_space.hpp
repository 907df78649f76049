#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace coarse {

using Dist = std::int64_t;
using DistMatrix = Eigen::Matrix<Dist, Eigen::Dynamic, Eigen::Dynamic>;

/// Finite uniformly discrete metric space: named points and an exact
/// integer distance matrix. `scale` is the number of distance units per 1.0,
/// so all radii and thresholds throughout the library are integers too.
class FiniteMetricSpace {
public:
  FiniteMetricSpace(std::vector<std::string> points, DistMatrix dist, Dist scale);

  /// For metrics that are correct by construction (word metrics, l1 products):
  /// skips the cubic triangle-inequality scan, keeps the cheap checks.
  struct MetricByConstruction {};
  FiniteMetricSpace(MetricByConstruction, std::vector<std::string> points,
                    DistMatrix dist, Dist scale);

  int size() const { return static_cast<int>(points_.size()); }
  const std::vector<std::string>& points() const { return points_; }
  const std::string& point(int i) const { return points_.at(static_cast<std::size_t>(i)); }
  const DistMatrix& dist() const { return dist_; }
  Dist distance(int a, int b) const { return dist_(a, b); }
  Dist scale() const { return scale_; }
  Dist diameter() const;

  /// Index of a point id; throws std::invalid_argument for unknown ids.
  int index_of(const std::string& id) const;
  std::optional<int> find(const std::string& id) const;

private:
  std::vector<std::string> points_;
  DistMatrix dist_;
  Dist scale_;
  std::unordered_map<std::string, int> index_;
};

/// Monotone step function sampled at the input values that actually occur.
/// Evaluation takes the running maximum over all sampled inputs <= r, so the
/// function is nondecreasing by construction.
struct StepFunction {
  std::vector<std::pair<Dist, Dist>> steps;  // sorted by input, outputs cumulative max

  Dist operator()(Dist r) const;
  bool empty() const { return steps.empty(); }
};

/// Distortion data of a map between finite spaces: forward bounds image
/// distances, backward bounds preimage distances.
struct ControlData {
  StepFunction forward;
  StepFunction backward;
  bool injective = false;
};

std::vector<int> ball(const FiniteMetricSpace& X, int x, Dist R);

std::vector<std::pair<int, int>> diag_neighborhood(const FiniteMetricSpace& X, Dist R,
                                                   bool strict);

/// Greedy coloring with 1-based colors: points are processed in input order
/// and take the smallest color not used within distance R. Same-colored
/// distinct points therefore satisfy d > R, and the number of colors is at
/// most the largest R-ball cardinality.
std::vector<int> greedy_separation(const FiniteMetricSpace& X, Dist R);

/// Exhaustive control functions of phi (given as index map X -> Y) plus an
/// exact injectivity flag. Every map between finite spaces admits these.
ControlData control_functions(const std::vector<int>& phi, const FiniteMetricSpace& X,
                              const FiniteMetricSpace& Y);

/// Disjoint union of the first K nonempty subsets of X (ordered by
/// cardinality, ties by the lexicographic list of sorted point ids), with
/// block i placed at offset i^2 and the l1 product metric
/// d((x,i^2),(y,j^2)) = d_X(x,y) + scale*|i^2-j^2|.
FiniteMetricSpace fin_space(const FiniteMetricSpace& X, std::int64_t K);

// Small space families used by tools and tests.
FiniteMetricSpace make_path_space(int n, const std::string& prefix = "p");
FiniteMetricSpace make_cycle_space(int n, const std::string& prefix = "v");

}  // namespace coarse
