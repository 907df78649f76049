#include "coarse/metric_space.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <stdexcept>

namespace coarse {

namespace {

void validate_metric(const std::vector<std::string>& points, const DistMatrix& dist,
                     Dist scale, bool check_triangle) {
  const int n = static_cast<int>(points.size());
  if (n == 0) throw std::invalid_argument("space has no points");
  if (dist.rows() != n || dist.cols() != n)
    throw std::invalid_argument("distance matrix shape does not match point count");
  if (scale <= 0) throw std::invalid_argument("scale must be positive");

  for (int i = 0; i < n; ++i) {
    if (dist(i, i) != 0)
      throw std::invalid_argument("nonzero self-distance at point " + points[i]);
    for (int j = 0; j < n; ++j) {
      if (dist(i, j) < 0) throw std::invalid_argument("negative distance");
      if (dist(i, j) != dist(j, i))
        throw std::invalid_argument("distance matrix not symmetric at (" + points[i] +
                                    "," + points[j] + ")");
      if (i != j && dist(i, j) == 0)
        throw std::invalid_argument("not uniformly discrete: zero distance between " +
                                    points[i] + " and " + points[j]);
    }
  }
  if (!check_triangle) return;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        if (dist(i, k) > dist(i, j) + dist(j, k))
          throw std::invalid_argument("triangle inequality fails for (" + points[i] +
                                      "," + points[j] + "," + points[k] + ")");
}

}  // namespace

FiniteMetricSpace::FiniteMetricSpace(std::vector<std::string> points, DistMatrix dist,
                                     Dist scale)
    : points_(std::move(points)), dist_(std::move(dist)), scale_(scale) {
  validate_metric(points_, dist_, scale_, true);
  for (int i = 0; i < size(); ++i) {
    if (!index_.emplace(points_[static_cast<std::size_t>(i)], i).second)
      throw std::invalid_argument("duplicate point id: " +
                                  points_[static_cast<std::size_t>(i)]);
  }
}

FiniteMetricSpace::FiniteMetricSpace(MetricByConstruction, std::vector<std::string> points,
                                     DistMatrix dist, Dist scale)
    : points_(std::move(points)), dist_(std::move(dist)), scale_(scale) {
  validate_metric(points_, dist_, scale_, false);
  for (int i = 0; i < size(); ++i) {
    if (!index_.emplace(points_[static_cast<std::size_t>(i)], i).second)
      throw std::invalid_argument("duplicate point id: " +
                                  points_[static_cast<std::size_t>(i)]);
  }
}

Dist FiniteMetricSpace::diameter() const { return dist_.maxCoeff(); }

int FiniteMetricSpace::index_of(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw std::invalid_argument("unknown point: " + id);
  return it->second;
}

std::optional<int> FiniteMetricSpace::find(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Dist StepFunction::operator()(Dist r) const {
  Dist best = 0;
  for (const auto& [in, out] : steps) {
    if (in > r) break;
    best = out;
  }
  return best;
}

std::vector<int> ball(const FiniteMetricSpace& X, int x, Dist R) {
  if (x < 0 || x >= X.size()) throw std::invalid_argument("unknown point index");
  if (R < 0) throw std::invalid_argument("ball radius must be nonnegative");
  std::vector<int> out;
  for (int y = 0; y < X.size(); ++y)
    if (X.distance(x, y) <= R) out.push_back(y);
  return out;
}

std::vector<std::pair<int, int>> diag_neighborhood(const FiniteMetricSpace& X, Dist R,
                                                   bool strict) {
  if (R < 0) throw std::invalid_argument("radius must be nonnegative");
  std::vector<std::pair<int, int>> out;
  for (int x = 0; x < X.size(); ++x)
    for (int y = 0; y < X.size(); ++y) {
      const Dist d = X.distance(x, y);
      if (strict ? d < R : d <= R) out.emplace_back(x, y);
    }
  return out;
}

std::vector<int> greedy_separation(const FiniteMetricSpace& X, Dist R) {
  if (R < 0) throw std::invalid_argument("separation threshold must be nonnegative");
  std::vector<int> color(static_cast<std::size_t>(X.size()), 0);
  for (int i = 0; i < X.size(); ++i) {
    std::vector<bool> used(static_cast<std::size_t>(i) + 2, false);
    for (int j = 0; j < i; ++j)
      if (X.distance(i, j) <= R) used[static_cast<std::size_t>(color[static_cast<std::size_t>(j)])] = true;
    int c = 1;
    while (used[static_cast<std::size_t>(c)]) ++c;
    color[static_cast<std::size_t>(i)] = c;
  }
  return color;
}

ControlData control_functions(const std::vector<int>& phi, const FiniteMetricSpace& X,
                              const FiniteMetricSpace& Y) {
  if (static_cast<int>(phi.size()) != X.size())
    throw std::invalid_argument("map is not total on the domain");
  for (int v : phi)
    if (v < 0 || v >= Y.size())
      throw std::invalid_argument("map image is not a point of the codomain");

  std::map<Dist, Dist> fwd, bwd;
  bool injective = true;
  for (int a = 0; a < X.size(); ++a)
    for (int b = 0; b < X.size(); ++b) {
      const Dist dx = X.distance(a, b);
      const Dist dy = Y.distance(phi[static_cast<std::size_t>(a)],
                                 phi[static_cast<std::size_t>(b)]);
      if (a != b && dy == 0) injective = false;
      auto [fit, fnew] = fwd.emplace(dx, dy);
      if (!fnew) fit->second = std::max(fit->second, dy);
      auto [bit, bnew] = bwd.emplace(dy, dx);
      if (!bnew) bit->second = std::max(bit->second, dx);
    }

  ControlData out;
  out.injective = injective;
  Dist run = 0;
  for (const auto& [in, v] : fwd) {
    run = std::max(run, v);
    out.forward.steps.emplace_back(in, run);
  }
  run = 0;
  for (const auto& [in, v] : bwd) {
    run = std::max(run, v);
    out.backward.steps.emplace_back(in, run);
  }
  return out;
}

FiniteMetricSpace fin_space(const FiniteMetricSpace& X, std::int64_t K) {
  const int n = X.size();
  if (K < 1) throw std::invalid_argument("K out of range: must be at least 1");
  if (n < 63) {
    const std::int64_t total = (std::int64_t{1} << n) - 1;
    if (K > total) throw std::invalid_argument("K out of range: space has too few subsets");
  }

  // Points sorted by id; combinations over this order enumerate each
  // cardinality class in lexicographic order of sorted id lists.
  std::vector<int> by_id(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) by_id[static_cast<std::size_t>(i)] = i;
  std::sort(by_id.begin(), by_id.end(),
            [&](int a, int b) { return X.point(a) < X.point(b); });

  std::vector<std::vector<int>> blocks;
  std::int64_t total_points = 0;
  for (int c = 1; c <= n && static_cast<std::int64_t>(blocks.size()) < K; ++c) {
    std::vector<int> comb(static_cast<std::size_t>(c));
    for (int i = 0; i < c; ++i) comb[static_cast<std::size_t>(i)] = i;
    while (true) {
      std::vector<int> block;
      for (int idx : comb) block.push_back(by_id[static_cast<std::size_t>(idx)]);
      total_points += c;
      if (total_points > 4096)
        throw std::invalid_argument("union space would exceed 4096 points");
      blocks.push_back(block);
      if (static_cast<std::int64_t>(blocks.size()) == K) break;
      int i = c - 1;
      while (i >= 0 && comb[static_cast<std::size_t>(i)] == n - c + i) --i;
      if (i < 0) break;
      ++comb[static_cast<std::size_t>(i)];
      for (int j = i + 1; j < c; ++j)
        comb[static_cast<std::size_t>(j)] = comb[static_cast<std::size_t>(j - 1)] + 1;
    }
  }

  std::vector<std::string> points;
  std::vector<std::pair<int, std::int64_t>> origin;  // (point in X, offset)
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const std::int64_t i = static_cast<std::int64_t>(b) + 1;
    const std::int64_t offset = i * i;
    for (int p : blocks[b]) {
      points.push_back(X.point(p) + "@" + std::to_string(offset));
      origin.emplace_back(p, offset);
    }
  }

  const int m = static_cast<int>(points.size());
  DistMatrix dist(m, m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      const auto& [pa, oa] = origin[static_cast<std::size_t>(a)];
      const auto& [pb, ob] = origin[static_cast<std::size_t>(b)];
      dist(a, b) = X.distance(pa, pb) + X.scale() * std::abs(oa - ob);
    }
  return FiniteMetricSpace(FiniteMetricSpace::MetricByConstruction{}, std::move(points),
                           std::move(dist), X.scale());
}

FiniteMetricSpace make_path_space(int n, const std::string& prefix) {
  if (n < 1) throw std::invalid_argument("path needs at least one point");
  std::vector<std::string> points;
  for (int i = 0; i < n; ++i) points.push_back(prefix + std::to_string(i));
  DistMatrix dist(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) dist(i, j) = std::abs(i - j);
  return FiniteMetricSpace(std::move(points), std::move(dist), 1);
}

FiniteMetricSpace make_cycle_space(int n, const std::string& prefix) {
  if (n < 1) throw std::invalid_argument("cycle needs at least one point");
  std::vector<std::string> points;
  for (int i = 0; i < n; ++i) points.push_back(prefix + std::to_string(i));
  DistMatrix dist(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const Dist a = std::abs(i - j);
      dist(i, j) = std::min<Dist>(a, n - a);
    }
  return FiniteMetricSpace(std::move(points), std::move(dist), 1);
}

}  // namespace coarse
