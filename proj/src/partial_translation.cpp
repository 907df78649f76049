#include "coarse/partial_translation.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace coarse {

PartialBijection::PartialBijection(std::vector<std::pair<int, int>> pairs)
    : pairs_(std::move(pairs)) {
  std::sort(pairs_.begin(), pairs_.end());
  pairs_.erase(std::unique(pairs_.begin(), pairs_.end()), pairs_.end());
  by_second_ = pairs_;
  std::sort(by_second_.begin(), by_second_.end(),
            [](const auto& a, const auto& b) {
              return a.second < b.second || (a.second == b.second && a.first < b.first);
            });
  for (std::size_t i = 1; i < pairs_.size(); ++i)
    if (pairs_[i].first == pairs_[i - 1].first)
      throw std::invalid_argument("projections not injective: first coordinate repeats");
  for (std::size_t i = 1; i < by_second_.size(); ++i)
    if (by_second_[i].second == by_second_[i - 1].second)
      throw std::invalid_argument("projections not injective: second coordinate repeats");
}

PartialBijection PartialBijection::diagonal(int n) {
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) pairs.emplace_back(i, i);
  return PartialBijection(std::move(pairs));
}

std::optional<int> PartialBijection::apply(int x) const {
  auto it = std::lower_bound(pairs_.begin(), pairs_.end(), x,
                             [](const auto& p, int v) { return p.first < v; });
  if (it != pairs_.end() && it->first == x) return it->second;
  return std::nullopt;
}

std::optional<int> PartialBijection::preimage(int y) const {
  auto it = std::lower_bound(by_second_.begin(), by_second_.end(), y,
                             [](const auto& p, int v) { return p.second < v; });
  if (it != by_second_.end() && it->second == y) return it->first;
  return std::nullopt;
}

bool PartialBijection::contains(int x, int y) const {
  return std::binary_search(pairs_.begin(), pairs_.end(), std::pair<int, int>{x, y});
}

PartialBijection pb_compose(const PartialBijection& s, const PartialBijection& t) {
  std::vector<std::pair<int, int>> out;
  for (const auto& [x, y] : s.pairs())
    if (auto z = t.apply(y)) out.emplace_back(x, *z);
  return PartialBijection(std::move(out));
}

PartialBijection pb_inverse(const PartialBijection& t) {
  std::vector<std::pair<int, int>> out;
  out.reserve(t.pairs().size());
  for (const auto& [x, y] : t.pairs()) out.emplace_back(y, x);
  return PartialBijection(std::move(out));
}

Dist check_translation(const FiniteMetricSpace& X, const PartialBijection& t) {
  Dist bound = 0;
  for (const auto& [x, y] : t.pairs()) {
    if (x < 0 || x >= X.size() || y < 0 || y >= X.size())
      throw std::invalid_argument("pair refers to a point outside the space");
    bound = std::max(bound, X.distance(x, y));
  }
  return bound;
}

bool check_cotranslation(const PartialBijection& sigma,
                         const std::vector<PartialBijection>& T) {
  for (const auto& t : T)
    for (const auto& [x, y] : t.pairs()) {
      const auto sx = sigma.apply(x);
      if (!sx) continue;
      const auto sy = sigma.apply(y);
      if (!sy) continue;
      if (!t.contains(*sx, *sy)) return false;
    }
  return true;
}

bool AtlasReport::pass() const {
  if (charts.empty()) return false;
  for (const auto& c : charts)
    if (!c.pass()) return false;
  return true;
}

namespace {

std::string pair_name(const FiniteMetricSpace& X, int x, int y) {
  return "(" + X.point(x) + "," + X.point(y) + ")";
}

ChartReport verify_chart(const FiniteMetricSpace& X, const AtlasChart& raw) {
  ChartReport rep;
  rep.radius = raw.radius;

  // The cotranslation collection is a set; duplicates in a document count once.
  AtlasChart chart;
  chart.radius = raw.radius;
  chart.translations = raw.translations;
  {
    std::set<PartialBijection> dedup(raw.cotranslations.begin(), raw.cotranslations.end());
    chart.cotranslations.assign(dedup.begin(), dedup.end());
  }

  // Disjointness is a structural requirement, not a verdict.
  std::set<std::pair<int, int>> seen;
  for (const auto& t : chart.translations)
    for (const auto& p : t.pairs()) {
      if (p.first < 0 || p.first >= X.size() || p.second < 0 || p.second >= X.size())
        throw std::invalid_argument("translation pair outside the space");
      if (!seen.insert(p).second)
        throw std::invalid_argument("malformed chart: overlapping translations at " +
                                    pair_name(X, p.first, p.second));
    }

  const int n = X.size();
  rep.axiom1 = true;
  for (int x = 0; x < n && rep.axiom1; ++x)
    for (int y = 0; y < n; ++y)
      if (X.distance(x, y) < chart.radius && !seen.count({x, y})) {
        rep.axiom1 = false;
        rep.witness = "axiom1: uncovered pair " + pair_name(X, x, y);
        break;
      }

  // Dense application tables make the quadratic scans below cheap.
  const int ns = static_cast<int>(chart.cotranslations.size());
  std::vector<int> apply(static_cast<std::size_t>(ns) * static_cast<std::size_t>(n), -1);
  for (int s = 0; s < ns; ++s)
    for (const auto& [x, y] : chart.cotranslations[static_cast<std::size_t>(s)].pairs()) {
      if (x < 0 || x >= n || y < 0 || y >= n)
        throw std::invalid_argument("cotranslation pair outside the space");
      apply[static_cast<std::size_t>(s) * n + x] = y;
    }
  auto sigma_at = [&](int s, int x) { return apply[static_cast<std::size_t>(s) * n + x]; };

  rep.cotranslations_valid = true;
  for (int s = 0; s < ns && rep.cotranslations_valid; ++s)
    for (const auto& t : chart.translations) {
      for (const auto& [x, y] : t.pairs()) {
        const int sx = sigma_at(s, x);
        if (sx < 0) continue;
        const int sy = sigma_at(s, y);
        if (sy < 0) continue;
        if (!t.contains(sx, sy)) {
          rep.cotranslations_valid = false;
          if (rep.witness.empty())
            rep.witness = "cotranslation moves " + pair_name(X, x, y) +
                          " out of its translation";
          break;
        }
      }
      if (!rep.cotranslations_valid) break;
    }

  // Exact multiplicity: how many cotranslations move x to x', maximized.
  std::vector<std::vector<int>> moves(static_cast<std::size_t>(n) *
                                      static_cast<std::size_t>(n));
  for (int s = 0; s < ns; ++s)
    for (const auto& [x, y] : chart.cotranslations[static_cast<std::size_t>(s)].pairs())
      moves[static_cast<std::size_t>(x) * n + y].push_back(s);
  rep.multiplicity = 0;
  for (const auto& list : moves)
    rep.multiplicity = std::max(rep.multiplicity, static_cast<int>(list.size()));
  rep.axiom2 = true;
  rep.free = rep.multiplicity == 1;

  rep.axiom3 = true;
  for (const auto& t : chart.translations) {
    for (const auto& [x, y] : t.pairs()) {
      for (const auto& [x2, y2] : t.pairs()) {
        const auto& a = moves[static_cast<std::size_t>(x) * n + x2];
        const auto& b = moves[static_cast<std::size_t>(y) * n + y2];
        // Both lists are sorted; intersect with two pointers.
        bool found = false;
        for (std::size_t i = 0, j = 0; i < a.size() && j < b.size();) {
          if (a[i] == b[j]) { found = true; break; }
          if (a[i] < b[j]) ++i; else ++j;
        }
        if (!found) {
          rep.axiom3 = false;
          if (rep.witness.empty())
            rep.witness = "axiom3: no cotranslation takes " + pair_name(X, x, y) +
                          " to " + pair_name(X, x2, y2);
          break;
        }
      }
      if (!rep.axiom3) break;
    }
    if (!rep.axiom3) break;
  }

  rep.globally_controlled = true;
  std::vector<int> fwd(static_cast<std::size_t>(n)), bwd(static_cast<std::size_t>(n));
  for (int x = 0; x < n && rep.globally_controlled; ++x)
    for (int y = 0; y < n; ++y) {
      // Orbit of (x,y): must have injective projections.
      std::fill(fwd.begin(), fwd.end(), -1);
      std::fill(bwd.begin(), bwd.end(), -1);
      bool ok = true;
      for (int s = 0; s < ns; ++s) {
        const int sx = sigma_at(s, x);
        if (sx < 0) continue;
        const int sy = sigma_at(s, y);
        if (sy < 0) continue;
        if (fwd[static_cast<std::size_t>(sx)] >= 0 &&
            fwd[static_cast<std::size_t>(sx)] != sy) { ok = false; break; }
        if (bwd[static_cast<std::size_t>(sy)] >= 0 &&
            bwd[static_cast<std::size_t>(sy)] != sx) { ok = false; break; }
        fwd[static_cast<std::size_t>(sx)] = sy;
        bwd[static_cast<std::size_t>(sy)] = sx;
      }
      if (!ok) {
        rep.globally_controlled = false;
        rep.witness = rep.witness.empty()
                          ? "orbit of " + pair_name(X, x, y) + " is not a partial bijection"
                          : rep.witness;
        break;
      }
    }

  return rep;
}

}  // namespace

AtlasReport verify_atlas(const FiniteMetricSpace& X, const Atlas& A) {
  AtlasReport rep;
  for (const auto& chart : A.charts) rep.charts.push_back(verify_chart(X, chart));
  return rep;
}

Atlas build_atlas_coloring(const FiniteMetricSpace& X, const std::vector<Dist>& radii) {
  Atlas atlas;
  for (const Dist R : radii) {
    if (R <= 0) throw std::invalid_argument("radius must be positive");
    // Classes separated at 2R+1 units: same color forces d > 2R.
    const auto color = greedy_separation(X, 2 * R);
    const int n_colors = *std::max_element(color.begin(), color.end());
    std::vector<std::vector<int>> classes(static_cast<std::size_t>(n_colors));
    for (int p = 0; p < X.size(); ++p)
      classes[static_cast<std::size_t>(color[static_cast<std::size_t>(p)] - 1)].push_back(p);

    AtlasChart chart;
    chart.radius = R;
    std::set<PartialBijection> sigmas;
    for (int i = 0; i < n_colors; ++i) {
      for (int j = 0; j < n_colors; ++j) {
        std::vector<std::pair<int, int>> pairs;
        for (int x : classes[static_cast<std::size_t>(i)])
          for (int y : classes[static_cast<std::size_t>(j)])
            if (X.distance(x, y) <= R) pairs.emplace_back(x, y);
        if (pairs.empty()) continue;
        std::sort(pairs.begin(), pairs.end());
        chart.translations.emplace_back(pairs);
        if (i > j) continue;  // one cycle per unordered class pair

        // Transitive cycle through the pairs, ordered by first coordinate.
        const std::size_t L = pairs.size();
        for (std::size_t m = 0; m < L; ++m) {
          std::vector<std::pair<int, int>> moved;
          for (std::size_t k = 0; k < L; ++k) {
            const auto& from = pairs[k];
            const auto& to = pairs[(k + m) % L];
            moved.emplace_back(from.first, to.first);
            moved.emplace_back(from.second, to.second);
          }
          std::sort(moved.begin(), moved.end());
          moved.erase(std::unique(moved.begin(), moved.end()), moved.end());
          sigmas.insert(PartialBijection(std::move(moved)));
        }
      }
    }
    chart.cotranslations.assign(sigmas.begin(), sigmas.end());
    atlas.charts.push_back(std::move(chart));
  }
  return atlas;
}

Atlas canonical_atlas(const FiniteGroup& G, const std::vector<Dist>& radii) {
  const auto len = word_lengths(G);
  const int n = G.order();
  Atlas atlas;
  for (const Dist R : radii) {
    if (R <= 0) throw std::invalid_argument("radius must be positive");
    AtlasChart chart;
    chart.radius = R;
    for (int g = 0; g < n; ++g) {
      if (len[static_cast<std::size_t>(g)] >= R) continue;
      std::vector<std::pair<int, int>> pairs;
      for (int h = 0; h < n; ++h) pairs.emplace_back(h, G.multiply(h, g));
      chart.translations.emplace_back(std::move(pairs));
    }
    for (int h = 0; h < n; ++h) {
      std::vector<std::pair<int, int>> pairs;
      for (int x = 0; x < n; ++x) pairs.emplace_back(x, G.multiply(h, x));
      chart.cotranslations.emplace_back(std::move(pairs));
    }
    atlas.charts.push_back(std::move(chart));
  }
  return atlas;
}

Atlas pullback_atlas(const FiniteMetricSpace& X, const std::vector<int>& phi,
                     const FiniteGroup& G, const std::vector<Dist>& radii) {
  if (static_cast<int>(phi.size()) != X.size())
    throw std::invalid_argument("embedding is not total on the space");
  std::set<int> image;
  for (int v : phi) {
    if (v < 0 || v >= G.order())
      throw std::invalid_argument("embedding value outside the group");
    if (!image.insert(v).second)
      throw std::invalid_argument("embedding is not injective");
  }

  const auto Y = word_metric(G);
  const auto control = control_functions(phi, X, Y);
  const auto len = word_lengths(G);

  Atlas atlas;
  for (const Dist R : radii) {
    if (R <= 0) throw std::invalid_argument("radius must be positive");
    const Dist S = control.forward(R);
    AtlasChart chart;
    chart.radius = R;
    for (int g = 0; g < G.order(); ++g) {
      if (len[static_cast<std::size_t>(g)] > S) continue;
      // Pairs (x,y) with phi(y) = phi(x) g.
      std::vector<std::pair<int, int>> pairs;
      for (int x = 0; x < X.size(); ++x) {
        const int target = G.multiply(phi[static_cast<std::size_t>(x)], g);
        for (int y = 0; y < X.size(); ++y)
          if (phi[static_cast<std::size_t>(y)] == target) pairs.emplace_back(x, y);
      }
      if (!pairs.empty()) chart.translations.emplace_back(std::move(pairs));
    }
    for (int h = 0; h < G.order(); ++h) {
      // Pairs (x,x') with phi(x') = h phi(x).
      std::vector<std::pair<int, int>> pairs;
      for (int x = 0; x < X.size(); ++x) {
        const int target = G.multiply(h, phi[static_cast<std::size_t>(x)]);
        for (int y = 0; y < X.size(); ++y)
          if (phi[static_cast<std::size_t>(y)] == target) pairs.emplace_back(x, y);
      }
      if (!pairs.empty()) chart.cotranslations.emplace_back(std::move(pairs));
    }
    atlas.charts.push_back(std::move(chart));
  }
  return atlas;
}

}  // namespace coarse
