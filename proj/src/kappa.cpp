#include "coarse/kappa.hpp"

#include <algorithm>
#include <deque>
#include <numeric>

namespace coarse {

namespace {

constexpr int kNone = -1;

// One candidate translation: paired forward/backward point maps.
struct Block {
  std::vector<int> fwd, inv;
  std::vector<std::pair<int, int>> pairs;
};

// One candidate cotranslation, grown by merging forced-together entries.
struct Comp {
  std::vector<std::pair<int, int>> entries;
  std::vector<int> fwd, inv;
  bool live = false;
};

struct State {
  std::vector<int> block_of;  // pair id -> block index, kNone when unplaced
  std::vector<Block> blocks;
  std::vector<int> comp_of;  // sigma-entry id -> component index
  std::vector<Comp> comps;
};

// kind 0: place pair `a` into block `b`; kind 1: force entries a, b into one sigma.
struct Event {
  int kind, a, b;
};

class FreeChartSearch {
public:
  FreeChartSearch(const FiniteMetricSpace& X, Dist R, const KappaCaps& caps)
      : X_(X), R_(R), caps_(caps), n_(X.size()) {
    for (int x = 0; x < n_; ++x)
      for (int y = 0; y < n_; ++y)
        if (X_.distance(x, y) < R_) required_.push_back(id(x, y));
  }

  std::optional<AtlasChart> run() {
    State st;
    st.block_of.assign(static_cast<std::size_t>(n_ * n_), kNone);
    st.comp_of.assign(static_cast<std::size_t>(n_ * n_), kNone);
    return search(st, 0);
  }

  std::int64_t nodes() const { return nodes_; }

private:
  int id(int x, int y) const { return x * n_ + y; }

  void materialize(State& st, int node, std::deque<Event>& q) {
    if (st.comp_of[static_cast<std::size_t>(node)] != kNone) return;
    const int a = node / n_, b = node % n_;
    Comp c;
    c.live = true;
    c.fwd.assign(static_cast<std::size_t>(n_), kNone);
    c.inv.assign(static_cast<std::size_t>(n_), kNone);
    c.fwd[static_cast<std::size_t>(a)] = b;
    c.inv[static_cast<std::size_t>(b)] = a;
    c.entries.emplace_back(a, b);
    st.comps.push_back(std::move(c));
    st.comp_of[static_cast<std::size_t>(node)] = static_cast<int>(st.comps.size()) - 1;
    // A sigma sending a to b moves the diagonal pair (a,a) to (b,b).
    const int diag = st.block_of[static_cast<std::size_t>(id(a, a))];
    if (diag != kNone) q.push_back({0, id(b, b), diag});
  }

  bool do_place(State& st, int p, int bidx, std::deque<Event>& q) {
    const int cur = st.block_of[static_cast<std::size_t>(p)];
    if (cur == bidx) return true;
    if (cur != kNone) return false;  // blocks are disjoint
    const int x = p / n_, y = p % n_;
    Block& B = st.blocks[static_cast<std::size_t>(bidx)];
    if (B.fwd[static_cast<std::size_t>(x)] != kNone ||
        B.inv[static_cast<std::size_t>(y)] != kNone)
      return false;  // would break the partial bijection
    for (const auto& [qx, qy] : B.pairs) {
      q.push_back({1, id(x, qx), id(y, qy)});
      q.push_back({1, id(qx, x), id(qy, y)});
    }
    q.push_back({1, id(x, x), id(y, y)});
    B.fwd[static_cast<std::size_t>(x)] = y;
    B.inv[static_cast<std::size_t>(y)] = x;
    B.pairs.emplace_back(x, y);
    st.block_of[static_cast<std::size_t>(p)] = bidx;
    // Close under the sigmas built so far.
    for (const auto& c : st.comps) {
      if (!c.live) continue;
      const int a2 = c.fwd[static_cast<std::size_t>(x)];
      const int b2 = c.fwd[static_cast<std::size_t>(y)];
      if (a2 != kNone && b2 != kNone) q.push_back({0, id(a2, b2), bidx});
    }
    return true;
  }

  bool do_union(State& st, int u, int v, std::deque<Event>& q) {
    materialize(st, u, q);
    materialize(st, v, q);
    int cu = st.comp_of[static_cast<std::size_t>(u)];
    int cv = st.comp_of[static_cast<std::size_t>(v)];
    if (cu == cv) return true;
    if (st.comps[static_cast<std::size_t>(cu)].entries.size() <
        st.comps[static_cast<std::size_t>(cv)].entries.size())
      std::swap(cu, cv);
    Comp& big = st.comps[static_cast<std::size_t>(cu)];
    Comp& small = st.comps[static_cast<std::size_t>(cv)];
    for (const auto& [a, b] : small.entries) {
      if (big.fwd[static_cast<std::size_t>(a)] != kNone &&
          big.fwd[static_cast<std::size_t>(a)] != b)
        return false;  // merged sigma would not be functional
      if (big.inv[static_cast<std::size_t>(b)] != kNone &&
          big.inv[static_cast<std::size_t>(b)] != a)
        return false;  // merged sigma would not be injective
    }
    // Cotranslation closure between the two halves.
    for (const auto& [a, a2] : small.entries)
      for (const auto& [b, b2] : big.entries) {
        const int p1 = st.block_of[static_cast<std::size_t>(id(a, b))];
        if (p1 != kNone) q.push_back({0, id(a2, b2), p1});
        const int p2 = st.block_of[static_cast<std::size_t>(id(b, a))];
        if (p2 != kNone) q.push_back({0, id(b2, a2), p2});
      }
    for (const auto& [a, b] : small.entries) {
      big.fwd[static_cast<std::size_t>(a)] = b;
      big.inv[static_cast<std::size_t>(b)] = a;
      st.comp_of[static_cast<std::size_t>(id(a, b))] = cu;
      big.entries.emplace_back(a, b);
    }
    small.live = false;
    small.entries.clear();
    small.fwd.clear();
    small.inv.clear();
    return true;
  }

  bool process(State& st, std::deque<Event>& q) {
    while (!q.empty()) {
      const Event e = q.front();
      q.pop_front();
      const bool ok = e.kind == 0 ? do_place(st, e.a, e.b, q) : do_union(st, e.a, e.b, q);
      if (!ok) return false;
    }
    return true;
  }

  std::optional<AtlasChart> search(State& st, std::size_t idx) {
    while (idx < required_.size() &&
           st.block_of[static_cast<std::size_t>(required_[idx])] != kNone)
      ++idx;
    if (idx == required_.size()) return extract(st);
    const int p = required_[idx];
    const int existing = static_cast<int>(st.blocks.size());
    for (int b = 0; b <= existing; ++b) {
      if (++nodes_ > caps_.node_limit)
        throw CapsExceeded("kappa exact search exceeded the branch budget");
      State copy = st;
      if (b == existing) {
        Block nb;
        nb.fwd.assign(static_cast<std::size_t>(n_), kNone);
        nb.inv.assign(static_cast<std::size_t>(n_), kNone);
        copy.blocks.push_back(std::move(nb));
      }
      std::deque<Event> q{{0, p, b}};
      if (!process(copy, q)) continue;
      if (auto res = search(copy, idx + 1)) return res;
    }
    return std::nullopt;
  }

  AtlasChart extract(const State& st) const {
    AtlasChart chart;
    chart.radius = R_;
    for (const auto& B : st.blocks)
      if (!B.pairs.empty()) chart.translations.emplace_back(B.pairs);
    for (const auto& c : st.comps)
      if (c.live) chart.cotranslations.emplace_back(c.entries);
    return chart;
  }

  const FiniteMetricSpace& X_;
  Dist R_;
  KappaCaps caps_;
  int n_;
  std::vector<int> required_;
  std::int64_t nodes_ = 0;
};

}  // namespace

KappaResult kappa_search_exact(const FiniteMetricSpace& X, Dist R, const KappaCaps& caps) {
  if (R <= 0) throw std::invalid_argument("radius must be positive");
  if (X.size() > caps.exact_size)
    throw CapsExceeded("space exceeds caps.exact_size for exact mode");

  FreeChartSearch searcher(X, R, caps);
  auto chart = searcher.run();
  KappaResult out;
  out.nodes = searcher.nodes();
  if (chart) {
    Atlas a;
    a.charts.push_back(*chart);
    const auto rep = verify_atlas(X, a);
    if (!rep.pass() || !rep.charts.front().free)
      throw std::logic_error("free-chart witness failed verification");
    out.exact = true;
    out.lower = out.upper = 1;
    out.witness = std::move(*chart);
    return out;
  }

  // No multiplicity-one chart exists; fall back to verified bounds.
  out.exact = false;
  out.lower = 2;
  Atlas coloring = build_atlas_coloring(X, {R});
  const auto rep = verify_atlas(X, coloring);
  if (!rep.pass()) throw std::logic_error("coloring atlas failed verification");
  out.upper = std::max(rep.charts.front().multiplicity, out.lower);
  out.witness = std::move(coloring.charts.front());
  return out;
}

KappaResult kappa_search_bound(const FiniteMetricSpace& X, Dist R, int group_order) {
  if (R <= 0) throw std::invalid_argument("radius must be positive");
  std::int64_t m = group_order;
  if (m <= 0) m = static_cast<std::int64_t>(X.size()) * std::max<Dist>(X.diameter(), 1) + 1;
  m = std::max<std::int64_t>(m, X.size() + 1);
  if (m > 4096)
    throw CapsExceeded("bound-mode group order " + std::to_string(m) +
                       " exceeds the supported table size");

  const auto G = make_cyclic_group(static_cast<int>(m));
  std::vector<int> phi(static_cast<std::size_t>(X.size()));
  std::iota(phi.begin(), phi.end(), 0);
  Atlas atlas = pullback_atlas(X, phi, G, {R});
  const auto rep = verify_atlas(X, atlas);
  if (!rep.pass() || !rep.charts.front().free)
    throw std::logic_error("pullback witness failed verification");

  KappaResult out;
  out.exact = false;
  out.lower = 1;
  out.upper = 1;
  out.witness = std::move(atlas.charts.front());
  return out;
}

}  // namespace coarse
