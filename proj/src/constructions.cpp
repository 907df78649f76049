#include "coarse/constructions.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <tuple>

namespace coarse {

TelescopeGraph telescope_graph(const FiniteMetricSpace& X, Dist i_max) {
  if (i_max < 0) throw std::invalid_argument("truncation level must be nonnegative");
  const int n = X.size();
  if ((i_max + 1) * static_cast<std::int64_t>(n) * n > 20'000'000)
    throw std::invalid_argument("telescope truncation too large");

  TelescopeGraph G;
  G.i_max = i_max;
  std::map<std::tuple<Dist, int, int>, int> vid;
  for (Dist i = 0; i <= i_max; ++i)
    for (int x = 0; x < n; ++x) {
      // b_{i,x}: (i,x,x) first, then ascending y.
      vid[{i, x, x}] = static_cast<int>(G.vertices.size());
      G.vertices.push_back({i, x, x});
      for (int y = 0; y < n; ++y)
        if (y != x && X.distance(x, y) <= i) {
          vid[{i, x, y}] = static_cast<int>(G.vertices.size());
          G.vertices.push_back({i, x, y});
        }
    }

  G.adj.assign(G.vertices.size(), {});
  auto add_edge = [&](int a, int b) {
    G.adj[static_cast<std::size_t>(a)].push_back(b);
    G.adj[static_cast<std::size_t>(b)].push_back(a);
  };

  for (Dist i = 0; i <= i_max; ++i)
    for (int x = 0; x < n; ++x) {
      int prev = vid[{i, x, x}];
      for (int y = 0; y < n; ++y)
        if (y != x && X.distance(x, y) <= i) {
          const int cur = vid[{i, x, y}];
          add_edge(prev, cur);
          prev = cur;
        }
    }
  for (Dist i = 0; i <= i_max; ++i)
    for (int x = 0; x < n; ++x)
      for (int y = x + 1; y < n; ++y)
        if (X.distance(x, y) <= i) add_edge(vid[{i, x, y}], vid[{i, y, x}]);
  for (Dist i = 0; i < i_max; ++i)
    for (int x = 0; x < n; ++x) add_edge(vid[{i, x, x}], vid[{i + 1, x, x}]);

  G.embedding.assign(static_cast<std::size_t>(n), -1);
  for (int x = 0; x < n; ++x) G.embedding[static_cast<std::size_t>(x)] = vid[{0, x, x}];
  return G;
}

std::vector<int> telescope_distances(const TelescopeGraph& G, int from) {
  std::vector<int> d(G.vertices.size(), -1);
  std::deque<int> q{from};
  d[static_cast<std::size_t>(from)] = 0;
  while (!q.empty()) {
    const int u = q.front();
    q.pop_front();
    for (int v : G.adj[static_cast<std::size_t>(u)])
      if (d[static_cast<std::size_t>(v)] < 0) {
        d[static_cast<std::size_t>(v)] = d[static_cast<std::size_t>(u)] + 1;
        q.push_back(v);
      }
  }
  return d;
}

TelescopeReport telescope_check(const FiniteMetricSpace& X, const TelescopeGraph& G,
                                Dist R, Dist level) {
  if (level <= R)
    throw std::invalid_argument("chosen level must exceed R");
  if (level > G.i_max)
    throw std::invalid_argument("truncation too shallow for the chosen level");

  TelescopeReport rep;
  rep.level_used = level;
  for (const auto& nb : G.adj)
    rep.max_degree = std::max(rep.max_degree, static_cast<int>(nb.size()));
  rep.degree_ok = rep.max_degree <= 3;
  if (!rep.degree_ok) rep.witness = "vertex of degree > 3";

  std::int64_t N = 0;
  for (int x = 0; x < X.size(); ++x)
    N = std::max<std::int64_t>(N, static_cast<std::int64_t>(ball(X, x, level).size()));
  rep.ball_bound = N;
  rep.forward_bound = 2 * level + 2 * N - 1;

  const int n = X.size();
  std::vector<std::vector<int>> dists;
  dists.reserve(static_cast<std::size_t>(n));
  for (int x = 0; x < n; ++x)
    dists.push_back(telescope_distances(G, G.embedding[static_cast<std::size_t>(x)]));

  rep.forward_ok = true;
  rep.backward_ok = true;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      const int dg =
          dists[static_cast<std::size_t>(x)][static_cast<std::size_t>(
              G.embedding[static_cast<std::size_t>(y)])];
      if (X.distance(x, y) <= R && (dg < 0 || dg > rep.forward_bound)) {
        rep.forward_ok = false;
        if (rep.witness.empty())
          rep.witness = "forward bound fails at (" + X.point(x) + "," + X.point(y) + ")";
      }
      if (dg >= 0 && dg <= R && 2 * X.distance(x, y) > R * R) {
        rep.backward_ok = false;
        if (rep.witness.empty())
          rep.witness = "backward bound fails at (" + X.point(x) + "," + X.point(y) + ")";
      }
    }
  return rep;
}

namespace {

int edge_slot(int i, int j, int n) {
  if (i > j) std::swap(i, j);
  // Slot of pair (i,j), i<j, in row-major upper-triangle order.
  return i * n - i * (i + 1) / 2 + (j - i - 1);
}

bool mask_connected(std::uint32_t mask, int n) {
  std::vector<int> stack{0};
  std::uint32_t seen = 1;
  int count = 1;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (int v = 0; v < n; ++v) {
      if (v == u || (seen >> v) & 1u) continue;
      if ((mask >> edge_slot(u, v, n)) & 1u) {
        seen |= 1u << v;
        ++count;
        stack.push_back(v);
      }
    }
  }
  return count == n;
}

std::uint32_t permute_mask(std::uint32_t mask, int n, const std::vector<int>& perm) {
  std::uint32_t out = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if ((mask >> edge_slot(i, j, n)) & 1u)
        out |= 1u << edge_slot(perm[static_cast<std::size_t>(i)],
                               perm[static_cast<std::size_t>(j)], n);
  return out;
}

// Minimum over degree-respecting relabelings; an isomorphism invariant that
// is also total on each degree sequence class.
std::uint32_t canonical_mask(std::uint32_t mask, int n) {
  std::vector<int> deg(static_cast<std::size_t>(n), 0);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if ((mask >> edge_slot(i, j, n)) & 1u) {
        ++deg[static_cast<std::size_t>(i)];
        ++deg[static_cast<std::size_t>(j)];
      }
  // perm[v] = new label of v; iterate all assignments where labels are
  // ordered by (degree desc, then anything).
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return deg[static_cast<std::size_t>(a)] > deg[static_cast<std::size_t>(b)] ||
           (deg[static_cast<std::size_t>(a)] == deg[static_cast<std::size_t>(b)] && a < b);
  });
  std::uint32_t best = ~0u;
  // order lists vertices by descending degree; permute within the whole order
  // but skip assignments that break the degree sort.
  do {
    bool sorted = true;
    for (std::size_t i = 1; i < order.size() && sorted; ++i)
      sorted = deg[static_cast<std::size_t>(order[i - 1])] >=
               deg[static_cast<std::size_t>(order[i])];
    if (!sorted) continue;
    std::vector<int> perm(static_cast<std::size_t>(n));
    for (int pos = 0; pos < n; ++pos)
      perm[static_cast<std::size_t>(order[static_cast<std::size_t>(pos)])] = pos;
    best = std::min(best, permute_mask(mask, n, perm));
  } while (std::next_permutation(order.begin(), order.end()));
  return best;
}

}  // namespace

GammaU gamma_u(int n_max) {
  if (n_max < 1) throw std::invalid_argument("need at least one vertex");
  if (n_max > 7) throw std::invalid_argument("enumeration capped at 7 vertices");

  // (size, canonical mask) per isomorphism class.
  std::vector<std::pair<int, std::uint32_t>> reps;
  for (int n = 1; n <= n_max; ++n) {
    const int slots = n * (n - 1) / 2;
    std::set<std::uint32_t> seen;
    for (std::uint32_t mask = 0; mask < (1u << slots); ++mask) {
      std::vector<int> deg(static_cast<std::size_t>(n), 0);
      bool ok = true;
      for (int i = 0; i < n && ok; ++i)
        for (int j = i + 1; j < n && ok; ++j)
          if ((mask >> edge_slot(i, j, n)) & 1u) {
            if (++deg[static_cast<std::size_t>(i)] > 3 ||
                ++deg[static_cast<std::size_t>(j)] > 3)
              ok = false;
          }
      if (!ok || !mask_connected(mask, n)) continue;
      const std::uint32_t canon = canonical_mask(mask, n);
      if (seen.insert(canon).second) reps.emplace_back(n, canon);
    }
  }
  std::sort(reps.begin(), reps.end());

  // Path metrics per component.
  std::vector<DistMatrix> metrics;
  for (const auto& [n, mask] : reps) {
    DistMatrix d = DistMatrix::Constant(n, n, -1);
    for (int s = 0; s < n; ++s) {
      d(s, s) = 0;
      std::deque<int> q{s};
      while (!q.empty()) {
        const int u = q.front();
        q.pop_front();
        for (int v = 0; v < n; ++v)
          if (v != u && ((mask >> edge_slot(u, v, n)) & 1u) && d(s, v) < 0) {
            d(s, v) = d(s, u) + 1;
            q.push_back(v);
          }
      }
    }
    metrics.push_back(std::move(d));
  }

  // Anchor line: component k (1-based) at offset O_k with O_{k+1}-O_k = k+1,
  // so the gap between component k and everything else is at least k.
  const int m = static_cast<int>(reps.size());
  std::vector<std::int64_t> offset(static_cast<std::size_t>(m), 0);
  for (int k = 1; k < m; ++k)
    offset[static_cast<std::size_t>(k)] = offset[static_cast<std::size_t>(k - 1)] + k + 1;

  std::vector<int> component_of;
  std::vector<int> component_sizes;
  std::vector<std::string> points;
  std::vector<std::pair<int, int>> origin;  // (component, vertex)
  for (int k = 0; k < m; ++k) {
    component_sizes.push_back(reps[static_cast<std::size_t>(k)].first);
    for (int v = 0; v < reps[static_cast<std::size_t>(k)].first; ++v) {
      points.push_back("c" + std::to_string(k + 1) + "v" + std::to_string(v));
      origin.emplace_back(k, v);
      component_of.push_back(k);
    }
  }
  const int total = static_cast<int>(points.size());
  DistMatrix dist(total, total);
  for (int a = 0; a < total; ++a)
    for (int b = 0; b < total; ++b) {
      const auto& [ka, va] = origin[static_cast<std::size_t>(a)];
      const auto& [kb, vb] = origin[static_cast<std::size_t>(b)];
      if (ka == kb) {
        dist(a, b) = metrics[static_cast<std::size_t>(ka)](va, vb);
      } else {
        dist(a, b) = metrics[static_cast<std::size_t>(ka)](va, 0) +
                     std::abs(offset[static_cast<std::size_t>(ka)] -
                              offset[static_cast<std::size_t>(kb)]) +
                     metrics[static_cast<std::size_t>(kb)](0, vb);
      }
    }
  return GammaU{FiniteMetricSpace(FiniteMetricSpace::MetricByConstruction{},
                                  std::move(points), std::move(dist), 1),
                std::move(component_of), std::move(component_sizes)};
}

namespace {

struct FiberData {
  std::vector<int> pi;          // 1-based fiber rank per x
  std::vector<int> fiber_size;  // N(y) per y
};

FiberData fiber_data(const std::vector<int>& f, int codomain_size) {
  FiberData out;
  out.pi.assign(f.size(), 0);
  out.fiber_size.assign(static_cast<std::size_t>(codomain_size), 0);
  for (std::size_t x = 0; x < f.size(); ++x) {
    if (f[x] < 0 || f[x] >= codomain_size)
      throw std::invalid_argument("map image out of range");
    out.pi[x] = ++out.fiber_size[static_cast<std::size_t>(f[x])];
  }
  for (int y = 0; y < codomain_size; ++y)
    if (out.fiber_size[static_cast<std::size_t>(y)] == 0)
      throw std::invalid_argument("map is not surjective");
  return out;
}

}  // namespace

InterleaveResult morita_interleave(const std::vector<int>& f, int codomain_size,
                                   std::int64_t J) {
  if (J < 0) throw std::invalid_argument("window must be nonnegative");
  const auto fd = fiber_data(f, codomain_size);

  InterleaveResult out;
  out.pi = fd.pi;
  out.fiber_size = fd.fiber_size;
  for (std::size_t x = 0; x < f.size(); ++x)
    for (std::int64_t j = -J; j <= J; ++j) {
      const int y = f[x];
      const std::int64_t k =
          fd.pi[x] + j * fd.fiber_size[static_cast<std::size_t>(y)];
      out.entries.push_back({static_cast<int>(x), j, y, k});
    }

  std::set<std::pair<int, std::int64_t>> image;
  out.injective = true;
  for (const auto& e : out.entries)
    if (!image.insert({e.y, e.k}).second) {
      out.injective = false;
      if (out.witness.empty())
        out.witness = "slot (" + std::to_string(e.y) + "," + std::to_string(e.k) +
                      ") is hit twice";
    }

  // Residue prediction: (y,k) is hit exactly when k = pi(x) + j N(y) for the
  // fiber member x with matching residue and j within the window.
  out.residue_image_exact = true;
  std::set<std::pair<int, std::int64_t>> predicted;
  for (std::size_t x = 0; x < f.size(); ++x) {
    const int y = f[x];
    const int N = fd.fiber_size[static_cast<std::size_t>(y)];
    for (std::int64_t j = -J; j <= J; ++j)
      predicted.insert({y, fd.pi[x] + j * N});
  }
  if (predicted != image && out.witness.empty())
    out.witness = "image differs from the residue-class prediction";
  if (predicted != image) out.residue_image_exact = false;
  for (const auto& [y, k] : image) {
    const int N = fd.fiber_size[static_cast<std::size_t>(y)];
    const std::int64_t r = ((k - 1) % N + N) % N + 1;  // 1-based residue
    // The matching x must exist and j must land in the window.
    bool found = false;
    for (std::size_t x = 0; x < f.size(); ++x)
      if (f[x] == y && fd.pi[x] == r) {
        const std::int64_t j = (k - r) / N;
        found = j >= -J && j <= J;
        break;
      }
    if (!found) {
      out.residue_image_exact = false;
      if (out.witness.empty())
        out.witness = "slot (" + std::to_string(y) + "," + std::to_string(k) +
                      ") has no preimage in the window";
    }
  }
  return out;
}

ConjugationReport morita_conjugation_check(const std::vector<int>& f,
                                           const FiniteMetricSpace& X,
                                           const FiniteMetricSpace& Y, const Kernel& T,
                                           int n, int i, int n2, int i2, double tol) {
  if (static_cast<int>(f.size()) != X.size())
    throw std::invalid_argument("map is not total on the domain");
  if (T.rows() != X.size() || T.cols() != X.size())
    throw std::invalid_argument("kernel shape does not match the space");
  const auto fd = fiber_data(f, Y.size());
  const int Nmax = *std::max_element(fd.fiber_size.begin(), fd.fiber_size.end());
  if (i < 1 || n < i || n > Nmax || i2 < 1 || n2 < i2 || n2 > Nmax)
    throw std::invalid_argument("invalid partition indices");

  auto in_class = [&](int x, int nn, int ii) {
    return fd.fiber_size[static_cast<std::size_t>(f[static_cast<std::size_t>(x)])] == nn &&
           fd.pi[static_cast<std::size_t>(x)] == ii;
  };

  Kernel S = Kernel::Zero(X.size(), X.size());
  for (int a = 0; a < X.size(); ++a)
    for (int b = 0; b < X.size(); ++b)
      if (in_class(a, n, i) && in_class(b, n2, i2)) S(a, b) = T(a, b);

  // V_i maps l2 of the pi = i slice isometrically into l2(Y).
  Eigen::MatrixXcd Vi = Eigen::MatrixXcd::Zero(Y.size(), X.size());
  Eigen::MatrixXcd Vi2 = Eigen::MatrixXcd::Zero(Y.size(), X.size());
  for (int x = 0; x < X.size(); ++x) {
    if (fd.pi[static_cast<std::size_t>(x)] == i) Vi(f[static_cast<std::size_t>(x)], x) = 1.0;
    if (fd.pi[static_cast<std::size_t>(x)] == i2)
      Vi2(f[static_cast<std::size_t>(x)], x) = 1.0;
  }

  ConjugationReport rep;
  rep.conjugated = Vi * S * Vi2.adjoint();
  rep.propagation_in = propagation(X, T, tol);
  rep.propagation_out = propagation(Y, rep.conjugated, tol);

  const auto control = control_functions(f, X, Y);
  Dist r_pre = 0;
  for (int a = 0; a < X.size(); ++a)
    for (int b = 0; b < X.size(); ++b)
      if (f[static_cast<std::size_t>(a)] == f[static_cast<std::size_t>(b)])
        r_pre = std::max(r_pre, X.distance(a, b));
  rep.bound = control.forward(rep.propagation_in) + 2 * r_pre;
  rep.within_bound = rep.propagation_out <= rep.bound;
  return rep;
}

LimitEmbedding limit_embedding(const std::vector<std::vector<int>>& domains,
                               const std::vector<std::vector<int>>& values,
                               const FiniteMetricSpace& X, const FiniteGroup& G) {
  if (domains.empty() || domains.size() != values.size())
    throw std::invalid_argument("family must pair each domain with its values");
  for (std::size_t i = 0; i < domains.size(); ++i) {
    if (domains[i].size() != values[i].size())
      throw std::invalid_argument("domain and value lists must align");
    for (int p : domains[i])
      if (p < 0 || p >= X.size()) throw std::invalid_argument("domain point outside space");
    for (int v : values[i])
      if (v < 0 || v >= G.order()) throw std::invalid_argument("value outside group");
  }
  for (std::size_t i = 1; i < domains.size(); ++i) {
    std::set<int> prev(domains[i - 1].begin(), domains[i - 1].end());
    std::set<int> cur(domains[i].begin(), domains[i].end());
    if (!std::includes(cur.begin(), cur.end(), prev.begin(), prev.end()))
      throw std::invalid_argument("domains must be nested");
  }
  {
    std::set<int> last(domains.back().begin(), domains.back().end());
    if (static_cast<int>(last.size()) != X.size())
      throw std::invalid_argument("last domain must cover the space");
  }

  const int n = X.size();
  // phi_i as dense maps, -1 where undefined.
  std::vector<std::vector<int>> phi(domains.size(),
                                    std::vector<int>(static_cast<std::size_t>(n), -1));
  for (std::size_t i = 0; i < domains.size(); ++i)
    for (std::size_t k = 0; k < domains[i].size(); ++k)
      phi[i][static_cast<std::size_t>(domains[i][k])] = values[i][k];

  LimitEmbedding out;
  out.g = Eigen::MatrixXi::Constant(n, n, -1);
  out.stabilized = true;
  for (int x = 0; x < n && out.stabilized; ++x)
    for (int y = 0; y < n; ++y) {
      std::vector<int> obs;
      for (std::size_t i = 0; i < phi.size(); ++i) {
        const int px = phi[i][static_cast<std::size_t>(x)];
        const int py = phi[i][static_cast<std::size_t>(y)];
        if (px >= 0 && py >= 0) obs.push_back(G.multiply(G.inverse(px), py));
      }
      if (obs.empty() || (obs.size() >= 2 && obs.back() != obs[obs.size() - 2])) {
        out.stabilized = false;
        out.offending = {x, y};
        out.witness = "pair (" + X.point(x) + "," + X.point(y) + ") does not stabilize";
        break;
      }
      out.g(x, y) = obs.back();
    }
  if (!out.stabilized) return out;

  out.cocycle_ok = true;
  for (int x = 0; x < n && out.cocycle_ok; ++x) {
    if (out.g(x, x) != G.identity()) {
      out.cocycle_ok = false;
      out.witness = "g(x,x) is not the identity at " + X.point(x);
    }
    for (int y = 0; y < n && out.cocycle_ok; ++y) {
      if (out.g(y, x) != G.inverse(out.g(x, y))) {
        out.cocycle_ok = false;
        out.witness = "g(y,x) is not the inverse at (" + X.point(x) + "," + X.point(y) + ")";
      }
      for (int z = 0; z < n; ++z)
        if (G.multiply(out.g(x, y), out.g(y, z)) != out.g(x, z)) {
          out.cocycle_ok = false;
          out.witness = "cocycle identity fails at (" + X.point(x) + "," + X.point(y) +
                        "," + X.point(z) + ")";
          break;
        }
    }
  }

  out.psi.assign(static_cast<std::size_t>(n), -1);
  for (int x = 0; x < n; ++x) out.psi[static_cast<std::size_t>(x)] = out.g(0, x);

  const auto len = word_lengths(G);
  out.metric_ok = true;
  if (out.cocycle_ok) {
    const auto GY = word_metric(G);
    for (int x = 0; x < n && out.metric_ok; ++x)
      for (int y = 0; y < n; ++y)
        if (GY.distance(out.psi[static_cast<std::size_t>(x)],
                        out.psi[static_cast<std::size_t>(y)]) !=
            len[static_cast<std::size_t>(out.g(x, y))]) {
          out.metric_ok = false;
          out.witness = "psi distance mismatch at (" + X.point(x) + "," + X.point(y) + ")";
          break;
        }
  } else {
    out.metric_ok = false;
  }
  return out;
}

GlueResult glue_local_kernel(const std::vector<GlueBlock>& blocks, Dist R, double eps,
                             double tol) {
  if (blocks.empty()) throw std::invalid_argument("need at least one block");
  if (eps <= 0) throw std::invalid_argument("eps must be positive");
  const Dist scale = blocks.front().space.scale();
  std::set<std::int64_t> offsets;
  for (const auto& b : blocks) {
    if (b.space.scale() != scale)
      throw std::invalid_argument("blocks must share one scale");
    if (!offsets.insert(b.offset).second)
      throw std::invalid_argument("blocks overlap: duplicate offset " +
                                  std::to_string(b.offset));
    if (b.kernel.rows() != b.space.size() || b.kernel.cols() != b.space.size())
      throw std::invalid_argument("block kernel shape mismatch");
    const auto psd = positive_type_check(b.kernel, tol);
    if (!psd.positive)
      throw std::invalid_argument("block kernel is not positive type");
    if (measured_variation(b.space, b.kernel, R) >= eps)
      throw std::invalid_argument("block kernel lacks the required variation");
  }

  // Union space: blocks hang off an anchor line at their offsets.
  std::vector<std::string> points;
  std::vector<std::pair<int, int>> origin;  // (block, local point)
  for (std::size_t b = 0; b < blocks.size(); ++b)
    for (int p = 0; p < blocks[b].space.size(); ++p) {
      points.push_back(blocks[b].space.point(p) + "@" +
                       std::to_string(blocks[b].offset));
      origin.emplace_back(static_cast<int>(b), p);
    }
  const int total = static_cast<int>(points.size());
  DistMatrix dist(total, total);
  for (int a = 0; a < total; ++a)
    for (int c = 0; c < total; ++c) {
      const auto& [ba, pa] = origin[static_cast<std::size_t>(a)];
      const auto& [bc, pc] = origin[static_cast<std::size_t>(c)];
      if (ba == bc) {
        dist(a, c) = blocks[static_cast<std::size_t>(ba)].space.distance(pa, pc);
      } else {
        dist(a, c) =
            blocks[static_cast<std::size_t>(ba)].space.distance(pa, 0) +
            scale * std::abs(blocks[static_cast<std::size_t>(ba)].offset -
                             blocks[static_cast<std::size_t>(bc)].offset) +
            blocks[static_cast<std::size_t>(bc)].space.distance(0, pc);
      }
    }

  GlueResult out{FiniteMetricSpace(FiniteMetricSpace::MetricByConstruction{},
                                   std::move(points), std::move(dist), scale),
                 Kernel{}, {}, PsdReport{}, 0, false, 0, 0, false};

  // Blocks within distance R of some other block fuse into one superblock.
  const int m = static_cast<int>(blocks.size());
  std::vector<bool> fused(static_cast<std::size_t>(m), false);
  for (int b1 = 0; b1 < m; ++b1)
    for (int b2 = 0; b2 < m; ++b2) {
      if (b1 == b2) continue;
      Dist best = -1;
      for (int a = 0; a < total; ++a) {
        if (origin[static_cast<std::size_t>(a)].first != b1) continue;
        for (int c = 0; c < total; ++c) {
          if (origin[static_cast<std::size_t>(c)].first != b2) continue;
          const Dist d = out.union_space.distance(a, c);
          if (best < 0 || d < best) best = d;
        }
      }
      if (best >= 0 && best <= R) fused[static_cast<std::size_t>(b1)] = true;
    }
  for (int b = 0; b < m; ++b)
    if (fused[static_cast<std::size_t>(b)]) out.fused.push_back(b);

  out.kernel = Kernel::Zero(total, total);
  for (int a = 0; a < total; ++a)
    for (int c = 0; c < total; ++c) {
      const auto& [ba, pa] = origin[static_cast<std::size_t>(a)];
      const auto& [bc, pc] = origin[static_cast<std::size_t>(c)];
      if (fused[static_cast<std::size_t>(ba)] && fused[static_cast<std::size_t>(bc)]) {
        out.kernel(a, c) = 1.0;
      } else if (ba == bc && !fused[static_cast<std::size_t>(ba)]) {
        out.kernel(a, c) = blocks[static_cast<std::size_t>(ba)].kernel(pa, pc);
      }
    }

  out.psd = positive_type_check(out.kernel, tol);
  out.variation = measured_variation(out.union_space, out.kernel, R);
  out.variation_ok = out.variation < eps;
  out.propagation = propagation(out.union_space, out.kernel, tol);

  Dist bound = 0;
  for (const auto& b : blocks)
    bound = std::max(bound, propagation(b.space, b.kernel, tol));
  Dist fused_diam = 0;
  for (int a = 0; a < total; ++a)
    for (int c = 0; c < total; ++c)
      if (fused[static_cast<std::size_t>(origin[static_cast<std::size_t>(a)].first)] &&
          fused[static_cast<std::size_t>(origin[static_cast<std::size_t>(c)].first)])
        fused_diam = std::max(fused_diam, out.union_space.distance(a, c));
  out.vanish_bound = std::max(bound, fused_diam);
  out.vanish_ok = out.propagation <= out.vanish_bound;
  return out;
}

}  // namespace coarse
