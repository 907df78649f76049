#include "coarse/group.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <stdexcept>

namespace coarse {

FiniteGroup::FiniteGroup(std::vector<std::string> elements, Eigen::MatrixXi table,
                         std::vector<int> generators)
    : elements_(std::move(elements)), table_(std::move(table)),
      generators_(std::move(generators)) {
  const int n = order();
  if (n == 0) throw std::invalid_argument("group has no elements");
  if (table_.rows() != n || table_.cols() != n)
    throw std::invalid_argument("multiplication table shape mismatch");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (table_(i, j) < 0 || table_(i, j) >= n)
        throw std::invalid_argument("table entry out of range");

  // Rows and columns must be permutations.
  for (int i = 0; i < n; ++i) {
    std::vector<bool> row(static_cast<std::size_t>(n), false), col(static_cast<std::size_t>(n), false);
    for (int j = 0; j < n; ++j) {
      if (row[static_cast<std::size_t>(table_(i, j))])
        throw std::invalid_argument("not a bijection row: row " + elements_[static_cast<std::size_t>(i)]);
      row[static_cast<std::size_t>(table_(i, j))] = true;
      if (col[static_cast<std::size_t>(table_(j, i))])
        throw std::invalid_argument("not a bijection column: column " +
                                    elements_[static_cast<std::size_t>(i)]);
      col[static_cast<std::size_t>(table_(j, i))] = true;
    }
  }

  for (int e = 0; e < n; ++e) {
    bool ok = true;
    for (int g = 0; g < n && ok; ++g)
      ok = table_(e, g) == g && table_(g, e) == g;
    if (ok) {
      identity_ = e;
      break;
    }
  }
  if (identity_ < 0) throw std::invalid_argument("no identity element");

  inverse_.assign(static_cast<std::size_t>(n), -1);
  for (int g = 0; g < n; ++g) {
    for (int h = 0; h < n; ++h)
      if (table_(g, h) == identity_ && table_(h, g) == identity_) {
        inverse_[static_cast<std::size_t>(g)] = h;
        break;
      }
    if (inverse_[static_cast<std::size_t>(g)] < 0)
      throw std::invalid_argument("no two-sided inverse for " +
                                  elements_[static_cast<std::size_t>(g)]);
  }

  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        if (table_(table_(a, b), c) != table_(a, table_(b, c)))
          throw std::invalid_argument("multiplication table is not associative");

  std::sort(generators_.begin(), generators_.end());
  generators_.erase(std::unique(generators_.begin(), generators_.end()),
                    generators_.end());
  for (int g : generators_) {
    if (g < 0 || g >= n) throw std::invalid_argument("generator index out of range");
    if (g == identity_) throw std::invalid_argument("identity is not allowed as a generator");
    if (!std::binary_search(generators_.begin(), generators_.end(), inverse(g)))
      throw std::invalid_argument("generator set not symmetric: missing inverse of " +
                                  elements_[static_cast<std::size_t>(g)]);
  }

  // BFS from the identity must reach everything.
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  std::deque<int> queue{identity_};
  seen[static_cast<std::size_t>(identity_)] = true;
  int reached = 1;
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    for (int s : generators_) {
      const int v = table_(u, s);
      if (!seen[static_cast<std::size_t>(v)]) {
        seen[static_cast<std::size_t>(v)] = true;
        ++reached;
        queue.push_back(v);
      }
    }
  }
  if (reached != n) throw std::invalid_argument("generators do not generate the group");

  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (elements_[static_cast<std::size_t>(i)] == elements_[static_cast<std::size_t>(j)])
        throw std::invalid_argument("duplicate element id: " +
                                    elements_[static_cast<std::size_t>(i)]);
}

int FiniteGroup::index_of(const std::string& id) const {
  for (int i = 0; i < order(); ++i)
    if (elements_[static_cast<std::size_t>(i)] == id) return i;
  throw std::invalid_argument("unknown group element: " + id);
}

std::vector<Dist> word_lengths(const FiniteGroup& G) {
  std::vector<Dist> len(static_cast<std::size_t>(G.order()), -1);
  std::deque<int> queue{G.identity()};
  len[static_cast<std::size_t>(G.identity())] = 0;
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    for (int s : G.generators()) {
      const int v = G.multiply(u, s);
      if (len[static_cast<std::size_t>(v)] < 0) {
        len[static_cast<std::size_t>(v)] = len[static_cast<std::size_t>(u)] + 1;
        queue.push_back(v);
      }
    }
  }
  return len;
}

FiniteMetricSpace word_metric(const FiniteGroup& G) {
  const auto len = word_lengths(G);
  const int n = G.order();
  DistMatrix dist(n, n);
  for (int g = 0; g < n; ++g)
    for (int h = 0; h < n; ++h)
      dist(g, h) = len[static_cast<std::size_t>(G.multiply(G.inverse(g), h))];
  return FiniteMetricSpace(FiniteMetricSpace::MetricByConstruction{}, G.elements(),
                           std::move(dist), 1);
}

FiniteGroup make_cyclic_group(int m) {
  if (m < 1) throw std::invalid_argument("cyclic group order must be positive");
  std::vector<std::string> elems;
  for (int i = 0; i < m; ++i) elems.push_back(std::to_string(i));
  Eigen::MatrixXi table(m, m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) table(a, b) = (a + b) % m;
  std::vector<int> gens;
  if (m > 1) {
    gens.push_back(1);
    if (m > 2) gens.push_back(m - 1);
  }
  return FiniteGroup(std::move(elems), std::move(table), std::move(gens));
}

FiniteGroup make_dihedral_group(int m) {
  if (m < 2) throw std::invalid_argument("dihedral parameter must be at least 2");
  const int n = 2 * m;
  auto id = [m](int rot, int ref) { return rot + m * ref; };
  std::vector<std::string> elems;
  for (int b = 0; b < 2; ++b)
    for (int a = 0; a < m; ++a)
      elems.push_back((b ? "sr" : "r") + std::to_string(a));
  Eigen::MatrixXi table(n, n);
  for (int b1 = 0; b1 < 2; ++b1)
    for (int a1 = 0; a1 < m; ++a1)
      for (int b2 = 0; b2 < 2; ++b2)
        for (int a2 = 0; a2 < m; ++a2) {
          // (r^a1 s^b1)(r^a2 s^b2) = r^(a1 + (-1)^b1 a2) s^(b1+b2)
          const int rot = ((a1 + (b1 ? -a2 : a2)) % m + m) % m;
          table(id(a1, b1), id(a2, b2)) = id(rot, (b1 + b2) % 2);
        }
  std::vector<int> gens{id(1, 0), id(0, 1)};
  if (m > 2) gens.push_back(id(m - 1, 0));
  return FiniteGroup(std::move(elems), std::move(table), std::move(gens));
}

FiniteGroup make_symmetric_group(int n) {
  if (n < 2 || n > 6) throw std::invalid_argument("symmetric group supported for 2 <= n <= 6");
  std::vector<std::vector<int>> perms;
  std::vector<int> p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), 0);
  do {
    perms.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));

  const int order = static_cast<int>(perms.size());
  auto find_perm = [&](const std::vector<int>& q) {
    const auto it = std::lower_bound(perms.begin(), perms.end(), q);
    return static_cast<int>(it - perms.begin());
  };

  std::vector<std::string> elems;
  for (const auto& q : perms) {
    std::string s;
    for (int v : q) s += std::to_string(v);
    elems.push_back(s);
  }
  Eigen::MatrixXi table(order, order);
  for (int a = 0; a < order; ++a)
    for (int b = 0; b < order; ++b) {
      std::vector<int> q(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i)
        q[static_cast<std::size_t>(i)] =
            perms[static_cast<std::size_t>(a)][static_cast<std::size_t>(
                perms[static_cast<std::size_t>(b)][static_cast<std::size_t>(i)])];
      table(a, b) = find_perm(q);
    }
  std::vector<int> gens;
  for (int i = 0; i + 1 < n; ++i) {
    std::vector<int> q(static_cast<std::size_t>(n));
    std::iota(q.begin(), q.end(), 0);
    std::swap(q[static_cast<std::size_t>(i)], q[static_cast<std::size_t>(i + 1)]);
    gens.push_back(find_perm(q));
  }
  return FiniteGroup(std::move(elems), std::move(table), std::move(gens));
}

}  // namespace coarse
