#pragma once

#include "coarse/group.hpp"
#include "coarse/metric_space.hpp"
#include "coarse/roe.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace coarse {

/// Bounded-valence telescope over a space: vertices (i,x,y) with d(x,y) <= i
/// for levels i = 0..i_max. Each b_{i,x} = {(i,x,*)} is a path starting at
/// (i,x,x); cross edges join (i,x,y) to (i,y,x) and telescope edges join
/// (i,x,x) to (i+1,x,x). Every vertex lies in at most three edges.
struct TelescopeGraph {
  struct Vertex {
    Dist level;
    int x, y;
  };
  std::vector<Vertex> vertices;
  std::vector<std::vector<int>> adj;
  std::vector<int> embedding;  // point x -> vertex (0,x,x)
  Dist i_max = 0;
};

TelescopeGraph telescope_graph(const FiniteMetricSpace& X, Dist i_max);

/// Path distances from a vertex (unit edges, -1 for unreachable).
std::vector<int> telescope_distances(const TelescopeGraph& G, int from);

struct TelescopeReport {
  int max_degree = 0;
  Dist level_used = 0;       // the chosen i > R
  std::int64_t ball_bound = 0;  // N = max |B_i(x)|
  std::int64_t forward_bound = 0;  // 2i + 2N - 1
  bool degree_ok = false;
  bool forward_ok = false;
  bool backward_ok = false;
  std::string witness;
  bool pass() const { return degree_ok && forward_ok && backward_ok; }
};

/// Exhaustively checks the embedding bounds: d(x,y) <= R implies
/// d_Gamma <= 2i+2N-1 for the chosen level i > R, and d_Gamma <= R implies
/// 2 d(x,y) <= R^2. Throws when the truncation is too shallow (i > i_max).
TelescopeReport telescope_check(const FiniteMetricSpace& X, const TelescopeGraph& G,
                                Dist R, Dist level);

/// One representative per isomorphism class of connected graphs with at most
/// n_max vertices and maximum degree 3, glued along an anchor line so that
/// component k sits at gap >= k from everything else. n_max is capped at 7.
struct GammaU {
  FiniteMetricSpace space;
  std::vector<int> component_of;        // per point
  std::vector<int> component_sizes;     // per component
};

GammaU gamma_u(int n_max);

/// Index interleaving of a surjection f: X -> Y over the window |j| <= J:
/// (x,j) maps to (f(x), pi(x) + j N(f(x))) with fibers enumerated by
/// ascending point index.
struct InterleaveResult {
  struct Entry {
    int x;
    std::int64_t j;
    int y;
    std::int64_t k;
  };
  std::vector<Entry> entries;
  std::vector<int> pi;          // 1-based fiber position per x
  std::vector<int> fiber_size;  // N(y) per y
  bool injective = false;
  bool residue_image_exact = false;
  std::string witness;  // first violation, empty when everything holds
};

InterleaveResult morita_interleave(const std::vector<int>& f, int codomain_size,
                                   std::int64_t J);

/// Conjugates the block S = P_{n,i} T P_{n',i'} by the fiber isometries and
/// checks that its propagation stays within forward(prop T) + 2 r_pre, where
/// r_pre is the largest fiber diameter.
struct ConjugationReport {
  Dist propagation_in = 0;
  Dist propagation_out = 0;
  Dist bound = 0;
  bool within_bound = false;
  Kernel conjugated;
};

ConjugationReport morita_conjugation_check(const std::vector<int>& f,
                                           const FiniteMetricSpace& X,
                                           const FiniteMetricSpace& Y, const Kernel& T,
                                           int n, int i, int n2, int i2,
                                           double tol = kDefaultTol);

/// Stabilized difference elements of a nested family of maps into a group:
/// g_xy is the eventual value of phi_i(x)^{-1} phi_i(y) (the last observation
/// must confirm an unchanged value), psi(x) = g_{x0 x}. Verifies the identity
/// g_xy g_yz = g_xz together with g_xx = e and g_yx = g_xy^{-1} exhaustively.
struct LimitEmbedding {
  bool stabilized = false;
  std::pair<int, int> offending{-1, -1};  // first non-stabilizing pair
  Eigen::MatrixXi g;                      // group element index per pair
  std::vector<int> psi;
  bool cocycle_ok = false;
  bool metric_ok = false;  // d(psi x, psi y) = |g_xy|
  std::string witness;
};

LimitEmbedding limit_embedding(const std::vector<std::vector<int>>& domains,
                               const std::vector<std::vector<int>>& values,
                               const FiniteMetricSpace& X, const FiniteGroup& G);

/// One block of a gluing instance: a space, a positive kernel on it, and the
/// anchor-line offset it is placed at.
struct GlueBlock {
  FiniteMetricSpace space;
  Kernel kernel;
  std::int64_t offset = 0;
};

struct GlueResult {
  FiniteMetricSpace union_space;
  Kernel kernel;
  std::vector<int> fused;  // indices of blocks within distance R of another
  PsdReport psd;
  double variation = 0;
  bool variation_ok = false;
  Dist propagation = 0;
  Dist vanish_bound = 0;
  bool vanish_ok = false;
};

/// Glues per-block kernels into one positive kernel on the disjoint union:
/// blocks near another block fuse into an all-ones superblock, isolated
/// blocks keep their own kernel, everything else is zero.
GlueResult glue_local_kernel(const std::vector<GlueBlock>& blocks, Dist R, double eps,
                             double tol = kDefaultTol);

}  // namespace coarse
