#include "coarse/constructions.hpp"

#include "test_support.hpp"

#include <doctest.h>

#include <limits>
#include <numeric>
#include <random>
#include <set>

using namespace coarse;
using coarse::testing::random_psd;
using coarse::testing::random_space;

TEST_CASE("telescope graph shape") {
  SUBCASE("level sizes over the 4-point path") {
    const auto X = make_path_space(4);
    const auto G = telescope_graph(X, 3);
    // Levels contribute 4 + 10 + 14 + 16 ordered pairs.
    CHECK(G.vertices.size() == 44);
    std::vector<int> level_count(4, 0);
    for (const auto& v : G.vertices) ++level_count[static_cast<std::size_t>(v.level)];
    CHECK(level_count == std::vector<int>{4, 10, 14, 16});
  }

  SUBCASE("single point gives a path of levels") {
    const auto X = make_path_space(1);
    const auto G = telescope_graph(X, 2);
    CHECK(G.vertices.size() == 3);
    int leaves = 0;
    for (const auto& nb : G.adj) {
      CHECK(nb.size() <= 2);
      if (nb.size() == 1) ++leaves;
    }
    CHECK(leaves == 2);
  }

  SUBCASE("degree is at most three everywhere") {
    std::mt19937 rng(101);
    for (int trial = 0; trial < 10; ++trial) {
      const auto X = random_space(rng, 4 + trial % 6, 5);
      const auto G = telescope_graph(X, 4);
      for (const auto& nb : G.adj) CHECK(nb.size() <= 3);
    }
  }
}

TEST_CASE("telescope embedding bounds") {
  SUBCASE("4-point path at R = 1") {
    const auto X = make_path_space(4);
    const auto G = telescope_graph(X, 2);
    const auto rep = telescope_check(X, G, 1, 2);
    CHECK(rep.ball_bound == 4);
    CHECK(rep.forward_bound == 11);
    CHECK(rep.pass());
  }

  SUBCASE("single point is vacuous") {
    const auto X = make_path_space(1);
    const auto G = telescope_graph(X, 2);
    CHECK(telescope_check(X, G, 1, 2).pass());
  }

  SUBCASE("random spaces satisfy both bounds") {
    std::mt19937 rng(103);
    for (int trial = 0; trial < 20; ++trial) {
      const auto X = random_space(rng, 4 + trial % 7, 6);
      for (Dist R = 1; R <= 3; ++R) {
        const auto G = telescope_graph(X, R + 1);
        CHECK(telescope_check(X, G, R, R + 1).pass());
      }
    }
  }

  SUBCASE("shallow truncation is an error") {
    const auto X = make_path_space(4);
    const auto G = telescope_graph(X, 1);
    CHECK_THROWS_WITH_AS(telescope_check(X, G, 1, 2), doctest::Contains("shallow"),
                         std::invalid_argument);
    CHECK_THROWS_AS(telescope_check(X, G, 1, 1), std::invalid_argument);
  }
}

namespace {

// Independent enumeration oracle for small graphs: all edge masks, pairwise
// isomorphism by brute-force permutation.
int count_iso_classes(int n) {
  const int slots = n * (n - 1) / 2;
  auto slot = [n](int i, int j) {
    if (i > j) std::swap(i, j);
    return i * n - i * (i + 1) / 2 + (j - i - 1);
  };
  std::vector<std::uint32_t> reps;
  for (std::uint32_t mask = 0; mask < (1u << slots); ++mask) {
    std::vector<int> deg(static_cast<std::size_t>(n), 0);
    bool ok = true;
    for (int i = 0; i < n && ok; ++i)
      for (int j = i + 1; j < n && ok; ++j)
        if ((mask >> slot(i, j)) & 1u)
          ok = ++deg[static_cast<std::size_t>(i)] <= 3 &&
               ++deg[static_cast<std::size_t>(j)] <= 3;
    if (!ok) continue;
    // Connectivity.
    std::vector<int> stack{0};
    std::uint32_t seen = 1;
    int cnt = 1;
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      for (int v = 0; v < n; ++v)
        if (v != u && !((seen >> v) & 1u) && ((mask >> slot(u, v)) & 1u)) {
          seen |= 1u << v;
          ++cnt;
          stack.push_back(v);
        }
    }
    if (cnt != n) continue;
    bool fresh = true;
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    for (const auto rep : reps) {
      std::vector<int> p = perm;
      bool iso = false;
      do {
        std::uint32_t moved = 0;
        for (int i = 0; i < n; ++i)
          for (int j = i + 1; j < n; ++j)
            if ((mask >> slot(i, j)) & 1u)
              moved |= 1u << slot(p[static_cast<std::size_t>(i)],
                                  p[static_cast<std::size_t>(j)]);
        if (moved == rep) {
          iso = true;
          break;
        }
      } while (std::next_permutation(p.begin(), p.end()));
      if (iso) {
        fresh = false;
        break;
      }
    }
    if (fresh) reps.push_back(mask);
  }
  return static_cast<int>(reps.size());
}

}  // namespace

TEST_CASE("bounded-degree graph catalogue") {
  SUBCASE("small class counts") {
    CHECK(gamma_u(1).component_sizes == std::vector<int>{1});
    CHECK(gamma_u(2).component_sizes == std::vector<int>{1, 2});
    const auto g3 = gamma_u(3);
    CHECK(g3.component_sizes == std::vector<int>{1, 2, 3, 3});
  }

  SUBCASE("agreement with the brute-force oracle through n = 5") {
    int expected = 0;
    for (int n = 1; n <= 5; ++n) {
      expected += count_iso_classes(n);
      CHECK(static_cast<int>(gamma_u(n).component_sizes.size()) == expected);
    }
  }

  SUBCASE("components are separated by growing gaps") {
    const auto g = gamma_u(4);
    const auto& X = g.space;
    const int m = static_cast<int>(g.component_sizes.size());
    for (int k = 0; k < m; ++k) {
      Dist gap = std::numeric_limits<Dist>::max();
      for (int a = 0; a < X.size(); ++a)
        for (int b = 0; b < X.size(); ++b)
          if (g.component_of[static_cast<std::size_t>(a)] == k &&
              g.component_of[static_cast<std::size_t>(b)] != k)
            gap = std::min(gap, X.distance(a, b));
      CHECK(gap >= k + 1);  // component k+1 in 1-based labeling
    }
  }

  SUBCASE("cap is enforced") {
    CHECK_THROWS_AS(gamma_u(8), std::invalid_argument);
  }
}

TEST_CASE("index interleaving") {
  SUBCASE("identity map shifts the index") {
    const auto res = morita_interleave({0, 1, 2}, 3, 2);
    CHECK(res.injective);
    CHECK(res.residue_image_exact);
    for (const auto& e : res.entries) {
      CHECK(e.y == e.x);
      CHECK(e.k == 1 + e.j);
    }
  }

  SUBCASE("two points over one point split into parities") {
    const auto res = morita_interleave({0, 0}, 1, 3);
    CHECK(res.injective);
    CHECK(res.residue_image_exact);
    for (const auto& e : res.entries) {
      if (e.x == 0) CHECK(((e.k % 2) + 2) % 2 == 1);  // odd slots
      if (e.x == 1) CHECK(((e.k % 2) + 2) % 2 == 0);  // even slots
    }
  }

  SUBCASE("random surjections stay injective with exact residue image") {
    std::mt19937 rng(107);
    for (int trial = 0; trial < 20; ++trial) {
      const int ny = 2 + trial % 4;
      std::vector<int> f;
      for (int y = 0; y < ny; ++y) {
        const int mult = 1 + static_cast<int>(rng() % 4);
        for (int m = 0; m < mult; ++m) f.push_back(y);
      }
      std::shuffle(f.begin(), f.end(), rng);
      const auto res = morita_interleave(f, ny, 5 + trial % 16);
      CHECK(res.injective);
      CHECK(res.residue_image_exact);
    }
  }

  SUBCASE("non-surjective maps are rejected") {
    CHECK_THROWS_WITH_AS(morita_interleave({0, 0}, 2, 1),
                         doctest::Contains("surjective"), std::invalid_argument);
  }
}

TEST_CASE("conjugation by fiber isometries") {
  SUBCASE("identity map leaves blocks alone") {
    const auto X = make_path_space(4);
    std::mt19937 rng(109);
    const auto T = random_psd(rng, 4, 4);
    const auto rep = morita_conjugation_check({0, 1, 2, 3}, X, X, T, 1, 1, 1, 1);
    CHECK((rep.conjugated - T).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(rep.propagation_out == rep.propagation_in);
    CHECK(rep.within_bound);
  }

  SUBCASE("two-to-one collapse of the 4-point path") {
    const auto X = make_path_space(4);
    const auto Y = make_path_space(2, "q");
    // p0,p1 -> q0 and p2,p3 -> q1.
    const std::vector<int> f{0, 0, 1, 1};
    const auto rep =
        morita_conjugation_check(f, X, Y, Kernel::Identity(4, 4), 2, 1, 2, 1);
    CHECK(rep.propagation_out == 0);
    CHECK(rep.within_bound);
    // The conjugate of the identity block is the identity on the image.
    CHECK(rep.conjugated(0, 0) == std::complex<double>(1.0));
    CHECK(rep.conjugated(1, 1) == std::complex<double>(1.0));
  }

  SUBCASE("random blocks stay within the control bound") {
    std::mt19937 rng(113);
    for (int trial = 0; trial < 50; ++trial) {
      const int ny = 2 + trial % 3;
      std::vector<int> f;
      for (int y = 0; y < ny; ++y) {
        const int mult = 1 + static_cast<int>(rng() % 2);
        for (int m = 0; m < mult; ++m) f.push_back(y);
      }
      const int nx = static_cast<int>(f.size());
      const auto X = random_space(rng, nx, 6);
      const auto Y = random_space(rng, ny, 6);
      const auto T = random_psd(rng, nx, nx);
      int N = 1, i = 1;
      // Pick valid indices present in the fiber data.
      std::vector<int> count(static_cast<std::size_t>(ny), 0);
      for (int x : f) ++count[static_cast<std::size_t>(x)];
      N = *std::max_element(count.begin(), count.end());
      i = 1;
      const auto rep = morita_conjugation_check(f, X, Y, T, N, i, N, i);
      CHECK(rep.within_bound);
    }
  }

  SUBCASE("invalid indices are rejected") {
    const auto X = make_path_space(4);
    const auto Y = make_path_space(2, "q");
    const std::vector<int> f{0, 0, 1, 1};
    CHECK_THROWS_WITH_AS(
        morita_conjugation_check(f, X, Y, Kernel::Identity(4, 4), 1, 2, 1, 1),
        doctest::Contains("indices"), std::invalid_argument);
  }
}

TEST_CASE("stabilized limit data") {
  const auto X = make_path_space(3);
  const auto G = make_cyclic_group(7);

  const std::vector<std::vector<int>> domains{{0, 1}, {0, 1, 2}, {0, 1, 2}};

  SUBCASE("constant families stabilize to the final map") {
    const std::vector<std::vector<int>> values{{1, 2}, {1, 2, 4}, {1, 2, 4}};
    const auto res = limit_embedding(domains, values, X, G);
    CHECK(res.stabilized);
    CHECK(res.cocycle_ok);
    CHECK(res.metric_ok);
    // g(x,y) = phi(x)^{-1} phi(y) for the constant map.
    CHECK(res.g(0, 1) == G.multiply(G.inverse(1), 2));
    CHECK(res.psi[0] == G.identity());
  }

  SUBCASE("left translates produce the same differences") {
    // Second stage multiplied on the left by 3; differences cancel it.
    const std::vector<std::vector<int>> values{{1, 2}, {4, 5, 0}, {1, 2, 4}};
    const std::vector<std::vector<int>> plain{{1, 2}, {1, 2, 4}, {1, 2, 4}};
    const auto a = limit_embedding(domains, values, X, G);
    const auto b = limit_embedding(domains, plain, X, G);
    REQUIRE(a.stabilized);
    REQUIRE(b.stabilized);
    CHECK(a.g == b.g);
  }

  SUBCASE("a flipping pair is flagged by name") {
    // The difference phi(0)^{-1} phi(1) changes at the last stage.
    const std::vector<std::vector<int>> values{{1, 2}, {1, 2, 4}, {1, 3, 4}};
    const auto res = limit_embedding(domains, values, X, G);
    CHECK_FALSE(res.stabilized);
    CHECK(res.offending == std::pair<int, int>{0, 1});
    CHECK(res.witness.find("p0") != std::string::npos);
    CHECK(res.witness.find("p1") != std::string::npos);
  }

  SUBCASE("nesting violations are rejected") {
    const std::vector<std::vector<int>> bad{{0, 1}, {1, 2}, {0, 1, 2}};
    const std::vector<std::vector<int>> values{{1, 2}, {2, 4}, {1, 2, 4}};
    CHECK_THROWS_WITH_AS(limit_embedding(bad, values, X, G),
                         doctest::Contains("nested"), std::invalid_argument);
  }
}

TEST_CASE("gluing local kernels") {
  std::mt19937 rng(127);

  auto near_one_kernel = [&](const FiniteMetricSpace& S, double eps) {
    // PSD with unit diagonal and entries close to one: gram of nearly equal
    // unit vectors.
    const int n = S.size();
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Constant(n + 1, n, 1.0);
    std::uniform_real_distribution<double> small(0.0, eps / 8.0);
    for (int j = 0; j < n; ++j) A(1 + j % (n > 1 ? n : 1), j) += small(rng);
    for (int j = 0; j < n; ++j) A.col(j).normalize();
    return Kernel(A.adjoint() * A);
  };

  SUBCASE("a single far block keeps its kernel") {
    const auto S = make_path_space(3);
    const auto u = near_one_kernel(S, 0.4);
    const auto res = glue_local_kernel({{S, u, 1}}, 2, 0.4);
    CHECK(res.fused.empty());
    CHECK((res.kernel - u).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(res.psd.positive);
    CHECK(res.variation_ok);
  }

  SUBCASE("two far blocks stay block diagonal") {
    const auto S1 = make_path_space(3, "a");
    const auto S2 = make_path_space(2, "b");
    const auto u1 = near_one_kernel(S1, 0.4);
    const auto u2 = near_one_kernel(S2, 0.4);
    const auto res = glue_local_kernel({{S1, u1, 0}, {S2, u2, 50}}, 2, 0.4);
    CHECK(res.fused.empty());
    CHECK(res.psd.positive);
    CHECK(res.variation_ok);
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 2; ++b) CHECK(res.kernel(a, 3 + b) == std::complex<double>(0.0));
  }

  SUBCASE("near blocks fuse into an all-ones superblock") {
    const auto S1 = make_path_space(2, "a");
    const auto S2 = make_path_space(2, "b");
    const auto S3 = make_path_space(3, "c");
    const auto u1 = near_one_kernel(S1, 0.4);
    const auto u2 = near_one_kernel(S2, 0.4);
    const auto u3 = near_one_kernel(S3, 0.4);
    const auto res =
        glue_local_kernel({{S1, u1, 0}, {S2, u2, 1}, {S3, u3, 40}}, 2, 0.4);
    CHECK(res.fused == std::vector<int>{0, 1});
    CHECK(res.psd.positive);
    CHECK(res.variation_ok);
    // Fused entries are exactly one; the third block is untouched.
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) CHECK(res.kernel(a, b) == std::complex<double>(1.0));
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) CHECK(res.kernel(4 + a, 4 + b) == u3(a, b));
    CHECK(res.vanish_ok);
  }

  SUBCASE("duplicate offsets are rejected") {
    const auto S1 = make_path_space(2, "a");
    const auto u1 = near_one_kernel(S1, 0.4);
    CHECK_THROWS_WITH_AS(glue_local_kernel({{S1, u1, 3}, {S1, u1, 3}}, 1, 0.4),
                         doctest::Contains("overlap"), std::invalid_argument);
  }

  SUBCASE("random multi-block instances glue to valid kernels") {
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<GlueBlock> blocks;
      const int nb = 2 + trial % 3;
      std::int64_t offset = 0;
      for (int b = 0; b < nb; ++b) {
        const auto S = random_space(rng, 2 + static_cast<int>(rng() % 4), 4);
        blocks.push_back({S, near_one_kernel(S, 0.5), offset});
        offset += 1 + static_cast<std::int64_t>(rng() % 30);
      }
      const auto res = glue_local_kernel(blocks, 3, 0.5);
      CHECK(res.psd.positive);
      CHECK(res.variation_ok);
      CHECK(res.vanish_ok);
    }
  }
}
