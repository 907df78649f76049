#include "coarse/roe.hpp"

#include "coarse/group.hpp"
#include "coarse/kappa.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <Eigen/QR>

#include <random>

using namespace coarse;
using coarse::testing::random_partial_bijection;
using coarse::testing::random_psd;
using coarse::testing::random_space;

TEST_CASE("propagation") {
  const auto X = make_path_space(4);
  CHECK(propagation(X, Kernel::Identity(4, 4)) == 0);

  Kernel E = Kernel::Zero(4, 4);
  E(0, 3) = 1.0;
  CHECK(propagation(X, E) == 3);

  const auto G = make_cyclic_group(5);
  const auto W = word_metric(G);
  const auto chart = canonical_atlas(G, {2}).charts.front();
  Kernel sum = Kernel::Zero(5, 5);
  for (const auto& t : chart.translations) sum += translation_isometry(5, t);
  CHECK(propagation(W, sum) == 1);
}

TEST_CASE("positive type checks") {
  SUBCASE("all-ones is a rank-one gram matrix") {
    const Kernel ones = Kernel::Constant(3, 3, 1.0);
    const auto rep = positive_type_check(ones);
    CHECK(rep.positive);
    CHECK(rep.least_eigenvalue == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(rep.residual < 1e-9);
  }

  SUBCASE("indefinite symmetric matrix") {
    Kernel m(2, 2);
    m << 1, 2, 2, 1;
    const auto rep = positive_type_check(m);
    CHECK_FALSE(rep.positive);
    CHECK(rep.least_eigenvalue == doctest::Approx(-1.0));
  }

  SUBCASE("random gram matrices are positive") {
    std::mt19937 rng(41);
    for (int seed = 0; seed < 50; ++seed) {
      const auto rep = positive_type_check(random_psd(rng, 8, 5));
      CHECK(rep.positive);
    }
  }

  SUBCASE("non-hermitian input is rejected") {
    Kernel m(2, 2);
    m << 0, 1, 0, 0;
    CHECK_THROWS_AS(positive_type_check(m), std::invalid_argument);
  }
}

TEST_CASE("variation checks") {
  const auto X = make_path_space(4);
  CHECK(variation_check(X, Kernel::Constant(4, 4, 1.0), 3, 1e-6));
  CHECK_FALSE(variation_check(X, Kernel::Identity(4, 4), 1, 0.5));

  const auto C12 = make_cycle_space(12);
  Kernel u(12, 12);
  for (int x = 0; x < 12; ++x)
    for (int y = 0; y < 12; ++y) {
      // Normalized overlap of radius-3 balls.
      int overlap = 0;
      for (int z = 0; z < 12; ++z)
        if (C12.distance(z, x) <= 3 && C12.distance(z, y) <= 3) ++overlap;
      u(x, y) = overlap / 7.0;
    }
  CHECK(variation_check(C12, u, 1, 0.2));
  CHECK(measured_variation(C12, u, 1) == doctest::Approx(1.0 / 7.0));
}

TEST_CASE("schur multiplication") {
  std::mt19937 rng(43);
  const auto T = random_psd(rng, 5, 5);
  CHECK(schur_multiply(Kernel::Constant(5, 5, 1.0), T) == T);

  const Kernel diag_mask = Kernel::Identity(5, 5);
  const Kernel diag = schur_multiply(diag_mask, T);
  CHECK(Kernel(diag.diagonal().asDiagonal()) == diag);

  SUBCASE("products of positive pairs stay positive") {
    for (int seed = 0; seed < 100; ++seed) {
      const auto A = random_psd(rng, 6, 4);
      const auto B = random_psd(rng, 6, 6);
      const auto rep = positive_type_check(schur_multiply(A, B), 1e-8);
      CHECK(rep.positive);
    }
  }

  SUBCASE("entrywise contraction under near-one multipliers") {
    const double eps = 0.3;
    std::uniform_real_distribution<double> in_band(0.0, eps * 0.999);
    for (int seed = 0; seed < 20; ++seed) {
      const auto T2 = random_psd(rng, 6, 6);
      Kernel u(6, 6);
      for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) u(i, j) = 1.0 - in_band(rng);
      const Kernel diff = T2 - schur_multiply(u, T2);
      for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j)
          CHECK(std::abs(diff(i, j)) <= eps * std::abs(T2(i, j)));
    }
  }

  CHECK_THROWS_AS(schur_multiply(Kernel::Identity(2, 2), Kernel::Identity(3, 3)),
                  std::invalid_argument);
}

TEST_CASE("diagonal restriction") {
  CHECK(diag_restrict(Kernel::Identity(3, 3)) == Eigen::VectorXcd::Ones(3));
  Kernel E = Kernel::Zero(3, 3);
  E(0, 1) = 1.0;
  CHECK(diag_restrict(E) == Eigen::VectorXcd::Zero(3));

  // t diag(t* T) equals the restriction of T to t, entrywise.
  std::mt19937 rng(47);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 6;
    const auto t = random_partial_bijection(rng, n);
    const Kernel M = translation_isometry(n, t);
    const auto T = random_psd(rng, n, n);
    const Kernel fiber = M * Kernel(diag_restrict(M.adjoint() * T).asDiagonal());
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y) {
        const std::complex<double> expected = t.contains(x, y) ? T(x, y) : 0.0;
        CHECK(std::abs(fiber(x, y) - expected) < 1e-12);
      }
  }
}

TEST_CASE("translation isometries") {
  CHECK(translation_isometry(3, PartialBijection::diagonal(3)) ==
        Kernel::Identity(3, 3));

  const PartialBijection t({{0, 1}});
  const Kernel M = translation_isometry(3, t);
  CHECK(M(0, 1) == std::complex<double>(1.0));
  const Kernel MMt = M * M.adjoint();
  CHECK(MMt(0, 0) == std::complex<double>(1.0));
  CHECK(MMt.cwiseAbs().sum() == doctest::Approx(1.0));
  CHECK(Kernel(M.adjoint()) == translation_isometry(3, pb_inverse(t)));

  std::mt19937 rng(53);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 7;
    const auto a = random_partial_bijection(rng, n);
    const auto b = random_partial_bijection(rng, n);
    const Kernel Ma = translation_isometry(n, a);
    // Partial isometry law.
    CHECK((Ma * Ma.adjoint() * Ma - Ma).cwiseAbs().maxCoeff() < 1e-12);
    // Matrix product realizes relational composition.
    CHECK((Ma * translation_isometry(n, b) -
           translation_isometry(n, pb_compose(a, b)))
              .cwiseAbs()
              .maxCoeff() < 1e-12);
  }

  SUBCASE("propagation equals displacement and is subadditive") {
    std::mt19937 rng2(59);
    const auto X = random_space(rng2, 7, 6);
    for (int trial = 0; trial < 20; ++trial) {
      const auto a = random_partial_bijection(rng2, 7);
      const auto b = random_partial_bijection(rng2, 7);
      const Kernel Ma = translation_isometry(7, a);
      const Kernel Mb = translation_isometry(7, b);
      CHECK(propagation(X, Ma) == check_translation(X, a));
      CHECK(propagation(X, Ma * Mb) <= propagation(X, Ma) + propagation(X, Mb));
    }
  }
}

TEST_CASE("algebra dimension") {
  SUBCASE("canonical translations span the right regular representation") {
    for (const auto& G : {make_cyclic_group(5), make_dihedral_group(4)}) {
      const auto X = word_metric(G);
      const auto chart = canonical_atlas(G, {X.diameter() + 1}).charts.front();
      const int n = G.order();
      std::vector<Kernel> gens;
      for (const auto& t : chart.translations)
        gens.push_back(translation_isometry(n, t));
      CHECK(algebra_dimension(gens) == n);

      // Oracle: rank of the right regular representation, computed directly.
      Eigen::MatrixXcd flat(n * n, n);
      for (int g = 0; g < n; ++g) {
        Kernel rho = Kernel::Zero(n, n);
        for (int a = 0; a < n; ++a) rho(a, G.multiply(a, g)) = 1.0;
        flat.col(g) = Eigen::Map<Eigen::VectorXcd>(rho.data(), n * n);
      }
      Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(flat);
      qr.setThreshold(1e-9);
      CHECK(qr.rank() == n);
    }
  }

  SUBCASE("matrix units span the full algebra") {
    std::vector<Kernel> gens;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        Kernel e = Kernel::Zero(3, 3);
        e(i, j) = 1.0;
        gens.push_back(e);
      }
    CHECK(algebra_dimension(gens) == 9);
  }

  SUBCASE("iterated closure reaches the full algebra from two units") {
    Kernel e12 = Kernel::Zero(3, 3), e23 = Kernel::Zero(3, 3);
    e12(0, 1) = 1.0;
    e23(1, 2) = 1.0;
    CHECK(algebra_dimension({e12, e23}) == 9);
  }

  SUBCASE("single identity generator") {
    CHECK(algebra_dimension({Kernel::Identity(4, 4)}) == 1);
  }

  SUBCASE("cap is enforced") {
    CHECK_THROWS_AS(algebra_dimension({Kernel::Identity(9, 9)}, 8),
                    std::invalid_argument);
  }
}

TEST_CASE("claim matrix") {
  SUBCASE("canonical chart on Z_5 at radius 2") {
    const auto G = make_cyclic_group(5);
    const auto X = word_metric(G);
    const auto chart = canonical_atlas(G, {2}).charts.front();
    const auto M = claim_matrix(X, chart);
    REQUIRE(M.rows() == 25);

    // Block (0,1) is the translation containing (0,1).
    const auto& ts = chart.translations;
    const auto t1 = *std::find_if(ts.begin(), ts.end(),
                                  [](const auto& t) { return t.contains(0, 1); });
    const Kernel T1 = translation_isometry(5, t1);
    for (int a = 0; a < 5; ++a)
      for (int b = 0; b < 5; ++b)
        CHECK(M(0 * 5 + a, 1 * 5 + b) == doctest::Approx(T1(a, b).real()));
    CHECK(M(0 * 5 + 0, 1 * 5 + 1) == doctest::Approx(1.0));

    // Diagonal blocks have unit diagonal entries.
    for (int x = 0; x < 5; ++x) CHECK(M(x * 5 + x, x * 5 + x) == doctest::Approx(1.0));

    const auto rep = positive_type_check(M.cast<std::complex<double>>());
    CHECK(rep.positive);
  }

  SUBCASE("pullback chart assembly is positive semidefinite") {
    const auto X = make_path_space(4);
    const auto G = make_cyclic_group(32);
    const auto chart = pullback_atlas(X, {0, 1, 2, 3}, G, {2}).charts.front();
    const auto M = claim_matrix(X, chart);
    const auto rep = positive_type_check(M.cast<std::complex<double>>());
    CHECK(rep.positive);
    // Entry condition over every covered pair.
    for (const auto& t : chart.translations)
      for (const auto& [x, y] : t.pairs())
        CHECK(M(x * 4 + x, y * 4 + y) == doctest::Approx(1.0));
  }

  SUBCASE("non-free charts are rejected") {
    const auto X = make_path_space(4);
    const auto atlas = build_atlas_coloring(X, {2});
    const auto rep = verify_atlas(X, atlas);
    if (!rep.charts.front().free)
      CHECK_THROWS_WITH_AS(claim_matrix(X, atlas.charts.front()),
                           doctest::Contains("free"), std::invalid_argument);
  }
}
