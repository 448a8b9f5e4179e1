#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>
#include <cmath>

#include "lagpinch/ambient.hpp"

using namespace lagpinch;

namespace {

Eigen::VectorXd random_chart_point(int real_dim, DeterministicRng& rng,
                                   double scale) {
  Eigen::VectorXd w(real_dim);
  for (int i = 0; i < real_dim; ++i) w[i] = scale * rng.gaussian();
  return w;
}

// Worst-case residual of metric compatibility nabla g = 0, i.e.
// d_a g_bc - Gamma^d_{ab} g_dc - Gamma^d_{ac} g_bd = 0, with the metric
// derivative taken by central differences.
double compatibility_residual(const AmbientSpace& space,
                              const Eigen::VectorXd& w) {
  const int m = space.real_dim();
  const Tensor3 gamma = christoffel_at(space, w);
  const Eigen::MatrixXd G = metric_at(space, w);
  const double h = 1e-6;
  double worst = 0.0;
  for (int a = 0; a < m; ++a) {
    Eigen::VectorXd wp = w, wm = w;
    wp[a] += h;
    wm[a] -= h;
    const Eigen::MatrixXd dG = (metric_at(space, wp) - metric_at(space, wm)) /
                               (2.0 * h);
    for (int b = 0; b < m; ++b) {
      for (int c = 0; c < m; ++c) {
        double v = dG(b, c);
        for (int d = 0; d < m; ++d) {
          v -= gamma(d, a, b) * G(d, c) + gamma(d, a, c) * G(b, d);
        }
        worst = std::max(worst, std::abs(v));
      }
    }
  }
  return worst;
}

}  // namespace

TEST_CASE("flat metric is the identity") {
  const AmbientSpace space = AmbientSpace::flat(3);
  DeterministicRng rng(1);
  const Eigen::VectorXd w = random_chart_point(6, rng, 2.0);
  REQUIRE((metric_at(space, w) - Eigen::MatrixXd::Identity(6, 6))
              .cwiseAbs()
              .maxCoeff() == 0.0);
}

TEST_CASE("FS metric closed-form values") {
  SECTION("identity at the origin for c = 1") {
    const AmbientSpace space = AmbientSpace::fubini_study(3, 1.0);
    const Eigen::VectorXd w = Eigen::VectorXd::Zero(6);
    REQUIRE((metric_at(space, w) - Eigen::MatrixXd::Identity(6, 6))
                .cwiseAbs()
                .maxCoeff() <= 1e-15);
  }
  SECTION("n = 1, w = (1, 0) gives metric I/4") {
    const AmbientSpace space = AmbientSpace::fubini_study(1, 1.0);
    Eigen::Vector2d w(1.0, 0.0);
    REQUIRE((metric_at(space, w) - 0.25 * Eigen::MatrixXd::Identity(2, 2))
                .cwiseAbs()
                .maxCoeff() <= 1e-15);
  }
  SECTION("scaling: metric(c) = metric(1)/c") {
    const AmbientSpace s1 = AmbientSpace::fubini_study(2, 1.0);
    const AmbientSpace s4 = AmbientSpace::fubini_study(2, 4.0);
    DeterministicRng rng(9);
    const Eigen::VectorXd w = random_chart_point(4, rng, 0.7);
    REQUIRE((metric_at(s4, w) - metric_at(s1, w) / 4.0).cwiseAbs().maxCoeff() <=
            1e-14);
  }
}

TEST_CASE("FS metric is symmetric positive definite over random points") {
  const AmbientSpace space = AmbientSpace::fubini_study(3, 1.0);
  DeterministicRng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const double scale = std::pow(10.0, rng.uniform(-2.0, 4.0));
    const Eigen::VectorXd w = random_chart_point(6, rng, scale);
    if (w.norm() > 1e4) continue;
    const Eigen::MatrixXd G = metric_at(space, w);
    REQUIRE((G - G.transpose()).cwiseAbs().maxCoeff() <= 1e-17);
    const Eigen::LLT<Eigen::MatrixXd> llt(G);
    REQUIRE(llt.info() == Eigen::Success);
  }
  const Eigen::VectorXd huge = Eigen::VectorXd::Constant(6, 1e9);
  REQUIRE_THROWS_AS(metric_at(space, huge), DomainError);
}

TEST_CASE("Christoffel symbols") {
  SECTION("flat space: all zero") {
    const AmbientSpace space = AmbientSpace::flat(3);
    const Tensor3 g = christoffel_at(space, Eigen::VectorXd::Ones(6));
    for (double v : g.data()) REQUIRE(v == 0.0);
  }
  SECTION("FS chart is normal at the origin") {
    const AmbientSpace space = AmbientSpace::fubini_study(3, 1.0);
    const Tensor3 g = christoffel_at(space, Eigen::VectorXd::Zero(6));
    for (double v : g.data()) REQUIRE(std::abs(v) <= 1e-14);
  }
  SECTION("lower-index symmetry is exact and compatibility holds") {
    const AmbientSpace space = AmbientSpace::fubini_study(2, 1.0);
    DeterministicRng rng(3);
    const Eigen::VectorXd w = random_chart_point(4, rng, 0.8);
    const Tensor3 g = christoffel_at(space, w);
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        for (int c = 0; c < 4; ++c) REQUIRE(g(a, b, c) == g(a, c, b));
    REQUIRE(compatibility_residual(space, w) <= 1e-10);
  }
}

TEST_CASE("complex structure") {
  const AmbientSpace space = AmbientSpace::fubini_study(3, 1.0);
  DeterministicRng rng(11);
  const Eigen::VectorXd w = random_chart_point(6, rng, 0.5);

  SECTION("J e1 = e2 in the interleaved layout") {
    Eigen::VectorXd e1 = Eigen::VectorXd::Zero(6);
    e1[0] = 1.0;
    const Eigen::VectorXd je1 = complex_structure_apply(space, w, e1);
    REQUIRE(je1[1] == 1.0);
    REQUIRE(je1.cwiseAbs().sum() == 1.0);
  }
  SECTION("J^2 = -identity") {
    const Eigen::VectorXd v = random_chart_point(6, rng, 1.0);
    const Eigen::VectorXd jjv =
        complex_structure_apply(space, w, complex_structure_apply(space, w, v));
    REQUIRE((jjv + v).cwiseAbs().maxCoeff() == 0.0);
  }
  SECTION("J is an isometry of the FS metric") {
    const Eigen::MatrixXd G = metric_at(space, w);
    const Eigen::VectorXd u = random_chart_point(6, rng, 1.0);
    const Eigen::VectorXd v = random_chart_point(6, rng, 1.0);
    const Eigen::VectorXd ju = complex_structure_apply(space, w, u);
    const Eigen::VectorXd jv = complex_structure_apply(space, w, v);
    REQUIRE(std::abs(ju.dot(G * jv) - u.dot(G * v)) <= 1e-12);
  }
  SECTION("J-orthogonality as a matrix identity") {
    const Eigen::MatrixXd G = metric_at(space, w);
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(6, 6);
    for (int a = 0; a < 3; ++a) {
      J(2 * a, 2 * a + 1) = -1.0;
      J(2 * a + 1, 2 * a) = 1.0;
    }
    REQUIRE((G - J.transpose() * G * J).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("symplectic form") {
  DeterministicRng rng(13);
  SECTION("omega(v, v) = 0") {
    const AmbientSpace space = AmbientSpace::fubini_study(3, 1.0);
    const Eigen::VectorXd w = random_chart_point(6, rng, 0.4);
    const Eigen::VectorXd v = random_chart_point(6, rng, 1.0);
    REQUIRE(std::abs(symplectic_form(space, w, v, v)) <= 1e-16);
  }
  SECTION("flat standard form: omega(e1, Je1) = 1") {
    const AmbientSpace space = AmbientSpace::flat(3);
    const Eigen::VectorXd w = Eigen::VectorXd::Zero(6);
    Eigen::VectorXd e1 = Eigen::VectorXd::Zero(6);
    e1[0] = 1.0;
    const Eigen::VectorXd je1 = complex_structure_apply(space, w, e1);
    REQUIRE(symplectic_form(space, w, e1, je1) == 1.0);
  }
  SECTION("antisymmetry at a random FS point") {
    const AmbientSpace space = AmbientSpace::fubini_study(3, 1.0);
    const Eigen::VectorXd w = random_chart_point(6, rng, 0.6);
    const Eigen::VectorXd u = random_chart_point(6, rng, 1.0);
    const Eigen::VectorXd v = random_chart_point(6, rng, 1.0);
    REQUIRE(std::abs(symplectic_form(space, w, u, v) +
                     symplectic_form(space, w, v, u)) <= 1e-14);
  }
}

TEST_CASE("ambient constructor contracts") {
  REQUIRE_THROWS_AS(AmbientSpace::fubini_study(3, 0.0), ConfigError);
  REQUIRE_THROWS_AS(AmbientSpace::fubini_study(0, 1.0), ConfigError);
  REQUIRE(AmbientSpace::flat(4).c == 0.0);
  REQUIRE(AmbientSpace::flat(4).real_dim() == 8);
}
