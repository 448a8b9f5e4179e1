#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>
#include <cmath>
#include <limits>

#include "lagpinch/curvature.hpp"
#include "lagpinch/fundforms.hpp"
#include "lagpinch/immersion.hpp"

using namespace lagpinch;

namespace {

FundamentalData family_fund(const ImmersionSpec& spec, std::uint64_t seed,
                            std::uint64_t index, Eigen::VectorXd* u_out = nullptr,
                            SphereChart* chart_out = nullptr) {
  const SpherePoint x = sample_sphere_point(spec.n, seed, index);
  const SphereChart chart = SphereChart::preferred_for(x);
  const Eigen::VectorXd u = spec.family == Family::TotallyGeodesicPlane
                                ? Eigen::VectorXd(x.x.head(spec.n))
                                : chart.to_chart(x);
  const Jet2 jet = immersion_jet(spec, u, chart);
  const PointFrame frame = adapted_frame(jet, spec.ambient);
  if (u_out != nullptr) *u_out = u;
  if (chart_out != nullptr) *chart_out = chart;
  return second_fundamental_tensor(jet, spec.ambient, frame);
}

// The equality-case coefficients for n = 4, b3 = 1, a1 = a2 = 0 as floats.
Tensor3 equality_case_float_tensor() {
  Tensor3 h(4);
  auto set_sym = [&](int i, int j, int k, double v) {
    h(i, j, k) = v; h(i, k, j) = v; h(j, i, k) = v;
    h(j, k, i) = v; h(k, i, j) = v; h(k, j, i) = v;
  };
  set_sym(0, 0, 2, 3.0);  // h_11^3
  set_sym(1, 1, 2, 3.0);  // h_22^3
  set_sym(3, 3, 2, 4.0);  // h_44^3
  set_sym(2, 2, 2, 12.0); // h_33^3
  return h;
}

double relative_sup_difference(const CurvatureTensor& a,
                               const CurvatureTensor& b) {
  double diff = 0.0, scale = 0.0;
  const int n = a.n;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          diff = std::max(diff, std::abs(a.R(i, j, k, l) - b.R(i, j, k, l)));
          scale = std::max(scale, std::abs(a.R(i, j, k, l)));
        }
  return diff / (1.0 + scale);
}

}  // namespace

TEST_CASE("gauss curvature tensor") {
  SECTION("totally geodesic in a space form") {
    const FundamentalData fund = fundamental_from_tensor(Tensor3(3), 1.0);
    const CurvatureTensor R = gauss_curvature(fund, 1.0);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k)
          for (int l = 0; l < 3; ++l) {
            const double expected = (i == k ? 1.0 : 0.0) * (j == l ? 1.0 : 0.0) -
                                    (i == l ? 1.0 : 0.0) * (j == k ? 1.0 : 0.0);
            REQUIRE(R.R(i, j, k, l) == expected);
          }
    const CurvatureTensor R0 =
        gauss_curvature(fundamental_from_tensor(Tensor3(3), 0.0), 0.0);
    for (double v : R0.R.data()) REQUIRE(v == 0.0);
  }
  SECTION("equality-case tensor gives R_1212 = 9") {
    const FundamentalData fund =
        fundamental_from_tensor(equality_case_float_tensor(), 0.0);
    const CurvatureTensor R = gauss_curvature(fund, 0.0);
    REQUIRE(R.R(0, 1, 0, 1) == 9.0);
    REQUIRE(fund.S == 246.0);
    REQUIRE(16.0 * fund.H * fund.H == Catch::Approx(484.0).epsilon(1e-14));
  }
  SECTION("algebraic symmetries and first Bianchi at sampled points") {
    const ImmersionSpec specs[] = {ImmersionSpec::whitney_c(3),
                                   ImmersionSpec::castro(4, 2.5),
                                   ImmersionSpec::whitney_cp(3, 0.6)};
    for (const ImmersionSpec& spec : specs) {
      for (int k = 0; k < 5; ++k) {
        const FundamentalData fund = family_fund(spec, 5, k);
        const CurvatureTensor R = gauss_curvature(fund, spec.ambient.c);
        REQUIRE(curvature_symmetry_residual(R) <= 1e-10);
        REQUIRE(bianchi_residual(R) <= 1e-10);
      }
    }
  }
}

TEST_CASE("intrinsic curvature oracle") {
  SECTION("plane is flat") {
    const ImmersionSpec spec = ImmersionSpec::geodesic_plane(3);
    Eigen::Vector3d u(0.2, -0.7, 0.4);
    const CurvatureTensor R =
        intrinsic_curvature_oracle(spec, u, SphereChart{Pole::North});
    for (double v : R.R.data()) REQUIRE(std::abs(v) <= 1e-8);
  }
  SECTION("whitney: oracle matches the Gauss form") {
    const ImmersionSpec spec = ImmersionSpec::whitney_c(3);
    Eigen::VectorXd u;
    SphereChart chart;
    const FundamentalData fund = family_fund(spec, 12, 4, &u, &chart);
    const CurvatureTensor gauss = gauss_curvature(fund, 0.0);
    const CurvatureTensor oracle = intrinsic_curvature_oracle(spec, u, chart);
    REQUIRE(relative_sup_difference(gauss, oracle) <= 1e-5);
  }
  SECTION("whitney-cp: oracle matches in the FS ambient") {
    const ImmersionSpec spec = ImmersionSpec::whitney_cp(3, 0.5);
    Eigen::VectorXd u;
    SphereChart chart;
    const FundamentalData fund = family_fund(spec, 14, 1, &u, &chart);
    const CurvatureTensor gauss = gauss_curvature(fund, 1.0);
    const CurvatureTensor oracle = intrinsic_curvature_oracle(spec, u, chart);
    REQUIRE(relative_sup_difference(gauss, oracle) <= 1e-4);
  }
}

TEST_CASE("sectional and Ricci functionals") {
  SECTION("space form values") {
    const double c = 0.7;
    const FundamentalData fund = fundamental_from_tensor(Tensor3(4), c);
    const CurvatureTensor R = gauss_curvature(fund, c);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        if (i == j) continue;
        REQUIRE(sectional(R, i, j) == Catch::Approx(c).epsilon(1e-15));
      }
    Eigen::VectorXd u = Eigen::VectorXd::Zero(4);
    u[2] = 1.0;
    REQUIRE(ricci(R, u) == Catch::Approx(3.0 * c).epsilon(1e-15));
  }
  SECTION("rotation invariance of Ric(u)") {
    DeterministicRng rng(3);
    const FundamentalData fund =
        fundamental_from_tensor(random_symmetric_tensor(4, rng), 0.2);
    const CurvatureTensor R = gauss_curvature(fund, 0.2);
    Eigen::VectorXd u(4);
    for (int i = 0; i < 4; ++i) u[i] = rng.gaussian();
    u.normalize();
    const double direct = ricci(R, u);

    // rotate the frame, transform both the tensor and the direction
    Eigen::MatrixXd M(4, 4);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) M(i, j) = rng.gaussian();
    const Eigen::MatrixXd Q = orthonormalize_columns(M);
    CurvatureTensor Rrot(4);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k)
          for (int l = 0; l < 4; ++l) {
            double v = 0.0;
            for (int a = 0; a < 4; ++a)
              for (int b = 0; b < 4; ++b)
                for (int cc = 0; cc < 4; ++cc)
                  for (int d = 0; d < 4; ++d)
                    v += R.R(a, b, cc, d) * Q(a, i) * Q(b, j) * Q(cc, k) *
                         Q(d, l);
            Rrot.R(i, j, k, l) = v;
          }
    const Eigen::VectorXd urot = Q.transpose() * u;
    REQUIRE(std::abs(ricci(Rrot, urot) - direct) <= 1e-9);
  }
  SECTION("Ricci lower bound on immersion data") {
    DeterministicRng rng(9);
    const ImmersionSpec specs[] = {ImmersionSpec::whitney_c(3),
                                   ImmersionSpec::castro(3, 3.0),
                                   ImmersionSpec::whitney_cp(3, 0.4)};
    for (const ImmersionSpec& spec : specs) {
      for (int k = 0; k < 6; ++k) {
        const FundamentalData fund = family_fund(spec, 77, k);
        const CurvatureTensor R = gauss_curvature(fund, spec.ambient.c);
        const int n = spec.n;
        const double n2H2 = static_cast<double>(n) * n * fund.H * fund.H;
        const double bound =
            0.5 * (n - 1) *
            (6.0 * n2H2 / (2 * n + 3) + 2.0 * spec.ambient.c - fund.S);
        Eigen::VectorXd u(n);
        for (int i = 0; i < n; ++i) u[i] = rng.gaussian();
        u.normalize();
        REQUIRE(ricci(R, u) >= bound - 1e-8 * (1.0 + fund.S));
      }
    }
  }
}

TEST_CASE("r1212 lower bound gap") {
  SECTION("totally geodesic: zero gap for any c") {
    for (const double c : {0.0, 0.5, 2.0}) {
      const FundamentalData fund = fundamental_from_tensor(Tensor3(4), c);
      const CurvatureTensor R = gauss_curvature(fund, c);
      REQUIRE(std::abs(r1212_lower_bound_gap(R, fund, c)) <= 1e-15);
    }
  }
  SECTION("equality-case tensor: zero gap") {
    const FundamentalData fund =
        fundamental_from_tensor(equality_case_float_tensor(), 0.0);
    const CurvatureTensor R = gauss_curvature(fund, 0.0);
    REQUIRE(std::abs(r1212_lower_bound_gap(R, fund, 0.0)) <= 1e-12);
  }
  SECTION("randomized: gap is never negative") {
    for (const int n : {3, 4, 5}) {
      for (int trial = 0; trial < 2000; ++trial) {
        DeterministicRng rng = DeterministicRng::substream(555, n, trial);
        const double c = rng.uniform(0.0, 1.5);
        const FundamentalData fund =
            fundamental_from_tensor(random_symmetric_tensor(n, rng), c);
        const CurvatureTensor R = gauss_curvature(fund, c);
        REQUIRE(r1212_lower_bound_gap(R, fund, c) >=
                -1e-9 * (1.0 + fund.S));
      }
    }
  }
}

TEST_CASE("isotropic excess") {
  SECTION("space form: c (1 + l^2 + m^2 + l^2 m^2) for any frame") {
    const double c = 0.9;
    const FundamentalData fund = fundamental_from_tensor(Tensor3(5), c);
    const CurvatureTensor R = gauss_curvature(fund, c);
    DeterministicRng rng(2);
    for (int k = 0; k < 10; ++k) {
      const IsotropicProbe probe = random_isotropic_probe(5, rng);
      const double l = probe.lambda, m = probe.mu;
      const double expected = c * (1.0 + l * l) * (1.0 + m * m);
      REQUIRE(isotropic_excess(R, probe) ==
              Catch::Approx(expected).margin(1e-12));
    }
  }
  SECTION("per-frame lower bound on immersion data") {
    DeterministicRng rng(8);
    const ImmersionSpec specs[] = {ImmersionSpec::whitney_c(4),
                                   ImmersionSpec::castro(4, 3.0)};
    for (const ImmersionSpec& spec : specs) {
      for (int k = 0; k < 5; ++k) {
        const FundamentalData fund = family_fund(spec, 31, k);
        const CurvatureTensor R = gauss_curvature(fund, 0.0);
        const double n2H2 = 16.0 * fund.H * fund.H;
        const double pinch = 6.0 * n2H2 / 11.0 - fund.S;
        for (int p = 0; p < 50; ++p) {
          const IsotropicProbe probe = random_isotropic_probe(4, rng);
          const double l = probe.lambda, m = probe.mu;
          const double w = 1.0 + l * l + m * m + l * l * m * m;
          REQUIRE(isotropic_excess(R, probe) >=
                  0.5 * w * pinch - 1e-9 * (1.0 + fund.S));
        }
      }
    }
  }
  SECTION("dimension guard") {
    const FundamentalData fund = fundamental_from_tensor(Tensor3(3), 0.0);
    const CurvatureTensor R = gauss_curvature(fund, 0.0);
    DeterministicRng rng(4);
    REQUIRE_THROWS_AS(random_isotropic_probe(3, rng), DimensionError);
    REQUIRE_THROWS_AS(min_isotropic_excess(R, 1, 1), DimensionError);
  }
}

TEST_CASE("closed-form (lambda, mu) minimization") {
  SECTION("A=B=C=D=E=1: minimum is 1 at the origin") {
    const detail::LambdaMuMin lm =
        detail::minimize_lambda_mu(detail::ExcessCoefficients{1, 1, 1, 1, 1});
    REQUIRE(lm.value == 1.0);
    REQUIRE(lm.lambda == 0.0);
    REQUIRE(lm.mu == 0.0);
  }
  SECTION("agrees with a dense grid on random coefficients") {
    DeterministicRng rng(6);
    for (int trial = 0; trial < 300; ++trial) {
      const detail::ExcessCoefficients k{
          rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2),
          rng.uniform(-2, 2), rng.uniform(-2, 2)};
      const detail::LambdaMuMin lm = detail::minimize_lambda_mu(k);
      auto f = [&](double l, double m) {
        return k.a + k.b * l * l + k.c * m * m + k.d * l * l * m * m -
               2.0 * k.e * l * m;
      };
      double grid_min = std::numeric_limits<double>::infinity();
      for (int i = 0; i <= 200; ++i) {
        for (int j = 0; j <= 200; ++j) {
          grid_min = std::min(
              grid_min, f(-1.0 + 2.0 * i / 200.0, -1.0 + 2.0 * j / 200.0));
        }
      }
      REQUIRE(lm.value <= grid_min + 1e-12);
      REQUIRE(lm.value >= grid_min - 1e-3);
    }
  }
}

TEST_CASE("global isotropic-excess minimization") {
  SECTION("space form n=4: minimum c at lambda = mu = 0") {
    const FundamentalData fund = fundamental_from_tensor(Tensor3(4), 1.0);
    const CurvatureTensor R = gauss_curvature(fund, 1.0);
    const MinExcessResult res = min_isotropic_excess(R, 4, 11);
    REQUIRE(std::abs(res.value - 1.0) <= 1e-9);
    REQUIRE(std::abs(res.argmin.lambda) <= 1e-6);
    REQUIRE(std::abs(res.argmin.mu) <= 1e-6);
    REQUIRE(frame_orthonormality_residual(res.argmin) <= 1e-10);
  }
  SECTION("zero tensor: minimum 0") {
    const FundamentalData fund = fundamental_from_tensor(Tensor3(4), 0.0);
    const CurvatureTensor R = gauss_curvature(fund, 0.0);
    REQUIRE(std::abs(min_isotropic_excess(R, 2, 5).value) <= 1e-12);
  }
  SECTION("whitney n=4: bounded below by half the pinching slack and above "
          "by random probing") {
    const ImmersionSpec spec = ImmersionSpec::whitney_c(4);
    const FundamentalData fund = family_fund(spec, 41, 0);
    const CurvatureTensor R = gauss_curvature(fund, 0.0);
    const double sigma = 6.0 * 16.0 * fund.H * fund.H / 11.0 - fund.S;
    REQUIRE(sigma > 0.0);

    const MinExcessResult res = min_isotropic_excess(R, 12, 2024);
    REQUIRE(res.value >= 0.5 * sigma - 1e-8);

    DeterministicRng rng(88);
    double probe_min = std::numeric_limits<double>::infinity();
    for (int p = 0; p < 20000; ++p) {
      probe_min =
          std::min(probe_min, isotropic_excess(R, random_isotropic_probe(4, rng)));
    }
    REQUIRE(res.value <= probe_min + 1e-12);
  }
  SECTION("optimizer is deterministic per seed") {
    DeterministicRng rng(123);
    const FundamentalData fund =
        fundamental_from_tensor(random_symmetric_tensor(4, rng), 0.0);
    const CurvatureTensor R = gauss_curvature(fund, 0.0);
    const MinExcessResult a = min_isotropic_excess(R, 6, 99);
    const MinExcessResult b = min_isotropic_excess(R, 6, 99);
    REQUIRE(a.value == b.value);
    REQUIRE(a.argmin.lambda == b.argmin.lambda);
    REQUIRE((a.argmin.frame - b.argmin.frame).cwiseAbs().maxCoeff() == 0.0);
  }
}
