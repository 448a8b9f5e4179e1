#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "lagpinch/curvature.hpp"
#include "lagpinch/immersion.hpp"
#include "lagpinch/pinch.hpp"

using namespace lagpinch;

TEST_CASE("castro ratio") {
  SECTION("q = 2 reduces to the Whitney ratio 3/(n+2)") {
    for (const int n : {3, 4, 5, 8}) {
      REQUIRE(castro_ratio(n, 2.0) ==
              Catch::Approx(3.0 / (n + 2.0)).epsilon(1e-15));
    }
  }
  SECTION("n = 3, q = 3 gives 22/36") {
    REQUIRE(castro_ratio(3, 3.0) == Catch::Approx(22.0 / 36.0).epsilon(1e-15));
  }
  SECTION("n = 3, q = 3 + sqrt(6) collapses to 2/3") {
    const double q = 3.0 + std::sqrt(6.0);
    REQUIRE(std::abs(castro_ratio(3, q) - 2.0 / 3.0) <= 1e-12);
  }
  SECTION("domain errors") {
    REQUIRE_THROWS_AS(castro_ratio(3, 1.0), DomainError);
    REQUIRE_THROWS_AS(castro_ratio(2, 2.0), DomainError);
  }
}

TEST_CASE("castro admissibility bound") {
  SECTION("n = 3: 3 + sqrt(6)") {
    REQUIRE(std::abs(castro_q_bound(3) - (3.0 + std::sqrt(6.0))) <= 1e-14);
    REQUIRE(castro_q_bound(3) == Catch::Approx(5.449489742783178).margin(1e-12));
  }
  SECTION("n = 4: 2 + (3 + sqrt(99))/5") {
    REQUIRE(castro_q_bound(4) ==
            Catch::Approx(2.0 + (3.0 + std::sqrt(99.0)) / 5.0).margin(1e-14));
    REQUIRE(castro_q_bound(4) == Catch::Approx(4.58997).margin(1e-5));
  }
  SECTION("the bound is exactly where the ratio hits 3/(n + 3/2)") {
    for (int n = 3; n <= 8; ++n) {
      const double ratio_at_bound = castro_ratio(n, castro_q_bound(n));
      REQUIRE(std::abs(ratio_at_bound - 3.0 / (n + 1.5)) <= 1e-12);
    }
  }
  SECTION("domain error below n = 3") {
    REQUIRE_THROWS_AS(castro_q_bound(2), DomainError);
  }
}

TEST_CASE("pinch verdicts") {
  SECTION("totally geodesic in CP^n: lower gap 0, upper gap 2") {
    const FundamentalData fund = fundamental_from_tensor(Tensor3(3), 1.0);
    const PinchVerdict v = verdict(fund, 3, 1.0, 1e-9);
    REQUIRE(v.lower_gap == 0.0);
    REQUIRE(v.upper_gap == 2.0);
    REQUIRE(v.satisfies_1_4);
    REQUIRE(v.satisfies_1_5);
  }
  SECTION("whitney n=3: equality below, strict slack above") {
    const ImmersionSpec spec = ImmersionSpec::whitney_c(3);
    for (int k = 0; k < 10; ++k) {
      const SpherePoint x = sample_sphere_point(3, 50, k);
      const SphereChart chart = SphereChart::preferred_for(x);
      const Eigen::VectorXd u = chart.to_chart(x);
      const Jet2 jet = immersion_jet(spec, u, chart);
      const PointFrame frame = adapted_frame(jet, spec.ambient);
      const FundamentalData fund =
          second_fundamental_tensor(jet, spec.ambient, frame);
      const PinchVerdict v = verdict(fund, 3, 0.0, 1e-9);
      REQUIRE(std::abs(v.lower_gap) <= 1e-8 * (1.0 + fund.S));
      const double n2H2 = 9.0 * fund.H * fund.H;
      const double expected_upper = 3.0 * n2H2 * (1.0 / 4.5 - 1.0 / 5.0);
      REQUIRE(v.upper_gap == Catch::Approx(expected_upper).margin(1e-8));
      REQUIRE(v.upper_gap > 0.0);
      REQUIRE(v.satisfies_1_4);
      REQUIRE(v.satisfies_1_5);
    }
  }
  SECTION("castro q = 6 > bound violates the pinching at generic points") {
    const ImmersionSpec spec = ImmersionSpec::castro(3, 6.0);
    REQUIRE(castro_ratio(3, 6.0) > 2.0 / 3.0);
    int violations = 0;
    for (int k = 0; k < 10; ++k) {
      const SpherePoint x = sample_sphere_point(3, 51, k);
      const SphereChart chart = SphereChart::preferred_for(x);
      const Eigen::VectorXd u = chart.to_chart(x);
      const Jet2 jet = immersion_jet(spec, u, chart);
      const PointFrame frame = adapted_frame(jet, spec.ambient);
      const FundamentalData fund =
          second_fundamental_tensor(jet, spec.ambient, frame);
      const PinchVerdict v = verdict(fund, 3, 0.0, 1e-9);
      if (!v.satisfies_1_5) ++violations;
      REQUIRE(v.satisfies_1_4);
    }
    REQUIRE(violations == 10);
  }
}
