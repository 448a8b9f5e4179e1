#include <catch2/catch_amalgamated.hpp>

#include "lagpinch/identities.hpp"

using namespace lagpinch;

namespace {

RationalCubicTensor random_tensor(int n, std::uint64_t seed,
                                  std::uint64_t trial) {
  DeterministicRng rng = DeterministicRng::substream(seed, n, trial);
  return random_integer_tensor(n, rng);
}

EqualityCaseParams random_equality_params(int n, DeterministicRng& rng) {
  EqualityCaseParams p;
  p.n = n;
  p.a1 = Rational(rng.uniform_int(-9, 9), rng.uniform_int(1, 9));
  p.a2 = Rational(rng.uniform_int(-9, 9), rng.uniform_int(1, 9));
  for (int r = 3; r <= n; ++r) {
    p.b.push_back(Rational(rng.uniform_int(-9, 9), rng.uniform_int(1, 9)));
  }
  return p;
}

}  // namespace

TEST_CASE("multiset-indexed tensor semantics") {
  RationalCubicTensor t(4);
  t.set(3, 1, 2, Rational(7, 3));
  REQUIRE(t(1, 2, 3) == Rational(7, 3));
  REQUIRE(t(2, 3, 1) == Rational(7, 3));
  REQUIRE(t(3, 2, 1) == Rational(7, 3));
  REQUIRE(t(1, 3, 2) == Rational(7, 3));
  REQUIRE(t(1, 1, 3) == Rational(0));
  REQUIRE_THROWS_AS(t(0, 1, 2), DimensionError);
  REQUIRE_THROWS_AS(t(1, 2, 5), DimensionError);
}

TEST_CASE("II_1 decomposition") {
  SECTION("zero tensor") {
    const auto [lhs, rhs] = ii1_sides(RationalCubicTensor(5));
    REQUIRE(lhs == Rational(0));
    REQUIRE(rhs == Rational(0));
  }
  SECTION("hand anchor: diagonal entries 1..4 give -8 on both sides") {
    RationalCubicTensor t(4);
    t.set(1, 1, 1, 1);
    t.set(1, 2, 2, 2);  // h_22^{1*}
    t.set(1, 3, 3, 3);  // h_33^{1*}
    t.set(1, 4, 4, 4);  // h_44^{1*}
    const auto [lhs, rhs] = ii1_sides(t);
    REQUIRE(lhs == Rational(-8));
    REQUIRE(rhs == Rational(-8));
  }
  SECTION("exact equality on random integer tensors") {
    for (const int n : {3, 4, 5, 6}) {
      for (int trial = 0; trial < 1000; ++trial) {
        const RationalCubicTensor t = random_tensor(n, 101, trial);
        const auto [lhs, rhs] = ii1_sides(t);
        REQUIRE(lhs == rhs);
      }
    }
  }
  SECTION("dimension guard") {
    REQUIRE_THROWS_AS(ii1_sides(RationalCubicTensor(2)), DimensionError);
  }
}

TEST_CASE("II_2 decomposition") {
  SECTION("zero tensor") {
    const auto [lhs, rhs] = ii2_sides(RationalCubicTensor(4));
    REQUIRE(lhs == Rational(0));
    REQUIRE(rhs == Rational(0));
  }
  SECTION("n = 3 degenerate inner ranges") {
    for (int trial = 0; trial < 1000; ++trial) {
      const RationalCubicTensor t = random_tensor(3, 202, trial);
      const auto [lhs, rhs] = ii2_sides(t);
      REQUIRE(lhs == rhs);
    }
  }
  SECTION("exact equality for n in {4, 5, 6}") {
    for (const int n : {4, 5, 6}) {
      for (int trial = 0; trial < 1000; ++trial) {
        const RationalCubicTensor t = random_tensor(n, 203, trial);
        const auto [lhs, rhs] = ii2_sides(t);
        REQUIRE(lhs == rhs);
      }
    }
  }
}

TEST_CASE("R_1212 chain") {
  SECTION("zero tensor: all three equal c") {
    const Rational c(7, 2);
    const R1212Chain chain = r1212_chain(RationalCubicTensor(5), c);
    REQUIRE(chain.gauss_form == c);
    REQUIRE(chain.decomposed_form == c);
    REQUIRE(chain.final_bound == c);
  }
  SECTION("equality-case anchor: 9 = 9 = 9") {
    EqualityCaseParams p;
    p.n = 4;
    p.b = {Rational(1), Rational(0)};
    const RationalCubicTensor t = build_equality_case(p);
    REQUIRE(norm_square(t) == Rational(246));
    REQUIRE(norm_square_mean(t) == Rational(484));
    const R1212Chain chain = r1212_chain(t, Rational(0));
    REQUIRE(chain.gauss_form == Rational(9));
    REQUIRE(chain.decomposed_form == Rational(9));
    REQUIRE(chain.final_bound == Rational(9));
  }
  SECTION("random tensors: exact equality and nonnegative residual") {
    for (const int n : {3, 4, 5}) {
      for (int trial = 0; trial < 1000; ++trial) {
        DeterministicRng rng = DeterministicRng::substream(303, n, trial);
        const RationalCubicTensor t = random_integer_tensor(n, rng);
        const Rational c(rng.uniform_int(0, 9), rng.uniform_int(1, 4));
        const R1212Chain chain = r1212_chain(t, c);
        REQUIRE(chain.gauss_form == chain.decomposed_form);
        REQUIRE(chain.gauss_form >= chain.final_bound);
      }
    }
  }
  SECTION("residual reconstructs exactly from the square groups") {
    for (int trial = 0; trial < 200; ++trial) {
      const RationalCubicTensor t = random_tensor(5, 404, trial);
      const R1212Chain chain = r1212_chain(t, Rational(trial % 3));
      REQUIRE(chain.gauss_form - chain.final_bound ==
              r1212_residual_squares(t));
    }
  }
}

TEST_CASE("Bianchi expansion of R_1234") {
  SECTION("zero tensor") {
    const auto [lhs, rhs] = bianchi_expansion_sides(RationalCubicTensor(4));
    REQUIRE(lhs == Rational(0));
    REQUIRE(rhs == Rational(0));
  }
  SECTION("single entry h_{123} = 1 at n = 4") {
    RationalCubicTensor t(4);
    t.set(1, 2, 3, 1);
    const auto [lhs, rhs] = bianchi_expansion_sides(t);
    REQUIRE(lhs == rhs);
  }
  SECTION("exact equality for n in {4, 5, 6, 7}") {
    for (const int n : {4, 5, 6, 7}) {
      for (int trial = 0; trial < 1000; ++trial) {
        const RationalCubicTensor t = random_tensor(n, 505, trial);
        const auto [lhs, rhs] = bianchi_expansion_sides(t);
        REQUIRE(lhs == rhs);
      }
    }
  }
  SECTION("dimension guard") {
    REQUIRE_THROWS_AS(bianchi_expansion_sides(RationalCubicTensor(3)),
                      DimensionError);
  }
}

TEST_CASE("equality-case family") {
  SECTION("zero parameters give the zero tensor") {
    EqualityCaseParams p;
    p.n = 5;
    p.b = {Rational(0), Rational(0), Rational(0)};
    const RationalCubicTensor t = build_equality_case(p);
    REQUIRE(norm_square(t) == Rational(0));
  }
  SECTION("trace anchor: n=4, b3=1 has n H_3 = 22 = 2(2n+3) b_3") {
    EqualityCaseParams p;
    p.n = 4;
    p.b = {Rational(1), Rational(0)};
    const RationalCubicTensor t = build_equality_case(p);
    REQUIRE(trace_times_n(t, 3) == Rational(22));
  }
  SECTION("attains the final bound with zero gap for random parameters") {
    for (int trial = 0; trial < 400; ++trial) {
      DeterministicRng rng = DeterministicRng::substream(606, 0, trial);
      const int n = rng.uniform_int(3, 7);
      const EqualityCaseParams p = random_equality_params(n, rng);
      const RationalCubicTensor t = build_equality_case(p);
      const Rational c(rng.uniform_int(0, 5));
      const R1212Chain chain = r1212_chain(t, c);
      REQUIRE(chain.gauss_form == chain.final_bound);
      REQUIRE(chain.decomposed_form == chain.final_bound);
    }
  }
  SECTION("parameter count is validated") {
    EqualityCaseParams p;
    p.n = 4;
    p.b = {Rational(1)};  // needs two
    REQUIRE_THROWS_AS(build_equality_case(p), DimensionError);
  }
}
