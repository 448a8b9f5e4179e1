// Exact rational verification of the algebraic skeleton behind the R_1212
// lower bound: the II_1/II_2 trace decompositions, the full square
// decomposition of R_1212, the first-Bianchi expansion of R_1234, and the
// equality-case tensor family. Everything here is exact arithmetic; the
// floating-point pipeline never feeds this module.
#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <array>
#include <map>
#include <utility>
#include <vector>

#include "lagpinch/common.hpp"

namespace lagpinch {

using Rational = boost::multiprecision::cpp_rational;

// Totally symmetric cubic tensor over the rationals, stored by sorted index
// multiset {i <= j <= k}, 1-based. Reads of any index permutation return
// the same entry; absent multisets read as zero.
class RationalCubicTensor {
 public:
  explicit RationalCubicTensor(int n) : n_(n) {
    if (n < 1) throw DimensionError("RationalCubicTensor: n must be >= 1");
  }

  int dim() const { return n_; }

  void set(int i, int j, int k, Rational v) {
    entries_[key(i, j, k)] = std::move(v);
  }

  Rational operator()(int i, int j, int k) const {
    const auto it = entries_.find(key(i, j, k));
    return it == entries_.end() ? Rational(0) : it->second;
  }

 private:
  std::array<int, 3> key(int i, int j, int k) const {
    if (i < 1 || i > n_ || j < 1 || j > n_ || k < 1 || k > n_) {
      throw DimensionError("RationalCubicTensor: index out of range");
    }
    std::array<int, 3> a{i, j, k};
    if (a[0] > a[1]) std::swap(a[0], a[1]);
    if (a[1] > a[2]) std::swap(a[1], a[2]);
    if (a[0] > a[1]) std::swap(a[0], a[1]);
    return a;
  }

  int n_;
  std::map<std::array<int, 3>, Rational> entries_;
};

// n H_r = sum_j h_{jj}^{r*}
inline Rational trace_times_n(const RationalCubicTensor& t, int r) {
  Rational s(0);
  for (int j = 1; j <= t.dim(); ++j) s += t(j, j, r);
  return s;
}

// S = sum over all ordered triples (i,j,k) of h_{ij}^{k*} squared.
inline Rational norm_square(const RationalCubicTensor& t) {
  Rational s(0);
  const int n = t.dim();
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j)
      for (int k = 1; k <= n; ++k) {
        const Rational v = t(i, j, k);
        s += v * v;
      }
  return s;
}

// n^2 H^2 = sum_r (n H_r)^2.
inline Rational norm_square_mean(const RationalCubicTensor& t) {
  Rational s(0);
  for (int r = 1; r <= t.dim(); ++r) {
    const Rational tr = trace_times_n(t, r);
    s += tr * tr;
  }
  return s;
}

namespace detail {

inline void require_dim(const RationalCubicTensor& t, int min_n,
                        const char* what) {
  if (t.dim() < min_n) throw DimensionError(what);
}

// The shared bracket  sum_{j>=3} (h_11^r + h_22^r) h_jj^r
//                     + sum_{3<=i<j} h_ii^r h_jj^r  -  (subtracted squares).
inline Rational ii_bracket(const RationalCubicTensor& t, int r,
                           bool squares_skip_r_only) {
  const int n = t.dim();
  Rational b(0);
  const Rational head = t(1, 1, r) + t(2, 2, r);
  for (int j = 3; j <= n; ++j) b += head * t(j, j, r);
  for (int i = 3; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) b += t(i, i, r) * t(j, j, r);
  if (squares_skip_r_only) {
    for (int j = 1; j <= n; ++j) {
      if (j == r) continue;
      const Rational v = t(j, j, r);
      b -= v * v;
    }
  } else {
    for (int j = 3; j <= n; ++j) {
      const Rational v = t(j, j, r);
      b -= v * v;
    }
  }
  return b;
}

// Square groups of the r-th inner block of the II_2 decomposition, without
// the 1/(2(2n+3)) prefactor.
inline Rational ii2_square_group(const RationalCubicTensor& t, int r) {
  const int n = t.dim();
  Rational s(0);
  const Rational head = t(1, 1, r) + t(2, 2, r);
  for (int j = 3; j <= n; ++j) {
    if (j == r) continue;
    const Rational d = 2 * head - 3 * t(j, j, r);
    s += d * d;
  }
  {
    const Rational d = t(1, 1, r) - t(2, 2, r);
    s += (2 * n + 3) * d * d;
  }
  for (int i = 3; i <= n; ++i) {
    if (i == r) continue;
    for (int j = i + 1; j <= n; ++j) {
      if (j == r) continue;
      const Rational d = t(i, i, r) - t(j, j, r);
      s += 6 * d * d;
    }
  }
  for (int j = 3; j <= n; ++j) {
    if (j == r) continue;
    const Rational d = t(r, r, r) - 3 * t(j, j, r);
    s += 2 * d * d;
  }
  {
    const Rational d = t(r, r, r) - 2 * head;
    s += 3 * d * d;
  }
  return s;
}

// Square groups of the r-th block (r = 1, 2) of the II_1 decomposition,
// without the 1/(2(n+1)) prefactor.
inline Rational ii1_square_group(const RationalCubicTensor& t, int r) {
  const int n = t.dim();
  Rational s(0);
  const Rational head = t(1, 1, r) + t(2, 2, r);
  for (int j = 3; j <= n; ++j) {
    const Rational d = head - 3 * t(j, j, r);
    s += d * d;
  }
  for (int i = 3; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) {
      const Rational d = t(i, i, r) - t(j, j, r);
      s += 3 * d * d;
    }
  return s;
}

}  // namespace detail

// II_1 both ways: the defining trace form and its square decomposition.
// They agree identically for every tensor.
inline std::pair<Rational, Rational> ii1_sides(const RationalCubicTensor& t) {
  detail::require_dim(t, 3, "ii1_sides: n must be >= 3");
  const int n = t.dim();
  Rational lhs(0), rhs(0);
  for (int r = 1; r <= 2; ++r) {
    lhs -= detail::ii_bracket(t, r, /*squares_skip_r_only=*/false);
    const Rational tr = trace_times_n(t, r);
    rhs += detail::ii1_square_group(t, r) - (n - 2) * tr * tr;
  }
  rhs /= 2 * (n + 1);
  return {lhs, rhs};
}

// II_2 both ways, for the r >= 3 block.
inline std::pair<Rational, Rational> ii2_sides(const RationalCubicTensor& t) {
  detail::require_dim(t, 3, "ii2_sides: n must be >= 3");
  const int n = t.dim();
  Rational lhs(0), rhs(0);
  for (int r = 3; r <= n; ++r) {
    lhs -= detail::ii_bracket(t, r, /*squares_skip_r_only=*/true);
    const Rational tr = trace_times_n(t, r);
    rhs += Rational(-(2 * n - 3)) * tr * tr / (2 * (2 * n + 3)) +
           detail::ii2_square_group(t, r) / (2 * (2 * n + 3));
  }
  return {lhs, rhs};
}

struct R1212Chain {
  Rational gauss_form;       // c + sum_r (h_11^r h_22^r - (h_12^r)^2)
  Rational decomposed_form;  // bound + explicit square groups
  Rational final_bound;      // (1/2)(6 n^2 H^2/(2n+3) + 2c - S)
};

// Sum of all explicit square groups of the decomposition (everything that
// sits between R_1212 and the final bound). Exposed so the residual
// gauss_form - final_bound can be reconstructed independently.
inline Rational r1212_residual_squares(const RationalCubicTensor& t) {
  detail::require_dim(t, 3, "r1212_chain: n must be >= 3");
  const int n = t.dim();
  Rational val(0);

  const Rational trace1 = trace_times_n(t, 1);
  const Rational trace2 = trace_times_n(t, 2);
  val += Rational(3) * (trace1 * trace1 + trace2 * trace2) /
         (2 * (n + 1) * (2 * n + 3));

  for (int j = 3; j <= n; ++j) {
    const Rational v = t(1, 2, j);
    val += 2 * v * v;
  }
  for (int i = 3; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) {
      const Rational v = t(i, j, 1);
      val += 3 * v * v;
    }
  for (int i = 2; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j)
      for (int r = j + 1; r <= n; ++r) {
        const Rational v = t(i, j, r);
        val += 3 * v * v;
      }

  for (int r = 1; r <= 2; ++r) {
    val += detail::ii1_square_group(t, r) / (2 * (n + 1));
  }
  for (int r = 3; r <= n; ++r) {
    val += detail::ii2_square_group(t, r) / (2 * (2 * n + 3));
  }
  return val;
}

inline R1212Chain r1212_chain(const RationalCubicTensor& t,
                              const Rational& c) {
  detail::require_dim(t, 3, "r1212_chain: n must be >= 3");
  const int n = t.dim();

  R1212Chain out;
  out.gauss_form = c;
  for (int r = 1; r <= n; ++r) {
    const Rational v12 = t(1, 2, r);
    out.gauss_form += t(1, 1, r) * t(2, 2, r) - v12 * v12;
  }

  out.final_bound =
      (Rational(6) * norm_square_mean(t) / (2 * n + 3) + 2 * c -
       norm_square(t)) /
      2;

  out.decomposed_form = out.final_bound + r1212_residual_squares(t);
  return out;
}

// -R_1234 via the Gauss equation versus the grouped first-Bianchi
// expansion (with the total-symmetry reading of the normal indices).
inline std::pair<Rational, Rational> bianchi_expansion_sides(
    const RationalCubicTensor& t) {
  detail::require_dim(t, 4, "bianchi_expansion_sides: n must be >= 4");
  const int n = t.dim();

  Rational lhs(0);
  for (int r = 1; r <= n; ++r) {
    lhs += t(1, 4, r) * t(2, 3, r) - t(1, 3, r) * t(2, 4, r);
  }

  Rational rhs(0);
  for (int r = 5; r <= n; ++r) {
    rhs += t(1, 4, r) * t(2, 3, r) - t(1, 3, r) * t(2, 4, r);
  }
  rhs += (t(3, 3, 2) - t(1, 1, 2)) * t(3, 4, 1) +
         (t(1, 1, 4) - t(3, 3, 4)) * t(1, 2, 3) +
         (t(1, 1, 2) - t(4, 4, 2)) * t(3, 4, 1) +
         (t(4, 4, 3) - t(1, 1, 3)) * t(1, 2, 4) +
         (t(2, 2, 1) - t(3, 3, 1)) * t(2, 3, 4) +
         (t(3, 3, 4) - t(2, 2, 4)) * t(2, 3, 1) +
         (t(4, 4, 1) - t(2, 2, 1)) * t(2, 3, 4) +
         (t(2, 2, 3) - t(4, 4, 3)) * t(1, 2, 4);
  return {lhs, rhs};
}

// Parameters of the family attaining the R_1212 lower bound with zero gap.
struct EqualityCaseParams {
  int n = 3;
  Rational a1 = 0;
  Rational a2 = 0;
  std::vector<Rational> b;  // b[r] for r = 3..n, stored from index 0
};

inline RationalCubicTensor build_equality_case(const EqualityCaseParams& p) {
  if (p.n < 3) throw DimensionError("build_equality_case: n must be >= 3");
  if (static_cast<int>(p.b.size()) != p.n - 2) {
    throw DimensionError("build_equality_case: need exactly n-2 b values");
  }
  RationalCubicTensor t(p.n);
  t.set(1, 1, 1, p.a1);
  t.set(1, 1, 2, p.a2);
  t.set(1, 2, 2, -p.a1);
  t.set(2, 2, 2, -p.a2);
  for (int r = 3; r <= p.n; ++r) {
    const Rational& br = p.b[r - 3];
    t.set(1, 1, r, 3 * br);
    t.set(2, 2, r, 3 * br);
    for (int j = 3; j <= p.n; ++j) {
      if (j != r) t.set(j, j, r, 4 * br);
    }
    t.set(r, r, r, 12 * br);
  }
  return t;
}

// Uniform random integer entries on every index multiset; the standard
// randomized exact check for fixed-degree polynomial identities.
inline RationalCubicTensor random_integer_tensor(int n, DeterministicRng& rng,
                                                 int lo = -9, int hi = 9) {
  RationalCubicTensor t(n);
  for (int i = 1; i <= n; ++i)
    for (int j = i; j <= n; ++j)
      for (int k = j; k <= n; ++k) t.set(i, j, k, rng.uniform_int(lo, hi));
  return t;
}

}  // namespace lagpinch
