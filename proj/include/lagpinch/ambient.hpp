// Ambient models: flat C^n and one affine chart of CP^n with holomorphic
// sectional curvature 4c. Complex coordinates are stored as interleaved
// real pairs (re_1, im_1, re_2, im_2, ...).
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "lagpinch/common.hpp"
#include "lagpinch/jet.hpp"

namespace lagpinch {

enum class AmbientKind { FlatComplex, FubiniStudyChart };

struct AmbientSpace {
  AmbientKind kind = AmbientKind::FlatComplex;
  int n = 0;       // complex dimension
  double c = 0.0;  // holomorphic sectional curvature is 4c

  static AmbientSpace flat(int n) {
    if (n < 1) throw ConfigError("ambient: n must be >= 1");
    return AmbientSpace{AmbientKind::FlatComplex, n, 0.0};
  }

  static AmbientSpace fubini_study(int n, double c) {
    if (n < 1) throw ConfigError("ambient: n must be >= 1");
    if (!(c > 0.0)) throw ConfigError("fubini_study: c must be positive");
    return AmbientSpace{AmbientKind::FubiniStudyChart, n, c};
  }

  int real_dim() const { return 2 * n; }
};

// Real form of the Fubini-Study Hermitian metric
//   g_{a b-bar} = [(1 + |w|^2) delta_ab - wbar_a w_b] / (c (1 + |w|^2)^2),
// written as a (2n)^2 entry list so it can be evaluated on Dual2 scalars
// and differentiated. With g = A + iB (A symmetric, B antisymmetric) the
// real metric blocks are  [re,re] = [im,im] = A,  [re,im] = B, [im,re] = -B.
template <class T>
std::vector<T> metric_entries(const AmbientSpace& space,
                              const std::vector<T>& w) {
  const int m = space.real_dim();
  if (static_cast<int>(w.size()) != m) {
    throw DimensionError("metric_entries: bad chart point size");
  }
  std::vector<T> g(static_cast<std::size_t>(m) * m,
                   scalar_constant<T>(0.0, w[0]));
  auto at = [&](int r, int s) -> T& { return g[r * m + s]; };

  if (space.kind == AmbientKind::FlatComplex) {
    for (int r = 0; r < m; ++r) at(r, r) = scalar_constant<T>(1.0, w[0]);
    return g;
  }

  double norm2 = 0.0;
  for (const T& wi : w) norm2 += scalar_value(wi) * scalar_value(wi);
  if (!(norm2 <= 1e16)) {
    throw DomainError("metric_entries: |w| too large for the FS chart");
  }

  T r2 = scalar_constant<T>(0.0, w[0]);
  for (const T& wi : w) r2 = r2 + wi * wi;
  const T one_r2 = r2 + 1.0;
  const T den = reciprocal_like(one_r2 * one_r2 * space.c);

  const int n = space.n;
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      const T& pa = w[2 * a];
      const T& qa = w[2 * a + 1];
      const T& pb = w[2 * b];
      const T& qb = w[2 * b + 1];
      T A = (pa * pb + qa * qb) * -1.0;
      if (a == b) A = A + one_r2;
      A = A * den;
      const T B = (qa * pb - pa * qb) * den;
      at(2 * a, 2 * b) = A;
      at(2 * a + 1, 2 * b + 1) = A;
      at(2 * a, 2 * b + 1) = B;
      at(2 * a + 1, 2 * b) = B * -1.0;
    }
  }
  return g;
}

inline Eigen::MatrixXd metric_at(const AmbientSpace& space,
                                 const Eigen::VectorXd& w) {
  const int m = space.real_dim();
  if (space.kind == AmbientKind::FlatComplex) {
    return Eigen::MatrixXd::Identity(m, m);
  }
  std::vector<double> wv(w.data(), w.data() + m);
  const std::vector<double> g = metric_entries(space, wv);
  Eigen::MatrixXd G(m, m);
  for (int r = 0; r < m; ++r)
    for (int s = 0; s < m; ++s) G(r, s) = g[r * m + s];
  return G;
}

// Levi-Civita Gamma^a_{bc} from exact metric derivatives (jet of the metric
// entry map), no hand-coded closed form to mistranscribe.
inline Tensor3 christoffel_at(const AmbientSpace& space,
                              const Eigen::VectorXd& w) {
  const int m = space.real_dim();
  Tensor3 gamma(m);
  if (space.kind == AmbientKind::FlatComplex) return gamma;

  struct MetricMap {
    const AmbientSpace* space;
    template <class T>
    std::vector<T> operator()(const std::vector<T>& p) const {
      return metric_entries(*space, p);
    }
  };
  const Jet2 jet = eval_jet(MetricMap{&space}, w);

  // dg(a, r, s) = d_a g_{rs}
  auto dg = [&](int a, int r, int s) { return jet.first(r * m + s, a); };

  Eigen::MatrixXd G(m, m);
  for (int r = 0; r < m; ++r)
    for (int s = 0; s < m; ++s) G(r, s) = jet.value[r * m + s];
  const Eigen::MatrixXd Ginv = G.inverse();

  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) {
      for (int cc = b; cc < m; ++cc) {
        double sum = 0.0;
        for (int d = 0; d < m; ++d) {
          sum += Ginv(a, d) * (dg(b, d, cc) + dg(cc, d, b) - dg(d, b, cc));
        }
        gamma(a, b, cc) = 0.5 * sum;
        gamma(a, cc, b) = 0.5 * sum;  // lower-index symmetry exact
      }
    }
  }
  return gamma;
}

// Multiplication by i per complex slot: (re, im) -> (-im, re). Holomorphic
// chart, so independent of the base point.
inline Eigen::VectorXd complex_structure_apply(const AmbientSpace& space,
                                               const Eigen::VectorXd& /*w*/,
                                               const Eigen::VectorXd& v) {
  const int m = space.real_dim();
  if (static_cast<int>(v.size()) != m) {
    throw DimensionError("complex_structure_apply: bad vector size");
  }
  Eigen::VectorXd out(m);
  for (int a = 0; a < space.n; ++a) {
    out[2 * a] = -v[2 * a + 1];
    out[2 * a + 1] = v[2 * a];
  }
  return out;
}

// Kaehler form omega(u, v) = G(Ju, v).
inline double symplectic_form(const AmbientSpace& space,
                              const Eigen::VectorXd& w,
                              const Eigen::VectorXd& u,
                              const Eigen::VectorXd& v) {
  const Eigen::MatrixXd G = metric_at(space, w);
  return complex_structure_apply(space, w, u).dot(G * v);
}

}  // namespace lagpinch
