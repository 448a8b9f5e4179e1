// First and second fundamental forms in an adapted Lagrangian frame:
// induced metric, orthonormal tangent frame with normals Je_i, the totally
// symmetric coefficients h_{ij}^{k*}, mean curvature and S, plus the
// shape-operator identity check.
#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "lagpinch/ambient.hpp"
#include "lagpinch/common.hpp"
#include "lagpinch/jet.hpp"

namespace lagpinch {

inline constexpr double kRankFloor = 1e-12;
inline constexpr double kSymmetryHardLimit = 1e-6;

struct PointFrame {
  Eigen::VectorXd base;         // ambient chart coordinates
  Eigen::MatrixXd tangent;      // 2n x n, columns e_1..e_n
  Eigen::MatrixXd normal;       // 2n x n, columns Je_1..Je_n
  Eigen::MatrixXd chart_coeff;  // n x n, e_i = sum_a chart_coeff(a,i) d_a phi
};

struct FundamentalData {
  int n = 0;
  Tensor3 h;                 // h(i,j,k) = coefficient of II(e_i,e_j) on Je_k
  Eigen::VectorXd hvec;      // mean curvature components on Je_k
  double H = 0.0;            // |hvec|
  double S = 0.0;            // sum of squares of all h entries
  double c = 0.0;            // ambient curvature parameter
  double symmetry_residual = 0.0;

  // Identical to hvec[r] by the trace definition; kept as the named view.
  double per_normal_mean(int r) const { return hvec[r]; }
};

inline Eigen::MatrixXd induced_metric(const Jet2& jet,
                                      const AmbientSpace& space) {
  const Eigen::MatrixXd G = metric_at(space, jet.value);
  Eigen::MatrixXd g = jet.first.transpose() * G * jet.first;
  g = 0.5 * (g + g.transpose()).eval();
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
  if (es.eigenvalues().minCoeff() < kRankFloor) {
    throw RankDeficiencyError("induced_metric: immersion rank-deficient");
  }
  return g;
}

// Gram-Schmidt of the coordinate tangent vectors under the ambient metric,
// in the given order (defaults to coordinate order); normals are J applied
// to the tangents. Realized through the Cholesky factor of the induced
// metric, which yields exactly the classical triangular GS coefficients.
inline PointFrame adapted_frame(const Jet2& jet, const AmbientSpace& space,
                                std::vector<int> order = {}) {
  const int n = jet.chart_dim();
  if (order.empty()) {
    order.resize(n);
    std::iota(order.begin(), order.end(), 0);
  }
  const Eigen::MatrixXd g = induced_metric(jet, space);

  Eigen::MatrixXd g_perm(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g_perm(i, j) = g(order[i], order[j]);

  const Eigen::LLT<Eigen::MatrixXd> llt(g_perm);
  if (llt.info() != Eigen::Success) {
    throw RankDeficiencyError("adapted_frame: Cholesky failed");
  }
  // e_i = sum_a C(a,i) t_{order[a]} with C = L^{-T}
  Eigen::MatrixXd C = Eigen::MatrixXd::Identity(n, n);
  llt.matrixL().transpose().solveInPlace(C);

  PointFrame frame;
  frame.base = jet.value;
  frame.chart_coeff = Eigen::MatrixXd::Zero(n, n);
  for (int a = 0; a < n; ++a) {
    frame.chart_coeff.row(order[a]) = C.row(a);
  }
  frame.tangent = jet.first * frame.chart_coeff;
  frame.normal.resize(2 * n, n);
  for (int i = 0; i < n; ++i) {
    frame.normal.col(i) =
        complex_structure_apply(space, frame.base, frame.tangent.col(i));
  }
  return frame;
}

// Largest deviation of G(e_i, Je_j) from zero: how Lagrangian the tangent
// plane actually is at this point.
inline double lagrangian_residual(const PointFrame& frame,
                                  const AmbientSpace& space) {
  const Eigen::MatrixXd G = metric_at(space, frame.base);
  return (frame.tangent.transpose() * G * frame.normal)
      .cwiseAbs()
      .maxCoeff();
}

inline double frame_orthonormality_residual(const PointFrame& frame,
                                            const AmbientSpace& space) {
  const int n = static_cast<int>(frame.tangent.cols());
  const Eigen::MatrixXd G = metric_at(space, frame.base);
  Eigen::MatrixXd full(2 * n, 2 * n);
  full.leftCols(n) = frame.tangent;
  full.rightCols(n) = frame.normal;
  return (full.transpose() * G * full - Eigen::MatrixXd::Identity(2 * n, 2 * n))
      .cwiseAbs()
      .maxCoeff();
}

inline FundamentalData second_fundamental_tensor(const Jet2& jet,
                                                 const AmbientSpace& space,
                                                 const PointFrame& frame) {
  const int n = jet.chart_dim();
  const int m = jet.ambient_dim();
  const Eigen::MatrixXd G = metric_at(space, jet.value);
  const Eigen::MatrixXd g = jet.first.transpose() * G * jet.first;
  const Tensor3 gamma = christoffel_at(space, jet.value);

  // Ambient covariant second derivative D_{d_a} d_b phi, then its normal
  // component (tangential part solved from the Gram system, since the
  // coordinate basis need not be orthogonal).
  std::vector<Eigen::VectorXd> normal_part(static_cast<std::size_t>(n) * n);
  const Eigen::LDLT<Eigen::MatrixXd> gram(g);
  for (int a = 0; a < n; ++a) {
    for (int b = a; b < n; ++b) {
      Eigen::VectorXd D2(m);
      for (int cc = 0; cc < m; ++cc) {
        double corr = 0.0;
        for (int d = 0; d < m; ++d) {
          for (int e = 0; e < m; ++e) {
            corr += gamma(cc, d, e) * jet.first(d, a) * jet.first(e, b);
          }
        }
        D2[cc] = jet.second[cc](a, b) + corr;
      }
      const Eigen::VectorXd tau = gram.solve(jet.first.transpose() * (G * D2));
      const Eigen::VectorXd N = D2 - jet.first * tau;
      normal_part[a * n + b] = N;
      normal_part[b * n + a] = N;
    }
  }

  FundamentalData fund;
  fund.n = n;
  fund.c = space.c;
  fund.h = Tensor3(n);

  // h_{ij}^{k} = G(II(e_i, e_j), Je_k), II transformed tensorially from the
  // coordinate basis.
  const Eigen::MatrixXd& C = frame.chart_coeff;
  std::vector<Eigen::VectorXd> proj(n);  // G * Je_k
  for (int k = 0; k < n; ++k) proj[k] = G * frame.normal.col(k);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      Eigen::VectorXd II = Eigen::VectorXd::Zero(m);
      for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
          II += C(a, i) * C(b, j) * normal_part[a * n + b];
        }
      }
      for (int k = 0; k < n; ++k) {
        fund.h(i, j, k) = proj[k].dot(II);
      }
    }
  }

  double max_abs = 0.0, max_dev = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        const double v = fund.h(i, j, k);
        max_abs = std::max(max_abs, std::abs(v));
        max_dev = std::max({max_dev, std::abs(v - fund.h(k, j, i)),
                            std::abs(v - fund.h(i, k, j)),
                            std::abs(v - fund.h(j, i, k))});
      }
    }
  }
  fund.symmetry_residual = max_dev / (1.0 + max_abs);
  if (fund.symmetry_residual > kSymmetryHardLimit) {
    throw SymmetryViolationError(
        "second_fundamental_tensor: total symmetry violated (upstream bug)");
  }

  fund.hvec = Eigen::VectorXd::Zero(n);
  for (int r = 0; r < n; ++r) {
    double tr = 0.0;
    for (int j = 0; j < n; ++j) tr += fund.h(j, j, r);
    fund.hvec[r] = tr / n;
  }
  fund.H = fund.hvec.norm();
  fund.S = 0.0;
  for (double v : fund.h.data()) fund.S += v * v;
  return fund;
}

// Wraps a raw totally symmetric coefficient array as FundamentalData,
// deriving the trace quantities. Used for synthetic tensors in the
// randomized inequality suites.
inline FundamentalData fundamental_from_tensor(Tensor3 h, double c) {
  const int n = h.dim();
  FundamentalData fund;
  fund.n = n;
  fund.c = c;
  fund.h = std::move(h);
  fund.hvec = Eigen::VectorXd::Zero(n);
  for (int r = 0; r < n; ++r) {
    double tr = 0.0;
    for (int j = 0; j < n; ++j) tr += fund.h(j, j, r);
    fund.hvec[r] = tr / n;
  }
  fund.H = fund.hvec.norm();
  fund.S = 0.0;
  for (double v : fund.h.data()) fund.S += v * v;
  return fund;
}

// Random totally symmetric tensor with entries uniform in [lo, hi] on each
// index multiset.
inline Tensor3 random_symmetric_tensor(int n, DeterministicRng& rng,
                                       double lo = -1.0, double hi = 1.0) {
  Tensor3 h(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      for (int k = j; k < n; ++k) {
        const double v = rng.uniform(lo, hi);
        h(i, j, k) = v;
        h(i, k, j) = v;
        h(j, i, k) = v;
        h(j, k, i) = v;
        h(k, i, j) = v;
        h(k, j, i) = v;
      }
  return h;
}

// Shape-operator identity: computes A_{Je_i} e_j as the tangential part of
// -D_{e_j}(Je_i) with the frame field extended by Gram-Schmidt at nearby
// chart points, and compares against -J h(e_i, e_j) together with the
// A_{Je_i} e_j = A_{Je_j} e_i symmetry. Returns the largest deviation.
// `jet_at` must evaluate one fixed chart-to-ambient map (see
// immersion_point_map), not re-choose charts per point.
template <class JetFn>
double check_shape_operator_identity(const JetFn& jet_at,
                                     const AmbientSpace& space,
                                     const Eigen::VectorXd& u,
                                     double fd_step = 1e-5) {
  const Jet2 jet = jet_at(u);
  const int n = jet.chart_dim();
  const PointFrame frame = adapted_frame(jet, space);
  const FundamentalData fund = second_fundamental_tensor(jet, space, frame);
  const Eigen::MatrixXd G = metric_at(space, jet.value);
  const Tensor3 gamma = christoffel_at(space, jet.value);

  Tensor3 shape(n);  // shape(i,j,k) = -G(D_{e_j} Je_i, e_k)
  for (int j = 0; j < n; ++j) {
    const Eigen::VectorXd dir = frame.chart_coeff.col(j);
    const PointFrame fp = adapted_frame(jet_at(u + fd_step * dir), space);
    const PointFrame fm = adapted_frame(jet_at(u - fd_step * dir), space);
    for (int i = 0; i < n; ++i) {
      Eigen::VectorXd D =
          (fp.normal.col(i) - fm.normal.col(i)) / (2.0 * fd_step);
      const Eigen::VectorXd xi = frame.normal.col(i);
      const Eigen::VectorXd ej = frame.tangent.col(j);
      for (int cc = 0; cc < 2 * n; ++cc) {
        double corr = 0.0;
        for (int d = 0; d < 2 * n; ++d) {
          for (int e = 0; e < 2 * n; ++e) {
            corr += gamma(cc, d, e) * ej[d] * xi[e];
          }
        }
        D[cc] += corr;
      }
      const Eigen::VectorXd coeffs = frame.tangent.transpose() * (G * D);
      for (int k = 0; k < n; ++k) shape(i, j, k) = -coeffs[k];
    }
  }

  double residual = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        residual = std::max(residual,
                            std::abs(shape(i, j, k) - fund.h(i, j, k)));
        residual = std::max(residual,
                            std::abs(shape(i, j, k) - shape(j, i, k)));
      }
    }
  }
  return residual;
}

}  // namespace lagpinch
