// Intrinsic curvature in the adapted frame: the Gauss-equation tensor, an
// independent Christoffel-based oracle, sectional/Ricci functionals, the
// R_1212 lower-bound gap, and the isotropic excess together with its
// minimization over orthonormal 4-frames and (lambda, mu) in [-1,1]^2.
#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

#include "lagpinch/common.hpp"
#include "lagpinch/fundforms.hpp"
#include "lagpinch/immersion.hpp"

namespace lagpinch {

struct CurvatureTensor {
  int n = 0;
  Tensor4 R;

  CurvatureTensor() = default;
  explicit CurvatureTensor(int dim) : n(dim), R(dim) {}
};

// R_{ijkl} = c (d_ik d_jl - d_il d_jk) + sum_r (h_ik^r h_jl^r - h_il^r h_jk^r)
inline CurvatureTensor gauss_curvature(const FundamentalData& fund, double c) {
  const int n = fund.n;
  CurvatureTensor out(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        for (int l = 0; l < n; ++l) {
          double v = c * ((i == k ? 1.0 : 0.0) * (j == l ? 1.0 : 0.0) -
                          (i == l ? 1.0 : 0.0) * (j == k ? 1.0 : 0.0));
          for (int r = 0; r < n; ++r) {
            v += fund.h(i, k, r) * fund.h(j, l, r) -
                 fund.h(i, l, r) * fund.h(j, k, r);
          }
          out.R(i, j, k, l) = v;
        }
      }
    }
  }
  return out;
}

// Worst violation of the algebraic curvature symmetries.
inline double curvature_symmetry_residual(const CurvatureTensor& Rt) {
  const int n = Rt.n;
  double res = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          const double v = Rt.R(i, j, k, l);
          res = std::max({res, std::abs(v + Rt.R(j, i, k, l)),
                          std::abs(v + Rt.R(i, j, l, k)),
                          std::abs(v - Rt.R(k, l, i, j))});
        }
  return res;
}

inline double bianchi_residual(const CurvatureTensor& Rt) {
  const int n = Rt.n;
  double res = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          res = std::max(res, std::abs(Rt.R(i, j, k, l) + Rt.R(i, k, l, j) +
                                       Rt.R(i, l, j, k)));
        }
  return res;
}

// Independent verification oracle: curvature of the induced metric from
// finite differences of the metric itself, bypassing the Gauss equation.
// Christoffels from FD of g, Riemann from FD of Christoffels, then
// transformed into the adapted frame of the base point. Accuracy is
// limited to roughly 1e-4 relative by the nested differencing.
inline CurvatureTensor intrinsic_curvature_oracle(const ImmersionSpec& spec,
                                                  const Eigen::VectorXd& u,
                                                  const SphereChart& chart,
                                                  double step = 1e-5) {
  const ImmersionChartMap map = immersion_point_map(spec, u, chart);
  const int n = static_cast<int>(u.size());

  auto metric_of = [&](const Eigen::VectorXd& p) -> Eigen::MatrixXd {
    const Jet2 jet = eval_jet(map, p);
    const Eigen::MatrixXd G = metric_at(spec.ambient, jet.value);
    return jet.first.transpose() * G * jet.first;
  };

  auto gamma_of = [&](const Eigen::VectorXd& p) -> Tensor3 {
    std::vector<Eigen::MatrixXd> dg(n);
    for (int a = 0; a < n; ++a) {
      Eigen::VectorXd pp = p, pm = p;
      pp[a] += step;
      pm[a] -= step;
      dg[a] = (metric_of(pp) - metric_of(pm)) / (2.0 * step);
    }
    const Eigen::MatrixXd ginv = metric_of(p).inverse();
    Tensor3 gam(n);
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
          double s = 0.0;
          for (int l = 0; l < n; ++l) {
            s += ginv(k, l) * (dg[i](j, l) + dg[j](i, l) - dg[l](i, j));
          }
          gam(k, i, j) = 0.5 * s;
          gam(k, j, i) = 0.5 * s;
        }
    return gam;
  };

  std::vector<Tensor3> dgam;
  dgam.reserve(n);
  for (int a = 0; a < n; ++a) {
    Eigen::VectorXd pp = u, pm = u;
    pp[a] += step;
    pm[a] -= step;
    const Tensor3 gp = gamma_of(pp);
    const Tensor3 gm = gamma_of(pm);
    Tensor3 d(n);
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          d(k, i, j) = (gp(k, i, j) - gm(k, i, j)) / (2.0 * step);
    dgam.push_back(d);
  }
  const Tensor3 gam = gamma_of(u);
  const Eigen::MatrixXd g0 = metric_of(u);

  // R^l_{kij} = d_i Gam^l_{jk} - d_j Gam^l_{ik}
  //             + Gam^l_{im} Gam^m_{jk} - Gam^l_{jm} Gam^m_{ik}
  Tensor4 rup(n);
  for (int l = 0; l < n; ++l)
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double v = dgam[i](l, j, k) - dgam[j](l, i, k);
          for (int m2 = 0; m2 < n; ++m2) {
            v += gam(l, i, m2) * gam(m2, j, k) -
                 gam(l, j, m2) * gam(m2, i, k);
          }
          rup(l, k, i, j) = v;
        }

  // R_{ijkl} = <R(d_i, d_j) d_l, d_k> = g_{km} R^m_{lij}
  Tensor4 rdown(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          double v = 0.0;
          for (int m2 = 0; m2 < n; ++m2) v += g0(k, m2) * rup(m2, l, i, j);
          rdown(i, j, k, l) = v;
        }

  const Jet2 jet = eval_jet(map, u);
  const PointFrame frame = adapted_frame(jet, spec.ambient);
  const Eigen::MatrixXd& C = frame.chart_coeff;

  CurvatureTensor out(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          double v = 0.0;
          for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
              for (int cc = 0; cc < n; ++cc)
                for (int d = 0; d < n; ++d)
                  v += rdown(a, b, cc, d) * C(a, i) * C(b, j) * C(cc, k) *
                       C(d, l);
          out.R(i, j, k, l) = v;
        }
  return out;
}

inline double sectional(const CurvatureTensor& Rt, int i, int j) {
  if (i == j) throw DimensionError("sectional: indices must be distinct");
  return Rt.R(i, j, i, j);
}

// Ric(u) = sum_k R(u, e_k, u, e_k) for a unit tangent coefficient vector.
inline double ricci(const CurvatureTensor& Rt, const Eigen::VectorXd& u) {
  const int n = Rt.n;
  double out = 0.0;
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        out += u[i] * u[j] * Rt.R(i, k, j, k);
      }
    }
  }
  return out;
}

// R_1212 - (1/2)(6 n^2 H^2/(2n + 3) + 2c - S); nonnegative for every
// totally symmetric h.
inline double r1212_lower_bound_gap(const CurvatureTensor& Rt,
                                    const FundamentalData& fund, double c) {
  const int n = fund.n;
  const double n2H2 = static_cast<double>(n) * n * fund.H * fund.H;
  const double bound = 0.5 * (6.0 * n2H2 / (2.0 * n + 3.0) + 2.0 * c - fund.S);
  return Rt.R(0, 1, 0, 1) - bound;
}

// ---------------------------------------------------------------------------
// Isotropic excess over 4-frames.
// ---------------------------------------------------------------------------

struct IsotropicProbe {
  Eigen::MatrixXd frame;  // n x 4, orthonormal columns (adapted-frame coefficients)
  double lambda = 0.0;
  double mu = 0.0;
};

inline double frame_orthonormality_residual(const IsotropicProbe& probe) {
  return (probe.frame.transpose() * probe.frame -
          Eigen::MatrixXd::Identity(4, 4))
      .cwiseAbs()
      .maxCoeff();
}

// Orthonormalize columns via Householder QR, fixing the R-diagonal signs so
// the result is a continuous function of the input near full rank.
inline Eigen::MatrixXd orthonormalize_columns(const Eigen::MatrixXd& M) {
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(M);
  Eigen::MatrixXd Q = qr.householderQ() *
                      Eigen::MatrixXd::Identity(M.rows(), M.cols());
  const Eigen::MatrixXd R =
      qr.matrixQR().topLeftCorner(M.cols(), M.cols());
  for (int k = 0; k < M.cols(); ++k) {
    if (R(k, k) < 0.0) Q.col(k) = -Q.col(k);
  }
  return Q;
}

inline IsotropicProbe random_isotropic_probe(int n, DeterministicRng& rng) {
  if (n < 4) throw DimensionError("isotropic probe requires n >= 4");
  Eigen::MatrixXd M(n, 4);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < 4; ++j) M(i, j) = rng.gaussian();
  IsotropicProbe probe;
  probe.frame = orthonormalize_columns(M);
  probe.lambda = rng.uniform(-1.0, 1.0);
  probe.mu = rng.uniform(-1.0, 1.0);
  return probe;
}

namespace detail {

// Staged contraction R(va, vb, vc, vd).
inline double contract4(const CurvatureTensor& Rt, const Eigen::VectorXd& va,
                        const Eigen::VectorXd& vb, const Eigen::VectorXd& vc,
                        const Eigen::VectorXd& vd) {
  const int n = Rt.n;
  double out = 0.0;
  for (int i = 0; i < n; ++i) {
    if (va[i] == 0.0) continue;
    for (int j = 0; j < n; ++j) {
      if (vb[j] == 0.0) continue;
      double s2 = 0.0;
      for (int k = 0; k < n; ++k) {
        double s3 = 0.0;
        for (int l = 0; l < n; ++l) s3 += Rt.R(i, j, k, l) * vd[l];
        s2 += vc[k] * s3;
      }
      out += va[i] * vb[j] * s2;
    }
  }
  return out;
}

struct ExcessCoefficients {
  double a, b, c, d, e;  // excess = a + b l^2 + c m^2 + d l^2 m^2 - 2 e l m
};

inline ExcessCoefficients excess_coefficients(const CurvatureTensor& Rt,
                                              const Eigen::MatrixXd& F) {
  const Eigen::VectorXd f1 = F.col(0), f2 = F.col(1), f3 = F.col(2),
                        f4 = F.col(3);
  return ExcessCoefficients{
      contract4(Rt, f1, f3, f1, f3), contract4(Rt, f1, f4, f1, f4),
      contract4(Rt, f2, f3, f2, f3), contract4(Rt, f2, f4, f2, f4),
      contract4(Rt, f1, f2, f3, f4)};
}

struct LambdaMuMin {
  double value;
  double lambda;
  double mu;
};

// Exact minimization of  a + b l^2 + c m^2 + d l^2 m^2 - 2 e l m  over the
// square [-1,1]^2: the four corners, the edge quadratics in closed form,
// the origin, and interior stationary points located by a 41-point mu-grid
// with bisection/Newton polish of  psi(m) = m (c + d l(m)^2) - e l(m),
// l(m) = e m / (b + d m^2).
inline LambdaMuMin minimize_lambda_mu(const ExcessCoefficients& k) {
  auto f = [&](double l, double m) {
    return k.a + k.b * l * l + k.c * m * m + k.d * l * l * m * m -
           2.0 * k.e * l * m;
  };
  LambdaMuMin best{f(0.0, 0.0), 0.0, 0.0};
  auto consider = [&](double l, double m) {
    l = std::clamp(l, -1.0, 1.0);
    m = std::clamp(m, -1.0, 1.0);
    const double v = f(l, m);
    if (v < best.value) best = LambdaMuMin{v, l, m};
  };

  for (const double l : {-1.0, 1.0})
    for (const double m : {-1.0, 1.0}) consider(l, m);

  // Edges: on l = +-1, quadratic in m with curvature c + d.
  if (std::abs(k.c + k.d) > 1e-300) {
    consider(1.0, k.e / (k.c + k.d));
    consider(-1.0, -k.e / (k.c + k.d));
  }
  if (std::abs(k.b + k.d) > 1e-300) {
    consider(k.e / (k.b + k.d), 1.0);
    consider(-k.e / (k.b + k.d), -1.0);
  }

  auto lam_of = [&](double m) { return k.e * m / (k.b + k.d * m * m); };
  auto psi = [&](double m) {
    const double l = lam_of(m);
    return m * (k.c + k.d * l * l) - k.e * l;
  };
  auto denom_ok = [&](double m) {
    return std::abs(k.b + k.d * m * m) > 1e-12 * (std::abs(k.b) + std::abs(k.d) + 1.0);
  };

  constexpr int kGrid = 41;
  double prev_m = 0.0, prev_psi = 0.0;
  bool have_prev = false;
  for (int i = 0; i < kGrid; ++i) {
    const double m = -1.0 + 2.0 * i / (kGrid - 1);
    if (!denom_ok(m)) {
      have_prev = false;
      continue;
    }
    const double p = psi(m);
    if (have_prev && ((prev_psi < 0.0) != (p < 0.0))) {
      double lo = prev_m, hi = m, plo = prev_psi;
      for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (!denom_ok(mid)) break;
        const double pm = psi(mid);
        if ((plo < 0.0) != (pm < 0.0)) {
          hi = mid;
        } else {
          lo = mid;
          plo = pm;
        }
      }
      double root = 0.5 * (lo + hi);
      for (int it = 0; it < 3; ++it) {  // Newton polish
        const double hstep = 1e-7;
        if (!denom_ok(root - hstep) || !denom_ok(root + hstep)) break;
        const double d = (psi(root + hstep) - psi(root - hstep)) / (2 * hstep);
        if (std::abs(d) < 1e-300) break;
        const double next = root - psi(root) / d;
        if (std::abs(next) > 1.0) break;
        root = next;
      }
      if (std::abs(root) <= 1.0 && denom_ok(root)) {
        consider(lam_of(root), root);
      }
    }
    prev_m = m;
    prev_psi = p;
    have_prev = true;
  }
  return best;
}

}  // namespace detail

// The scalar R_1313 + l^2 R_1414 + m^2 R_2323 + l^2 m^2 R_2424
//            - 2 l m R_1234 on the probe's 4-frame.
inline double isotropic_excess(const CurvatureTensor& Rt,
                               const IsotropicProbe& probe) {
  if (Rt.n < 4) throw DimensionError("isotropic_excess requires n >= 4");
  const detail::ExcessCoefficients k =
      detail::excess_coefficients(Rt, probe.frame);
  const double l = probe.lambda, m = probe.mu;
  return k.a + k.b * l * l + k.c * m * m + k.d * l * l * m * m -
         2.0 * k.e * l * m;
}

namespace detail {

// Plain Nelder-Mead; deterministic for fixed inputs.
template <class F>
std::pair<Eigen::VectorXd, double> nelder_mead(const F& f, Eigen::VectorXd x0,
                                               double step, int max_iter) {
  const int dim = static_cast<int>(x0.size());
  std::vector<Eigen::VectorXd> xs(dim + 1, x0);
  std::vector<double> fs(dim + 1);
  for (int i = 1; i <= dim; ++i) xs[i][i - 1] += step;
  for (int i = 0; i <= dim; ++i) fs[i] = f(xs[i]);

  std::vector<int> idx(dim + 1);
  for (int it = 0; it < max_iter; ++it) {
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(),
                     [&](int a, int b) { return fs[a] < fs[b]; });
    const int lo = idx[0], hi = idx[dim], next_hi = idx[dim - 1];
    if (std::abs(fs[hi] - fs[lo]) <= 1e-13 * (1.0 + std::abs(fs[lo]))) break;

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(dim);
    for (int i = 0; i <= dim; ++i) {
      if (i != hi) centroid += xs[i];
    }
    centroid /= dim;

    const Eigen::VectorXd refl = centroid + (centroid - xs[hi]);
    const double f_refl = f(refl);
    if (f_refl < fs[lo]) {
      const Eigen::VectorXd expd = centroid + 2.0 * (centroid - xs[hi]);
      const double f_expd = f(expd);
      if (f_expd < f_refl) {
        xs[hi] = expd;
        fs[hi] = f_expd;
      } else {
        xs[hi] = refl;
        fs[hi] = f_refl;
      }
    } else if (f_refl < fs[next_hi]) {
      xs[hi] = refl;
      fs[hi] = f_refl;
    } else {
      const Eigen::VectorXd contr = centroid + 0.5 * (xs[hi] - centroid);
      const double f_contr = f(contr);
      if (f_contr < fs[hi]) {
        xs[hi] = contr;
        fs[hi] = f_contr;
      } else {
        for (int i = 0; i <= dim; ++i) {
          if (i == lo) continue;
          xs[i] = xs[lo] + 0.5 * (xs[i] - xs[lo]);
          fs[i] = f(xs[i]);
        }
      }
    }
  }
  int best = 0;
  for (int i = 1; i <= dim; ++i) {
    if (fs[i] < fs[best]) best = i;
  }
  return {xs[best], fs[best]};
}

}  // namespace detail

struct MinExcessResult {
  double value = 0.0;
  IsotropicProbe argmin;
};

// Heuristic global minimization of the isotropic excess: per frame the
// (lambda, mu) problem is solved in closed form; frames are explored by
// seeded random 4-frames refined with Nelder-Mead on a skew-parameter
// chart (6 in-span rotations plus 4(n-4) mixing directions, 4n - 10
// parameters). The returned value is an upper bound on the true minimum
// and is deterministic per seed.
inline MinExcessResult min_isotropic_excess(const CurvatureTensor& Rt,
                                            int restarts, std::uint64_t seed) {
  const int n = Rt.n;
  if (n < 4) throw DimensionError("min_isotropic_excess requires n >= 4");
  if (restarts < 1) throw ConfigError("min_isotropic_excess: restarts >= 1");

  const int dim = 4 * n - 10;

  MinExcessResult best;
  best.value = std::numeric_limits<double>::infinity();

  for (int r = 0; r < restarts; ++r) {
    DeterministicRng rng = DeterministicRng::substream(seed, r);
    Eigen::MatrixXd M(n, 4);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < 4; ++j) M(i, j) = rng.gaussian();
    const Eigen::MatrixXd F0 = orthonormalize_columns(M);

    // Orthonormal completion for the mixing block.
    Eigen::MatrixXd Fperp(n, n - 4);
    {
      const Eigen::HouseholderQR<Eigen::MatrixXd> qr(F0);
      const Eigen::MatrixXd Qfull =
          qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
      Fperp = Qfull.rightCols(n - 4);
    }

    auto frame_of = [&](const Eigen::VectorXd& s) -> Eigen::MatrixXd {
      Eigen::MatrixXd K = Eigen::MatrixXd::Zero(4, 4);
      int p = 0;
      for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j, ++p) {
          K(i, j) = s[p];
          K(j, i) = -s[p];
        }
      Eigen::MatrixXd W(n - 4, 4);
      for (int i = 0; i < n - 4; ++i)
        for (int j = 0; j < 4; ++j, ++p) W(i, j) = s[p];
      const Eigen::MatrixXd M2 =
          F0 * (Eigen::MatrixXd::Identity(4, 4) + K) + Fperp * W;
      return orthonormalize_columns(M2);
    };

    auto objective = [&](const Eigen::VectorXd& s) -> double {
      return detail::minimize_lambda_mu(
                 detail::excess_coefficients(Rt, frame_of(s)))
          .value;
    };

    const auto [s_best, f_best] = detail::nelder_mead(
        objective, Eigen::VectorXd::Zero(dim), 0.25, 200 + 40 * dim);

    if (f_best < best.value) {
      const Eigen::MatrixXd F = frame_of(s_best);
      const detail::LambdaMuMin lm =
          detail::minimize_lambda_mu(detail::excess_coefficients(Rt, F));
      best.value = lm.value;
      best.argmin = IsotropicProbe{F, lm.lambda, lm.mu};
    }
  }
  return best;
}

}  // namespace lagpinch
