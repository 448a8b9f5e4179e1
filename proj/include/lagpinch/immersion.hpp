// The explicit Lagrangian immersions: Whitney sphere in C^n, the Castro
// one-parameter family Phi_q, Whitney spheres in CP^n via the Hopf lift,
// and a totally geodesic plane as reference. Sphere points are reached
// through two stereographic charts so jets are nondegenerate everywhere.
#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "lagpinch/ambient.hpp"
#include "lagpinch/common.hpp"
#include "lagpinch/jet.hpp"

namespace lagpinch {

// Rejection threshold for the sampler: keeps Castro's power-law terms well
// inside their domain and both stereographic charts well conditioned.
inline constexpr double kPolarCapLimit = 0.999;
// Castro maps need |x_{n+1}| < 1 by a hard margin.
inline constexpr double kCastroDomainMargin = 1e-9;
// Dehomogenization pivot must beat the runner-up modulus by this margin.
inline constexpr double kPivotMargin = 1e-6;

struct SpherePoint {
  Eigen::VectorXd x;  // unit vector in R^{n+1}

  explicit SpherePoint(Eigen::VectorXd coords) : x(std::move(coords)) {
    const double r = x.norm();
    if (std::abs(r - 1.0) > 1e-12) {
      throw DomainError("SpherePoint: coordinates not on the unit sphere");
    }
  }
  int sphere_dim() const { return static_cast<int>(x.size()) - 1; }
};

enum class Pole { North, South };

// Inverse stereographic chart R^n -> S^n \ {pole}.
struct SphereChart {
  Pole pole = Pole::North;

  // North chart: u -> (2u, |u|^2 - 1)/(1 + |u|^2), excludes (0,...,0,1).
  // South chart: u -> (2u, 1 - |u|^2)/(1 + |u|^2), excludes (0,...,0,-1).
  template <class T>
  std::vector<T> lift(const std::vector<T>& u) const {
    const int n = static_cast<int>(u.size());
    T r2 = scalar_constant<T>(0.0, u[0]);
    for (const T& ui : u) r2 = r2 + ui * ui;
    const T f = reciprocal_like(r2 + 1.0);
    std::vector<T> x;
    x.reserve(n + 1);
    for (int i = 0; i < n; ++i) x.push_back(u[i] * 2.0 * f);
    if (pole == Pole::North) {
      x.push_back((r2 - 1.0) * f);
    } else {
      x.push_back((1.0 - r2) * f);
    }
    return x;
  }

  Eigen::VectorXd to_chart(const SpherePoint& p) const {
    const int n = p.sphere_dim();
    const double last = p.x[n];
    const double den = (pole == Pole::North) ? (1.0 - last) : (1.0 + last);
    if (den < 1e-6) {
      throw DomainError("SphereChart: point too close to the excluded pole");
    }
    return p.x.head(n) / den;
  }

  // Chart whose excluded pole is farther from the point.
  static SphereChart preferred_for(const SpherePoint& p) {
    const double last = p.x[p.sphere_dim()];
    return SphereChart{last <= 0.0 ? Pole::North : Pole::South};
  }
};

enum class Family { WhitneyC, Castro, WhitneyCP, TotallyGeodesicPlane };

struct ImmersionSpec {
  Family family = Family::WhitneyC;
  int n = 3;
  double q = 0.0;      // Castro only, q > 1
  double theta = 0.0;  // WhitneyCP only, theta >= 0
  AmbientSpace ambient;

  static ImmersionSpec whitney_c(int n) {
    require_dim(n);
    return ImmersionSpec{Family::WhitneyC, n, 0.0, 0.0, AmbientSpace::flat(n)};
  }

  static ImmersionSpec castro(int n, double q) {
    require_dim(n);
    if (!(q > 1.0)) throw ConfigError("castro: q must be > 1");
    return ImmersionSpec{Family::Castro, n, q, 0.0, AmbientSpace::flat(n)};
  }

  static ImmersionSpec whitney_cp(int n, double theta) {
    require_dim(n);
    if (!(theta >= 0.0)) throw ConfigError("whitney_cp: theta must be >= 0");
    return ImmersionSpec{Family::WhitneyCP, n, 0.0, theta,
                         AmbientSpace::fubini_study(n, 1.0)};
  }

  static ImmersionSpec geodesic_plane(int n) {
    require_dim(n);
    return ImmersionSpec{Family::TotallyGeodesicPlane, n, 0.0, 0.0,
                         AmbientSpace::flat(n)};
  }

 private:
  static void require_dim(int n) {
    if (n < 3) throw ConfigError("immersion families require n >= 3");
  }
};

// ---------------------------------------------------------------------------
// Family maps on sphere coordinates, templated over the scalar type.
// ---------------------------------------------------------------------------

// phi(x) = ((1 + i x_{n+1}) / (1 + x_{n+1}^2)) (x_1, ..., x_n)
template <class T>
std::vector<T> whitney_eval_t(const std::vector<T>& x) {
  const int n = static_cast<int>(x.size()) - 1;
  const T& t = x[n];
  const T inv = reciprocal_like(t * t + 1.0);
  const T fre = inv;           // Re of (1 + it)/(1 + t^2)
  const T fim = t * inv;       // Im
  std::vector<T> out;
  out.reserve(2 * n);
  for (int a = 0; a < n; ++a) {
    out.push_back(fre * x[a]);
    out.push_back(fim * x[a]);
  }
  return out;
}

// Phi_q(x) = (2^{1/q} e^{i beta_q(x_{n+1})} /
//             [(1+x_{n+1})^q + (1-x_{n+1})^q]^{1/q}) (x_1, ..., x_n)
// beta_q(t) = (2/q) arctan(((1+t)^{q/2} - (1-t)^{q/2}) /
//                          ((1+t)^{q/2} + (1-t)^{q/2}))
template <class T>
std::vector<T> castro_eval_t(const std::vector<T>& x, double q) {
  const int n = static_cast<int>(x.size()) - 1;
  const T& t = x[n];
  if (std::abs(scalar_value(t)) >= 1.0 - kCastroDomainMargin) {
    throw DomainError("castro: |x_{n+1}| too close to 1");
  }
  const T up = t + 1.0;
  const T um = 1.0 - t;
  const T hp = pow(up, q / 2.0);
  const T hm = pow(um, q / 2.0);
  const T beta = atan((hp - hm) / (hp + hm)) * (2.0 / q);
  const T bracket = hp * hp + hm * hm;  // (1+t)^q + (1-t)^q
  const T mod = pow(bracket, -1.0 / q) * std::pow(2.0, 1.0 / q);
  const T fre = mod * cos(beta);
  const T fim = mod * sin(beta);
  std::vector<T> out;
  out.reserve(2 * n);
  for (int a = 0; a < n; ++a) {
    out.push_back(fre * x[a]);
    out.push_back(fim * x[a]);
  }
  return out;
}

// Hopf lift of the CP^n Whitney sphere: the n+1 homogeneous coordinates
//   ((x_1,...,x_n)/(c_t + i s_t x_{n+1});
//    (s_t c_t (1 + x_{n+1}^2) + i x_{n+1})/(c_t^2 + s_t^2 x_{n+1}^2)),
// returned interleaved; lands on S^{2n+1}.
template <class T>
std::vector<T> whitneycp_homogeneous_eval_t(const std::vector<T>& x,
                                            double theta) {
  const int n = static_cast<int>(x.size()) - 1;
  const double ct = std::cosh(theta);
  const double st = std::sinh(theta);
  const T& t = x[n];
  const T den = reciprocal_like(t * t * (st * st) + ct * ct);
  std::vector<T> z;
  z.reserve(2 * (n + 1));
  // 1/(c + i s t) = (c - i s t)/(c^2 + s^2 t^2)
  const T invre = den * ct;
  const T invim = t * (-st) * den;
  for (int a = 0; a < n; ++a) {
    z.push_back(x[a] * invre);
    z.push_back(x[a] * invim);
  }
  const T lastre = (t * t + 1.0) * (st * ct) * den;
  const T lastim = t * den;
  z.push_back(lastre);
  z.push_back(lastim);
  return z;
}

inline Eigen::VectorXd whitney_eval(const SpherePoint& p) {
  std::vector<double> x(p.x.data(), p.x.data() + p.x.size());
  const std::vector<double> out = whitney_eval_t(x);
  return Eigen::Map<const Eigen::VectorXd>(out.data(), out.size());
}

inline Eigen::VectorXd castro_eval(const SpherePoint& p, double q) {
  if (!(q > 1.0)) throw ConfigError("castro_eval: q must be > 1");
  std::vector<double> x(p.x.data(), p.x.data() + p.x.size());
  const std::vector<double> out = castro_eval_t(x, q);
  return Eigen::Map<const Eigen::VectorXd>(out.data(), out.size());
}

inline Eigen::VectorXd whitneycp_homogeneous_eval(const SpherePoint& p,
                                                  double theta) {
  if (!(theta >= 0.0)) throw ConfigError("whitneycp: theta must be >= 0");
  std::vector<double> x(p.x.data(), p.x.data() + p.x.size());
  const std::vector<double> out = whitneycp_homogeneous_eval_t(x, theta);
  return Eigen::Map<const Eigen::VectorXd>(out.data(), out.size());
}

// ---------------------------------------------------------------------------
// Dehomogenization: pick the affine chart of largest |z_k| (lowest index on
// ties) and divide it out, dropping the pivot slot.
// ---------------------------------------------------------------------------

struct Dehomogenized {
  int chart_index = 0;      // 0-based pivot slot
  Eigen::VectorXd w;        // 2n interleaved chart coordinates
};

inline int dehomogenize_pivot(const Eigen::VectorXd& z_interleaved,
                              double* margin_out = nullptr) {
  const int slots = static_cast<int>(z_interleaved.size()) / 2;
  int best = 0;
  double best_mod = -1.0, second_mod = -1.0;
  for (int k = 0; k < slots; ++k) {
    const double mod = std::hypot(z_interleaved[2 * k], z_interleaved[2 * k + 1]);
    if (mod > best_mod) {
      second_mod = best_mod;
      best_mod = mod;
      best = k;
    } else if (mod > second_mod) {
      second_mod = mod;
    }
  }
  if (best_mod <= 0.0) throw DomainError("dehomogenize: zero vector");
  if (margin_out != nullptr) *margin_out = best_mod - second_mod;
  return best;
}

template <class T>
std::vector<T> dehomogenize_t(const std::vector<T>& z, int pivot) {
  const int slots = static_cast<int>(z.size()) / 2;
  const T& pre = z[2 * pivot];
  const T& pim = z[2 * pivot + 1];
  const T inv = reciprocal_like(pre * pre + pim * pim);
  std::vector<T> w;
  w.reserve(2 * (slots - 1));
  for (int a = 0; a < slots; ++a) {
    if (a == pivot) continue;
    const T& are = z[2 * a];
    const T& aim = z[2 * a + 1];
    w.push_back((are * pre + aim * pim) * inv);
    w.push_back((aim * pre - are * pim) * inv);
  }
  return w;
}

inline Dehomogenized dehomogenize(const Eigen::VectorXd& z_interleaved) {
  const int pivot = dehomogenize_pivot(z_interleaved);
  std::vector<double> z(z_interleaved.data(),
                        z_interleaved.data() + z_interleaved.size());
  const std::vector<double> w = dehomogenize_t(z, pivot);
  return Dehomogenized{
      pivot, Eigen::Map<const Eigen::VectorXd>(w.data(), w.size())};
}

// ---------------------------------------------------------------------------
// Full chart-to-ambient composition and its jet.
// ---------------------------------------------------------------------------

// Chart-to-ambient composition with every choice (sphere chart, CP pivot)
// frozen, so it is an honest smooth map of u in a neighborhood.
struct ImmersionChartMap {
  ImmersionSpec spec;
  SphereChart chart;
  int pivot = -1;  // WhitneyCP only

  template <class T>
  std::vector<T> operator()(const std::vector<T>& u) const {
    switch (spec.family) {
      case Family::TotallyGeodesicPlane: {
        std::vector<T> out;
        out.reserve(2 * u.size());
        for (const T& ui : u) {
          out.push_back(ui);
          out.push_back(scalar_constant<T>(0.0, ui));
        }
        return out;
      }
      case Family::WhitneyC:
        return whitney_eval_t(chart.lift(u));
      case Family::Castro:
        return castro_eval_t(chart.lift(u), spec.q);
      case Family::WhitneyCP:
        return dehomogenize_t(
            whitneycp_homogeneous_eval_t(chart.lift(u), spec.theta), pivot);
    }
    throw std::logic_error("unreachable");
  }
};

// Fixes the dehomogenization pivot at the reference point. A near-tie in
// the pivot moduli raises PivotUnstableError so the caller can resample.
inline ImmersionChartMap immersion_point_map(const ImmersionSpec& spec,
                                             const Eigen::VectorXd& u,
                                             const SphereChart& chart) {
  ImmersionChartMap map{spec, chart, -1};
  if (spec.family == Family::WhitneyCP) {
    std::vector<double> uv(u.data(), u.data() + u.size());
    const std::vector<double> z =
        whitneycp_homogeneous_eval_t(chart.lift(uv), spec.theta);
    double margin = 0.0;
    const int pivot = dehomogenize_pivot(
        Eigen::Map<const Eigen::VectorXd>(z.data(), z.size()), &margin);
    if (margin < kPivotMargin) {
      throw PivotUnstableError("immersion_point_map: dehomogenization pivot tie");
    }
    map.pivot = pivot;
  }
  return map;
}

// Second-order jet of the composed map chart -> S^n -> ambient chart.
inline Jet2 immersion_jet(const ImmersionSpec& spec, const Eigen::VectorXd& u,
                          const SphereChart& chart) {
  return eval_jet(immersion_point_map(spec, u, chart), u);
}

// ---------------------------------------------------------------------------
// Deterministic quasi-uniform sphere sampling. Each index derives its own
// substream, so the list is identical regardless of evaluation order or
// thread count; points inside the polar caps are redrawn (Castro domain).
// ---------------------------------------------------------------------------

inline SpherePoint sample_sphere_point(int n, std::uint64_t seed,
                                       std::uint64_t index,
                                       std::uint64_t attempt_offset = 0) {
  for (std::uint64_t attempt = attempt_offset;; ++attempt) {
    DeterministicRng rng = DeterministicRng::substream(seed, index, attempt);
    Eigen::VectorXd x(n + 1);
    for (int i = 0; i <= n; ++i) x[i] = rng.gaussian();
    const double r = x.norm();
    if (r < 1e-8) continue;
    x /= r;
    x /= x.norm();  // second pass tightens |x| = 1 to the last ulp
    if (std::abs(x[n]) > kPolarCapLimit) continue;
    return SpherePoint(x);
  }
}

inline std::vector<SpherePoint> sample_sphere_points(int n, int count,
                                                     std::uint64_t seed) {
  if (count < 1) throw ConfigError("sample_sphere_points: count must be >= 1");
  std::vector<SpherePoint> pts;
  pts.reserve(count);
  for (int i = 0; i < count; ++i) {
    pts.push_back(sample_sphere_point(n, seed, static_cast<std::uint64_t>(i)));
  }
  return pts;
}

}  // namespace lagpinch
