// Second-order forward-mode differentiation: truncated multivariate Taylor
// arithmetic (value + gradient + Hessian) and the two-jet of a chart-to-
// ambient map, plus a central finite-difference oracle for tests.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "lagpinch/common.hpp"

namespace lagpinch {

// Denominators and power bases below this magnitude are treated as chart
// domain violations rather than evaluated.
inline constexpr double kDenominatorFloor = 1e-12;
inline constexpr double kPowerDomainFloor = 1e-12;

// Scalar carrying value, gradient and Hessian with respect to a fixed set
// of chart variables. The Hessian is kept bitwise symmetric: every update
// writes mirror entries from one computed double.
class Dual2 {
 public:
  double value = 0.0;
  Eigen::VectorXd grad;
  Eigen::MatrixXd hess;

  Dual2() = default;
  explicit Dual2(int dim)
      : value(0.0),
        grad(Eigen::VectorXd::Zero(dim)),
        hess(Eigen::MatrixXd::Zero(dim, dim)) {}

  static Dual2 constant(double v, int dim) {
    Dual2 r(dim);
    r.value = v;
    return r;
  }

  static Dual2 variable(double v, int dim, int index) {
    Dual2 r(dim);
    r.value = v;
    r.grad[index] = 1.0;
    return r;
  }

  int dim() const { return static_cast<int>(grad.size()); }

  // f(u) with derivatives f1 = f'(u.value), f2 = f''(u.value).
  Dual2 chain(double f0, double f1, double f2) const {
    Dual2 r(dim());
    r.value = f0;
    r.grad = f1 * grad;
    r.hess = f1 * hess;
    add_sym_outer(r.hess, f2, grad, grad);
    return r;
  }

  // h += s * (u v^T + v u^T), writing identical doubles to (i,j) and (j,i).
  static void add_sym_outer(Eigen::MatrixXd& h, double s,
                            const Eigen::VectorXd& u,
                            const Eigen::VectorXd& v) {
    const int n = static_cast<int>(u.size());
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        const double t = s * (u[i] * v[j] + v[i] * u[j]);
        h(i, j) += t;
        if (i != j) h(j, i) += t;
      }
    }
  }
};

inline Dual2 operator+(const Dual2& a, const Dual2& b) {
  Dual2 r(a.dim());
  r.value = a.value + b.value;
  r.grad = a.grad + b.grad;
  r.hess = a.hess + b.hess;
  return r;
}

inline Dual2 operator-(const Dual2& a, const Dual2& b) {
  Dual2 r(a.dim());
  r.value = a.value - b.value;
  r.grad = a.grad - b.grad;
  r.hess = a.hess - b.hess;
  return r;
}

inline Dual2 operator-(const Dual2& a) {
  Dual2 r(a.dim());
  r.value = -a.value;
  r.grad = -a.grad;
  r.hess = -a.hess;
  return r;
}

inline Dual2 operator+(const Dual2& a, double b) {
  Dual2 r = a;
  r.value += b;
  return r;
}
inline Dual2 operator+(double a, const Dual2& b) { return b + a; }

inline Dual2 operator-(const Dual2& a, double b) { return a + (-b); }
inline Dual2 operator-(double a, const Dual2& b) { return (-b) + a; }

inline Dual2 operator*(const Dual2& a, const Dual2& b) {
  Dual2 r(a.dim());
  r.value = a.value * b.value;
  r.grad = a.value * b.grad + b.value * a.grad;
  r.hess = a.value * b.hess + b.value * a.hess;
  Dual2::add_sym_outer(r.hess, 1.0, a.grad, b.grad);
  return r;
}

inline Dual2 operator*(const Dual2& a, double b) {
  Dual2 r(a.dim());
  r.value = a.value * b;
  r.grad = b * a.grad;
  r.hess = b * a.hess;
  return r;
}
inline Dual2 operator*(double a, const Dual2& b) { return b * a; }

// 1/x via the chain rule; |x| at or below the floor is a domain violation.
inline Dual2 reciprocal(const Dual2& a) {
  if (std::abs(a.value) < kDenominatorFloor) {
    throw DomainError("reciprocal: denominator below domain floor");
  }
  const double inv = 1.0 / a.value;
  return a.chain(inv, -inv * inv, 2.0 * inv * inv * inv);
}

inline Dual2 operator/(const Dual2& a, const Dual2& b) {
  return a * reciprocal(b);
}

inline Dual2 operator/(const Dual2& a, double b) {
  if (std::abs(b) < kDenominatorFloor) {
    throw DomainError("division by near-zero constant");
  }
  return a * (1.0 / b);
}

inline Dual2 operator/(double a, const Dual2& b) { return reciprocal(b) * a; }

inline Dual2 sqrt(const Dual2& a) {
  if (a.value < kPowerDomainFloor) {
    throw DomainError("sqrt: argument below domain floor");
  }
  const double s = std::sqrt(a.value);
  return a.chain(s, 0.5 / s, -0.25 / (s * a.value));
}

inline Dual2 atan(const Dual2& a) {
  const double t = 1.0 / (1.0 + a.value * a.value);
  return a.chain(std::atan(a.value), t, -2.0 * a.value * t * t);
}

inline Dual2 sin(const Dual2& a) {
  const double s = std::sin(a.value);
  const double c = std::cos(a.value);
  return a.chain(s, c, -s);
}

inline Dual2 cos(const Dual2& a) {
  const double s = std::sin(a.value);
  const double c = std::cos(a.value);
  return a.chain(c, -s, -c);
}

// Real-exponent power, defined for positive base only (the Castro terms
// (1 +- x_{n+1})^q stay positive on the admissible domain).
inline Dual2 pow(const Dual2& a, double p) {
  if (a.value < kPowerDomainFloor) {
    throw DomainError("pow: base below domain floor");
  }
  const double f0 = std::pow(a.value, p);
  const double f1 = p * std::pow(a.value, p - 1.0);
  const double f2 = p * (p - 1.0) * std::pow(a.value, p - 2.0);
  return a.chain(f0, f1, f2);
}

// Double counterparts with the same domain policy, so template maps behave
// identically on the plain-double path used by the finite-difference oracle.
inline double sqrt(double x) {
  if (x < kPowerDomainFloor) {
    throw DomainError("sqrt: argument below domain floor");
  }
  return std::sqrt(x);
}
inline double atan(double x) { return std::atan(x); }
inline double sin(double x) { return std::sin(x); }
inline double cos(double x) { return std::cos(x); }
inline double pow(double x, double p) {
  if (x < kPowerDomainFloor) {
    throw DomainError("pow: base below domain floor");
  }
  return std::pow(x, p);
}

inline double reciprocal_like(double x) {
  if (std::abs(x) < kDenominatorFloor) {
    throw DomainError("reciprocal: denominator below domain floor");
  }
  return 1.0 / x;
}
inline Dual2 reciprocal_like(const Dual2& x) { return reciprocal(x); }

inline double scalar_value(double x) { return x; }
inline double scalar_value(const Dual2& x) { return x.value; }

template <class T>
T scalar_constant(double c, const T& like);

template <>
inline double scalar_constant<double>(double c, const double&) {
  return c;
}

template <>
inline Dual2 scalar_constant<Dual2>(double c, const Dual2& like) {
  return Dual2::constant(c, like.dim());
}

// ---------------------------------------------------------------------------
// Jet2: value, first and second derivatives of an ambient-valued map at a
// chart point. second[a] is symmetric bitwise by construction of Dual2.
// ---------------------------------------------------------------------------

struct Jet2 {
  Eigen::VectorXd point;                  // chart coordinates (n)
  Eigen::VectorXd value;                  // ambient coordinates (m)
  Eigen::MatrixXd first;                  // m x n
  std::vector<Eigen::MatrixXd> second;    // m entries, each n x n

  int chart_dim() const { return static_cast<int>(point.size()); }
  int ambient_dim() const { return static_cast<int>(value.size()); }
};

// Evaluates the exact two-jet of `map` at `point`. The map must be callable
// as std::vector<T> map(const std::vector<T>&) for T in {double, Dual2}.
template <class Map>
Jet2 eval_jet(const Map& map, const Eigen::VectorXd& point) {
  const int n = static_cast<int>(point.size());
  std::vector<Dual2> in;
  in.reserve(n);
  for (int i = 0; i < n; ++i) {
    in.push_back(Dual2::variable(point[i], n, i));
  }
  const std::vector<Dual2> out = map(in);
  const int m = static_cast<int>(out.size());

  Jet2 jet;
  jet.point = point;
  jet.value.resize(m);
  jet.first.resize(m, n);
  jet.second.reserve(m);
  for (int a = 0; a < m; ++a) {
    jet.value[a] = out[a].value;
    jet.first.row(a) = out[a].grad.transpose();
    jet.second.push_back(out[a].hess);
  }
  return jet;
}

// Central finite differences; truncation error O(step^2). Test oracle only:
// every production path uses eval_jet.
template <class Map>
Jet2 finite_difference_jet(const Map& map, const Eigen::VectorXd& point,
                           double step) {
  if (!(step > 0.0)) {
    throw DomainError("finite_difference_jet: step must be positive");
  }
  const int n = static_cast<int>(point.size());
  std::vector<double> base(point.data(), point.data() + n);
  const std::vector<double> f0 = map(base);
  const int m = static_cast<int>(f0.size());

  auto eval_at = [&](const Eigen::VectorXd& p) {
    std::vector<double> in(p.data(), p.data() + n);
    return map(in);
  };

  Jet2 jet;
  jet.point = point;
  jet.value = Eigen::Map<const Eigen::VectorXd>(f0.data(), m);
  jet.first.resize(m, n);
  jet.second.assign(m, Eigen::MatrixXd::Zero(n, n));

  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd pp = point, pm = point;
    pp[i] += step;
    pm[i] -= step;
    const std::vector<double> fp = eval_at(pp);
    const std::vector<double> fm = eval_at(pm);
    for (int a = 0; a < m; ++a) {
      jet.first(a, i) = (fp[a] - fm[a]) / (2.0 * step);
      jet.second[a](i, i) = (fp[a] - 2.0 * f0[a] + fm[a]) / (step * step);
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      Eigen::VectorXd ppp = point, ppm = point, pmp = point, pmm = point;
      ppp[i] += step; ppp[j] += step;
      ppm[i] += step; ppm[j] -= step;
      pmp[i] -= step; pmp[j] += step;
      pmm[i] -= step; pmm[j] -= step;
      const std::vector<double> fpp = eval_at(ppp);
      const std::vector<double> fpm = eval_at(ppm);
      const std::vector<double> fmp = eval_at(pmp);
      const std::vector<double> fmm = eval_at(pmm);
      for (int a = 0; a < m; ++a) {
        const double s =
            (fpp[a] - fpm[a] - fmp[a] + fmm[a]) / (4.0 * step * step);
        jet.second[a](i, j) = s;
        jet.second[a](j, i) = s;
      }
    }
  }
  return jet;
}

// Jet of outer(inner(.)) from the jet of outer at inner's value and the jet
// of inner at the base point.
inline Jet2 compose_jets(const Jet2& outer, const Jet2& inner) {
  const int n = inner.chart_dim();
  const int k = inner.ambient_dim();
  const int m = outer.ambient_dim();
  if (outer.chart_dim() != k) {
    throw DimensionError("compose_jets: dimension mismatch");
  }
  Jet2 jet;
  jet.point = inner.point;
  jet.value = outer.value;
  jet.first = outer.first * inner.first;
  jet.second.assign(m, Eigen::MatrixXd::Zero(n, n));
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < k; ++b) {
      jet.second[a] += outer.first(a, b) * inner.second[b];
    }
    jet.second[a] +=
        inner.first.transpose() * outer.second[a] * inner.first;
  }
  return jet;
}

}  // namespace lagpinch
