// Pinching verdicts and the Castro admissibility window.
#pragma once

#include <cmath>

#include "lagpinch/common.hpp"
#include "lagpinch/fundforms.hpp"

namespace lagpinch {

// Predicted S/(n^2 H^2) for the Castro sphere Phi_q:
// (3n + q^2 + 2q - 2) / (n + q)^2. Reduces to 3/(n+2) at q = 2.
inline double castro_ratio(int n, double q) {
  if (n < 3) throw DomainError("castro_ratio: n must be >= 3");
  if (!(q > 1.0)) throw DomainError("castro_ratio: q must be > 1");
  return (3.0 * n + q * q + 2.0 * q - 2.0) / ((n + q) * (n + q));
}

// Largest q for which Phi_q still satisfies the pinching condition:
// 2 + (3 + sqrt(3 (2n^2 + n - 3))) / (2n - 3). At this q the predicted
// ratio equals 3/(n + 3/2) exactly.
inline double castro_q_bound(int n) {
  if (n < 3) throw DomainError("castro_q_bound: n must be >= 3");
  return 2.0 +
         (3.0 + std::sqrt(3.0 * (2.0 * n * n + n - 3.0))) / (2.0 * n - 3.0);
}

struct PinchVerdict {
  double S = 0.0;
  double H = 0.0;
  double c = 0.0;
  int n = 0;
  double lower_gap = 0.0;  // S - 3 n^2 H^2 / (n + 2)
  double upper_gap = 0.0;  // 3 n^2 H^2 / (n + 3/2) + 2c - S
  bool satisfies_1_4 = false;
  bool satisfies_1_5 = false;
};

inline PinchVerdict verdict(const FundamentalData& fund, int n, double c,
                            double tol) {
  const double n2H2 = static_cast<double>(n) * n * fund.H * fund.H;
  PinchVerdict v;
  v.S = fund.S;
  v.H = fund.H;
  v.c = c;
  v.n = n;
  v.lower_gap = fund.S - 3.0 * n2H2 / (n + 2.0);
  v.upper_gap = 3.0 * n2H2 / (n + 1.5) + 2.0 * c - fund.S;
  const double slack = tol * (1.0 + fund.S);
  v.satisfies_1_4 = v.lower_gap >= -slack;
  v.satisfies_1_5 = v.upper_gap >= -slack;
  return v;
}

}  // namespace lagpinch
