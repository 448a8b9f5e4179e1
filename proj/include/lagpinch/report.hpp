// Batch verification drivers and deterministic JSON/CSV reporting. Per-point
// work fans out across worker threads; records land in index order and all
// aggregates are reductions over them, so a fixed (config, seed) pair yields
// byte-identical output at any thread count.
#pragma once

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include "lagpinch/common.hpp"
#include "lagpinch/curvature.hpp"
#include "lagpinch/fundforms.hpp"
#include "lagpinch/identities.hpp"
#include "lagpinch/immersion.hpp"
#include "lagpinch/pinch.hpp"

namespace lagpinch {

// Default gates; --tol overrides every family/structural gate at once.
inline constexpr double kTolExactPipeline = 1e-8;   // AD-only quantities
inline constexpr double kTolFsPipeline = 1e-6;      // FS-chart pipeline
inline constexpr double kTolSymmetry = 1e-9;
inline constexpr double kTolLagrangian = 1e-9;
inline constexpr double kTolShapeOperator = 1e-6;   // FD-limited
inline constexpr double kTolLowerBound = 1e-9;      // scaled by (1 + S)
inline constexpr int kMaxResamples = 64;

struct RunConfig {
  std::string command = "verify";  // verify | scan
  std::string family = "whitney";
  int n = 3;
  bool n_set = false;
  double q = 2.0;
  double theta = 0.3;
  int samples = 100;
  std::uint64_t seed = 42;
  double tol = 0.0;  // 0 -> per-check defaults
  int trials = 1000;
  int frames = 10000;
  int restarts = 8;
  int threads = 1;
  double q_min = 1.1, q_max = 6.0, q_step = 0.1;
  double theta_min = 0.0, theta_max = 1.0, theta_step = 0.1;
  std::string format = "json";
  std::string out;

  void validate() const {
    auto fail = [](const std::string& msg) { throw ConfigError(msg); };
    if (command != "verify" && command != "scan")
      fail("command must be 'verify' or 'scan'");
    const bool point_family =
        family == "whitney" || family == "castro" || family == "whitney-cp" ||
        family == "geodesic-plane";
    if (command == "verify") {
      if (!point_family && family != "identities" && family != "frames")
        fail("verify family must be one of whitney|castro|whitney-cp|"
             "geodesic-plane|identities|frames");
    } else {
      if (family != "castro" && family != "whitney-cp")
        fail("scan family must be castro or whitney-cp");
    }
    if (n < 3) fail("--n must be >= 3");
    if (samples < 1) fail("--samples must be >= 1");
    if (trials < 1) fail("--trials must be >= 1");
    if (frames < 1) fail("--frames must be >= 1");
    if (restarts < 1) fail("--restarts must be >= 1");
    if (threads < 1 || threads > 256) fail("--threads must be in [1, 256]");
    if (tol < 0.0) fail("--tol must be nonnegative");
    if (family == "castro" && command == "verify" && !(q > 1.0))
      fail("castro requires --q > 1");
    if (family == "whitney-cp" && !(theta >= 0.0))
      fail("whitney-cp requires --theta >= 0");
    if (command == "scan" && family == "castro") {
      if (!(q_min > 1.0)) fail("--q-min must be > 1");
      if (!(q_step > 0.0)) fail("--q-step must be positive");
      if (!(q_max >= q_min)) fail("--q-max must be >= --q-min");
    }
    if (command == "scan" && family == "whitney-cp") {
      if (!(theta_min >= 0.0)) fail("--theta-min must be >= 0");
      if (!(theta_step > 0.0)) fail("--theta-step must be positive");
      if (!(theta_max >= theta_min)) fail("--theta-max must be >= --theta-min");
    }
    if (format != "json" && format != "csv") fail("--format must be json|csv");
  }
};

struct PointRecord {
  int index = 0;
  int resamples = 0;
  std::vector<double> chart_point;
  double S = 0.0, H = 0.0;
  bool ratio_defined = false;
  double ratio = 0.0;              // family-specific measured ratio
  double identity_residual = 0.0;  // |ratio - predicted|
  double symmetry_residual = 0.0;
  double lagrangian_residual = 0.0;
  double shape_residual = 0.0;
  double lower_gap = 0.0, upper_gap = 0.0;
  bool satisfies_1_4 = false, satisfies_1_5 = false;
};

struct GridRecord {
  int index = 0;
  double param = 0.0;      // q or theta
  double ratio = 0.0;      // predicted (castro) or measured mean (whitney-cp)
  double threshold = 0.0;  // 3/(n + 3/2)
  bool admissible = false;
  bool measured = false;  // whitney-cp rows carry measured statistics
  bool ratio_defined = true;
  double max_identity_residual = 0.0;
  double mean_S = 0.0;
  double mean_n2H2 = 0.0;
};

struct SuiteSummary {
  std::string name;
  long long trials = 0;
  long long failures = 0;
  double worst = 0.0;  // float residual when applicable, else 0
};

// Every check is normalized to "worst <= tolerance".
struct CheckResult {
  std::string name;
  double worst = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct Report {
  int schema = 1;
  RunConfig config;
  std::vector<PointRecord> points;
  std::vector<GridRecord> grid;
  std::vector<SuiteSummary> suites;
  std::vector<CheckResult> checks;
  int total_resamples = 0;

  bool pass() const {
    for (const CheckResult& c : checks) {
      if (!c.pass) return false;
    }
    return true;
  }
};

namespace detail {

// Index-parallel loop with deterministic exception propagation (lowest
// failing index wins).
template <class Fn>
void parallel_for_indexed(int count, int threads, const Fn& fn) {
  if (threads <= 1 || count <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  const int workers = std::min(threads, count);
  std::vector<std::exception_ptr> errors(count);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w]() {
      for (int i = w; i < count; i += workers) {
        try {
          fn(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (std::thread& t : pool) t.join();
  for (int i = 0; i < count; ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
  }
}

inline void add_check(Report& rep, const std::string& name, double worst,
                      double tol) {
  rep.checks.push_back(CheckResult{name, worst, tol, worst <= tol});
}

}  // namespace detail

// ---------------------------------------------------------------------------
// verify drivers
// ---------------------------------------------------------------------------

namespace detail {

inline ImmersionSpec spec_for(const RunConfig& cfg) {
  if (cfg.family == "whitney") return ImmersionSpec::whitney_c(cfg.n);
  if (cfg.family == "castro") return ImmersionSpec::castro(cfg.n, cfg.q);
  if (cfg.family == "whitney-cp")
    return ImmersionSpec::whitney_cp(cfg.n, cfg.theta);
  if (cfg.family == "geodesic-plane")
    return ImmersionSpec::geodesic_plane(cfg.n);
  throw ConfigError("not a point family: " + cfg.family);
}

inline PointRecord evaluate_point(const RunConfig& cfg,
                                  const ImmersionSpec& spec, int index) {
  PointRecord rec;
  rec.index = index;
  const int n = cfg.n;

  for (int attempt = 0;; ++attempt) {
    if (attempt > kMaxResamples) {
      throw DomainError("evaluate_point: resample budget exhausted");
    }
    Eigen::VectorXd u;
    SphereChart chart{Pole::North};
    if (spec.family == Family::TotallyGeodesicPlane) {
      DeterministicRng rng = DeterministicRng::substream(
          cfg.seed, static_cast<std::uint64_t>(index), 500000 + attempt);
      u.resize(n);
      for (int k = 0; k < n; ++k) u[k] = rng.gaussian();
    } else {
      const SpherePoint x = sample_sphere_point(
          n, cfg.seed, static_cast<std::uint64_t>(index),
          static_cast<std::uint64_t>(attempt) * 1024);
      chart = SphereChart::preferred_for(x);
      u = chart.to_chart(x);
    }

    try {
      const ImmersionChartMap map = immersion_point_map(spec, u, chart);
      auto jet_at = [&](const Eigen::VectorXd& p) { return eval_jet(map, p); };
      const Jet2 jet = jet_at(u);
      const PointFrame frame = adapted_frame(jet, spec.ambient);
      const FundamentalData fund =
          second_fundamental_tensor(jet, spec.ambient, frame);

      rec.resamples = attempt;
      rec.chart_point.assign(u.data(), u.data() + u.size());
      rec.S = fund.S;
      rec.H = fund.H;
      rec.symmetry_residual = fund.symmetry_residual;
      rec.lagrangian_residual = lagrangian_residual(frame, spec.ambient);
      rec.shape_residual =
          check_shape_operator_identity(jet_at, spec.ambient, u);

      const PinchVerdict v = verdict(fund, n, spec.ambient.c, kTolLowerBound);
      rec.lower_gap = v.lower_gap;
      rec.upper_gap = v.upper_gap;
      rec.satisfies_1_4 = v.satisfies_1_4;
      rec.satisfies_1_5 = v.satisfies_1_5;

      const double n2H2 = static_cast<double>(n) * n * fund.H * fund.H;
      if (spec.family == Family::TotallyGeodesicPlane) {
        rec.ratio_defined = false;
        rec.identity_residual = std::max(fund.S, fund.H);
      } else if (n2H2 > 1e-12 * (1.0 + fund.S)) {
        rec.ratio_defined = true;
        if (spec.family == Family::Castro) {
          rec.ratio = fund.S / n2H2;
          rec.identity_residual = std::abs(rec.ratio - castro_ratio(n, cfg.q));
        } else {
          rec.ratio = fund.S * (n + 2.0) / (3.0 * n2H2);
          rec.identity_residual = std::abs(rec.ratio - 1.0);
        }
      } else {
        rec.ratio_defined = false;
        rec.identity_residual = 0.0;
      }
      return rec;
    } catch (const DomainError&) {
      continue;  // pivot tie or chart-domain violation: redraw the point
    }
  }
}

inline Report run_family_verify(const RunConfig& cfg) {
  const ImmersionSpec spec = spec_for(cfg);
  Report rep;
  rep.config = cfg;
  rep.points.resize(cfg.samples);

  parallel_for_indexed(cfg.samples, cfg.threads, [&](int i) {
    rep.points[i] = evaluate_point(cfg, spec, i);
  });

  double worst_identity = 0.0, worst_sym = 0.0, worst_lag = 0.0,
         worst_shape = 0.0, worst_lower = 0.0;
  for (const PointRecord& r : rep.points) {
    rep.total_resamples += r.resamples;
    worst_identity = std::max(worst_identity, r.identity_residual);
    worst_sym = std::max(worst_sym, r.symmetry_residual);
    worst_lag = std::max(worst_lag, r.lagrangian_residual);
    worst_shape = std::max(worst_shape, r.shape_residual);
    worst_lower = std::max(worst_lower, -r.lower_gap / (1.0 + r.S));
  }

  const bool fs = cfg.family == "whitney-cp";
  const double tol_identity =
      cfg.tol > 0.0 ? cfg.tol : (fs ? kTolFsPipeline : kTolExactPipeline);
  const std::string identity_name =
      cfg.family == "geodesic-plane" ? "totally_geodesic_max_S_H"
                                     : "identity_residual_max";
  detail::add_check(rep, identity_name, worst_identity, tol_identity);
  detail::add_check(rep, "symmetry_residual_max", worst_sym,
                    cfg.tol > 0.0 ? cfg.tol : kTolSymmetry);
  detail::add_check(rep, "lagrangian_residual_max", worst_lag,
                    cfg.tol > 0.0 ? cfg.tol : kTolLagrangian);
  detail::add_check(rep, "shape_operator_residual_max", worst_shape,
                    cfg.tol > 0.0 ? cfg.tol : kTolShapeOperator);
  detail::add_check(rep, "lower_bound_violation_max", worst_lower,
                    kTolLowerBound);
  return rep;
}

inline Report run_identities_verify(const RunConfig& cfg) {
  Report rep;
  rep.config = cfg;

  std::vector<int> dims;
  if (cfg.n_set) {
    dims.push_back(cfg.n);
  } else {
    dims = {3, 4, 5, 6, 7};
  }

  long long anchor_failures = 0;
  {
    // Frozen hand-computed anchors.
    RationalCubicTensor t(4);
    t.set(1, 1, 1, 1);
    t.set(1, 2, 2, 2);
    t.set(1, 3, 3, 3);
    t.set(1, 4, 4, 4);
    const auto [lhs, rhs] = ii1_sides(t);
    if (lhs != Rational(-8) || rhs != Rational(-8)) ++anchor_failures;

    EqualityCaseParams p;
    p.n = 4;
    p.b = {Rational(1), Rational(0)};
    const RationalCubicTensor eq = build_equality_case(p);
    if (trace_times_n(eq, 3) != Rational(22)) ++anchor_failures;
    const R1212Chain chain = r1212_chain(eq, Rational(0));
    if (chain.gauss_form != Rational(9) ||
        chain.decomposed_form != Rational(9) ||
        chain.final_bound != Rational(9))
      ++anchor_failures;
  }
  rep.suites.push_back(SuiteSummary{"hand_anchors", 2, anchor_failures, 0.0});

  for (const int d : dims) {
    std::vector<long long> fail_ii1(cfg.trials, 0), fail_ii2(cfg.trials, 0),
        fail_chain(cfg.trials, 0), fail_bianchi(cfg.trials, 0),
        fail_equality(cfg.trials, 0);

    parallel_for_indexed(cfg.trials, cfg.threads, [&](int trial) {
      DeterministicRng rng = DeterministicRng::substream(
          cfg.seed, static_cast<std::uint64_t>(d) * 1000003u,
          static_cast<std::uint64_t>(trial));
      const RationalCubicTensor t = random_integer_tensor(d, rng);
      const Rational c(rng.uniform_int(0, 5));

      if (const auto [l, r] = ii1_sides(t); l != r) fail_ii1[trial] = 1;
      if (const auto [l, r] = ii2_sides(t); l != r) fail_ii2[trial] = 1;
      const R1212Chain chain = r1212_chain(t, c);
      if (chain.gauss_form != chain.decomposed_form ||
          chain.gauss_form < chain.final_bound ||
          chain.gauss_form - chain.final_bound != r1212_residual_squares(t))
        fail_chain[trial] = 1;
      if (d >= 4) {
        if (const auto [l, r] = bianchi_expansion_sides(t); l != r)
          fail_bianchi[trial] = 1;
      }

      EqualityCaseParams p;
      p.n = d;
      p.a1 = Rational(rng.uniform_int(-9, 9), rng.uniform_int(1, 9));
      p.a2 = Rational(rng.uniform_int(-9, 9), rng.uniform_int(1, 9));
      for (int r2 = 3; r2 <= d; ++r2) {
        p.b.push_back(Rational(rng.uniform_int(-9, 9), rng.uniform_int(1, 9)));
      }
      const R1212Chain eq_chain =
          r1212_chain(build_equality_case(p), Rational(rng.uniform_int(0, 5)));
      if (eq_chain.gauss_form != eq_chain.final_bound) fail_equality[trial] = 1;
    });

    auto total = [](const std::vector<long long>& v) {
      long long s = 0;
      for (long long x : v) s += x;
      return s;
    };
    const std::string suffix = "_n" + std::to_string(d);
    rep.suites.push_back(SuiteSummary{"ii1_decomposition" + suffix, cfg.trials,
                                      total(fail_ii1), 0.0});
    rep.suites.push_back(SuiteSummary{"ii2_decomposition" + suffix, cfg.trials,
                                      total(fail_ii2), 0.0});
    rep.suites.push_back(SuiteSummary{"r1212_chain" + suffix, cfg.trials,
                                      total(fail_chain), 0.0});
    if (d >= 4) {
      rep.suites.push_back(SuiteSummary{"bianchi_expansion" + suffix,
                                        cfg.trials, total(fail_bianchi), 0.0});
    }
    rep.suites.push_back(SuiteSummary{"equality_case_attainment" + suffix,
                                      cfg.trials, total(fail_equality), 0.0});
  }

  long long failures = 0;
  for (const SuiteSummary& s : rep.suites) failures += s.failures;
  detail::add_check(rep, "exact_identity_failures",
                    static_cast<double>(failures), 0.0);
  return rep;
}

inline Report run_frames_verify(const RunConfig& cfg) {
  Report rep;
  rep.config = cfg;

  std::vector<int> dims;
  if (cfg.n_set) {
    dims.push_back(cfg.n);
  } else {
    dims = {3, 4, 5};
  }

  constexpr double kUnset = -std::numeric_limits<double>::infinity();
  double worst_r1212 = kUnset, worst_ricci = kUnset, worst_isotropic = kUnset;
  for (const int d : dims) {
    std::vector<double> w_r(cfg.frames, kUnset), w_ric(cfg.frames, kUnset),
        w_iso(cfg.frames, kUnset);
    parallel_for_indexed(cfg.frames, cfg.threads, [&](int i) {
      DeterministicRng rng = DeterministicRng::substream(
          cfg.seed, 900000u + static_cast<std::uint64_t>(d),
          static_cast<std::uint64_t>(i));
      const double c = (i % 3 == 0) ? 0.0 : rng.uniform(0.0, 2.0);
      const FundamentalData fund =
          fundamental_from_tensor(random_symmetric_tensor(d, rng), c);
      const CurvatureTensor R = gauss_curvature(fund, c);
      const double scale = 1.0 + fund.S;
      const double n2H2 = static_cast<double>(d) * d * fund.H * fund.H;
      const double pinch = 6.0 * n2H2 / (2.0 * d + 3.0) + 2.0 * c - fund.S;

      w_r[i] = -r1212_lower_bound_gap(R, fund, c) / scale;

      Eigen::VectorXd dir(d);
      for (int k = 0; k < d; ++k) dir[k] = rng.gaussian();
      dir.normalize();
      w_ric[i] = -(ricci(R, dir) - 0.5 * (d - 1) * pinch) / scale;

      if (d >= 4) {
        const IsotropicProbe probe = random_isotropic_probe(d, rng);
        const double l = probe.lambda, m = probe.mu;
        const double weight = 1.0 + l * l + m * m + l * l * m * m;
        w_iso[i] =
            -(isotropic_excess(R, probe) - 0.5 * weight * pinch) / scale;
      }
    });
    for (int i = 0; i < cfg.frames; ++i) {
      worst_r1212 = std::max(worst_r1212, w_r[i]);
      worst_ricci = std::max(worst_ricci, w_ric[i]);
      worst_isotropic = std::max(worst_isotropic, w_iso[i]);
    }
    rep.suites.push_back(SuiteSummary{"frame_inequalities_n" + std::to_string(d),
                                      cfg.frames, 0, 0.0});
  }

  detail::add_check(rep, "r1212_bound_violation_max", worst_r1212,
                    kTolLowerBound);
  detail::add_check(rep, "ricci_bound_violation_max", worst_ricci,
                    kTolLowerBound);
  if (worst_isotropic > kUnset) {
    detail::add_check(rep, "isotropic_bound_violation_max", worst_isotropic,
                      kTolLowerBound);
  }

  // Optimizer corroboration: the heuristic minimum never exceeds pure
  // random probing.
  double worst_gap = 0.0;
  const int opt_dim = cfg.n_set ? std::max(cfg.n, 4) : 4;
  for (int t = 0; t < 4; ++t) {
    DeterministicRng rng =
        DeterministicRng::substream(cfg.seed, 777000u, static_cast<std::uint64_t>(t));
    const FundamentalData fund = fundamental_from_tensor(
        random_symmetric_tensor(opt_dim, rng), 0.0);
    const CurvatureTensor R = gauss_curvature(fund, 0.0);
    const MinExcessResult opt =
        min_isotropic_excess(R, cfg.restarts, hash_mix(cfg.seed, t));
    double probe_min = std::numeric_limits<double>::infinity();
    for (int p = 0; p < 2000; ++p) {
      probe_min =
          std::min(probe_min,
                   isotropic_excess(R, random_isotropic_probe(opt_dim, rng)));
    }
    worst_gap = std::max(worst_gap, opt.value - probe_min);
  }
  detail::add_check(rep, "optimizer_vs_random_probes_max_gap", worst_gap,
                    1e-12);
  return rep;
}

inline Report run_castro_scan(const RunConfig& cfg) {
  Report rep;
  rep.config = cfg;
  const double threshold = 3.0 / (cfg.n + 1.5);
  for (int i = 0;; ++i) {
    const double q = cfg.q_min + i * cfg.q_step;  // index-based grid
    if (q > cfg.q_max + 1e-12) break;
    GridRecord row;
    row.index = i;
    row.param = q;
    row.ratio = castro_ratio(cfg.n, q);
    row.threshold = threshold;
    row.admissible = row.ratio <= threshold;
    rep.grid.push_back(row);
  }
  return rep;
}

inline Report run_whitneycp_scan(const RunConfig& cfg) {
  Report rep;
  rep.config = cfg;
  const double threshold = 3.0 / (cfg.n + 1.5);

  std::vector<GridRecord> rows;
  for (int i = 0;; ++i) {
    const double theta = cfg.theta_min + i * cfg.theta_step;
    if (theta > cfg.theta_max + 1e-12) break;
    GridRecord row;
    row.index = i;
    row.param = theta;
    row.threshold = threshold;
    row.measured = true;
    rows.push_back(row);
  }
  rep.grid = rows;

  parallel_for_indexed(static_cast<int>(rep.grid.size()), cfg.threads,
                       [&](int i) {
    GridRecord& row = rep.grid[i];
    RunConfig sub = cfg;
    sub.command = "verify";
    sub.family = "whitney-cp";
    sub.theta = row.param;
    const ImmersionSpec spec = ImmersionSpec::whitney_cp(cfg.n, row.param);
    double sum_S = 0.0, sum_n2H2 = 0.0, sum_ratio = 0.0;
    double max_resid = 0.0;
    int defined = 0;
    bool all_1_5 = true;
    for (int j = 0; j < cfg.samples; ++j) {
      const PointRecord rec = evaluate_point(sub, spec, j);
      sum_S += rec.S;
      sum_n2H2 += static_cast<double>(cfg.n) * cfg.n * rec.H * rec.H;
      all_1_5 = all_1_5 && rec.satisfies_1_5;
      if (rec.ratio_defined) {
        ++defined;
        sum_ratio += rec.ratio;
        max_resid = std::max(max_resid, rec.identity_residual);
      }
    }
    row.mean_S = sum_S / cfg.samples;
    row.mean_n2H2 = sum_n2H2 / cfg.samples;
    row.ratio_defined = defined == cfg.samples;
    row.ratio = row.ratio_defined ? sum_ratio / cfg.samples : 0.0;
    row.max_identity_residual = max_resid;
    row.admissible = all_1_5;  // measured pinching verdict over the samples
  });
  return rep;
}

}  // namespace detail

inline Report run_verify(const RunConfig& cfg) {
  cfg.validate();
  if (cfg.command != "verify") throw ConfigError("run_verify: wrong command");
  if (cfg.family == "identities") return detail::run_identities_verify(cfg);
  if (cfg.family == "frames") return detail::run_frames_verify(cfg);
  return detail::run_family_verify(cfg);
}

inline Report run_scan(const RunConfig& cfg) {
  cfg.validate();
  if (cfg.command != "scan") throw ConfigError("run_scan: wrong command");
  if (cfg.family == "castro") return detail::run_castro_scan(cfg);
  return detail::run_whitneycp_scan(cfg);
}

// ---------------------------------------------------------------------------
// Serialization. Keys are emitted in a fixed order and every double goes
// through format_double17, so identical reports serialize identically.
// ---------------------------------------------------------------------------

namespace detail {

class JsonWriter {
 public:
  void begin_object() { open('{'); }
  void begin_object(const std::string& key) {
    key_prefix(key);
    buf_ += '{';
    fresh_ = true;
  }
  void end_object() { close('}'); }
  void begin_array(const std::string& key) {
    key_prefix(key);
    buf_ += '[';
    fresh_ = true;
  }
  void end_array() { close(']'); }
  void begin_object_in_array() { open('{'); }

  void field(const std::string& key, const std::string& value) {
    raw(key, '"' + escape(value) + '"');
  }
  void field(const std::string& key, const char* value) {
    field(key, std::string(value));
  }
  void field(const std::string& key, double value) {
    raw(key, format_double17(value));
  }
  void field(const std::string& key, int value) {
    raw(key, std::to_string(value));
  }
  void field(const std::string& key, long long value) {
    raw(key, std::to_string(value));
  }
  void field(const std::string& key, std::uint64_t value) {
    raw(key, std::to_string(value));
  }
  void field(const std::string& key, bool value) {
    raw(key, value ? "true" : "false");
  }
  void null_field(const std::string& key) { raw(key, "null"); }

  void double_array(const std::string& key, const std::vector<double>& v) {
    key_prefix(key);
    buf_ += '[';
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i > 0) buf_ += ',';
      buf_ += format_double17(v[i]);
    }
    buf_ += ']';
    fresh_ = false;
  }

  static std::string escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (const char ch : s) {
      switch (ch) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        case '\r': out += "\\r"; break;
        default:
          if (static_cast<unsigned char>(ch) < 0x20) {
            char hex[8];
            std::snprintf(hex, sizeof(hex), "\\u%04x", ch);
            out += hex;
          } else {
            out += ch;
          }
      }
    }
    return out;
  }

  const std::string& str() const { return buf_; }

 private:
  void open(char c) {
    comma();
    buf_ += c;
    fresh_ = true;
  }
  void close(char c) {
    buf_ += c;
    fresh_ = false;
  }
  void comma() {
    if (!fresh_) buf_ += ',';
    fresh_ = true;
  }
  void key_prefix(const std::string& key) {
    comma();
    buf_ += '"';
    buf_ += key;
    buf_ += "\":";
  }
  void raw(const std::string& key, const std::string& value) {
    key_prefix(key);
    buf_ += value;
    fresh_ = false;
  }

  std::string buf_;
  bool fresh_ = true;
};

inline void write_config(JsonWriter& w, const RunConfig& cfg) {
  w.begin_object("config");
  w.field("command", cfg.command);
  w.field("family", cfg.family);
  w.field("n", cfg.n);
  w.field("q", cfg.q);
  w.field("theta", cfg.theta);
  w.field("samples", cfg.samples);
  w.field("seed", cfg.seed);
  w.field("tol", cfg.tol);
  w.field("trials", cfg.trials);
  w.field("frames", cfg.frames);
  w.field("restarts", cfg.restarts);
  w.field("threads", cfg.threads);
  if (cfg.command == "scan" && cfg.family == "castro") {
    w.field("q_min", cfg.q_min);
    w.field("q_max", cfg.q_max);
    w.field("q_step", cfg.q_step);
  }
  if (cfg.command == "scan" && cfg.family == "whitney-cp") {
    w.field("theta_min", cfg.theta_min);
    w.field("theta_max", cfg.theta_max);
    w.field("theta_step", cfg.theta_step);
  }
  w.field("format", cfg.format);
  w.end_object();
}

}  // namespace detail

inline std::string to_json(const Report& rep) {
  detail::JsonWriter w;
  w.begin_object();
  w.field("schema", rep.schema);
  w.field("command", rep.config.command);
  w.field("family", rep.config.family);
  detail::write_config(w, rep.config);

  w.begin_object("provenance");
  w.field("seed", rep.config.seed);
  w.field("version", std::string(kVersion));
  w.end_object();

  if (!rep.points.empty()) {
    w.begin_array("records");
    for (const PointRecord& r : rep.points) {
      w.begin_object_in_array();
      w.field("index", r.index);
      w.field("resamples", r.resamples);
      w.double_array("chart_point", r.chart_point);
      w.field("S", r.S);
      w.field("H", r.H);
      if (r.ratio_defined) {
        w.field("ratio", r.ratio);
      } else {
        w.null_field("ratio");
      }
      w.field("identity_residual", r.identity_residual);
      w.field("symmetry_residual", r.symmetry_residual);
      w.field("lagrangian_residual", r.lagrangian_residual);
      w.field("shape_residual", r.shape_residual);
      w.field("lower_gap", r.lower_gap);
      w.field("upper_gap", r.upper_gap);
      w.field("satisfies_1_4", r.satisfies_1_4);
      w.field("satisfies_1_5", r.satisfies_1_5);
      w.end_object();
    }
    w.end_array();
  }

  if (!rep.grid.empty()) {
    w.begin_array("grid");
    for (const GridRecord& r : rep.grid) {
      w.begin_object_in_array();
      w.field("index", r.index);
      w.field("param", r.param);
      if (r.ratio_defined) {
        w.field("ratio", r.ratio);
      } else {
        w.null_field("ratio");
      }
      w.field("threshold", r.threshold);
      w.field("admissible", r.admissible);
      if (r.measured) {
        w.field("max_identity_residual", r.max_identity_residual);
        w.field("mean_S", r.mean_S);
        w.field("mean_n2H2", r.mean_n2H2);
      }
      w.end_object();
    }
    w.end_array();
  }

  if (!rep.suites.empty()) {
    w.begin_array("suites");
    for (const SuiteSummary& s : rep.suites) {
      w.begin_object_in_array();
      w.field("name", s.name);
      w.field("trials", s.trials);
      w.field("failures", s.failures);
      w.field("worst", s.worst);
      w.end_object();
    }
    w.end_array();
  }

  w.begin_array("checks");
  for (const CheckResult& c : rep.checks) {
    w.begin_object_in_array();
    w.field("name", c.name);
    w.field("worst", c.worst);
    w.field("tolerance", c.tolerance);
    w.field("pass", c.pass);
    w.end_object();
  }
  w.end_array();

  w.begin_object("summary");
  w.field("points", static_cast<int>(rep.points.size()));
  w.field("grid_rows", static_cast<int>(rep.grid.size()));
  w.field("total_resamples", rep.total_resamples);
  w.field("pass", rep.pass());
  w.end_object();

  w.end_object();
  std::string out = w.str();
  out += '\n';
  return out;
}

namespace detail {

inline std::string csv_quote(const std::string& s) {
  const bool need = s.find_first_of(",\"\n\r") != std::string::npos;
  if (!need) return s;
  std::string out = "\"";
  for (const char ch : s) {
    if (ch == '"') out += "\"\"";
    else out += ch;
  }
  out += '"';
  return out;
}

inline void csv_row(std::string& buf, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i > 0) buf += ',';
    buf += csv_quote(cells[i]);
  }
  buf += "\r\n";
}

}  // namespace detail

inline std::string to_csv(const Report& rep) {
  std::string buf;
  auto d = [](double x) { return format_double17(x); };
  auto b = [](bool x) { return std::string(x ? "true" : "false"); };

  if (!rep.grid.empty()) {
    const bool measured = rep.grid.front().measured;
    if (measured) {
      detail::csv_row(buf, {"index", "theta", "ratio", "threshold",
                            "admissible", "max_identity_residual", "mean_S",
                            "mean_n2H2"});
      for (const GridRecord& r : rep.grid) {
        detail::csv_row(buf,
                        {std::to_string(r.index), d(r.param),
                         r.ratio_defined ? d(r.ratio) : std::string(),
                         d(r.threshold), b(r.admissible),
                         d(r.max_identity_residual), d(r.mean_S),
                         d(r.mean_n2H2)});
      }
    } else {
      detail::csv_row(buf, {"index", "q", "ratio", "threshold", "admissible"});
      for (const GridRecord& r : rep.grid) {
        detail::csv_row(buf, {std::to_string(r.index), d(r.param), d(r.ratio),
                              d(r.threshold), b(r.admissible)});
      }
    }
    return buf;
  }

  if (!rep.points.empty()) {
    detail::csv_row(buf,
                    {"index", "resamples", "S", "H", "ratio",
                     "identity_residual", "symmetry_residual",
                     "lagrangian_residual", "shape_residual", "lower_gap",
                     "upper_gap", "satisfies_1_4", "satisfies_1_5"});
    for (const PointRecord& r : rep.points) {
      detail::csv_row(
          buf, {std::to_string(r.index), std::to_string(r.resamples), d(r.S),
                d(r.H), r.ratio_defined ? d(r.ratio) : std::string(),
                d(r.identity_residual), d(r.symmetry_residual),
                d(r.lagrangian_residual), d(r.shape_residual), d(r.lower_gap),
                d(r.upper_gap), b(r.satisfies_1_4), b(r.satisfies_1_5)});
    }
    return buf;
  }

  detail::csv_row(buf, {"suite", "trials", "failures", "worst"});
  for (const SuiteSummary& s : rep.suites) {
    detail::csv_row(buf, {s.name, std::to_string(s.trials),
                          std::to_string(s.failures), d(s.worst)});
  }
  detail::csv_row(buf, {});
  detail::csv_row(buf, {"check", "worst", "tolerance", "pass"});
  for (const CheckResult& c : rep.checks) {
    detail::csv_row(buf, {c.name, d(c.worst), d(c.tolerance), b(c.pass)});
  }
  return buf;
}

}  // namespace lagpinch
