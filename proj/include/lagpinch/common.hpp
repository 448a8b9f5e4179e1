// Shared plumbing: error taxonomy, deterministic counter-based RNG,
// small dense tensor containers, numeric formatting.
#pragma once

#include <cassert>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

namespace lagpinch {

inline constexpr const char* kVersion = "0.1.0";

// Input left the admissible region of a chart or map. Callers may catch
// this and resample; it is a data condition, not a bug.
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Dehomogenization pivot too close to the runner-up; the jet would not be
// well defined as a function of the chart point. Resample.
class PivotUnstableError : public DomainError {
 public:
  using DomainError::DomainError;
};

// Induced metric numerically singular (immersion rank deficiency).
class RankDeficiencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Total-symmetry residual above the hard threshold. This signals an
// implementation bug upstream, never a data condition.
class SymmetryViolationError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Operation called with an unsupported dimension (e.g. 4-frame machinery
// with n < 4).
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Invalid run configuration (CLI maps this to exit code 2).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// ---------------------------------------------------------------------------
// Deterministic RNG. splitmix64 keyed by (seed, index, lane) so that any
// per-point or per-trial stream can be opened independently of evaluation
// order and thread scheduling.
// ---------------------------------------------------------------------------

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

inline std::uint64_t hash_mix(std::uint64_t a, std::uint64_t b) {
  std::uint64_t s = a ^ (b + 0x9E3779B97F4A7C15ull + (a << 6) + (a >> 2));
  std::uint64_t out = splitmix64_next(s);
  return out ^ splitmix64_next(s);
}

class DeterministicRng {
 public:
  explicit DeterministicRng(std::uint64_t seed) : state_(seed) {}

  // Stream keyed by (seed, index, lane); independent of any other stream.
  static DeterministicRng substream(std::uint64_t seed, std::uint64_t index,
                                    std::uint64_t lane = 0) {
    return DeterministicRng(hash_mix(hash_mix(seed, index), lane));
  }

  std::uint64_t next_u64() { return splitmix64_next(state_); }

  // Uniform in (0, 1]; never returns 0 so log() is safe.
  double uniform01() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  int uniform_int(int lo, int hi) {  // inclusive range
    assert(hi >= lo);
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(next_u64() % span);
  }

  // Box-Muller; the spare is cached, so a stream yields a fixed sequence
  // regardless of how the draws are grouped.
  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * M_PI * u2;
    spare_ = r * std::sin(t);
    has_spare_ = true;
    return r * std::cos(t);
  }

 private:
  std::uint64_t state_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// ---------------------------------------------------------------------------
// Dense cube/quartic tensors of doubles, 0-based.
// ---------------------------------------------------------------------------

class Tensor3 {
 public:
  Tensor3() = default;
  explicit Tensor3(int dim)
      : dim_(dim),
        v_(static_cast<std::size_t>(dim) * dim * dim, 0.0) {}

  int dim() const { return dim_; }

  double& operator()(int i, int j, int k) {
    return v_[index(i, j, k)];
  }
  double operator()(int i, int j, int k) const {
    return v_[index(i, j, k)];
  }

  const std::vector<double>& data() const { return v_; }

 private:
  std::size_t index(int i, int j, int k) const {
    assert(i >= 0 && i < dim_ && j >= 0 && j < dim_ && k >= 0 && k < dim_);
    return (static_cast<std::size_t>(i) * dim_ + j) * dim_ + k;
  }
  int dim_ = 0;
  std::vector<double> v_;
};

class Tensor4 {
 public:
  Tensor4() = default;
  explicit Tensor4(int dim)
      : dim_(dim),
        v_(static_cast<std::size_t>(dim) * dim * dim * dim, 0.0) {}

  int dim() const { return dim_; }

  double& operator()(int i, int j, int k, int l) {
    return v_[index(i, j, k, l)];
  }
  double operator()(int i, int j, int k, int l) const {
    return v_[index(i, j, k, l)];
  }

  const std::vector<double>& data() const { return v_; }

 private:
  std::size_t index(int i, int j, int k, int l) const {
    assert(i >= 0 && i < dim_ && j >= 0 && j < dim_ && k >= 0 && k < dim_ &&
           l >= 0 && l < dim_);
    return ((static_cast<std::size_t>(i) * dim_ + j) * dim_ + k) * dim_ + l;
  }
  int dim_ = 0;
  std::vector<double> v_;
};

// 17 significant digits: enough to round-trip any double, and a fixed width
// so reports are byte-stable.
inline std::string format_double17(double x) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return std::string(buf);
}

}  // namespace lagpinch
