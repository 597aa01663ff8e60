#pragma once

#include <Eigen/Core>

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>

namespace ermlab {

/// One SplitMix64 step; mutates the state and returns the next word.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Seed of the stream_id-th child stream of a master seed. Every consumer
/// (packing construction, trial i, sample draws) gets its own stream, so
/// reordering one consumer never perturbs another.
inline std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t stream_id) {
  std::uint64_t s = master_seed ^ (0xD1B54A32D192ED03ULL * (stream_id + 1));
  std::uint64_t a = splitmix64(s);
  std::uint64_t b = splitmix64(s);
  return a ^ (b >> 1);
}

/// Deterministic RNG. All draws go through explicit helpers instead of
/// std::*_distribution (whose output is implementation-defined), so a seed
/// reproduces bit-identical streams on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t u64() { return gen_(); }

  /// Uniform in [0,1) with 53 random bits.
  double real() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return real() < p; }

  /// Uniform index in [0, n). Multiply-shift; bias is below n / 2^64.
  std::uint64_t pick(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(gen_()) * n) >> 64);
  }

  int sign() { return (gen_() & 1ULL) ? 1 : -1; }

  /// Standard normal via Box-Muller; the paired value is cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = 1.0 - real();  // in (0, 1]
    double u2 = real();
    double radius = std::sqrt(-2.0 * std::log(u1));
    double angle = 2.0 * M_PI * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

  double exponential() { return -std::log1p(-real()); }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

inline double lp_norm(Eigen::Ref<const Eigen::VectorXd> x, double p) {
  if (std::isinf(p)) return x.lpNorm<Eigen::Infinity>();
  if (p == 1.0) return x.lpNorm<1>();
  if (p == 2.0) return x.norm();
  double s = 0.0;
  for (int i = 0; i < x.size(); ++i) s += std::pow(std::abs(x[i]), p);
  return std::pow(s, 1.0 / p);
}

/// Point drawn from the radius-R ell_p ball. Exactly uniform for p in
/// {1, 2, inf}; for other p the direction is Gaussian (in-ball but not
/// volume-uniform, which is all the property suites need).
inline Eigen::VectorXd sample_lp_ball(Rng& rng, int d, double p, double radius) {
  if (d < 1) throw std::invalid_argument("sample_lp_ball: dimension must be positive");
  Eigen::VectorXd x(d);
  if (std::isinf(p)) {
    for (int i = 0; i < d; ++i) x[i] = radius * (2.0 * rng.real() - 1.0);
    return x;
  }
  if (p == 1.0) {
    // (|y_1|,...,|y_d|, E) ~ i.i.d. exponentials makes y / (sum + E) uniform
    // on the cross-polytope.
    double total = 0.0;
    for (int i = 0; i < d; ++i) {
      double e = rng.exponential();
      x[i] = rng.sign() * e;
      total += e;
    }
    total += rng.exponential();
    return x * (radius / total);
  }
  for (int i = 0; i < d; ++i) x[i] = rng.normal();
  double norm = lp_norm(x, p);
  if (norm == 0.0) return Eigen::VectorXd::Zero(d);
  double shell = std::pow(rng.real(), 1.0 / d);
  return x * (radius * shell / norm);
}

inline Eigen::VectorXd sample_l2_ball(Rng& rng, int d, double radius) {
  return sample_lp_ball(rng, d, 2.0, radius);
}

}  // namespace ermlab
