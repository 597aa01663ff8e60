#pragma once

// Test-side oracles, re-derived from the construction formulas against the
// base-set matrices. They deliberately avoid the library's evaluation paths
// (instances::value / population_value) so consistency checks compare two
// independent routes to the same quantity.

#include "ermlab/erm.hpp"
#include "ermlab/instances.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace ermlab::testing {

inline Eigen::VectorXd oracle_linear_terms(const DistributionSpec& spec,
                                           Eigen::Ref<const Eigen::VectorXd> x) {
  switch (spec.family) {
    case Family::NonsmoothL2:
    case Family::Smooth:
      return spec.packing->unit() * x;
    case Family::ScaledAlpha:
      return spec.scale * (spec.packing->unit() * x);
    case Family::L1Reg: {
      double s = 1.0 / std::sqrt(static_cast<double>(spec.d));
      return spec.packing->unit() * (x.array() - s).matrix();
    }
    case Family::LpScaled: {
      double scale = std::pow(static_cast<double>(spec.d), 1.0 - 1.0 / spec.p);
      return (spec.packing->vectors().cast<double>() * x) / scale;
    }
    case Family::BoundedRange:
      return spec.circle->vectors() * x;
    case Family::CodeBased:
      break;
  }
  throw std::logic_error("oracle_linear_terms: code family handled separately");
}

inline double oracle_component(const DistributionSpec& spec, double term) {
  if (spec.family == Family::BoundedRange) return linear_ramp(term, spec.alpha_kink());
  return squared_hinge(term - 7.0 / 8.0);
}

struct McEstimate {
  double mean = 0.0;
  double stderr_of_mean = 0.0;
  long samples = 0;
};

/// Monte Carlo estimate of F_D(x): draws functions with sample_function and
/// evaluates each from the raw formulas (sorted-walk maximum for the
/// max-type families, sparse active sums for the additive ones, the two-case
/// rule for the code family).
inline McEstimate mc_population_estimate(const DistributionSpec& spec,
                                         Eigen::Ref<const Eigen::VectorXd> x, long samples,
                                         Rng& rng) {
  McEstimate est;
  est.samples = samples;
  double mean = 0.0;
  double m2 = 0.0;
  long count = 0;
  auto push = [&](double v) {
    ++count;
    double delta = v - mean;
    mean += delta / count;
    m2 += delta * (v - mean);
  };

  if (spec.family == Family::CodeBased) {
    const BchCode& code = *spec.code;
    int n = code.length();
    int k = code.dimension();
    double floor = code.floor_value();
    std::vector<std::uint8_t> hard(n);
    for (int i = 0; i < n; ++i) hard[i] = x[i] < 0.0 ? 1 : 0;
    auto message = code.decode_bits(hard);
    double inner = 0.0;
    std::vector<char> active(k, 0);
    if (message) {
      auto word = code.encode_bits(*message);
      for (int i = 0; i < n; ++i) inner += word[i] ? -x[i] : x[i];
      inner /= std::sqrt(static_cast<double>(n));
      if (inner >= floor)
        for (int j = 0; j < k; ++j) active[j] = (*message)[j] == 0;
    }
    for (long s = 0; s < samples; ++s) {
      int j = sample_function(spec, rng).code_index;
      push(active[j] ? inner : floor);
    }
  } else if (spec.family == Family::NonsmoothL2 || spec.family == Family::LpScaled ||
             spec.family == Family::ScaledAlpha) {
    Eigen::VectorXd terms = oracle_linear_terms(spec, x);
    double floor = spec.family == Family::ScaledAlpha ? spec.scale * spec.radius / 2.0 : 0.5;
    std::vector<int> order(terms.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return terms[a] > terms[b]; });
    for (long s = 0; s < samples; ++s) {
      const Bitmask& mask = sample_function(spec, rng).members;
      double v = floor;
      for (int idx : order)
        if (mask.test(idx)) {
          v = std::max(floor, terms[idx]);
          break;
        }
      push(v);
    }
  } else {
    Eigen::VectorXd terms = oracle_linear_terms(spec, x);
    std::vector<std::pair<int, double>> active;
    for (int i = 0; i < terms.size(); ++i) {
      double component = oracle_component(spec, terms[i]);
      if (component > 0.0) active.emplace_back(i, component);
    }
    double base = spec.family == Family::L1Reg ? -spec.lambda * x.sum() : 0.0;
    for (long s = 0; s < samples; ++s) {
      const Bitmask& mask = sample_function(spec, rng).members;
      double v = base;
      for (const auto& [i, component] : active)
        if (mask.test(i)) v += component;
      push(v);
    }
  }

  est.mean = mean;
  est.stderr_of_mean = count > 1 ? std::sqrt(m2 / (count - 1) / count) : 0.0;
  return est;
}

/// Empirical frequency of the coverage event failing (some element of the
/// base set never included across n draws), simulated honestly bit by bit.
inline double simulate_coverage_failure(int m, int n, double alpha, long runs, Rng& rng) {
  long failures = 0;
  std::vector<char> covered(m);
  for (long run = 0; run < runs; ++run) {
    std::fill(covered.begin(), covered.end(), 0);
    for (int i = 0; i < n; ++i)
      for (int w = 0; w < m; ++w)
        if (rng.bernoulli(alpha)) covered[w] = 1;
    if (std::count(covered.begin(), covered.end(), char(1)) != m) ++failures;
  }
  return static_cast<double>(failures) / static_cast<double>(runs);
}

/// Central-difference gradient for the additive families, evaluated from the
/// raw component formulas with per-point precomputed linear terms (so the
/// full-gradient check stays O(m d) per point).
inline Eigen::VectorXd fd_gradient(const DistributionSpec& spec, const FunctionSample& sample,
                                   Eigen::Ref<const Eigen::VectorXd> x, double h = 1e-6) {
  if (spec.family != Family::Smooth && spec.family != Family::L1Reg &&
      spec.family != Family::BoundedRange)
    throw std::logic_error("fd_gradient: additive families only");
  Eigen::VectorXd terms = oracle_linear_terms(spec, x);
  const Eigen::MatrixXd& directions = spec.family == Family::BoundedRange
                                          ? spec.circle->vectors()
                                          : spec.packing->unit();
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(spec.d);
  for (int c = 0; c < spec.d; ++c) {
    double plus = 0.0;
    double minus = 0.0;
    sample.members.for_each_set([&](int i) {
      plus += oracle_component(spec, terms[i] + h * directions(i, c));
      minus += oracle_component(spec, terms[i] - h * directions(i, c));
    });
    grad[c] = (plus - minus) / (2.0 * h);
  }
  if (spec.family == Family::L1Reg) grad.array() -= spec.lambda;
  return grad;
}

}  // namespace ermlab::testing
