#include "ermlab/erm.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>

namespace ermlab {

SampleSet draw_samples(const DistributionSpec& spec, int n, Rng& rng) {
  if (n < 1) throw std::invalid_argument("draw_samples: need n >= 1");
  SampleSet set{spec, {}};
  set.samples.reserve(n);
  for (int i = 0; i < n; ++i) set.samples.push_back(sample_function(spec, rng));
  return set;
}

double empirical_value(const SampleSet& set, Eigen::Ref<const Eigen::VectorXd> x) {
  if (set.samples.empty()) throw std::invalid_argument("empirical_value: empty sample set");
  double acc = 0.0;
  for (const auto& sample : set.samples) acc += value(set.spec, sample, x);
  return acc / static_cast<double>(set.samples.size());
}

double erm_objective(const SampleSet& set, Eigen::Ref<const Eigen::VectorXd> x) {
  double objective = empirical_value(set, x);
  if (set.spec.family == Family::L1Reg)
    objective += set.spec.lambda * x.lpNorm<1>();
  return objective;
}

double erm_population_objective(const DistributionSpec& spec,
                                Eigen::Ref<const Eigen::VectorXd> x) {
  double objective = population_value(spec, x);
  if (spec.family == Family::L1Reg) objective += spec.lambda * x.lpNorm<1>();
  return objective;
}

double analytic_empirical_min(const DistributionSpec& spec) {
  switch (spec.family) {
    case Family::NonsmoothL2:
    case Family::LpScaled:
      return 0.5;
    case Family::Smooth:
    case Family::L1Reg:
    case Family::BoundedRange:
      return 0.0;
    case Family::ScaledAlpha:
      return spec.scale * spec.radius / 2.0;
    case Family::CodeBased:
      return spec.code->floor_value();
  }
  throw std::logic_error("analytic_empirical_min: unknown family");
}

ErmOutcome adversarial_erm(const SampleSet& set) {
  if (set.samples.empty()) throw std::invalid_argument("adversarial_erm: empty sample set");
  const DistributionSpec& spec = set.spec;
  ErmOutcome outcome;

  if (spec.family == Family::CodeBased) {
    int k = spec.code->dimension();
    std::set<int> indices;
    for (const auto& sample : set.samples) indices.insert(sample.code_index);
    Eigen::VectorXi z(k);
    for (int j = 0; j < k; ++j) z[j] = indices.count(j) ? -1 : 1;
    outcome.point = spec.code->encode(SignVector(z)).unit();
    outcome.adversary_succeeded = 2 * static_cast<int>(indices.size()) <= k;
  } else {
    int m = spec.base_size();
    Bitmask covered(m);
    for (const auto& sample : set.samples) covered |= sample.members;
    int uncovered = covered.first_unset();
    if (uncovered >= 0) {
      outcome.point = base_eval_point(spec, uncovered);
      outcome.adversary_succeeded = true;
    } else {
      outcome.point = Eigen::VectorXd::Zero(spec.d);
      outcome.adversary_succeeded = false;
    }
  }

  outcome.empirical_value = erm_objective(set, outcome.point);
  outcome.population_value = erm_population_objective(spec, outcome.point);
  outcome.gap = outcome.population_value - population_min(spec);
  return outcome;
}

bool verify_erm(const SampleSet& set, const ErmOutcome& outcome) {
  double objective = erm_objective(set, outcome.point);
  return std::abs(objective - analytic_empirical_min(set.spec)) <= 1e-9;
}

Eigen::VectorXd project(Eigen::Ref<const Eigen::VectorXd> x, double p, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("project: need radius > 0");
  if (std::isinf(p)) return x.cwiseMax(-radius).cwiseMin(radius);
  if (p == 2.0) {
    double norm = x.norm();
    return norm <= radius ? Eigen::VectorXd(x) : Eigen::VectorXd(x * (radius / norm));
  }
  if (p == 1.0) {
    if (x.lpNorm<1>() <= radius) return x;
    // Sorted-threshold projection onto the l1 ball.
    Eigen::VectorXd magnitudes = x.cwiseAbs();
    std::vector<double> sorted(magnitudes.data(), magnitudes.data() + magnitudes.size());
    std::sort(sorted.begin(), sorted.end(), std::greater<double>());
    double running = 0.0;
    double threshold = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      running += sorted[i];
      double candidate = (running - radius) / static_cast<double>(i + 1);
      if (sorted[i] - candidate > 0.0) threshold = candidate;
    }
    Eigen::VectorXd out(x.size());
    for (int i = 0; i < x.size(); ++i) {
      double shrunk = std::max(magnitudes[i] - threshold, 0.0);
      out[i] = x[i] < 0.0 ? -shrunk : shrunk;
    }
    return out;
  }
  throw std::invalid_argument("project: only p in {1, 2, inf} supported");
}

Eigen::VectorXd sgd_baseline(const DistributionSpec& spec, int n, Rng& rng) {
  if (n < 1) throw std::invalid_argument("sgd_baseline: need n >= 1");
  LipschitzInfo info = lipschitz_bound(spec);
  if (info.unbounded_family)
    throw std::invalid_argument("sgd_baseline: family has no usable Lipschitz constant");

  double step = spec.radius / (info.lipschitz * std::sqrt(static_cast<double>(n)));
  Eigen::VectorXd iterate = Eigen::VectorXd::Zero(spec.d);
  Eigen::VectorXd average = Eigen::VectorXd::Zero(spec.d);
  for (int t = 0; t < n; ++t) {
    average += iterate;
    FunctionSample sample = sample_function(spec, rng);
    Eigen::VectorXd grad = subgradient(spec, sample, iterate);
    iterate = project(iterate - step * grad, spec.p, spec.radius);
  }
  return average / static_cast<double>(n);
}

nlohmann::json erm_outcome_to_json(const ErmOutcome& outcome, const SampleSet& set,
                                   std::uint64_t seed) {
  nlohmann::json samples = nlohmann::json::array();
  for (const auto& sample : set.samples) {
    if (sample.code_index >= 0)
      samples.push_back(sample.code_index);
    else
      samples.push_back(sample.members.digest());
  }
  nlohmann::json point = nlohmann::json::array();
  for (int i = 0; i < outcome.point.size(); ++i) point.push_back(outcome.point[i]);
  return {{"seed", seed},
          {"spec_digest", set.spec.digest()},
          {"sample_digests", samples},
          {"point", point},
          {"adversary_succeeded", outcome.adversary_succeeded},
          {"empirical_value", outcome.empirical_value},
          {"population_value", outcome.population_value},
          {"gap", outcome.gap}};
}

}  // namespace ermlab
