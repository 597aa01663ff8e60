#pragma once

#include "ermlab/instances.hpp"

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include <vector>

namespace ermlab {

/// n i.i.d. draws from one distribution.
struct SampleSet {
  DistributionSpec spec;
  std::vector<FunctionSample> samples;
};

SampleSet draw_samples(const DistributionSpec& spec, int n, Rng& rng);

/// F_S(x): arithmetic mean of the member values.
double empirical_value(const SampleSet& set, Eigen::Ref<const Eigen::VectorXd> x);

/// The objective the ERM adversary minimizes: F_S itself, except for the
/// l1-regularized family where it is F_S(x) + lambda * ||x||_1 (the
/// regularizer the construction is built to balance).
double erm_objective(const SampleSet& set, Eigen::Ref<const Eigen::VectorXd> x);

/// Population counterpart of erm_objective.
double erm_population_objective(const DistributionSpec& spec,
                                Eigen::Ref<const Eigen::VectorXd> x);

/// Analytic minimum of erm_objective, attained by the adversarial point.
double analytic_empirical_min(const DistributionSpec& spec);

struct ErmOutcome {
  Eigen::VectorXd point;          // x_hat(S)
  bool adversary_succeeded = false;
  double empirical_value = 0.0;   // erm_objective at the point
  double population_value = 0.0;  // erm_population_objective at the point
  double gap = 0.0;               // population_value - F*
};

/// The closed-form bad empirical minimizer from the construction's analysis:
/// subset families return the evaluation point of the smallest-index base
/// vector no sample witnessed (the origin when all were covered); the code
/// family always returns the codeword direction of z^I with z_j = -1 exactly
/// on the sampled indices, succeeding when at most k/2 distinct indices were
/// drawn.
ErmOutcome adversarial_erm(const SampleSet& set);

/// True iff erm_objective at the outcome's point equals the analytic
/// empirical minimum within 1e-9.
bool verify_erm(const SampleSet& set, const ErmOutcome& outcome);

/// Euclidean projection onto the radius-R ell_p ball for p in {1, 2, inf}.
Eigen::VectorXd project(Eigen::Ref<const Eigen::VectorXd> x, double p, double radius);

/// Single-pass projected subgradient descent with iterate averaging:
/// x_1 = 0, x_{t+1} = project(x_t - eta g_t) with eta = R/(L sqrt(n)),
/// returning the average of x_1..x_n. Draws n fresh samples from the
/// distribution. Rejects the bounded-range family (no finite Lipschitz
/// constant to step against).
Eigen::VectorXd sgd_baseline(const DistributionSpec& spec, int n, Rng& rng);

/// Outcome with provenance for reports: seed, spec digest, sample digests.
nlohmann::json erm_outcome_to_json(const ErmOutcome& outcome, const SampleSet& set,
                                   std::uint64_t seed);

}  // namespace ermlab
