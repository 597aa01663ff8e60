#pragma once

#include "ermlab/erm.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace ermlab {

enum class Mode { ErmGap, UniformDeviation, SgdContrast };

std::string mode_name(Mode mode);
Mode mode_from_name(const std::string& name);

struct ExperimentConfig {
  DistributionSpec spec;
  int n = 1;                   // samples per trial
  int trials = 1;
  std::uint64_t master_seed = 0;
  double gap_threshold = 0.0;  // the claim's gap (or deviation) level
  Mode mode = Mode::ErmGap;
  int parallelism = 1;
};

struct TrialRecord {
  int trial_index = 0;
  std::uint64_t seed = 0;
  double gap = 0.0;            // gap, or max deviation in deviation mode
  bool succeeded = false;      // mode predicate (see run_trial)
  bool verified = false;       // ERM verification; true where not applicable
  int deviation_argmax = -1;   // deviation mode: index of the maximizing w
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<TrialRecord> trials;
  double success_frequency = 0.0;    // fraction of trials meeting gap_threshold
  double adversary_frequency = 0.0;  // fraction with the coverage event failing
  std::optional<double> analytic_prediction;
  double wall_time_sec = 0.0;
};

/// Pr[union of n sampled subsets misses some element] for a base set of m
/// elements, each included per sample with probability alpha:
/// 1 - (1 - (1-alpha)^n)^m.
double coverage_probability(int m, int n, double alpha);

/// One trial under the config's mode, fully determined by
/// derive_seed(master_seed, 1 + trial_index):
///  - ErmGap: draw S, run adversarial_erm; succeeded = gap meets threshold.
///  - UniformDeviation: max_w |F_S(wbar) - F_D(wbar)| via per-vector counts.
///  - SgdContrast: run the baseline; succeeded = gap at most the threshold.
TrialRecord run_trial(const ExperimentConfig& config, int trial_index);

/// Deviation trial exposed directly (requires the non-smooth l2 family).
TrialRecord uniform_deviation_trial(const ExperimentConfig& config, int trial_index);

/// All trials (optionally across threads; records are always ordered and
/// bit-identical regardless of scheduling), aggregated with the analytic
/// coverage prediction where one applies.
ExperimentReport run_experiment(const ExperimentConfig& config);

/// SgdContrast convenience wrapper: forces the mode and runs.
ExperimentReport sgd_contrast(ExperimentConfig config);

nlohmann::json report_to_json(const ExperimentReport& report,
                              const std::string& invocation = "");
std::string report_to_csv(const ExperimentReport& report);

/// Write-then-rename so readers never observe a partial file.
void write_text_atomic(const std::string& path, const std::string& content);

}  // namespace ermlab
