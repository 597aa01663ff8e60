#include "ermlab/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

namespace ermlab {

namespace {

constexpr char kVersion[] = "0.1.0";
constexpr double kGapSlack = 1e-9;  // matches the gap-exactness tolerance

bool meets_threshold(Mode mode, double gap, double threshold) {
  if (mode == Mode::SgdContrast) return gap <= threshold + kGapSlack;
  return gap >= threshold - kGapSlack;
}

}  // namespace

std::string mode_name(Mode mode) {
  switch (mode) {
    case Mode::ErmGap: return "erm-gap";
    case Mode::UniformDeviation: return "uniform-deviation";
    case Mode::SgdContrast: return "sgd-contrast";
  }
  throw std::logic_error("mode_name: unknown mode");
}

Mode mode_from_name(const std::string& name) {
  if (name == "erm-gap") return Mode::ErmGap;
  if (name == "uniform-deviation") return Mode::UniformDeviation;
  if (name == "sgd-contrast") return Mode::SgdContrast;
  throw std::invalid_argument("unknown mode: " + name);
}

double coverage_probability(int m, int n, double alpha) {
  if (m < 1 || n < 1) throw std::invalid_argument("coverage_probability: need m, n >= 1");
  if (!(alpha > 0.0) || !(alpha < 1.0))
    throw std::invalid_argument("coverage_probability: need alpha in (0,1)");
  double miss_one = std::pow(1.0 - alpha, n);     // one element never included
  // 1 - (1 - miss_one)^m, evaluated stably.
  return -std::expm1(static_cast<double>(m) * std::log1p(-miss_one));
}

TrialRecord uniform_deviation_trial(const ExperimentConfig& config, int trial_index) {
  if (config.spec.family != Family::NonsmoothL2)
    throw std::invalid_argument("uniform_deviation_trial: requires the nonsmooth-l2 family");
  TrialRecord record;
  record.trial_index = trial_index;
  record.seed = derive_seed(config.master_seed, 1 + static_cast<std::uint64_t>(trial_index));
  Rng rng(record.seed);

  int m = config.spec.base_size();
  std::vector<int> counts(m, 0);
  for (int i = 0; i < config.n; ++i) {
    FunctionSample sample = sample_function(config.spec, rng);
    sample.members.for_each_set([&](int w) { ++counts[w]; });
  }
  // F_S(wbar) - F_D(wbar) = (count_w / n - 1/2) / 2 under the packing bound.
  double best = -1.0;
  int argmax = -1;
  for (int w = 0; w < m; ++w) {
    double deviation =
        std::abs(static_cast<double>(counts[w]) / config.n - 0.5) / 2.0;
    if (deviation > best) {
      best = deviation;
      argmax = w;
    }
  }
  record.gap = best;
  record.deviation_argmax = argmax;
  record.succeeded = meets_threshold(Mode::UniformDeviation, best, config.gap_threshold);
  record.verified = true;
  return record;
}

TrialRecord run_trial(const ExperimentConfig& config, int trial_index) {
  if (config.mode == Mode::UniformDeviation)
    return uniform_deviation_trial(config, trial_index);

  TrialRecord record;
  record.trial_index = trial_index;
  record.seed = derive_seed(config.master_seed, 1 + static_cast<std::uint64_t>(trial_index));
  Rng rng(record.seed);

  if (config.mode == Mode::SgdContrast) {
    Eigen::VectorXd average = sgd_baseline(config.spec, config.n, rng);
    record.gap = erm_population_objective(config.spec, average) - population_min(config.spec);
    record.succeeded = meets_threshold(config.mode, record.gap, config.gap_threshold);
    record.verified = true;
    return record;
  }

  SampleSet set = draw_samples(config.spec, config.n, rng);
  ErmOutcome outcome = adversarial_erm(set);
  record.gap = outcome.gap;
  record.succeeded = outcome.adversary_succeeded;
  record.verified = verify_erm(set, outcome);
  return record;
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
  if (config.trials < 1) throw std::invalid_argument("run_experiment: need trials >= 1");
  if (config.n < 1) throw std::invalid_argument("run_experiment: need n >= 1");
  if ((config.mode == Mode::ErmGap || config.mode == Mode::UniformDeviation) &&
      !(config.gap_threshold > 0.0))
    throw std::invalid_argument("run_experiment: gap threshold must be positive");

  auto start = std::chrono::steady_clock::now();
  ExperimentReport report;
  report.config = config;
  report.trials.resize(config.trials);

  int workers = std::max(1, config.parallelism);
  if (workers == 1) {
    for (int t = 0; t < config.trials; ++t) report.trials[t] = run_trial(config, t);
  } else {
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&]() {
        for (int t = next.fetch_add(1); t < config.trials; t = next.fetch_add(1))
          report.trials[t] = run_trial(config, t);
      });
    for (auto& th : pool) th.join();
  }

  int met = 0;
  int adversary = 0;
  for (const auto& record : report.trials) {
    if (meets_threshold(config.mode, record.gap, config.gap_threshold)) ++met;
    if (record.succeeded) ++adversary;
  }
  report.success_frequency = static_cast<double>(met) / config.trials;
  report.adversary_frequency = static_cast<double>(adversary) / config.trials;

  if (config.mode == Mode::ErmGap) {
    if (config.spec.family == Family::CodeBased) {
      if (2 * config.n <= config.spec.base_size()) report.analytic_prediction = 1.0;
    } else {
      report.analytic_prediction =
          coverage_probability(config.spec.base_size(), config.n, config.spec.alpha);
    }
  }

  report.wall_time_sec =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

ExperimentReport sgd_contrast(ExperimentConfig config) {
  config.mode = Mode::SgdContrast;
  return run_experiment(config);
}

nlohmann::json report_to_json(const ExperimentReport& report, const std::string& invocation) {
  nlohmann::json trials = nlohmann::json::array();
  for (const auto& record : report.trials) {
    nlohmann::json t = {{"trial_index", record.trial_index},
                        {"seed", record.seed},
                        {"gap", record.gap},
                        {"succeeded", record.succeeded},
                        {"verified", record.verified}};
    if (record.deviation_argmax >= 0) t["deviation_argmax"] = record.deviation_argmax;
    trials.push_back(std::move(t));
  }
  nlohmann::json j = {
      {"config",
       {{"spec", report.config.spec.summary_json()},
        {"n", report.config.n},
        {"trials", report.config.trials},
        {"master_seed", report.config.master_seed},
        {"gap_threshold", report.config.gap_threshold},
        {"mode", mode_name(report.config.mode)},
        {"parallelism", report.config.parallelism}}},
      {"trials", trials},
      {"success_frequency", report.success_frequency},
      {"adversary_frequency", report.adversary_frequency},
      {"analytic_prediction",
       report.analytic_prediction ? nlohmann::json(*report.analytic_prediction)
                                  : nlohmann::json(nullptr)},
      {"versions", {{"ermlab", kVersion}}},
      {"wall_time_sec", report.wall_time_sec}};
  if (!invocation.empty()) j["invocation"] = invocation;
  return j;
}

std::string report_to_csv(const ExperimentReport& report) {
  std::ostringstream out;
  out << "trial_index,seed,gap,succeeded,verified\n";
  char gap[64];
  for (const auto& record : report.trials) {
    std::snprintf(gap, sizeof gap, "%.17g", record.gap);
    out << record.trial_index << ',' << record.seed << ',' << gap << ','
        << (record.succeeded ? 1 : 0) << ',' << (record.verified ? 1 : 0) << '\n';
  }
  return out.str();
}

void write_text_atomic(const std::string& path, const std::string& content) {
  std::filesystem::path target(path);
  std::filesystem::path temp = target;
  temp += ".tmp";
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + temp.string());
    out << content;
    if (!out) throw std::runtime_error("write failed: " + temp.string());
  }
  std::filesystem::rename(temp, target);
}

}  // namespace ermlab
