// Acceptance suite: one pass/fail line per criterion, exit 1 on any failure.

#include "ermlab/experiments.hpp"
#include "ermlab/selfcheck.hpp"
#include "oracles.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace ermlab;
using namespace ermlab::testing;

namespace {

constexpr std::uint64_t kMasterSeed = 7;

std::shared_ptr<const PackedSet> packing_cache(int d, int m) {
  static std::map<std::pair<int, int>, std::shared_ptr<const PackedSet>> cache;
  auto key = std::make_pair(d, m);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto built = std::make_shared<const PackedSet>(
      build_packing(d, m, derive_seed(kMasterSeed, 0)));
  cache.emplace(key, built);
  return built;
}

ExperimentConfig gap_config(DistributionSpec spec, int n, int trials, double threshold) {
  ExperimentConfig config;
  config.spec = std::move(spec);
  config.n = n;
  config.trials = trials;
  config.master_seed = kMasterSeed;
  config.gap_threshold = threshold;
  return config;
}

struct GapSummary {
  double frequency = 0.0;
  int succeeded = 0;
  int exact = 0;
  int verified = 0;
  double wall = 0.0;
};

GapSummary summarize(const ExperimentReport& report, double expected_gap, double tol) {
  GapSummary s;
  s.frequency = report.success_frequency;
  s.wall = report.wall_time_sec;
  for (const auto& record : report.trials) {
    if (!record.succeeded) continue;
    ++s.succeeded;
    if (std::abs(record.gap - expected_gap) <= tol) ++s.exact;
    if (record.verified) ++s.verified;
  }
  return s;
}

/// In-domain point, biased toward base vector index when biased = true.
Eigen::VectorXd pick_point(const DistributionSpec& spec, Rng& rng, bool biased) {
  Eigen::VectorXd x;
  if (biased && spec.family != Family::CodeBased) {
    int index = static_cast<int>(rng.pick(spec.base_size()));
    x = (0.85 + 0.2 * rng.real()) * base_eval_point(spec, index);
    for (int c = 0; c < x.size(); ++c) x[c] += 0.01 * rng.normal();
  } else if (biased) {
    Eigen::VectorXi z(spec.code->dimension());
    for (int i = 0; i < z.size(); ++i) z[i] = rng.sign();
    x = (0.9 + 0.1 * rng.real()) * spec.code->encode(SignVector(z)).unit();
    for (int c = 0; c < x.size(); ++c) x[c] += 0.005 * rng.normal();
  } else {
    x = sample_lp_ball(rng, spec.d, spec.p, spec.radius);
  }
  double norm = lp_norm(x, spec.p);
  if (norm > spec.radius) x *= spec.radius / norm;
  return x;
}

using Body = std::function<bool(std::string&)>;

bool run_criterion(int id, const std::string& title, const Body& body, int& failures) {
  std::string detail;
  bool ok = false;
  auto start = std::chrono::steady_clock::now();
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  char timing[32];
  std::snprintf(timing, sizeof timing, "%.2fs", secs);
  std::cout << (ok ? "[PASS]" : "[FAIL]") << " criterion " << id << ": " << title << " ("
            << detail << "; " << timing << ")\n"
            << std::flush;
  if (!ok) ++failures;
  return ok;
}

}  // namespace

int main() {
  int failures = 0;

  run_criterion(1, "non-smooth l2 gap 1/4 at the theorem scale", [&](std::string& detail) {
    auto config = gap_config(make_nonsmooth_l2(packing_cache(120, 1024)), 9, 200, 0.25);
    ExperimentReport report = run_experiment(config);
    GapSummary s = summarize(report, 0.25, 1e-9);
    std::ostringstream msg;
    msg << "freq " << s.frequency << " in [0.75,0.96], " << s.exact << "/" << s.succeeded
        << " exact gaps, " << s.verified << "/" << s.succeeded << " verified, wall "
        << report.wall_time_sec << "s";
    detail = msg.str();
    return s.frequency >= 0.75 && s.frequency <= 0.96 && s.exact == s.succeeded &&
           s.verified == s.succeeded && report.wall_time_sec < 60.0;
  }, failures);

  run_criterion(2, "lp variants p=1 and p=inf keep the 1/4 gap", [&](std::string& detail) {
    std::ostringstream msg;
    bool ok = true;
    for (double p : {1.0, std::numeric_limits<double>::infinity()}) {
      auto config = gap_config(make_lp_scaled(packing_cache(120, 1024), p), 9, 200, 0.25);
      ExperimentReport report = run_experiment(config);
      GapSummary s = summarize(report, 0.25, 1e-9);
      msg << "p=" << (std::isinf(p) ? std::string("inf") : std::to_string(int(p))) << ": freq "
          << s.frequency << ", " << s.exact << "/" << s.succeeded << " exact; ";
      ok = ok && s.frequency >= 0.75 && s.frequency <= 0.96 && s.exact == s.succeeded &&
           s.verified == s.succeeded;
    }
    detail = msg.str();
    return ok;
  }, failures);

  run_criterion(3, "smooth gap 1/128 plus the smoothness battery", [&](std::string& detail) {
    DistributionSpec spec = make_smooth(packing_cache(120, 1024));
    auto config = gap_config(spec, 9, 200, 1.0 / 128.0);
    ExperimentReport report = run_experiment(config);
    GapSummary s = summarize(report, 1.0 / 128.0, 1e-9);
    bool ok = s.frequency >= 0.75 && s.frequency <= 0.96 && s.exact == s.succeeded &&
              s.verified == s.succeeded;

    // Lipschitz 1/4 and gradient modulus 1 over uniform in-ball pairs
    Rng rng(derive_seed(kMasterSeed, 301));
    int lipschitz_bad = 0;
    int smooth_bad = 0;
    for (int i = 0; i < 10000; ++i) {
      FunctionSample sample = sample_function(spec, rng);
      Eigen::VectorXd x = sample_l2_ball(rng, spec.d, 1.0);
      Eigen::VectorXd y = sample_l2_ball(rng, spec.d, 1.0);
      double dv = std::abs(value(spec, sample, x) - value(spec, sample, y));
      if (dv > 0.25 * (x - y).norm() + 1e-9) ++lipschitz_bad;
      double dg = (subgradient(spec, sample, x) - subgradient(spec, sample, y)).norm();
      if (dg > (x - y).norm() + 1e-6) ++smooth_bad;
    }

    // gradient vs central finite differences at mixed random points
    Rng fd_rng(derive_seed(kMasterSeed, 302));
    int fd_bad = 0;
    double fd_worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      FunctionSample sample = sample_function(spec, fd_rng);
      Eigen::VectorXd x = pick_point(spec, fd_rng, i % 2 == 0);
      if (x.norm() > 1.0 - 1e-5) x *= (1.0 - 1e-5);  // keep the stencil in-domain
      Eigen::VectorXd expected = fd_gradient(spec, sample, x);
      double err = (subgradient(spec, sample, x) - expected).lpNorm<Eigen::Infinity>();
      fd_worst = std::max(fd_worst, err);
      if (err > 1e-5) ++fd_bad;
    }

    std::ostringstream msg;
    msg << "freq " << s.frequency << ", " << s.exact << "/" << s.succeeded
        << " exact, lipschitz violations " << lipschitz_bad << ", smoothness violations "
        << smooth_bad << ", fd worst " << fd_worst;
    detail = msg.str();
    return ok && lipschitz_bad == 0 && smooth_bad == 0 && fd_bad == 0;
  }, failures);

  run_criterion(4, "l1-regularized gap 1/128 with zero regularized empirical value",
                [&](std::string& detail) {
    double lambda = 1.0 / std::sqrt(120.0);
    auto config = gap_config(make_l1_regularized(packing_cache(120, 1024), lambda), 9, 200,
                             1.0 / 128.0);
    ExperimentReport report = run_experiment(config);
    GapSummary s = summarize(report, 1.0 / 128.0, 1e-9);
    // replay succeeded trials to check the regularized empirical minimum
    int zero_empirical = 0;
    int succeeded = 0;
    for (const auto& record : report.trials) {
      if (!record.succeeded) continue;
      ++succeeded;
      Rng rng(record.seed);
      SampleSet set = draw_samples(config.spec, config.n, rng);
      ErmOutcome outcome = adversarial_erm(set);
      if (std::abs(outcome.empirical_value) <= 1e-9) ++zero_empirical;
    }
    std::ostringstream msg;
    msg << "freq " << s.frequency << ", " << s.exact << "/" << s.succeeded << " exact gaps, "
        << zero_empirical << "/" << succeeded << " zero regularized minima";
    detail = msg.str();
    return s.frequency >= 0.75 && s.frequency <= 0.96 && s.exact == s.succeeded &&
           s.verified == s.succeeded && zero_empirical == succeeded;
  }, failures);

  run_criterion(5, "code-based deterministic gap, codec sweep, fast evaluation",
                [&](std::string& detail) {
    auto code = std::make_shared<BchCode>(BchCode::from_length_and_dimension(127, 64));
    DistributionSpec spec = make_code_based(code);
    double floor_gap = 10.0 / 508.0;

    auto config = gap_config(spec, 32, 20, floor_gap);
    ExperimentReport report = run_experiment(config);
    bool gaps_ok = report.success_frequency == 1.0;
    int exact = 0;
    for (const auto& record : report.trials) {
      Rng rng(record.seed);
      SampleSet set = draw_samples(spec, config.n, rng);
      std::set<int> indices;
      for (const auto& sample : set.samples) indices.insert(sample.code_index);
      double expected =
          ((64.0 - static_cast<double>(indices.size())) / 64.0) * (10.0 / 254.0);
      if (std::abs(record.gap - expected) <= 1e-12 && record.gap >= floor_gap - 1e-12)
        ++exact;
    }

    Rng codec_rng(derive_seed(kMasterSeed, 501));
    int roundtrip_bad = 0;
    for (int weight = 0; weight <= 10; ++weight) {
      for (int trial = 0; trial < 1000; ++trial) {
        Eigen::VectorXi z(64);
        for (int i = 0; i < 64; ++i) z[i] = codec_rng.sign();
        SignVector message(z);
        Eigen::VectorXi original = code->encode(message).entries();
        Eigen::VectorXi word = original;
        for (int f = 0; f < weight; ++f) {
          int pos;
          do {
            pos = static_cast<int>(codec_rng.pick(127));
          } while (word[pos] != original[pos]);
          word[pos] = -word[pos];
        }
        auto back = code->decode(SignVector(word));
        if (!back || !(*back == message)) ++roundtrip_bad;
      }
    }

    BchCode small = BchCode::from_length_and_dimension(15, 7);
    Rng fast_rng(derive_seed(kMasterSeed, 502));
    int fast_bad = 0;
    for (int i = 0; i < 1000; ++i) {
      Eigen::VectorXd x;
      if (i % 2 == 0) {
        Eigen::VectorXi z(7);
        for (int b = 0; b < 7; ++b) z[b] = fast_rng.sign();
        x = small.encode(SignVector(z)).unit() * (0.7 + 0.3 * fast_rng.real());
        for (int c = 0; c < 15; ++c) x[c] += 0.05 * fast_rng.normal();
        if (x.norm() > 1.0) x /= x.norm();
      } else {
        x = sample_l2_ball(fast_rng, 15, 1.0);
      }
      int j = static_cast<int>(fast_rng.pick(7));
      if (std::abs(small.gj_value_fast(j, x) - small.gj_value_bruteforce(j, x)) > 1e-12)
        ++fast_bad;
    }

    std::ostringstream msg;
    msg << "freq " << report.success_frequency << ", " << exact << "/20 exact gaps, "
        << roundtrip_bad << " round-trip failures, " << fast_bad << " fast/brute mismatches";
    detail = msg.str();
    return gaps_ok && exact == 20 && roundtrip_bad == 0 && fast_bad == 0;
  }, failures);

  run_criterion(6, "uniform-convergence deviation at least 0.1", [&](std::string& detail) {
    auto config = gap_config(make_nonsmooth_l2(packing_cache(120, 4096)), 64, 100, 0.1);
    config.mode = Mode::UniformDeviation;
    ExperimentReport report = run_experiment(config);
    std::ostringstream msg;
    msg << "freq " << report.success_frequency << " >= 0.80 (prediction ~0.97)";
    detail = msg.str();
    return report.success_frequency >= 0.80;
  }, failures);

  run_criterion(7, "epsilon-scaled family gap exactly 1/8", [&](std::string& detail) {
    auto config = gap_config(make_scaled_alpha(packing_cache(120, 1024), 1.0, 1.0, 0.125),
                             20, 200, 0.125);
    ExperimentReport report = run_experiment(config);
    GapSummary s = summarize(report, 0.125, 1e-9);
    double exact_freq = static_cast<double>(s.exact) / report.trials.size();
    std::ostringstream msg;
    msg << "exact-gap freq " << exact_freq << " in [0.85,1.0] (analytic 0.9613), "
        << s.verified << "/" << s.succeeded << " verified";
    detail = msg.str();
    return exact_freq >= 0.85 && exact_freq <= 1.0 && s.verified == s.succeeded;
  }, failures);

  run_criterion(8, "bounded-range gap 1/2 in dimension 2 and range in [0,1]",
                [&](std::string& detail) {
    DistributionSpec spec = make_bounded_range(64);
    auto config = gap_config(spec, 5, 200, 0.5);
    ExperimentReport report = run_experiment(config);
    GapSummary s = summarize(report, 0.5, 1e-9);
    double exact_freq = static_cast<double>(s.exact) / report.trials.size();

    Rng rng(derive_seed(kMasterSeed, 801));
    int range_bad = 0;
    for (int i = 0; i < 100000; ++i) {
      FunctionSample sample = sample_function(spec, rng);
      Eigen::VectorXd x = pick_point(spec, rng, i % 4 == 0);
      double v = value(spec, sample, x);
      if (v < -1e-12 || v > 1.0 + 1e-9) ++range_bad;
    }
    std::ostringstream msg;
    msg << "exact-gap freq " << exact_freq << " in [0.76,0.96] (analytic 0.8689), range "
        << "violations " << range_bad << "/100000";
    detail = msg.str();
    return exact_freq >= 0.76 && exact_freq <= 0.96 && s.verified == s.succeeded &&
           range_bad == 0;
  }, failures);

  run_criterion(9, "projected subgradient succeeds on the criterion-1 distribution",
                [&](std::string& detail) {
    auto config = gap_config(make_nonsmooth_l2(packing_cache(120, 1024)), 400, 50, 0.1);
    config.mode = Mode::SgdContrast;
    ExperimentReport report = run_experiment(config);
    std::ostringstream msg;
    double worst = 0.0;
    for (const auto& record : report.trials) worst = std::max(worst, record.gap);
    msg << "freq(gap<=0.1) " << report.success_frequency << " >= 0.90, worst gap " << worst;
    detail = msg.str();
    return report.success_frequency >= 0.90;
  }, failures);

  run_criterion(10, "exact population values and coverage probabilities vs Monte Carlo",
                [&](std::string& detail) {
    auto packing = std::make_shared<const PackedSet>(
        build_packing(36, 32, derive_seed(kMasterSeed, 1001)));
    std::vector<DistributionSpec> specs = {
        make_nonsmooth_l2(packing),
        make_lp_scaled(packing, 1.0),
        make_lp_scaled(packing, std::numeric_limits<double>::infinity()),
        make_smooth(packing),
        make_l1_regularized(packing, 1.0 / std::sqrt(36.0)),
        make_scaled_alpha(packing, 2.0, 1.5, 0.375),
        make_code_based(std::make_shared<BchCode>(BchCode::from_length_and_dimension(15, 7))),
        make_bounded_range(32)};
    int mc_bad = 0;
    long checked = 0;
    for (const auto& spec : specs) {
      Rng rng(derive_seed(kMasterSeed, 1002 + static_cast<int>(spec.family)));
      for (int point = 0; point < 100; ++point) {
        Eigen::VectorXd x = pick_point(spec, rng, point % 2 == 0);
        McEstimate mc = mc_population_estimate(spec, x, 100000, rng);
        double tolerance = 4.0 * std::max(mc.stderr_of_mean, 1e-12);
        if (std::abs(population_value(spec, x) - mc.mean) > tolerance) ++mc_bad;
        ++checked;
      }
    }

    struct Setting { int m, n; double alpha; };
    int cov_bad = 0;
    for (auto [m, n, alpha] :
         {Setting{64, 5, 0.5}, Setting{32, 6, 0.5}, Setting{20, 10, 0.25}}) {
      Rng rng(derive_seed(kMasterSeed, 1100 + m));
      double simulated = simulate_coverage_failure(m, n, alpha, 100000, rng);
      double exact = coverage_probability(m, n, alpha);
      double tolerance = 4.0 * std::sqrt(exact * (1.0 - exact) / 100000.0);
      if (std::abs(simulated - exact) > tolerance) ++cov_bad;
    }
    std::ostringstream msg;
    msg << mc_bad << "/" << checked << " Monte Carlo mismatches, " << cov_bad
        << "/3 coverage mismatches";
    detail = msg.str();
    return mc_bad == 0 && cov_bad == 0;
  }, failures);

  if (failures == 0)
    std::cout << "all 10 acceptance criteria passed\n";
  else
    std::cout << failures << " acceptance criteria FAILED\n";
  return failures == 0 ? 0 : 1;
}
