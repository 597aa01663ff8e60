#include "ermlab/erm.hpp"
#include "ermlab/experiments.hpp"
#include "ermlab/packing.hpp"
#include "ermlab/selfcheck.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <iostream>
#include <memory>
#include <optional>
#include <random>
#include <sstream>

namespace {

using namespace ermlab;

constexpr std::uint64_t kPackingStream = 0;

struct FamilyOptions {
  std::string family = "nonsmooth-l2";
  int d = 120;
  int m = 1024;
  std::string p = "2";
  double lambda = 0.0;  // 0 selects the default 1/sqrt(d)
  double eps = 0.125;
  double lipschitz = 1.0;
  double radius = 1.0;
  std::string code = "127-64";
};

void add_family_options(CLI::App* cmd, FamilyOptions& opts) {
  cmd->add_option("--family", opts.family,
                  "nonsmooth-l2 | lp | smooth | l1reg | scaled | code | bounded-range")
      ->required();
  cmd->add_option("--d", opts.d, "dimension of the packing families")->check(CLI::PositiveNumber);
  cmd->add_option("--m", opts.m, "base-set size (packing or circle)")->check(CLI::PositiveNumber);
  cmd->add_option("--p", opts.p, "norm index for the lp family (number or 'inf')");
  cmd->add_option("--lambda", opts.lambda, "l1 regularization weight (default 1/sqrt(d))");
  cmd->add_option("--eps", opts.eps, "target gap of the scaled family");
  cmd->add_option("--L", opts.lipschitz, "Lipschitz scale of the scaled family");
  cmd->add_option("--R", opts.radius, "domain radius of the scaled family");
  cmd->add_option("--code", opts.code, "code preset as d-k, e.g. 127-64 or 15-7");
}

double parse_p(const std::string& text) {
  if (text == "inf" || text == "Inf" || text == "INF")
    return std::numeric_limits<double>::infinity();
  double p = std::stod(text);
  if (!(p >= 1.0)) throw std::invalid_argument("--p must be at least 1 (or 'inf')");
  return p;
}

std::shared_ptr<const BchCode> parse_code(const std::string& text) {
  auto dash = text.find('-');
  if (dash == std::string::npos)
    throw std::invalid_argument("--code expects the form d-k, e.g. 127-64");
  int length = std::stoi(text.substr(0, dash));
  int dimension = std::stoi(text.substr(dash + 1));
  return std::make_shared<BchCode>(BchCode::from_length_and_dimension(length, dimension));
}

DistributionSpec build_spec(const FamilyOptions& opts, std::uint64_t master_seed) {
  Family family = family_from_name(opts.family);
  auto packing = [&]() {
    return std::make_shared<const PackedSet>(
        build_packing(opts.d, opts.m, derive_seed(master_seed, kPackingStream)));
  };
  switch (family) {
    case Family::NonsmoothL2:
      return make_nonsmooth_l2(packing());
    case Family::LpScaled:
      return make_lp_scaled(packing(), parse_p(opts.p));
    case Family::Smooth:
      return make_smooth(packing());
    case Family::L1Reg: {
      double lambda = opts.lambda > 0.0 ? opts.lambda : 1.0 / std::sqrt(opts.d);
      return make_l1_regularized(packing(), lambda);
    }
    case Family::ScaledAlpha:
      return make_scaled_alpha(packing(), opts.lipschitz, opts.radius, opts.eps);
    case Family::CodeBased:
      return make_code_based(parse_code(opts.code));
    case Family::BoundedRange:
      return make_bounded_range(opts.m);
  }
  throw std::invalid_argument("unknown family: " + opts.family);
}

double default_gap(const DistributionSpec& spec) {
  switch (spec.family) {
    case Family::NonsmoothL2:
    case Family::LpScaled:
      return 0.25;
    case Family::Smooth:
    case Family::L1Reg:
      return 1.0 / 128.0;
    case Family::ScaledAlpha:
      return spec.alpha * spec.scale * spec.radius / 2.0;  // = eps
    case Family::CodeBased:
      return static_cast<double>(spec.code->correction_radius()) / (4.0 * spec.d);
    case Family::BoundedRange:
      return 0.5;
  }
  return 0.0;
}

std::uint64_t resolve_seed(std::optional<std::uint64_t> given) {
  if (given) return *given;
  std::random_device device;
  std::uint64_t seed =
      (static_cast<std::uint64_t>(device()) << 32) ^ static_cast<std::uint64_t>(device());
  return seed;
}

std::string join_invocation(int argc, char** argv, bool seed_given, std::uint64_t seed) {
  std::ostringstream out;
  for (int i = 0; i < argc; ++i) {
    if (i) out << ' ';
    out << argv[i];
  }
  if (!seed_given) out << " --seed " << seed;
  return out.str();
}

int print_checks(const std::vector<Check>& checks) {
  bool ok = true;
  for (const auto& check : checks) {
    std::cout << (check.pass ? "[ OK ] " : "[FAIL] ") << check.name;
    if (!check.pass) std::cout << "  " << check.detail;
    std::cout << '\n';
    ok = ok && check.pass;
  }
  return ok ? 0 : 1;
}

int run_pack(int d, int m, std::uint64_t seed, int max_inner, const std::string& out) {
  PackedSet packing = build_packing(d, m, seed, max_inner);
  PackingReport report = verify_packing(packing);
  std::cout << "packing d=" << d << " m=" << m << " max_inner=" << packing.max_inner()
            << " seed=" << seed << '\n';
  if (m > 1)
    std::cout << "worst pair (" << report.worst_i << ", " << report.worst_j
              << ") inner product " << report.worst_inner << '\n';
  if (!report.ok) {
    std::cerr << "packing bound violated\n";
    return 1;
  }
  if (!out.empty()) {
    write_text_atomic(out, packing.to_json().dump(2) + "\n");
    std::cout << "wrote " << out << '\n';
  }
  return 0;
}

int run_run(const FamilyOptions& opts, int n, int trials, std::uint64_t seed, double gap,
            bool gap_given, const std::string& mode, int parallel, const std::string& out,
            const std::string& csv, bool check, const std::string& invocation) {
  ExperimentConfig config;
  config.spec = build_spec(opts, seed);
  config.n = n;
  config.trials = trials;
  config.master_seed = seed;
  config.mode = mode_from_name(mode);
  config.gap_threshold = gap_given ? gap : default_gap(config.spec);
  config.parallelism = parallel;

  ExperimentReport report = run_experiment(config);
  std::cout << "family=" << family_name(config.spec.family) << " mode=" << mode
            << " n=" << n << " trials=" << trials << " seed=" << seed
            << " gap_threshold=" << config.gap_threshold << '\n';
  std::cout << "success_frequency=" << report.success_frequency;
  if (report.analytic_prediction)
    std::cout << " analytic_prediction=" << *report.analytic_prediction;
  std::cout << " wall_time_sec=" << report.wall_time_sec << '\n';

  if (!out.empty()) {
    write_text_atomic(out, report_to_json(report, invocation).dump(2) + "\n");
    std::cout << "wrote " << out << '\n';
  }
  if (!csv.empty()) {
    write_text_atomic(csv, report_to_csv(report));
    std::cout << "wrote " << csv << '\n';
  }

  if (check) {
    // delta = 1/2 claim with a 4-standard-error guard band
    double guard = 4.0 * std::sqrt(0.25 / trials);
    bool ok = report.success_frequency > 0.5 - guard;
    bool verified = true;
    for (const auto& record : report.trials) verified = verified && record.verified;
    std::cout << "claim check: frequency " << report.success_frequency << " vs > "
              << 0.5 - guard << (ok ? " (met)" : " (NOT met)") << ", all trials verified: "
              << (verified ? "yes" : "no") << '\n';
    if (!ok || !verified) return 1;
  }
  return 0;
}

int run_verify(const FamilyOptions& opts, std::uint64_t seed, int pairs, int points) {
  Family family = family_from_name(opts.family);
  if (family == Family::CodeBased) {
    auto code = parse_code(opts.code);
    std::cout << "code " << code->length() << '-' << code->dimension() << " r="
              << code->correction_radius() << " seed=" << seed << '\n';
    return print_checks(run_code_battery(*code, seed, std::max(100, pairs / 10), points));
  }
  DistributionSpec spec = build_spec(opts, seed);
  std::cout << "family=" << family_name(spec.family) << " d=" << spec.d
            << " base=" << spec.base_size() << " seed=" << seed << '\n';
  return print_checks(run_family_battery(spec, seed, pairs, points));
}

int run_codes(const std::string& preset, std::uint64_t seed, int roundtrips) {
  auto code = parse_code(preset);
  std::cout << code->to_json().dump(2) << '\n';
  return print_checks(run_code_battery(*code, seed, roundtrips, roundtrips));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Builders, bad-ERM experiments and invariant suites for the adversarial "
               "stochastic convex optimization constructions"};
  app.require_subcommand(1);

  // pack
  auto* pack = app.add_subcommand("pack", "construct and verify a sign-vector packing");
  int pack_d = 120, pack_m = 1024, pack_max_inner = -1;
  std::optional<std::uint64_t> pack_seed;
  std::string pack_out;
  pack->add_option("--d", pack_d, "dimension")->check(CLI::PositiveNumber);
  pack->add_option("--m", pack_m, "set size")->check(CLI::PositiveNumber);
  pack->add_option("--seed", pack_seed, "RNG seed (random if omitted)");
  pack->add_option("--max-inner", pack_max_inner, "pairwise bound (default d/2)");
  pack->add_option("--out", pack_out, "output JSON path");

  // run
  auto* run = app.add_subcommand("run", "run a seeded experiment and emit reports");
  FamilyOptions run_family;
  add_family_options(run, run_family);
  int run_n = 0, run_trials = 1, run_parallel = 1;
  std::optional<std::uint64_t> run_seed;
  double run_gap = 0.0;
  std::string run_mode = "erm-gap", run_out, run_csv;
  bool run_check = false;
  run->add_option("--n", run_n, "samples per trial")->required()->check(CLI::PositiveNumber);
  run->add_option("--trials", run_trials, "number of trials")->check(CLI::PositiveNumber);
  run->add_option("--seed", run_seed, "master seed (random if omitted)");
  auto* gap_opt = run->add_option("--gap", run_gap, "gap threshold (default: the claim's gap)");
  run->add_option("--mode", run_mode, "erm-gap | uniform-deviation | sgd-contrast");
  run->add_option("--parallel", run_parallel, "worker threads for trials")
      ->check(CLI::PositiveNumber);
  run->add_option("--out", run_out, "JSON report path");
  run->add_option("--csv", run_csv, "CSV report path");
  run->add_flag("--check", run_check, "exit 1 unless the delta=1/2 claim is met");

  // verify
  auto* verify = app.add_subcommand("verify", "run the invariant battery for one family");
  FamilyOptions verify_family;
  add_family_options(verify, verify_family);
  std::optional<std::uint64_t> verify_seed;
  int verify_pairs = 10000, verify_points = 1000;
  verify->add_option("--seed", verify_seed, "RNG seed (random if omitted)");
  verify->add_option("--pairs", verify_pairs, "random pairs per property")
      ->check(CLI::PositiveNumber);
  verify->add_option("--points", verify_points, "random points per property")
      ->check(CLI::PositiveNumber);

  // codes
  auto* codes = app.add_subcommand("codes", "print code parameters and run the codec battery");
  std::string codes_preset = "127-64";
  std::optional<std::uint64_t> codes_seed;
  int codes_roundtrips = 1000;
  codes->add_option("--code", codes_preset, "code preset as d-k");
  codes->add_option("--seed", codes_seed, "RNG seed (random if omitted)");
  codes->add_option("--roundtrips", codes_roundtrips, "round-trips per error weight")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (pack->parsed()) {
      std::uint64_t seed = resolve_seed(pack_seed);
      if (!pack_seed) std::cout << "seed: " << seed << '\n';
      return run_pack(pack_d, pack_m, seed, pack_max_inner, pack_out);
    }
    if (run->parsed()) {
      std::uint64_t seed = resolve_seed(run_seed);
      if (!run_seed) std::cout << "seed: " << seed << '\n';
      std::string invocation = join_invocation(argc, argv, run_seed.has_value(), seed);
      return run_run(run_family, run_n, run_trials, seed, run_gap, gap_opt->count() > 0,
                     run_mode, run_parallel, run_out, run_csv, run_check, invocation);
    }
    if (verify->parsed()) {
      std::uint64_t seed = resolve_seed(verify_seed);
      if (!verify_seed) std::cout << "seed: " << seed << '\n';
      return run_verify(verify_family, seed, verify_pairs, verify_points);
    }
    if (codes->parsed()) {
      std::uint64_t seed = resolve_seed(codes_seed);
      if (!codes_seed) std::cout << "seed: " << seed << '\n';
      return run_codes(codes_preset, seed, codes_roundtrips);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
