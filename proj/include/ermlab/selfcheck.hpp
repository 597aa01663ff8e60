#pragma once

#include "ermlab/codes.hpp"
#include "ermlab/instances.hpp"

#include <string>
#include <vector>

namespace ermlab {

struct Check {
  std::string name;
  bool pass = false;
  std::string detail;  // on failure, enough to reproduce the violating sample
};

/// Property battery for one function family: convexity, the certified
/// Lipschitz bound, subgradient validity, and the family-specific extras
/// (gradient smoothness and non-interaction for the smooth family, range and
/// non-interaction for the bounded-range family). Points mix uniform
/// in-domain draws with draws biased toward the base vectors so the kinks
/// actually activate.
std::vector<Check> run_family_battery(const DistributionSpec& spec, std::uint64_t seed,
                                      int pairs = 10000, int points = 1000);

/// Codec battery: round-trips at every error weight 0..r, minimum distance
/// (exhaustive for k <= 16, sampled otherwise), fast/brute-force evaluation
/// equivalence (k <= 16), the two-case value structure at codeword points,
/// and the mostly-not-decodable behaviour on uniform random words.
std::vector<Check> run_code_battery(const BchCode& code, std::uint64_t seed,
                                    int roundtrips = 1000, int points = 1000);

bool all_pass(const std::vector<Check>& checks);

}  // namespace ermlab
