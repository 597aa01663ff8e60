#include "ermlab/selfcheck.hpp"

#include "ermlab/rng.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ermlab {

namespace {

std::string describe_point(Eigen::Ref<const Eigen::VectorXd> x, int limit = 6) {
  std::ostringstream out;
  out << "[";
  for (int i = 0; i < std::min<int>(limit, static_cast<int>(x.size())); ++i) {
    if (i) out << ", ";
    out << x[i];
  }
  if (x.size() > limit) out << ", ...";
  out << "]";
  return out.str();
}

/// In-domain point; half the draws are pulled toward a random base vector's
/// evaluation point so the kink branches are exercised.
Eigen::VectorXd domain_point(const DistributionSpec& spec, Rng& rng) {
  Eigen::VectorXd x;
  if (spec.family != Family::CodeBased && rng.bernoulli(0.5)) {
    int index = static_cast<int>(rng.pick(spec.base_size()));
    double stretch = 0.7 + 0.5 * rng.real();
    x = stretch * base_eval_point(spec, index);
    for (int i = 0; i < x.size(); ++i) x[i] += 0.02 * rng.normal();
  } else {
    x = sample_lp_ball(rng, spec.d, spec.p, spec.radius);
  }
  double norm = lp_norm(x, spec.p);
  if (norm > spec.radius) x *= spec.radius / norm;
  return x;
}

/// Per-vector linear terms recomputed from the base set (kept separate from
/// the instances implementation on purpose: the non-interaction checks should
/// not trust the code path they certify).
Eigen::VectorXd raw_terms(const DistributionSpec& spec, Eigen::Ref<const Eigen::VectorXd> x) {
  if (spec.family == Family::BoundedRange) return spec.circle->vectors() * x;
  if (spec.family == Family::L1Reg) {
    double s = 1.0 / std::sqrt(static_cast<double>(spec.d));
    return spec.packing->unit() * (x.array() - s).matrix();
  }
  return spec.packing->unit() * x;
}

}  // namespace

bool all_pass(const std::vector<Check>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

std::vector<Check> run_family_battery(const DistributionSpec& spec, std::uint64_t seed,
                                      int pairs, int points) {
  std::vector<Check> checks;
  LipschitzInfo info = lipschitz_bound(spec);

  {  // convexity: f(tx + (1-t)y) <= t f(x) + (1-t) f(y) + 1e-9
    Rng rng(derive_seed(seed, 11));
    Check check{"convexity", true, ""};
    for (int i = 0; i < pairs && check.pass; ++i) {
      FunctionSample sample = sample_function(spec, rng);
      Eigen::VectorXd x = domain_point(spec, rng);
      Eigen::VectorXd y = domain_point(spec, rng);
      double t = rng.real();
      Eigen::VectorXd mid = t * x + (1.0 - t) * y;
      double lhs = value(spec, sample, mid);
      double rhs = t * value(spec, sample, x) + (1.0 - t) * value(spec, sample, y);
      if (lhs > rhs + 1e-9) {
        check.pass = false;
        std::ostringstream msg;
        msg << "violated at pair " << i << ", t=" << t << ", x=" << describe_point(x)
            << ", y=" << describe_point(y) << ", lhs-rhs=" << lhs - rhs;
        check.detail = msg.str();
      }
    }
    checks.push_back(std::move(check));
  }

  {  // Lipschitz bound w.r.t. the family norm
    Rng rng(derive_seed(seed, 12));
    Check check{"lipschitz", true, ""};
    for (int i = 0; i < pairs && check.pass; ++i) {
      FunctionSample sample = sample_function(spec, rng);
      Eigen::VectorXd x = domain_point(spec, rng);
      Eigen::VectorXd y = domain_point(spec, rng);
      double diff = std::abs(value(spec, sample, x) - value(spec, sample, y));
      double allowed = info.lipschitz * lp_norm(x - y, spec.p) + 1e-9;
      if (diff > allowed) {
        check.pass = false;
        std::ostringstream msg;
        msg << "pair " << i << ": |f(x)-f(y)|=" << diff << " exceeds " << allowed
            << " at x=" << describe_point(x) << ", y=" << describe_point(y);
        check.detail = msg.str();
      }
    }
    checks.push_back(std::move(check));
  }

  {  // subgradient validity: f(y) >= f(x) + <g(x), y - x> - 1e-9
    Rng rng(derive_seed(seed, 13));
    Check check{"subgradient", true, ""};
    for (int i = 0; i < pairs && check.pass; ++i) {
      FunctionSample sample = sample_function(spec, rng);
      Eigen::VectorXd x = domain_point(spec, rng);
      Eigen::VectorXd y = domain_point(spec, rng);
      Eigen::VectorXd grad = subgradient(spec, sample, x);
      double lhs = value(spec, sample, y);
      double rhs = value(spec, sample, x) + grad.dot(y - x);
      if (lhs < rhs - 1e-9) {
        check.pass = false;
        std::ostringstream msg;
        msg << "pair " << i << ": plane above function by " << rhs - lhs
            << " at x=" << describe_point(x) << ", y=" << describe_point(y);
        check.detail = msg.str();
      }
    }
    checks.push_back(std::move(check));
  }

  if (info.smoothness) {  // gradient Lipschitz constant, over uniform in-ball pairs
    Rng rng(derive_seed(seed, 14));
    Check check{"smoothness", true, ""};
    for (int i = 0; i < pairs && check.pass; ++i) {
      FunctionSample sample = sample_function(spec, rng);
      Eigen::VectorXd x = sample_lp_ball(rng, spec.d, spec.p, spec.radius);
      Eigen::VectorXd y = sample_lp_ball(rng, spec.d, spec.p, spec.radius);
      double lhs = (subgradient(spec, sample, x) - subgradient(spec, sample, y)).norm();
      double allowed = *info.smoothness * (x - y).norm() + 1e-6;
      if (lhs > allowed) {
        check.pass = false;
        std::ostringstream msg;
        msg << "pair " << i << ": gradient gap " << lhs << " exceeds " << allowed;
        check.detail = msg.str();
      }
    }
    checks.push_back(std::move(check));
  }

  if (spec.family == Family::Smooth || spec.family == Family::BoundedRange) {
    // non-interaction: at most one base vector past the kink at any point
    Rng rng(derive_seed(seed, 15));
    Check check{"non-interaction", true, ""};
    double kink = spec.family == Family::Smooth ? 7.0 / 8.0 : 1.0 - spec.alpha_kink();
    for (int i = 0; i < points && check.pass; ++i) {
      Eigen::VectorXd x = domain_point(spec, rng);
      Eigen::VectorXd terms = raw_terms(spec, x);
      int active = 0;
      for (int w = 0; w < terms.size(); ++w)
        if (terms[w] > kink) ++active;
      if (active > 1) {
        check.pass = false;
        std::ostringstream msg;
        msg << active << " active components at x=" << describe_point(x);
        check.detail = msg.str();
      }
    }
    checks.push_back(std::move(check));
  }

  if (spec.family == Family::BoundedRange) {  // range stays inside [0, 1]
    Rng rng(derive_seed(seed, 16));
    Check check{"range", true, ""};
    for (int i = 0; i < pairs && check.pass; ++i) {
      FunctionSample sample = sample_function(spec, rng);
      Eigen::VectorXd x = domain_point(spec, rng);
      double v = value(spec, sample, x);
      if (v < -1e-12 || v > 1.0 + 1e-9) {
        check.pass = false;
        std::ostringstream msg;
        msg << "value " << v << " at x=" << describe_point(x);
        check.detail = msg.str();
      }
    }
    checks.push_back(std::move(check));
  }

  return checks;
}

std::vector<Check> run_code_battery(const BchCode& code, std::uint64_t seed, int roundtrips,
                                    int points) {
  std::vector<Check> checks;
  int n = code.length();
  int k = code.dimension();
  int r = code.correction_radius();

  auto random_message = [&](Rng& rng) {
    Eigen::VectorXi z(k);
    for (int i = 0; i < k; ++i) z[i] = rng.sign();
    return SignVector(z);
  };

  {  // decode(encode(z) + w flips) == z for every weight w in 0..r
    Rng rng(derive_seed(seed, 21));
    Check check{"codec-roundtrip", true, ""};
    for (int weight = 0; weight <= r && check.pass; ++weight) {
      for (int i = 0; i < roundtrips && check.pass; ++i) {
        SignVector z = random_message(rng);
        Eigen::VectorXi original = code.encode(z).entries();
        Eigen::VectorXi word = original;
        for (int f = 0; f < weight; ++f) {  // distinct positions via resample
          int pos;
          do {
            pos = static_cast<int>(rng.pick(n));
          } while (word[pos] != original[pos]);
          word[pos] = -word[pos];
        }
        auto back = code.decode(SignVector(word));
        if (!back || !(*back == z)) {
          check.pass = false;
          std::ostringstream msg;
          msg << "weight " << weight << ", trial " << i << " failed to round-trip";
          check.detail = msg.str();
        }
      }
    }
    checks.push_back(std::move(check));
  }

  {  // minimum distance >= 2r + 1
    Check check{"distance", true, ""};
    if (k <= 16) {
      // linear code: minimum distance equals the minimum nonzero weight
      int best = n + 1;
      std::vector<std::uint8_t> message(k);
      for (std::uint32_t u = 1; u < (1u << k); ++u) {
        for (int b = 0; b < k; ++b) message[b] = (u >> b) & 1u;
        auto word = code.encode_bits(message);
        int weight = 0;
        for (auto bit : word) weight += bit;
        best = std::min(best, weight);
      }
      if (best < 2 * r + 1) {
        check.pass = false;
        std::ostringstream msg;
        msg << "exhaustive minimum distance " << best << " below " << 2 * r + 1;
        check.detail = msg.str();
      }
    } else {
      Rng rng(derive_seed(seed, 22));
      for (int i = 0; i < points && check.pass; ++i) {
        SignVector z1 = random_message(rng);
        SignVector z2 = random_message(rng);
        if (z1 == z2) continue;
        int dist = (code.encode(z1).entries() - code.encode(z2).entries()).cwiseAbs().sum() / 2;
        if (dist < 2 * r + 1) {
          check.pass = false;
          std::ostringstream msg;
          msg << "sampled pair " << i << " at distance " << dist;
          check.detail = msg.str();
        }
      }
    }
    checks.push_back(std::move(check));
  }

  if (k <= 16) {  // fast evaluation equals the brute-force oracle
    Rng rng(derive_seed(seed, 23));
    Check check{"fast-vs-bruteforce", true, ""};
    for (int i = 0; i < points && check.pass; ++i) {
      Eigen::VectorXd x = sample_l2_ball(rng, n, 1.0);
      int j = static_cast<int>(rng.pick(k));
      double fast = code.gj_value_fast(j, x);
      double brute = code.gj_value_bruteforce(j, x);
      if (std::abs(fast - brute) > 1e-12) {
        check.pass = false;
        std::ostringstream msg;
        msg << "point " << i << ", j=" << j << ": fast=" << fast << " brute=" << brute;
        check.detail = msg.str();
      }
    }
    checks.push_back(std::move(check));
  }

  {  // g_j at codeword points takes exactly the two claimed values
    Rng rng(derive_seed(seed, 24));
    Check check{"two-case-values", true, ""};
    double floor = code.floor_value();
    for (int i = 0; i < 50 && check.pass; ++i) {
      SignVector z = random_message(rng);
      Eigen::VectorXd point = code.encode(z).unit();
      for (int j = 0; j < k && check.pass; ++j) {
        double expected = z.entries()[j] == 1 ? 1.0 : floor;
        double got = code.gj_value_fast(j, point);
        if (std::abs(got - expected) > 1e-12) {
          check.pass = false;
          std::ostringstream msg;
          msg << "message " << i << ", j=" << j << ": got " << got << ", expected " << expected;
          check.detail = msg.str();
        }
      }
    }
    checks.push_back(std::move(check));
  }

  {  // random words decode exactly as often as the Hamming-ball volume allows
    Rng rng(derive_seed(seed, 25));
    Check check{"random-word-decodability", true, ""};
    int decoded = 0;
    for (int i = 0; i < points; ++i) {
      Eigen::VectorXi word(n);
      for (int b = 0; b < n; ++b) word[b] = rng.sign();
      if (code.decode(SignVector(word))) ++decoded;
    }
    double volume = 0.0;  // |Hamming ball of radius r| via running binomials
    double binom = 1.0;
    for (int i = 0; i <= r; ++i) {
      volume += binom;
      binom = binom * (n - i) / (i + 1);
    }
    double expected = volume * std::pow(2.0, k - n);
    double slack = std::max(4.0 * std::sqrt(expected * (1.0 - expected) / points),
                            3.0 / static_cast<double>(points));
    double fraction = static_cast<double>(decoded) / points;
    if (std::abs(fraction - expected) > slack) {
      check.pass = false;
      std::ostringstream msg;
      msg << "decodable fraction " << fraction << " vs expected " << expected << " (slack "
          << slack << ")";
      check.detail = msg.str();
    }
    checks.push_back(std::move(check));
  }

  return checks;
}

}  // namespace ermlab
