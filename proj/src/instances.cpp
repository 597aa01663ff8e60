#include "ermlab/instances.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace ermlab {

namespace {

constexpr double kSmoothKink = 7.0 / 8.0;

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

const PackedSet& packing_of(const DistributionSpec& spec) {
  if (!spec.packing) throw std::logic_error("DistributionSpec: packing base set missing");
  return *spec.packing;
}

const CircleSet& circle_of(const DistributionSpec& spec) {
  if (!spec.circle) throw std::logic_error("DistributionSpec: circle base set missing");
  return *spec.circle;
}

const BchCode& code_of(const DistributionSpec& spec) {
  if (!spec.code) throw std::logic_error("DistributionSpec: code missing");
  return *spec.code;
}

Eigen::VectorXd shifted(const DistributionSpec& spec, Eigen::Ref<const Eigen::VectorXd> x) {
  double s = 1.0 / std::sqrt(static_cast<double>(spec.d));
  return x.array() - s;
}

/// Per-vector linear terms a_i entering every subset-family formula.
Eigen::VectorXd linear_terms(const DistributionSpec& spec, Eigen::Ref<const Eigen::VectorXd> x) {
  switch (spec.family) {
    case Family::NonsmoothL2:
    case Family::Smooth:
      return packing_of(spec).unit() * x;
    case Family::ScaledAlpha:
      return spec.scale * (packing_of(spec).unit() * x);
    case Family::L1Reg:
      return packing_of(spec).unit() * shifted(spec, x);
    case Family::LpScaled: {
      double scale = std::pow(static_cast<double>(spec.d), spec.inv_dual_exponent());
      return (packing_of(spec).vectors().cast<double>() * x) / scale;
    }
    case Family::BoundedRange:
      return circle_of(spec).vectors() * x;
    case Family::CodeBased:
      break;
  }
  throw std::logic_error("linear_terms: not a subset family");
}

/// Floor constant of the max-type families.
double floor_of(const DistributionSpec& spec) {
  switch (spec.family) {
    case Family::NonsmoothL2:
    case Family::LpScaled:
      return 0.5;
    case Family::ScaledAlpha:
      return spec.scale * spec.radius / 2.0;
    default:
      throw std::logic_error("floor_of: family has no floor");
  }
}

bool is_max_family(Family family) {
  return family == Family::NonsmoothL2 || family == Family::LpScaled ||
         family == Family::ScaledAlpha;
}

}  // namespace

std::string family_name(Family family) {
  switch (family) {
    case Family::NonsmoothL2: return "nonsmooth-l2";
    case Family::LpScaled: return "lp";
    case Family::Smooth: return "smooth";
    case Family::L1Reg: return "l1reg";
    case Family::ScaledAlpha: return "scaled";
    case Family::CodeBased: return "code";
    case Family::BoundedRange: return "bounded-range";
  }
  throw std::logic_error("family_name: unknown family");
}

Family family_from_name(const std::string& name) {
  if (name == "nonsmooth-l2") return Family::NonsmoothL2;
  if (name == "lp") return Family::LpScaled;
  if (name == "smooth") return Family::Smooth;
  if (name == "l1reg") return Family::L1Reg;
  if (name == "scaled") return Family::ScaledAlpha;
  if (name == "code") return Family::CodeBased;
  if (name == "bounded-range") return Family::BoundedRange;
  throw std::invalid_argument("unknown family name: " + name);
}

int DistributionSpec::base_size() const {
  if (family == Family::CodeBased) return code_of(*this).dimension();
  if (family == Family::BoundedRange) return circle_of(*this).size();
  return packing_of(*this).size();
}

double DistributionSpec::alpha_kink() const {
  if (family != Family::BoundedRange)
    throw std::logic_error("alpha_kink: only the bounded-range family has one");
  double m = static_cast<double>(circle_of(*this).size());
  return 2.0 / (m * m);
}

DistributionSpec make_nonsmooth_l2(std::shared_ptr<const PackedSet> packing) {
  DistributionSpec spec;
  spec.family = Family::NonsmoothL2;
  spec.d = packing->dimension();
  spec.packing = std::move(packing);
  return spec;
}

DistributionSpec make_lp_scaled(std::shared_ptr<const PackedSet> packing, double p) {
  if (!(p >= 1.0))  // accepts +inf
    throw std::invalid_argument("make_lp_scaled: need p in [1, inf]");
  DistributionSpec spec;
  spec.family = Family::LpScaled;
  spec.d = packing->dimension();
  spec.packing = std::move(packing);
  spec.p = p;
  return spec;
}

DistributionSpec make_smooth(std::shared_ptr<const PackedSet> packing) {
  DistributionSpec spec;
  spec.family = Family::Smooth;
  spec.d = packing->dimension();
  spec.packing = std::move(packing);
  return spec;
}

DistributionSpec make_l1_regularized(std::shared_ptr<const PackedSet> packing, double lambda) {
  DistributionSpec spec;
  spec.family = Family::L1Reg;
  spec.d = packing->dimension();
  double cap = 1.0 / std::sqrt(static_cast<double>(spec.d));
  if (!(lambda > 0.0) || lambda > cap * (1.0 + 1e-12))
    throw std::invalid_argument("make_l1_regularized: need lambda in (0, 1/sqrt(d)]");
  spec.packing = std::move(packing);
  spec.lambda = lambda;
  spec.radius = 2.0;
  return spec;
}

DistributionSpec make_scaled_alpha(std::shared_ptr<const PackedSet> packing, double lipschitz,
                                   double radius, double epsilon) {
  if (!(lipschitz > 0.0) || !(radius > 0.0))
    throw std::invalid_argument("make_scaled_alpha: need L > 0 and R > 0");
  double alpha = 2.0 * epsilon / (lipschitz * radius);
  if (!(alpha > 0.0) || !(alpha < 1.0))
    throw std::invalid_argument("make_scaled_alpha: need alpha = 2*eps/(L*R) in (0,1)");
  DistributionSpec spec;
  spec.family = Family::ScaledAlpha;
  spec.d = packing->dimension();
  spec.packing = std::move(packing);
  spec.scale = lipschitz;
  spec.radius = radius;
  spec.alpha = alpha;
  return spec;
}

DistributionSpec make_code_based(std::shared_ptr<const BchCode> code) {
  DistributionSpec spec;
  spec.family = Family::CodeBased;
  spec.d = code->length();
  spec.code = std::move(code);
  return spec;
}

DistributionSpec make_bounded_range(int m) {
  DistributionSpec spec;
  spec.family = Family::BoundedRange;
  spec.d = 2;
  spec.circle = std::make_shared<CircleSet>(m);
  return spec;
}

nlohmann::json DistributionSpec::to_json() const {
  nlohmann::json j;
  j["family"] = family_name(family);
  j["d"] = d;
  j["alpha"] = alpha;
  j["radius"] = radius;
  if (family == Family::LpScaled) j["p"] = std::isinf(p) ? nlohmann::json("inf") : nlohmann::json(p);
  if (family == Family::ScaledAlpha) j["L"] = scale;
  if (family == Family::L1Reg) j["lambda"] = lambda;
  if (packing) j["packing"] = packing->to_json();
  if (circle) j["circle_m"] = circle->size();
  if (code) j["code"] = {{"length", code->length()}, {"dimension", code->dimension()}};
  return j;
}

DistributionSpec DistributionSpec::from_json(const nlohmann::json& j) {
  Family family = family_from_name(j.at("family").get<std::string>());
  switch (family) {
    case Family::NonsmoothL2:
      return make_nonsmooth_l2(std::make_shared<PackedSet>(PackedSet::from_json(j.at("packing"))));
    case Family::LpScaled: {
      double p = j.at("p").is_string() ? std::numeric_limits<double>::infinity()
                                       : j.at("p").get<double>();
      return make_lp_scaled(std::make_shared<PackedSet>(PackedSet::from_json(j.at("packing"))), p);
    }
    case Family::Smooth:
      return make_smooth(std::make_shared<PackedSet>(PackedSet::from_json(j.at("packing"))));
    case Family::L1Reg:
      return make_l1_regularized(
          std::make_shared<PackedSet>(PackedSet::from_json(j.at("packing"))),
          j.at("lambda").get<double>());
    case Family::ScaledAlpha: {
      auto packing = std::make_shared<PackedSet>(PackedSet::from_json(j.at("packing")));
      double L = j.at("L").get<double>();
      double R = j.at("radius").get<double>();
      double alpha = j.at("alpha").get<double>();
      return make_scaled_alpha(std::move(packing), L, R, alpha * L * R / 2.0);
    }
    case Family::CodeBased: {
      const auto& c = j.at("code");
      return make_code_based(std::make_shared<BchCode>(BchCode::from_length_and_dimension(
          c.at("length").get<int>(), c.at("dimension").get<int>())));
    }
    case Family::BoundedRange:
      return make_bounded_range(j.at("circle_m").get<int>());
  }
  throw std::logic_error("DistributionSpec::from_json: unknown family");
}

nlohmann::json DistributionSpec::summary_json() const {
  nlohmann::json j;
  j["family"] = family_name(family);
  j["d"] = d;
  j["alpha"] = alpha;
  j["radius"] = radius;
  if (family == Family::LpScaled) j["p"] = std::isinf(p) ? nlohmann::json("inf") : nlohmann::json(p);
  if (family == Family::ScaledAlpha) j["L"] = scale;
  if (family == Family::L1Reg) j["lambda"] = lambda;
  if (packing) {
    j["m"] = packing->size();
    j["max_inner"] = packing->max_inner();
    j["base_digest"] = fnv1a(packing->to_json().dump());
  }
  if (circle) j["m"] = circle->size();
  if (code) j["code"] = {{"length", code->length()}, {"dimension", code->dimension()}};
  return j;
}

std::uint64_t DistributionSpec::digest() const { return fnv1a(to_json().dump()); }

nlohmann::json FunctionSample::to_json() const {
  if (code_index >= 0) return {{"j", code_index}};
  return {{"mask", members.to_hex()}, {"m", members.size()}};
}

FunctionSample FunctionSample::from_json(const nlohmann::json& j, const DistributionSpec& spec) {
  FunctionSample sample;
  if (spec.family == Family::CodeBased) {
    sample.code_index = j.at("j").get<int>();
    if (sample.code_index < 0 || sample.code_index >= spec.base_size())
      throw std::invalid_argument("FunctionSample: code index out of range");
    return sample;
  }
  sample.members = Bitmask::from_hex(j.at("mask").get<std::string>(), spec.base_size());
  return sample;
}

FunctionSample sample_function(const DistributionSpec& spec, Rng& rng) {
  FunctionSample sample;
  if (spec.family == Family::CodeBased) {
    sample.code_index = static_cast<int>(rng.pick(static_cast<std::uint64_t>(spec.base_size())));
    return sample;
  }
  int m = spec.base_size();
  sample.members = Bitmask(m);
  for (int i = 0; i < m; ++i)
    if (rng.bernoulli(spec.alpha)) sample.members.set(i);
  return sample;
}

void check_domain(const DistributionSpec& spec, Eigen::Ref<const Eigen::VectorXd> x) {
  if (x.size() != spec.d) throw std::invalid_argument("evaluation: wrong dimension");
  if (lp_norm(x, spec.p) > spec.radius * (1.0 + 1e-9))
    throw std::domain_error("evaluation: point outside the domain ball");
}

double value(const DistributionSpec& spec, const FunctionSample& sample,
             Eigen::Ref<const Eigen::VectorXd> x) {
  if (spec.family == Family::CodeBased)
    return code_of(spec).gj_value_fast(sample.code_index, x);
  check_domain(spec, x);
  if (sample.members.size() != spec.base_size())
    throw std::invalid_argument("value: sample does not match the base set");

  Eigen::VectorXd terms = linear_terms(spec, x);
  if (is_max_family(spec.family)) {
    double best = floor_of(spec);
    sample.members.for_each_set([&](int i) { best = std::max(best, terms[i]); });
    return best;
  }
  double acc = 0.0;
  if (spec.family == Family::BoundedRange) {
    double kink = spec.alpha_kink();
    sample.members.for_each_set([&](int i) { acc += linear_ramp(terms[i], kink); });
    return acc;
  }
  sample.members.for_each_set([&](int i) { acc += squared_hinge(terms[i] - kSmoothKink); });
  if (spec.family == Family::L1Reg) acc -= spec.lambda * x.sum();
  return acc;
}

Eigen::VectorXd subgradient(const DistributionSpec& spec, const FunctionSample& sample,
                            Eigen::Ref<const Eigen::VectorXd> x) {
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(spec.d);
  if (spec.family == Family::CodeBased) {
    const BchCode& code = code_of(spec);
    double fast = code.gj_value_fast(sample.code_index, x);
    if (fast > code.floor_value()) {
      // The decoded codeword is the unique active maximizer.
      Eigen::VectorXi hard(spec.d);
      for (int i = 0; i < spec.d; ++i) hard[i] = x[i] < 0.0 ? -1 : 1;
      auto message = code.decode(SignVector(hard));
      grad = code.encode(*message).unit();
    }
    return grad;
  }
  check_domain(spec, x);
  if (sample.members.size() != spec.base_size())
    throw std::invalid_argument("subgradient: sample does not match the base set");

  Eigen::VectorXd terms = linear_terms(spec, x);
  if (is_max_family(spec.family)) {
    double best = floor_of(spec);
    int argmax = -1;  // smallest-index maximizer strictly above the floor
    sample.members.for_each_set([&](int i) {
      if (terms[i] > best) {
        best = terms[i];
        argmax = i;
      }
    });
    if (argmax < 0) return grad;
    const PackedSet& packing = packing_of(spec);
    switch (spec.family) {
      case Family::NonsmoothL2:
        return packing.unit_row(argmax);
      case Family::ScaledAlpha:
        return spec.scale * packing.unit_row(argmax);
      case Family::LpScaled: {
        double scale = std::pow(static_cast<double>(spec.d), spec.inv_dual_exponent());
        return packing.vectors().row(argmax).cast<double>().transpose() / scale;
      }
      default:
        break;
    }
    throw std::logic_error("subgradient: unhandled max family");
  }

  if (spec.family == Family::BoundedRange) {
    double kink = spec.alpha_kink();
    const CircleSet& circle = circle_of(spec);
    sample.members.for_each_set([&](int i) {
      if (terms[i] > 1.0 - kink) grad += circle.vectors().row(i).transpose() / kink;
    });
    return grad;
  }

  const PackedSet& packing = packing_of(spec);
  sample.members.for_each_set([&](int i) {
    double slack = terms[i] - kSmoothKink;
    if (slack > 0.0) grad += 2.0 * slack * packing.unit_row(i);
  });
  if (spec.family == Family::L1Reg) grad.array() -= spec.lambda;
  return grad;
}

EvalResult evaluate(const DistributionSpec& spec, const FunctionSample& sample,
                    Eigen::Ref<const Eigen::VectorXd> x) {
  return {value(spec, sample, x), subgradient(spec, sample, x)};
}

double population_value(const DistributionSpec& spec, Eigen::Ref<const Eigen::VectorXd> x) {
  if (spec.family == Family::CodeBased) return code_of(spec).fd_code_exact(x);
  check_domain(spec, x);

  Eigen::VectorXd terms = linear_terms(spec, x);
  if (is_max_family(spec.family)) {
    double floor = floor_of(spec);
    std::vector<double> above;
    for (int i = 0; i < terms.size(); ++i)
      if (terms[i] > floor) above.push_back(terms[i]);
    std::sort(above.begin(), above.end(), std::greater<double>());
    double expectation = 0.0;
    double not_yet = 1.0;  // probability no larger term was included
    for (double v : above) {
      expectation += spec.alpha * not_yet * v;
      not_yet *= 1.0 - spec.alpha;
    }
    return expectation + not_yet * floor;
  }
  if (spec.family == Family::BoundedRange) {
    double kink = spec.alpha_kink();
    double acc = 0.0;
    for (int i = 0; i < terms.size(); ++i) acc += linear_ramp(terms[i], kink);
    return spec.alpha * acc;
  }
  double acc = 0.0;
  for (int i = 0; i < terms.size(); ++i) acc += squared_hinge(terms[i] - kSmoothKink);
  acc *= spec.alpha;
  if (spec.family == Family::L1Reg) acc -= spec.lambda * x.sum();
  return acc;
}

double population_min(const DistributionSpec& spec) {
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
      return code_of(spec).floor_value();
  }
  throw std::logic_error("population_min: unknown family");
}

Eigen::VectorXd base_eval_point(const DistributionSpec& spec, int index) {
  if (index < 0 || index >= spec.base_size())
    throw std::out_of_range("base_eval_point: index out of range");
  switch (spec.family) {
    case Family::NonsmoothL2:
    case Family::Smooth:
      return packing_of(spec).unit_row(index);
    case Family::ScaledAlpha:
      return spec.radius * packing_of(spec).unit_row(index);
    case Family::LpScaled: {
      double denom = std::isinf(spec.p)
                         ? 1.0
                         : std::pow(static_cast<double>(spec.d), 1.0 / spec.p);
      return packing_of(spec).vectors().row(index).cast<double>().transpose() / denom;
    }
    case Family::L1Reg: {
      double s = 1.0 / std::sqrt(static_cast<double>(spec.d));
      return packing_of(spec).unit_row(index).array() + s;
    }
    case Family::BoundedRange:
      return circle_of(spec).vector(index);
    case Family::CodeBased:
      break;
  }
  throw std::logic_error("base_eval_point: code family has no per-vector point");
}

LipschitzInfo lipschitz_bound(const DistributionSpec& spec) {
  LipschitzInfo info;
  switch (spec.family) {
    case Family::NonsmoothL2:
    case Family::LpScaled:
    case Family::CodeBased:
      info.lipschitz = 1.0;
      break;
    case Family::Smooth:
      info.lipschitz = 0.25;
      info.smoothness = 1.0;
      break;
    case Family::L1Reg:
      // Certified cap for every admissible lambda <= 1/sqrt(d).
      info.lipschitz = 9.0 / 4.0;
      break;
    case Family::ScaledAlpha:
      info.lipschitz = spec.scale;
      break;
    case Family::BoundedRange: {
      double m = static_cast<double>(spec.base_size());
      info.lipschitz = m * m / 2.0;  // ramp slope 1/alpha_kink
      info.unbounded_family = true;
      break;
    }
  }
  return info;
}

}  // namespace ermlab
