#pragma once

#include "ermlab/bitmask.hpp"
#include "ermlab/codes.hpp"
#include "ermlab/packing.hpp"
#include "ermlab/rng.hpp"

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include <memory>
#include <optional>
#include <string>

namespace ermlab {

enum class Family {
  NonsmoothL2,   // max{1/2, max_{w in V} <wbar, x>} on the unit l2 ball
  LpScaled,      // max{1/2, max_{w in V} <w, x> / d^{1/q}} on the unit lp ball
  Smooth,        // sum_{w in V} squared_hinge(<wbar, x> - 7/8)
  L1Reg,         // smooth family shifted to the positive orthant, minus lambda<1, x>
  ScaledAlpha,   // L * max{R/2, max_{w in V} <wbar, x>} on the radius-R ball
  CodeBased,     // g_j over codeword directions, j uniform on [k]
  BoundedRange,  // sum_{w in V} linear_ramp(<w, x>) on the unit disk, d = 2
};

std::string family_name(Family family);
Family family_from_name(const std::string& name);

template <class Scalar>
inline Scalar squared_hinge(Scalar a) {
  return a > Scalar(0) ? a * a : Scalar(0);
}

/// 0 below 1 - alpha, then linear up to 1 at a = 1.
template <class Scalar>
inline Scalar linear_ramp(Scalar a, Scalar alpha) {
  return a > Scalar(1) - alpha ? (a - Scalar(1) + alpha) / alpha : Scalar(0);
}

/// Family identifier plus every parameter of the sampling distribution D.
/// Base sets are shared immutably, so copies are cheap.
struct DistributionSpec {
  Family family = Family::NonsmoothL2;
  std::shared_ptr<const PackedSet> packing;
  std::shared_ptr<const CircleSet> circle;
  std::shared_ptr<const BchCode> code;
  int d = 0;
  double p = 2.0;        // norm index of the domain ball
  double radius = 1.0;   // domain ball radius
  double scale = 1.0;    // L, ScaledAlpha only
  double lambda = 0.0;   // L1Reg only
  double alpha = 0.5;    // per-element inclusion probability

  int base_size() const;        // m for subset families, k for CodeBased
  double alpha_kink() const;    // BoundedRange ramp width, 2/m^2 (derived)
  double inv_dual_exponent() const { return 1.0 - 1.0 / p; }  // 1/q

  nlohmann::json to_json() const;
  static DistributionSpec from_json(const nlohmann::json& j);
  /// Compact parameter echo for reports (base set replaced by its digest).
  nlohmann::json summary_json() const;
  std::uint64_t digest() const;
};

DistributionSpec make_nonsmooth_l2(std::shared_ptr<const PackedSet> packing);
DistributionSpec make_lp_scaled(std::shared_ptr<const PackedSet> packing, double p);
DistributionSpec make_smooth(std::shared_ptr<const PackedSet> packing);
DistributionSpec make_l1_regularized(std::shared_ptr<const PackedSet> packing, double lambda);
DistributionSpec make_scaled_alpha(std::shared_ptr<const PackedSet> packing, double lipschitz,
                                   double radius, double epsilon);
DistributionSpec make_code_based(std::shared_ptr<const BchCode> code);
DistributionSpec make_bounded_range(int m);

/// One sampled convex function: the member subset V (subset families) or the
/// coordinate index j (code family).
struct FunctionSample {
  Bitmask members;
  int code_index = -1;

  nlohmann::json to_json() const;
  static FunctionSample from_json(const nlohmann::json& j, const DistributionSpec& spec);
};

FunctionSample sample_function(const DistributionSpec& spec, Rng& rng);

/// Throws std::domain_error when ||x||_p exceeds radius * (1 + 1e-9).
void check_domain(const DistributionSpec& spec, Eigen::Ref<const Eigen::VectorXd> x);

double value(const DistributionSpec& spec, const FunctionSample& sample,
             Eigen::Ref<const Eigen::VectorXd> x);

/// A valid subgradient at x; the exact gradient for the differentiable
/// families. Kinks take the zero-slope branch, max-operator ties take the
/// maximizer of smallest base-set index.
Eigen::VectorXd subgradient(const DistributionSpec& spec, const FunctionSample& sample,
                            Eigen::Ref<const Eigen::VectorXd> x);

struct EvalResult {
  double value = 0.0;
  Eigen::VectorXd subgradient;
};

EvalResult evaluate(const DistributionSpec& spec, const FunctionSample& sample,
                    Eigen::Ref<const Eigen::VectorXd> x);

/// Exact F_D(x). Subset-max families use the order-statistics form
///   sum_i alpha (1-alpha)^{i-1} a_(i) + (1-alpha)^K c
/// over the per-vector values a_(1) >= ... >= a_(K) exceeding the floor c;
/// additive families scale the component sum by alpha; the code family
/// evaluates the shared-decode closed form.
double population_value(const DistributionSpec& spec, Eigen::Ref<const Eigen::VectorXd> x);

/// F* = min over the domain ball of F_D.
double population_min(const DistributionSpec& spec);

/// Evaluation point the analysis anchors to base vector i: wbar for the
/// l2 families, w/d^{1/p} for the lp family, R*wbar for the scaled family,
/// wbar + 1/sqrt(d) for the regularized family, the circle vector itself for
/// the bounded-range family. Not defined for the code family.
Eigen::VectorXd base_eval_point(const DistributionSpec& spec, int index);

struct LipschitzInfo {
  double lipschitz = 0.0;            // w.r.t. the family's own lp norm
  std::optional<double> smoothness;  // gradient Lipschitz constant, if certified
  bool unbounded_family = false;     // BoundedRange: constant grows with m
};

LipschitzInfo lipschitz_bound(const DistributionSpec& spec);

}  // namespace ermlab
