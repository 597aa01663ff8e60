#pragma once

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>

namespace ermlab {

/// Element of {-1,+1}^d.
class SignVector {
 public:
  explicit SignVector(Eigen::VectorXi entries);

  const Eigen::VectorXi& entries() const { return entries_; }
  int size() const { return static_cast<int>(entries_.size()); }

  /// entries / sqrt(d), the unit-norm direction the constructions evaluate at.
  Eigen::VectorXd unit() const;

  bool operator==(const SignVector& other) const {
    return entries_.size() == other.entries_.size() &&
           (entries_.array() == other.entries_.array()).all();
  }

 private:
  Eigen::VectorXi entries_;
};

struct PackingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Set of m distinct sign vectors with pairwise inner products bounded by
/// max_inner (d/2 by default). Rows of vectors() are the elements; unit()
/// caches the normalized rows for fast linear-term evaluation.
class PackedSet {
 public:
  PackedSet(Eigen::MatrixXi vectors, int max_inner);

  int dimension() const { return static_cast<int>(vectors_.cols()); }
  int size() const { return static_cast<int>(vectors_.rows()); }
  int max_inner() const { return max_inner_; }

  const Eigen::MatrixXi& vectors() const { return vectors_; }
  const Eigen::MatrixXd& unit() const { return unit_; }

  SignVector vector(int i) const;
  Eigen::VectorXd unit_row(int i) const { return unit_.row(i); }

  nlohmann::json to_json() const;
  static PackedSet from_json(const nlohmann::json& j);

 private:
  Eigen::MatrixXi vectors_;
  Eigen::MatrixXd unit_;
  int max_inner_;
};

struct PackingReport {
  bool ok = true;
  int worst_i = -1;
  int worst_j = -1;
  int worst_inner = 0;
};

/// Rejection-sampled packing: i.i.d. uniform sign vectors, resampling any
/// candidate whose inner product with an accepted vector exceeds max_inner.
/// Deterministic in (d, m, seed). Throws PackingError once the attempt budget
/// (budget_factor * m candidate draws) is exhausted, which signals that d is
/// too small for the requested m.
/// max_inner < 0 selects the default bound d/2.
PackedSet build_packing(int d, int m, std::uint64_t seed, int max_inner = -1,
                        int budget_factor = 100);

/// Exhaustive O(m^2 d) scan of all pairwise inner products. The report
/// carries the maximizing pair whether or not the bound holds.
PackingReport verify_packing(const PackedSet& set);

/// m unit vectors evenly spaced on the plane circle,
/// w^i = (sin(2*pi*i/m), cos(2*pi*i/m)) for i = 1..m (stored at row i-1).
class CircleSet {
 public:
  explicit CircleSet(int m);

  int size() const { return static_cast<int>(vectors_.rows()); }
  const Eigen::MatrixXd& vectors() const { return vectors_; }
  Eigen::Vector2d vector(int i) const { return vectors_.row(i); }

  /// Smallest pairwise Euclidean distance; at least 4/m by the spacing bound.
  double min_pairwise_distance() const;

 private:
  Eigen::MatrixXd vectors_;
};

inline CircleSet build_circle_set(int m) { return CircleSet(m); }

}  // namespace ermlab
