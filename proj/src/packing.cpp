#include "ermlab/packing.hpp"

#include "ermlab/rng.hpp"

#include <algorithm>
#include <cmath>

namespace ermlab {

SignVector::SignVector(Eigen::VectorXi entries) : entries_(std::move(entries)) {
  if (entries_.size() == 0) throw std::invalid_argument("SignVector: empty");
  for (int i = 0; i < entries_.size(); ++i)
    if (entries_[i] != 1 && entries_[i] != -1)
      throw std::invalid_argument("SignVector: entries must be +1 or -1");
}

Eigen::VectorXd SignVector::unit() const {
  return entries_.cast<double>() / std::sqrt(static_cast<double>(entries_.size()));
}

PackedSet::PackedSet(Eigen::MatrixXi vectors, int max_inner)
    : vectors_(std::move(vectors)), max_inner_(max_inner) {
  if (vectors_.rows() < 1) throw std::invalid_argument("PackedSet: need m >= 1 vectors");
  if (vectors_.cols() < 1) throw std::invalid_argument("PackedSet: need d >= 1");
  if (max_inner_ >= vectors_.cols())
    throw std::invalid_argument("PackedSet: max_inner must be below d (else duplicates pass)");
  for (int i = 0; i < vectors_.rows(); ++i)
    for (int j = 0; j < vectors_.cols(); ++j)
      if (vectors_(i, j) != 1 && vectors_(i, j) != -1)
        throw std::invalid_argument("PackedSet: entries must be +1 or -1");
  unit_ = vectors_.cast<double>() / std::sqrt(static_cast<double>(vectors_.cols()));
}

SignVector PackedSet::vector(int i) const {
  if (i < 0 || i >= size()) throw std::out_of_range("PackedSet: index out of range");
  return SignVector(vectors_.row(i).transpose());
}

nlohmann::json PackedSet::to_json() const {
  nlohmann::json vecs = nlohmann::json::array();
  for (int i = 0; i < size(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int j = 0; j < dimension(); ++j) row.push_back(vectors_(i, j));
    vecs.push_back(std::move(row));
  }
  return {{"d", dimension()}, {"m", size()}, {"max_inner", max_inner_}, {"vectors", vecs}};
}

PackedSet PackedSet::from_json(const nlohmann::json& j) {
  int d = j.at("d").get<int>();
  int m = j.at("m").get<int>();
  const auto& vecs = j.at("vectors");
  if (static_cast<int>(vecs.size()) != m)
    throw std::invalid_argument("PackedSet: vector count does not match m");
  Eigen::MatrixXi mat(m, d);
  for (int i = 0; i < m; ++i) {
    if (static_cast<int>(vecs[i].size()) != d)
      throw std::invalid_argument("PackedSet: vector length does not match d");
    for (int c = 0; c < d; ++c) mat(i, c) = vecs[i][c].get<int>();
  }
  return PackedSet(std::move(mat), j.at("max_inner").get<int>());
}

PackedSet build_packing(int d, int m, std::uint64_t seed, int max_inner, int budget_factor) {
  if (d < 6) throw std::invalid_argument("build_packing: need d >= 6");
  if (m < 1) throw std::invalid_argument("build_packing: need m >= 1");
  if (static_cast<double>(m) > std::pow(2.0, d / 6.0) * (1.0 + 1e-12))
    throw std::invalid_argument("build_packing: m exceeds 2^(d/6) for this dimension");
  if (max_inner < 0) max_inner = d / 2;
  if (max_inner >= d)
    throw std::invalid_argument("build_packing: max_inner must be below d");

  Rng rng(seed);
  Eigen::MatrixXi accepted(m, d);
  Eigen::VectorXi candidate(d);
  long long budget = static_cast<long long>(budget_factor) * m;
  int have = 0;
  while (have < m) {
    if (budget-- <= 0)
      throw PackingError("build_packing: attempt budget exhausted (d too small for m at this bound)");
    for (int j = 0; j < d; ++j) candidate[j] = rng.sign();
    if (have > 0) {
      int worst = (accepted.topRows(have) * candidate).maxCoeff();
      if (worst > max_inner) continue;
    }
    accepted.row(have++) = candidate.transpose();
  }
  return PackedSet(std::move(accepted), max_inner);
}

PackingReport verify_packing(const PackedSet& set) {
  PackingReport report;
  int m = set.size();
  if (m < 2) return report;

  // Blocked Gram scan; double GEMM is exact here (entries in [-d, d]).
  Eigen::MatrixXd all = set.vectors().cast<double>();
  const int block = 256;
  int best = std::numeric_limits<int>::min();
  for (int i0 = 0; i0 < m; i0 += block) {
    int rows = std::min(block, m - i0);
    Eigen::MatrixXd gram = all.middleRows(i0, rows) * all.transpose();
    for (int r = 0; r < rows; ++r) {
      int i = i0 + r;
      for (int j = i + 1; j < m; ++j) {
        int inner = static_cast<int>(std::llround(gram(r, j)));
        if (inner > best) {
          best = inner;
          report.worst_i = i;
          report.worst_j = j;
        }
      }
    }
  }
  report.worst_inner = best;
  report.ok = best <= set.max_inner();
  return report;
}

CircleSet::CircleSet(int m) {
  if (m < 2) throw std::invalid_argument("CircleSet: need m >= 2");
  vectors_.resize(m, 2);
  for (int i = 1; i <= m; ++i) {
    double angle = 2.0 * M_PI * static_cast<double>(i) / static_cast<double>(m);
    vectors_(i - 1, 0) = std::sin(angle);
    vectors_(i - 1, 1) = std::cos(angle);
  }
}

double CircleSet::min_pairwise_distance() const {
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < size(); ++i)
    for (int j = i + 1; j < size(); ++j)
      best = std::min(best, (vectors_.row(i) - vectors_.row(j)).norm());
  return best;
}

}  // namespace ermlab
