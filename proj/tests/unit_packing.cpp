#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ermlab/packing.hpp"
#include "ermlab/rng.hpp"

#include <cmath>

using namespace ermlab;

TEST_CASE("packing at the experiment scale satisfies the pairwise bound") {
  PackedSet set = build_packing(120, 1024, 7);
  CHECK(set.dimension() == 120);
  CHECK(set.size() == 1024);
  CHECK(set.max_inner() == 60);

  PackingReport report = verify_packing(set);  // all 523,776 pairs
  CHECK(report.ok);
  CHECK(report.worst_inner <= 60);
}

TEST_CASE("small packings") {
  PackedSet single = build_packing(6, 1, 3);
  CHECK(single.size() == 1);
  CHECK(verify_packing(single).ok);  // vacuous
  CHECK(verify_packing(single).worst_i == -1);

  PackedSet four = build_packing(12, 4, 1);
  PackingReport report = verify_packing(four);
  CHECK(report.ok);
  CHECK(report.worst_inner <= 6);
}

TEST_CASE("construction is deterministic in (d, m, seed)") {
  PackedSet a = build_packing(30, 32, 42);
  PackedSet b = build_packing(30, 32, 42);
  PackedSet c = build_packing(30, 32, 43);
  CHECK((a.vectors() - b.vectors()).cwiseAbs().maxCoeff() == 0);
  CHECK((a.vectors() - c.vectors()).cwiseAbs().maxCoeff() != 0);
}

TEST_CASE("verify_packing flags a duplicated vector with its self-correlation") {
  Eigen::MatrixXi rows(3, 8);
  Rng rng(5);
  for (int j = 0; j < 8; ++j) rows(0, j) = rng.sign();
  for (int j = 0; j < 8; ++j) rows(1, j) = -rows(0, j);
  rows.row(2) = rows.row(0);  // duplicate
  PackedSet set(rows, 4);
  PackingReport report = verify_packing(set);
  CHECK_FALSE(report.ok);
  CHECK(report.worst_inner == 8);
  CHECK(report.worst_i == 0);
  CHECK(report.worst_j == 2);
}

TEST_CASE("hand-built d=2 pair is as orthogonal as sign vectors allow") {
  Eigen::MatrixXi rows(2, 2);
  rows << 1, 1, 1, -1;
  PackedSet set(rows, 1);
  PackingReport report = verify_packing(set);
  CHECK(report.ok);
  CHECK(report.worst_inner == 0);
}

TEST_CASE("normalized rows are unit vectors") {
  PackedSet set = build_packing(30, 16, 9);
  for (int i = 0; i < set.size(); ++i)
    CHECK(std::abs(set.unit_row(i).norm() - 1.0) <= 1e-12);
}

TEST_CASE("preconditions and the attempt budget") {
  CHECK_THROWS_AS(build_packing(4, 1, 0), std::invalid_argument);      // d too small
  CHECK_THROWS_AS(build_packing(12, 100, 0), std::invalid_argument);   // m > 2^{d/6}
  CHECK_THROWS_AS(PackedSet(Eigen::MatrixXi::Ones(2, 4), 4), std::invalid_argument);
  Eigen::MatrixXi bad(1, 3);
  bad << 1, 0, -1;
  CHECK_THROWS_AS(PackedSet(bad, 1), std::invalid_argument);

  // A starved budget must fail loudly rather than spin.
  CHECK_THROWS_AS(build_packing(12, 4, 1, 0, 1), PackingError);
}

TEST_CASE("circle sets match the quarter-turn values") {
  CircleSet four = build_circle_set(4);
  Eigen::MatrixXd expected(4, 2);
  expected << 1, 0, 0, -1, -1, 0, 0, 1;
  CHECK((four.vectors() - expected).cwiseAbs().maxCoeff() <= 1e-12);

  CircleSet two = build_circle_set(2);
  CHECK(std::abs(two.vectors()(0, 0) - 0.0) <= 1e-12);
  CHECK(std::abs(two.vectors()(0, 1) + 1.0) <= 1e-12);
  CHECK(std::abs(two.vectors()(1, 0) - 0.0) <= 1e-12);
  CHECK(std::abs(two.vectors()(1, 1) - 1.0) <= 1e-12);

  CHECK_THROWS_AS(build_circle_set(1), std::invalid_argument);
}

TEST_CASE("circle separation is at least 4/m") {
  for (int m : {2, 3, 4, 16, 64}) {
    CircleSet set = build_circle_set(m);
    CHECK(set.min_pairwise_distance() >= 4.0 / m - 1e-12);
    for (int i = 0; i < m; ++i)
      CHECK(std::abs(set.vectors().row(i).norm() - 1.0) <= 1e-12);
  }
}

TEST_CASE("packing JSON round-trip") {
  PackedSet set = build_packing(18, 8, 21);
  nlohmann::json j = set.to_json();
  CHECK(j.at("d") == 18);
  CHECK(j.at("m") == 8);
  PackedSet back = PackedSet::from_json(j);
  CHECK((back.vectors() - set.vectors()).cwiseAbs().maxCoeff() == 0);
  CHECK(back.max_inner() == set.max_inner());

  j["vectors"][0][0] = 2;  // corrupted entry must be rejected
  CHECK_THROWS_AS(PackedSet::from_json(j), std::invalid_argument);
}
