#include <doctest.h>

#include <cmath>

#include "causalaudit/linprog.hpp"
#include "causalaudit/rng.hpp"

using namespace causalaudit;
using lp::Matrix;
using lp::Status;

TEST_CASE("identity system returns b") {
  Matrix a(3, 3);
  for (int i = 0; i < 3; ++i) a.at(i, i) = 1.0;
  const std::vector<double> b = {2.0, 0.0, 5.5};
  const auto result = lp::feasible_point(a, b);
  REQUIRE(result.status == Status::kOptimal);
  for (int i = 0; i < 3; ++i) CHECK(result.x[i] == doctest::Approx(b[i]));
}

TEST_CASE("sign obstruction is infeasible") {
  Matrix a(1, 2);
  a.at(0, 0) = 1.0;
  a.at(0, 1) = 1.0;
  const auto result = lp::feasible_point(a, {-1.0});
  CHECK(result.status == Status::kInfeasible);
}

TEST_CASE("construct-then-solve on random instances") {
  Rng rng(123);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t rows = 2 + rng.below(5);
    const std::size_t cols = rows + rng.below(8);
    Matrix a(rows, cols);
    std::vector<double> x0(cols, 0.0);
    for (std::size_t j = 0; j < cols; ++j) {
      for (std::size_t i = 0; i < rows; ++i) {
        a.at(i, j) = 2.0 * rng.uniform() - 1.0;
      }
      if (rng.uniform() < 0.6) x0[j] = rng.uniform() * 3.0;
    }
    std::vector<double> b(rows, 0.0);
    for (std::size_t i = 0; i < rows; ++i) {
      for (std::size_t j = 0; j < cols; ++j) b[i] += a.at(i, j) * x0[j];
    }
    const auto result = lp::feasible_point(a, b);
    REQUIRE(result.status == Status::kOptimal);
    CHECK(result.residual < 1e-9);
  }
}

TEST_CASE("phase-two optimizes a known minimum") {
  // min x + y subject to x + y + s1 = 1 (s1 slack), x - y = 0 -> x = y,
  // minimum 0 at origin.
  Matrix a(2, 3);
  a.at(0, 0) = 1.0;
  a.at(0, 1) = 1.0;
  a.at(0, 2) = 1.0;
  a.at(1, 0) = 1.0;
  a.at(1, 1) = -1.0;
  const auto result = lp::solve(a, {1.0, 0.0}, {1.0, 1.0, 0.0});
  REQUIRE(result.status == Status::kOptimal);
  CHECK(result.objective == doctest::Approx(0.0).epsilon(1e-9));

  // Flipping the objective sign drives x = y = 1/2.
  const auto max_result = lp::solve(a, {1.0, 0.0}, {-1.0, -1.0, 0.0});
  REQUIRE(max_result.status == Status::kOptimal);
  CHECK(max_result.objective == doctest::Approx(-1.0).epsilon(1e-9));
}

TEST_CASE("redundant rows do not break feasibility") {
  Matrix a(3, 2);
  a.at(0, 0) = 1.0;
  a.at(1, 1) = 1.0;
  a.at(2, 0) = 1.0;
  a.at(2, 1) = 1.0;  // row 2 = row 0 + row 1
  const auto result = lp::feasible_point(a, {0.25, 0.5, 0.75});
  REQUIRE(result.status == Status::kOptimal);
  CHECK(result.residual < 1e-9);
}
