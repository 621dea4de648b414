#include <doctest.h>

#include <cmath>

#include "causalaudit/bounds.hpp"
#include "causalaudit/ivcore.hpp"
#include "causalaudit/scm.hpp"
#include "support/oracles.hpp"

using namespace causalaudit;
using bounds::NdeDirection;

namespace {

ConditionalKernel kernel_from_map(
    int n, const std::vector<std::pair<std::array<int, 3>, double>>& cells) {
  CategorySpace space = CategorySpace::canonical(n);
  std::vector<double> values(space.cells(), 0.0);
  double sums[2] = {0.0, 0.0};
  for (const auto& [sda, v] : cells) {
    values[space.index(sda[0], sda[1], sda[2])] = v;
    sums[sda[0]] += v;
  }
  // Park any remaining stratum mass far from the probed department.
  for (int s = 0; s < 2; ++s) {
    values[space.index(s, n - 1, 0)] += 1.0 - sums[s];
  }
  return ConditionalKernel(space, values);
}

}  // namespace

TEST_CASE("fully informative masses pin the effect to 1") {
  // K(A=1, d=0 | S=1) = 1 and K(A=0, d=0 | S=0) = 1.
  const auto kernel =
      kernel_from_map(2, {{{1, 0, 1}, 1.0}, {{0, 0, 0}, 1.0}});
  const auto interval = bounds::cde_bounds(kernel, 0);
  CHECK(interval.lower == doctest::Approx(1.0));
  CHECK(interval.upper == doctest::Approx(1.0));
  CHECK_FALSE(interval.contains_zero);
}

TEST_CASE("the referenced four-mass kernel brackets [-0.3, 0.7]") {
  const auto kernel = kernel_from_map(3, {{{1, 0, 1}, 0.3},
                                          {{0, 0, 0}, 0.4},
                                          {{1, 0, 0}, 0.2},
                                          {{0, 0, 1}, 0.1}});
  const auto interval = bounds::cde_bounds(kernel, 0);
  CHECK(interval.lower == doctest::Approx(-0.3).epsilon(1e-12));
  CHECK(interval.upper == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(interval.contains_zero);
  // The raw response-function program gives exactly the same range.
  const auto range = testsupport::cde_range_lp(kernel, 0);
  CHECK(range.lower == doctest::Approx(interval.lower).epsilon(1e-7));
  CHECK(range.upper == doctest::Approx(interval.upper).epsilon(1e-7));
}

TEST_CASE("departments with no mass are uninformative") {
  const auto kernel =
      kernel_from_map(3, {{{0, 2, 0}, 1.0}, {{1, 2, 0}, 1.0}});
  const auto interval = bounds::cde_bounds(kernel, 0);
  CHECK(interval.lower == -1.0);
  CHECK(interval.upper == 1.0);
  CHECK_THROWS(bounds::cde_bounds(kernel, 5));
}

TEST_CASE("closed forms equal the response-function program on random kernels") {
  Rng rng(4477);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(2));
    const CategorySpace space = CategorySpace::canonical(n);
    const auto kernel = iv::random_kernel(space, rng);
    for (int d = 0; d < n; ++d) {
      const auto interval = bounds::cde_bounds(kernel, d);
      const auto range = testsupport::cde_range_lp(kernel, d);
      CHECK(std::abs(interval.lower - range.lower) <= 1e-7);
      CHECK(std::abs(interval.upper - range.upper) <= 1e-7);
    }
  }
}

TEST_CASE("zero compatibility coincides with the slack check") {
  Rng rng(12321);
  const CategorySpace space = CategorySpace::canonical(3);
  for (int trial = 0; trial < 10000; ++trial) {
    auto kernel = iv::random_kernel(space, rng);
    if (trial % 2 == 0) {
      const double w = rng.uniform();
      std::vector<double> mixed(kernel.values().size());
      for (std::size_t i = 0; i < mixed.size(); ++i) {
        mixed[i] = (1.0 - w) * kernel.values()[i];
      }
      mixed[space.index(0, 0, 0)] += w;
      mixed[space.index(1, 0, 1)] += w;
      kernel = ConditionalKernel(space, mixed);
    }
    CHECK(bounds::cde_zero_compatible(kernel) ==
          iv::iv_slacks(kernel, 0.0).satisfied);
  }
  // All vertices sit exactly on the boundary and stay compatible.
  for (int n : {2, 3, 4}) {
    const CategorySpace vspace = CategorySpace::canonical(n);
    for (const auto& point : iv::enumerate_extreme_points(n)) {
      const auto kernel = point.to_kernel(vspace);
      CHECK(bounds::cde_zero_compatible(kernel));
      CHECK(bounds::cde_zero_compatible(kernel) ==
            iv::iv_slacks(kernel, 0.0).satisfied);
    }
  }
}

TEST_CASE("oracle controlled effects always land inside the bounds") {
  int checked = 0;
  for (std::uint64_t seed = 0; checked < 500; ++seed) {
    const auto model =
        scm::random_model(scm::ConfoundingClass::kMediatorOutcome, 3, seed);
    if (!scm::classify_fairness(model).positivity_s) continue;
    ++checked;
    const auto kernel = conditional_kernel(scm::observational(model));
    for (int d = 0; d < 3; ++d) {
      const auto interval = bounds::cde_bounds(kernel, d);
      const double effect = scm::cde_exact(model, d);
      CHECK(effect >= interval.lower - 1e-9);
      CHECK(effect <= interval.upper + 1e-9);
    }
  }
}

TEST_CASE("mediation formula vanishes under conditional independence") {
  // P(s) P(d|s) P(a|d) with full positivity.
  CategorySpace space = CategorySpace::canonical(3);
  std::vector<double> probs(space.cells());
  const double p_ds[2][3] = {{0.5, 0.25, 0.25}, {0.25, 0.25, 0.5}};
  const double q[3] = {0.75, 0.5, 0.125};
  for (int s = 0; s < 2; ++s) {
    for (int d = 0; d < 3; ++d) {
      probs[space.index(s, d, 1)] = 0.5 * p_ds[s][d] * q[d];
      probs[space.index(s, d, 0)] = 0.5 * p_ds[s][d] * (1.0 - q[d]);
    }
  }
  const JointDistribution joint(space, probs);
  CHECK(std::abs(bounds::nde_point(joint, 0, 1)) <= 1e-15);
}

TEST_CASE("opposite department effects cancel") {
  // Department 0 favors s=1 by +0.2, department 1 favors s=0 by the same
  // margin, equal department shares: the averaged direct effect is 0.
  CategorySpace space = CategorySpace::canonical(2);
  std::vector<double> probs(space.cells());
  const double accept[2][2] = {{0.5, 0.7}, {0.7, 0.5}};  // [s][d]
  for (int s = 0; s < 2; ++s) {
    for (int d = 0; d < 2; ++d) {
      probs[space.index(s, d, 1)] = 0.25 * accept[s][d];
      probs[space.index(s, d, 0)] = 0.25 * (1.0 - accept[s][d]);
    }
  }
  const JointDistribution joint(space, probs);
  CHECK(std::abs(bounds::nde_point(joint, 0, 1)) <= 1e-15);
  // With equal mediator laws the two directions are negatives.
  CHECK(bounds::nde_point(joint, 0, 1) ==
        doctest::Approx(-bounds::nde_point(joint, 1, 0)).epsilon(1e-12));
}

TEST_CASE("mediation formula names the empty cell") {
  CategorySpace space = CategorySpace::canonical(2);
  std::vector<double> probs(space.cells(), 0.0);
  probs[space.index(0, 0, 0)] = 0.5;
  probs[space.index(1, 0, 1)] = 0.25;
  probs[space.index(1, 1, 1)] = 0.25;
  CHECK_THROWS_AS(bounds::nde_point(JointDistribution(space, probs), 0, 1),
                  PositivityError);
}

TEST_CASE("bounds are 1-Lipschitz in the kernel entries") {
  Rng rng(9090);
  const CategorySpace space = CategorySpace::canonical(2);
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = iv::random_kernel(space, rng);
    const auto b = iv::random_kernel(space, rng);
    double l1 = 0.0;
    for (std::size_t i = 0; i < a.values().size(); ++i) {
      l1 += std::abs(a.values()[i] - b.values()[i]);
    }
    for (int d = 0; d < 2; ++d) {
      const auto ia = bounds::cde_bounds(a, d);
      const auto ib = bounds::cde_bounds(b, d);
      CHECK(std::abs(ia.lower - ib.lower) <= l1 + 1e-12);
      CHECK(std::abs(ia.upper - ib.upper) <= l1 + 1e-12);
    }
    for (const auto dir : {NdeDirection::kZeroToOne, NdeDirection::kOneToZero}) {
      const auto ia = bounds::nde_bounds_binary(a, dir);
      const auto ib = bounds::nde_bounds_binary(b, dir);
      CHECK(std::abs(ia.lower - ib.lower) <= 2.0 * l1 + 1e-12);
      CHECK(std::abs(ia.upper - ib.upper) <= 2.0 * l1 + 1e-12);
    }
  }
}

TEST_CASE("an attribute stratum forced to accept pins the direction") {
  // All s=0 mass on a = 1: switching 0 -> 1 cannot raise acceptance.
  const auto kernel =
      kernel_from_map(2, {{{0, 0, 1}, 0.5}, {{0, 1, 1}, 0.5}, {{1, 0, 1}, 0.5},
                          {{1, 1, 0}, 0.5}});
  const auto interval = bounds::nde_bounds_binary(kernel, NdeDirection::kZeroToOne);
  CHECK(interval.lower >= -1.0);
  CHECK(interval.upper <= 0.0 + 1e-15);
  CHECK_THROWS(bounds::nde_bounds_binary(
      ConditionalKernel(CategorySpace::canonical(3),
                        std::vector<double>(12, 1.0 / 6.0)),
      NdeDirection::kZeroToOne));
}

TEST_CASE("closed-form direct-effect bounds match the response program") {
  Rng rng(2222);
  const CategorySpace space = CategorySpace::canonical(2);
  for (int trial = 0; trial < 150; ++trial) {
    const auto kernel = iv::random_kernel(space, rng);
    const auto i01 = bounds::nde_bounds_binary(kernel, NdeDirection::kZeroToOne);
    const auto r01 = testsupport::nde_range_lp(kernel, 0, 1);
    CHECK(std::abs(i01.lower - r01.lower) <= 1e-7);
    CHECK(std::abs(i01.upper - r01.upper) <= 1e-7);
    const auto i10 = bounds::nde_bounds_binary(kernel, NdeDirection::kOneToZero);
    const auto r10 = testsupport::nde_range_lp(kernel, 1, 0);
    CHECK(std::abs(i10.lower - r10.lower) <= 1e-7);
    CHECK(std::abs(i10.upper - r10.upper) <= 1e-7);
  }
}

TEST_CASE("oracle natural effects land inside the binary bounds") {
  int checked = 0;
  for (std::uint64_t seed = 0; checked < 1000; ++seed) {
    const auto model =
        scm::random_model(scm::ConfoundingClass::kMediatorOutcome, 2, seed);
    if (!scm::classify_fairness(model).positivity_s) continue;
    ++checked;
    const auto kernel = conditional_kernel(scm::observational(model));
    const double nde01 = scm::nde_exact(model, 0, 1);
    const auto i01 = bounds::nde_bounds_binary(kernel, NdeDirection::kZeroToOne);
    CHECK(nde01 >= i01.lower - 1e-9);
    CHECK(nde01 <= i01.upper + 1e-9);
    const double nde10 = scm::nde_exact(model, 1, 0);
    const auto i10 = bounds::nde_bounds_binary(kernel, NdeDirection::kOneToZero);
    CHECK(nde10 >= i10.lower - 1e-9);
    CHECK(nde10 <= i10.upper + 1e-9);
  }
}

TEST_CASE("satisfied kernels keep zero inside the direct-effect bounds") {
  Rng rng(606060);
  const CategorySpace space = CategorySpace::canonical(2);
  int checked = 0;
  while (checked < 1000) {
    const auto kernel = iv::random_kernel(space, rng);
    if (!iv::iv_slacks(kernel, 0.0).satisfied) continue;
    ++checked;
    for (const auto dir : {NdeDirection::kZeroToOne, NdeDirection::kOneToZero}) {
      const auto interval = bounds::nde_bounds_binary(kernel, dir);
      CHECK(interval.lower <= interval.upper + 1e-12);
      CHECK(interval.contains_zero);
    }
  }
}
