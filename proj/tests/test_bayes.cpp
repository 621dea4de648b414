#include <doctest.h>

#include <cmath>

#include "causalaudit/bayes.hpp"
#include "support/oracles.hpp"

using namespace causalaudit;
using bayes::DirichletSpec;

namespace {

const std::string kDataDir = CAUSALAUDIT_DATA_DIR;

ContingencyTable3 empty_table(int n) {
  CategorySpace space = CategorySpace::canonical(n);
  return ContingencyTable3(space, std::vector<std::uint64_t>(space.cells(), 0));
}

// Counts concentrated on (s=0,d=0,a=0) and (s=1,d=0,a=1): the posterior
// piles up near the maximally violating vertex.
ContingencyTable3 violating_table(std::uint64_t c) {
  CategorySpace space = CategorySpace::canonical(2);
  std::vector<std::uint64_t> counts(space.cells(), 0);
  counts[space.index(0, 0, 0)] = c;
  counts[space.index(1, 0, 1)] = c;
  return ContingencyTable3(space, counts);
}

}  // namespace

TEST_CASE("conjugate update arithmetic") {
  const auto flat = DirichletSpec::symmetric(8, 1.0);
  const auto posterior0 = bayes::posterior_params(empty_table(2), flat);
  for (double a : posterior0.alpha) CHECK(a == 1.0);

  CategorySpace space = CategorySpace::canonical(2);
  std::vector<std::uint64_t> counts(space.cells(), 0);
  counts[space.index(0, 0, 0)] = 3;
  const auto posterior = bayes::posterior_params(
      ContingencyTable3(space, counts), flat);
  CHECK(posterior.alpha[space.index(0, 0, 0)] == 4.0);
  double sum = 0.0;
  for (double a : posterior.alpha) sum += a;
  CHECK(sum == 8.0 + 3.0);

  const auto berkeley = parse_long_csv_file(kDataDir + "/ucb_admissions.csv");
  const auto bp = bayes::posterior_params(
      berkeley, DirichletSpec::symmetric(berkeley.space().cells(), 1.0));
  double bsum = 0.0;
  for (std::size_t i = 0; i < bp.alpha.size(); ++i) {
    CHECK(bp.alpha[i] ==
          static_cast<double>(berkeley.counts()[i]) + 1.0);
    bsum += bp.alpha[i];
  }
  CHECK(bsum == 4526.0 + 24.0);

  CHECK_THROWS_AS(bayes::posterior_params(empty_table(3), flat), ValidationError);
}

TEST_CASE("dirichlet moments match within 3 sigma") {
  const std::vector<double> alpha = {0.5, 1.0, 2.0, 4.0, 0.5, 1.0, 2.0, 4.0};
  double alpha_sum = 0.0;
  for (double a : alpha) alpha_sum += a;
  Rng rng(515);
  const int draws = 100000;
  std::vector<double> mean(alpha.size(), 0.0);
  for (int i = 0; i < draws; ++i) {
    const auto theta = bayes::sample_dirichlet(alpha, rng);
    for (std::size_t j = 0; j < theta.size(); ++j) mean[j] += theta[j];
  }
  for (std::size_t j = 0; j < alpha.size(); ++j) {
    mean[j] /= draws;
    const double expected = alpha[j] / alpha_sum;
    const double variance = alpha[j] * (alpha_sum - alpha[j]) /
                            (alpha_sum * alpha_sum * (alpha_sum + 1.0));
    const double sigma = std::sqrt(variance / draws);
    CHECK(std::abs(mean[j] - expected) <= 3.0 * sigma);
  }
}

TEST_CASE("two-cell flat draws are uniform on the segment") {
  Rng rng(99);
  std::vector<double> first;
  for (int i = 0; i < 10000; ++i) {
    first.push_back(bayes::sample_dirichlet({1.0, 1.0}, rng)[0]);
  }
  CHECK(testsupport::ks_uniform_p(std::move(first)) > 0.01);
}

TEST_CASE("tiny shapes never produce NaN") {
  Rng rng(1);
  for (int i = 0; i < 2000; ++i) {
    const auto theta = bayes::sample_dirichlet(std::vector<double>(24, 0.01), rng);
    double sum = 0.0;
    for (double v : theta) {
      CHECK(std::isfinite(v));
      CHECK(v >= 0.0);
      sum += v;
    }
    CHECK(std::abs(sum - 1.0) <= 1e-12);
  }
}

TEST_CASE("sampling is deterministic in the seed") {
  const auto params = DirichletSpec::symmetric(8, 1.5);
  CategorySpace space = CategorySpace::canonical(2);
  const auto a = bayes::sample_simplex(space, params, 777);
  const auto b = bayes::sample_simplex(space, params, 777);
  CHECK(a.probs() == b.probs());
  const auto c = bayes::sample_simplex(space, params, 778);
  CHECK(a.probs() != c.probs());
}

TEST_CASE("posterior concentrated on the violating vertex rarely satisfies") {
  const auto table = violating_table(10000);
  const auto prior = DirichletSpec::symmetric(table.space().cells(), 1.0);
  const auto report =
      bayes::posterior_model_probability(table, prior, 20000, 0.95, 5, 0.0);
  CHECK(report.point_estimate < 0.01);
}

TEST_CASE("single-trial interval is the degenerate Clopper-Pearson one") {
  const auto table = violating_table(3);
  const auto prior = DirichletSpec::symmetric(table.space().cells(), 1.0);
  const auto report =
      bayes::posterior_model_probability(table, prior, 1, 0.95, 11, 0.0);
  const auto expected = bayes::clopper_pearson(report.n_satisfying, 1, 0.95);
  CHECK(report.ci_lower == expected.first);
  CHECK(report.ci_upper == expected.second);
  CHECK((report.n_satisfying == 0 || report.n_satisfying == 1));
}

TEST_CASE("reports are bit-for-bit deterministic and chunk-invariant") {
  const auto table = violating_table(5);
  const auto prior = DirichletSpec::symmetric(table.space().cells(), 1.0);
  const auto a = bayes::posterior_model_probability(table, prior, 70000, 0.9, 3, 0.0);
  const auto b = bayes::posterior_model_probability(table, prior, 70000, 0.9, 3, 0.0);
  CHECK(a.n_satisfying == b.n_satisfying);
  CHECK(a.point_estimate == b.point_estimate);
  CHECK(a.ci_lower == b.ci_lower);
  CHECK(a.ci_upper == b.ci_upper);
  CHECK(a.max_lhs_histogram == b.max_lhs_histogram);
}

TEST_CASE("clopper-pearson closed forms") {
  const auto [lo_full, hi_full] = bayes::clopper_pearson(1000000, 1000000, 0.95);
  CHECK(hi_full == 1.0);
  CHECK(std::abs(lo_full - std::pow(0.025, 1e-6)) <= 1e-9);
  // The paper-precision value of the same quantity.
  CHECK(1.0 - lo_full == doctest::Approx(3.69e-6).epsilon(0.001));

  const auto [lo0, hi0] = bayes::clopper_pearson(0, 10, 0.95);
  CHECK(lo0 == 0.0);
  CHECK(hi0 == doctest::Approx(1.0 - std::pow(0.025, 0.1)).epsilon(1e-9));
  CHECK(hi0 == doctest::Approx(0.3085).epsilon(1e-3));

  for (double level : {0.5, 0.9, 0.99}) {
    CHECK(bayes::clopper_pearson(17, 17, level).second == 1.0);
  }
  CHECK_THROWS(bayes::clopper_pearson(5, 4, 0.95));
  CHECK_THROWS(bayes::clopper_pearson(1, 4, 1.5));
}

TEST_CASE("clopper-pearson is monotone in the success count") {
  double prev_lo = -1.0, prev_hi = -1.0;
  for (std::uint64_t x = 0; x <= 25; ++x) {
    const auto [lo, hi] = bayes::clopper_pearson(x, 25, 0.9);
    CHECK(lo >= prev_lo);
    CHECK(hi >= prev_hi);
    CHECK(lo <= static_cast<double>(x) / 25.0);
    CHECK(hi >= static_cast<double>(x) / 25.0);
    prev_lo = lo;
    prev_hi = hi;
  }
}

TEST_CASE("interval covers a high-precision reference estimate") {
  // Mid-simplex table: some posterior mass on each side of the boundary.
  CategorySpace space = CategorySpace::canonical(2);
  std::vector<std::uint64_t> counts(space.cells(), 1);
  counts[space.index(0, 0, 0)] = 4;
  counts[space.index(1, 0, 1)] = 4;
  const ContingencyTable3 table(space, counts);
  const auto prior = DirichletSpec::symmetric(space.cells(), 1.0);

  const auto reference =
      bayes::posterior_model_probability(table, prior, 10000000, 0.95, 999, 0.0);
  const double p_ref = reference.point_estimate;
  CHECK(p_ref > 0.05);
  CHECK(p_ref < 0.95);

  int covered = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto report =
        bayes::posterior_model_probability(table, prior, 1000, 0.95, seed, 0.0);
    if (report.ci_lower <= p_ref && p_ref <= report.ci_upper) ++covered;
  }
  CHECK(covered >= 180);  // exact intervals are conservative at 95%
}

TEST_CASE("membership tolerance only moves boundary-measure-zero draws") {
  CategorySpace space = CategorySpace::canonical(2);
  std::vector<std::uint64_t> counts(space.cells(), 2);
  counts[space.index(0, 0, 0)] = 6;
  counts[space.index(1, 0, 1)] = 6;
  const ContingencyTable3 table(space, counts);
  const auto prior = DirichletSpec::symmetric(space.cells(), 1.0);
  const auto strict =
      bayes::posterior_model_probability(table, prior, 100000, 0.95, 17, 0.0);
  const auto loose =
      bayes::posterior_model_probability(table, prior, 100000, 0.95, 17, 1e-12);
  CHECK(loose.n_satisfying >= strict.n_satisfying);
  CHECK(loose.n_satisfying - strict.n_satisfying <= 10);
}

TEST_CASE("prior sweep: singleton equals the direct call") {
  const auto table = violating_table(7);
  const auto sweep = bayes::prior_sweep(table, {1.0}, 5000, 0.95, 21, 0.0);
  REQUIRE(sweep.size() == 1);
  const auto direct = bayes::posterior_model_probability(
      table, DirichletSpec::symmetric(table.space().cells(), 1.0), 5000, 0.95, 21,
      0.0);
  CHECK(sweep[0].n_satisfying == direct.n_satisfying);
  CHECK(sweep[0].ci_lower == direct.ci_lower);
  CHECK(sweep[0].ci_upper == direct.ci_upper);
}

TEST_CASE("prior sweep on an empty table is prior-dominated") {
  const auto sweep =
      bayes::prior_sweep(empty_table(6), {0.01, 1.0, 100000.0}, 20000, 0.95, 4, 0.0);
  REQUIRE(sweep.size() == 3);
  // A huge symmetric prior concentrates at the uniform distribution, which
  // satisfies the inequalities by a wide margin; a tiny one scatters mass
  // to the simplex corners where violations are common.
  CHECK(sweep[2].point_estimate > 0.999);
  CHECK(sweep[0].point_estimate < sweep[2].point_estimate);
  CHECK(sweep[0].point_estimate < 0.9);
}
