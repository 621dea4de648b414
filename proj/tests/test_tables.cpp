#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "causalaudit/rng.hpp"
#include "causalaudit/tables.hpp"

using namespace causalaudit;

namespace {
const std::string kDataDir = CAUSALAUDIT_DATA_DIR;
}

TEST_CASE("single row accumulates into one cell") {
  const auto table = parse_long_csv("sex,department,admitted,count\n"
                                    "male,A,yes,512\n"
                                    "male,B,no,1\n"
                                    "female,A,no,0\n");
  CHECK(table.total() == 513);
  CHECK(table.count(0, 0, 0) == 512);  // first-appearance coding: yes -> a=0
  CHECK(table.space().s_labels()[0] == "male");
  CHECK(table.space().a_labels()[0] == "yes");
}

TEST_CASE("repeated cells add") {
  const auto table = parse_long_csv("sex,department,admitted,count\n"
                                    "male,A,yes,3\n"
                                    "female,B,no,5\n"
                                    "male,A,yes,4\n");
  CHECK(table.count(0, 0, 0) == 7);
}

TEST_CASE("explicit coding pins indices") {
  LabelCoding coding;
  coding.s_labels = {"male", "female"};
  coding.a_labels = {"no", "yes"};
  const auto table = parse_long_csv("sex,department,admitted,count\n"
                                    "female,X,yes,2\n"
                                    "male,Y,no,3\n",
                                    coding);
  CHECK(table.count(1, 0, 1) == 2);
  CHECK(table.count(0, 1, 0) == 3);
}

TEST_CASE("Berkeley file has 24 cells and the paper's totals") {
  const auto table = parse_long_csv_file(kDataDir + "/ucb_admissions.csv");
  CHECK(table.space().n_mediator() == 6);
  CHECK(table.space().cells() == 24);
  CHECK(table.total() == 4526);
  std::uint64_t male = 0, female = 0;
  for (int d = 0; d < 6; ++d) {
    for (int a = 0; a < 2; ++a) {
      male += table.count(0, d, a);
      female += table.count(1, d, a);
    }
  }
  CHECK(male == 2691);
  CHECK(female == 1835);
  CHECK(table.space().s_labels()[0] == "male");
  CHECK(table.space().a_labels()[1] == "yes");
}

TEST_CASE("parse errors carry line numbers") {
  CHECK_THROWS_AS(parse_long_csv("sex,department,admitted\n"), ParseError);
  try {
    parse_long_csv("sex,department,admitted,count\nmale,A,yes\n");
    FAIL("expected ParseError");
  } catch (const ParseError& err) {
    CHECK(err.line == 2);
  }
  CHECK_THROWS_AS(parse_long_csv("sex,department,admitted,count\nmale,A,yes,abc\n"),
                  ParseError);
  CHECK_THROWS_AS(parse_long_csv("sex,department,admitted,count\nmale,A,yes,-3\n"),
                  ValidationError);
  CHECK_THROWS_AS(
      parse_long_csv("sex,department,admitted,count\n"
                     "male,A,yes,1\nfemale,A,yes,1\nother,A,yes,1\n"),
      SchemaError);
  CHECK_THROWS_AS(
      parse_long_csv("sex,department,admitted,count\n"
                     "male,A,yes,1\nmale,A,no,1\nmale,B,maybe,1\nfemale,B,no,1\n"),
      SchemaError);
}

TEST_CASE("serialization round-trips cell counts exactly") {
  const auto table = parse_long_csv_file(kDataDir + "/ucb_admissions.csv");
  const auto again = parse_long_csv(serialize_long_csv(table));
  REQUIRE(again.space() == table.space());
  CHECK(again.counts() == table.counts());
}

TEST_CASE("empirical joint is exact rational division") {
  Rng rng(41);
  // 97 records thrown into random cells.
  CategorySpace space = CategorySpace::canonical(3);
  std::vector<std::uint64_t> counts(space.cells(), 0);
  for (int i = 0; i < 97; ++i) ++counts[rng.below(space.cells())];
  const ContingencyTable3 table(space, counts);
  const auto joint = empirical_joint(table);
  double sum = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    CHECK(joint.probs()[i] == static_cast<double>(counts[i]) / 97.0);
    sum += joint.probs()[i];
  }
  CHECK(std::abs(sum - 1.0) <= 1e-12);
}

TEST_CASE("point mass and empty-table edge cases") {
  CategorySpace space = CategorySpace::canonical(2);
  std::vector<std::uint64_t> counts(space.cells(), 0);
  counts[space.index(1, 0, 1)] = 8;
  const auto joint = empirical_joint(ContingencyTable3(space, counts));
  CHECK(joint.prob(1, 0, 1) == 1.0);

  const ContingencyTable3 empty(space, std::vector<std::uint64_t>(space.cells(), 0));
  CHECK(empty.total() == 0);
  CHECK_THROWS_AS(empirical_joint(empty), ValidationError);
}

TEST_CASE("uniform joint conditions to the uniform kernel") {
  CategorySpace space = CategorySpace::canonical(4);
  const JointDistribution joint(
      space, std::vector<double>(space.cells(), 1.0 / space.cells()));
  const auto kernel = conditional_kernel(joint);
  for (int s = 0; s < 2; ++s) {
    for (int d = 0; d < 4; ++d) {
      for (int a = 0; a < 2; ++a) {
        CHECK(kernel.at(d, a, s) == doctest::Approx(1.0 / 8).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("kernel conditioning requires positivity") {
  CategorySpace space = CategorySpace::canonical(2);
  std::vector<double> probs(space.cells(), 0.0);
  probs[space.index(0, 0, 0)] = 0.5;
  probs[space.index(0, 1, 1)] = 0.5;
  CHECK_THROWS_AS(conditional_kernel(JointDistribution(space, probs)),
                  PositivityError);
}

TEST_CASE("kernel -> joint -> kernel round-trip on 1000 random pairs") {
  Rng rng(7);
  CategorySpace space = CategorySpace::canonical(3);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> values(space.cells());
    for (int s = 0; s < 2; ++s) {
      double sum = 0.0;
      for (int d = 0; d < 3; ++d) {
        for (int a = 0; a < 2; ++a) {
          values[space.index(s, d, a)] = rng.gamma(1.0);
          sum += values[space.index(s, d, a)];
        }
      }
      for (int d = 0; d < 3; ++d) {
        for (int a = 0; a < 2; ++a) values[space.index(s, d, a)] /= sum;
      }
    }
    const ConditionalKernel kernel(space, values);
    const double p0 = 0.05 + 0.9 * rng.uniform();
    const auto joint = joint_from_kernel(kernel, {p0, 1.0 - p0});
    const auto back = conditional_kernel(joint);
    for (std::size_t i = 0; i < values.size(); ++i) {
      CHECK(std::abs(back.values()[i] - kernel.values()[i]) <= 1e-12);
    }
  }
}
