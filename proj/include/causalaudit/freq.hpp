#pragma once

#include <vector>

#include "causalaudit/ivcore.hpp"
#include "causalaudit/tables.hpp"

namespace causalaudit::freq {

struct TestResult {
  double statistic = 0.0;
  int df = 0;
  double p_value = 1.0;
  double level = 0.05;
  bool reject = false;
  struct Stratum {
    int d;
    double statistic;
    bool contributed;  // false when a sex row or outcome column is empty
  };
  std::vector<Stratum> strata;  // per-department detail where applicable
};

/// Stratified Pearson chi-square of A vs S within each department, summed
/// over the contributing strata; df = number of contributing strata.
/// Throws ValidationError when no stratum is testable.
TestResult cond_indep_test(const ContingencyTable3& table, double level = 0.05);

/// Pearson chi-square on the marginal 2x2 S x A table (df = 1).
TestResult demographic_parity_test(const ContingencyTable3& table,
                                   double level = 0.05);

/// Inequality check on the maximum-likelihood kernel, tolerance 0.
iv::SlackReport ml_iv_check(const ContingencyTable3& table);

/// Per-inequality one-sided association tests. Each inequality
/// K(d, a | S=1) + K(d, 1-a | S=0) <= 1 becomes gamma = lhs - 1 <= 0; a
/// positive ML estimate challenges it and is tested one-sided (half the
/// two-sided chi-square p in the observed direction) with a factor-2
/// family adjustment.
struct WrrReport {
  struct Entry {
    int d;
    int a;
    double gamma_hat;      // in [-1, 1]
    double statistic;      // Pearson chi-square of the Q x S table
    double p_one_sided;    // in the observed direction of gamma_hat
    bool underflow;        // p rounded to 0 in double precision
    bool challenged;       // gamma_hat > 0
    bool reject_adjusted;  // challenged and p < level / 2
  };
  std::vector<Entry> entries;
  double level = 0.05;
  bool reject_global = false;  // any adjusted rejection
};

WrrReport wrr_test(const ContingencyTable3& table, double level = 0.05);

}  // namespace causalaudit::freq
