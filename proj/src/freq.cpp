#include "causalaudit/freq.hpp"

#include <cmath>

#include "causalaudit/special_functions.hpp"

namespace causalaudit::freq {

namespace {

// Pearson statistic for a 2x2 table given as rows (r0c0, r0c1, r1c0, r1c1).
// Degenerate margins yield 0 (no evidence either way).
double pearson_2x2(double a, double b, double c, double d) {
  const double n = a + b + c + d;
  const double r0 = a + b, r1 = c + d, c0 = a + c, c1 = b + d;
  if (r0 <= 0.0 || r1 <= 0.0 || c0 <= 0.0 || c1 <= 0.0) return 0.0;
  const double det = a * d - b * c;
  return n * det * det / (r0 * r1 * c0 * c1);
}

}  // namespace

TestResult cond_indep_test(const ContingencyTable3& table, double level) {
  const int n = table.space().n_mediator();
  TestResult result;
  result.level = level;
  double statistic = 0.0;
  int df = 0;
  for (int d = 0; d < n; ++d) {
    const double a00 = static_cast<double>(table.count(0, d, 0));
    const double a01 = static_cast<double>(table.count(0, d, 1));
    const double a10 = static_cast<double>(table.count(1, d, 0));
    const double a11 = static_cast<double>(table.count(1, d, 1));
    const bool rows_ok = (a00 + a01) > 0.0 && (a10 + a11) > 0.0;
    const bool cols_ok = (a00 + a10) > 0.0 && (a01 + a11) > 0.0;
    const bool contributes = rows_ok && cols_ok;
    const double stat = contributes ? pearson_2x2(a00, a01, a10, a11) : 0.0;
    result.strata.push_back({d, stat, contributes});
    if (contributes) {
      statistic += stat;
      ++df;
    }
  }
  if (df == 0) {
    throw ValidationError(
        "conditional independence untestable: no department has both sexes "
        "and both outcomes represented");
  }
  result.statistic = statistic;
  result.df = df;
  result.p_value = chi_square_upper_tail(statistic, df);
  result.reject = result.p_value < level;
  return result;
}

TestResult demographic_parity_test(const ContingencyTable3& table, double level) {
  const int n = table.space().n_mediator();
  double m[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
  for (int s = 0; s < 2; ++s) {
    for (int d = 0; d < n; ++d) {
      for (int a = 0; a < 2; ++a) {
        m[s][a] += static_cast<double>(table.count(s, d, a));
      }
    }
  }
  if (m[0][0] + m[0][1] <= 0.0 || m[1][0] + m[1][1] <= 0.0) {
    throw ValidationError("demographic parity untestable: a sex stratum is empty");
  }
  TestResult result;
  result.level = level;
  result.statistic = pearson_2x2(m[0][0], m[0][1], m[1][0], m[1][1]);
  result.df = 1;
  result.p_value = chi_square_upper_tail(result.statistic, 1);
  result.reject = result.p_value < level;
  return result;
}

iv::SlackReport ml_iv_check(const ContingencyTable3& table) {
  return iv::iv_slacks(conditional_kernel(empirical_joint(table)), 0.0);
}

WrrReport wrr_test(const ContingencyTable3& table, double level) {
  const int n = table.space().n_mediator();
  double total[2] = {0.0, 0.0};
  for (int s = 0; s < 2; ++s) {
    for (int d = 0; d < n; ++d) {
      for (int a = 0; a < 2; ++a) {
        total[s] += static_cast<double>(table.count(s, d, a));
      }
    }
  }
  if (total[0] <= 0.0 || total[1] <= 0.0) {
    throw ValidationError("association tests untestable: a sex stratum is empty");
  }

  WrrReport report;
  report.level = level;
  for (int d = 0; d < n; ++d) {
    for (int a = 0; a < 2; ++a) {
      // Q = 1[D=d, A=a] under S=1 and 1 - 1[D=d, A=1-a] under S=0; the
      // inequality holds iff gamma = P(Q=1|S=1) - P(Q=1|S=0) <= 0.
      const double hits_s1 = static_cast<double>(table.count(1, d, a));
      const double miss_s0 = static_cast<double>(table.count(0, d, 1 - a));
      const double gamma_hat = hits_s1 / total[1] + miss_s0 / total[0] - 1.0;

      const double q1_s1 = hits_s1;
      const double q0_s1 = total[1] - hits_s1;
      const double q1_s0 = total[0] - miss_s0;
      const double q0_s0 = miss_s0;
      const double statistic = pearson_2x2(q1_s1, q0_s1, q1_s0, q0_s0);
      const double p_two_sided = chi_square_upper_tail(statistic, 1);
      const double p_one_sided = 0.5 * p_two_sided;
      const bool underflow = statistic > 0.0 && p_two_sided == 0.0;
      const bool challenged = gamma_hat > 0.0;
      const bool reject_adjusted = challenged && p_one_sided < level / 2.0;

      report.entries.push_back({d, a, gamma_hat, statistic, p_one_sided,
                                underflow, challenged, reject_adjusted});
      report.reject_global = report.reject_global || reject_adjusted;
    }
  }
  return report;
}

}  // namespace causalaudit::freq
