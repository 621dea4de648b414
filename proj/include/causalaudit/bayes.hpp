#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "causalaudit/rng.hpp"
#include "causalaudit/tables.hpp"

namespace causalaudit::bayes {

/// Dirichlet parameters, one per (s, d, a) cell.
struct DirichletSpec {
  std::vector<double> alpha;

  static DirichletSpec symmetric(std::size_t cells, double a);
  void validate() const;
};

/// Histogram geometry for the posterior of the inequality left-hand side.
inline constexpr int kHistogramBins = 80;
inline constexpr double kHistogramMax = 2.0;

struct BayesReport {
  std::uint64_t n_samples = 0;
  std::uint64_t n_satisfying = 0;
  double point_estimate = 0.0;
  double ci_lower = 0.0;
  double ci_upper = 1.0;
  double level = 0.95;
  std::uint64_t seed = 0;
  double tolerance = 0.0;
  double alpha = 0.0;  // symmetric prior parameter when known, else 0
  // Counts of max_lhs over [0, 2] in kHistogramBins equal bins (values at
  // exactly 2 land in the last bin).
  std::vector<std::uint64_t> max_lhs_histogram;
};

/// Conjugate update: alpha + counts, cell by cell. The inequality /
/// violation truncations partition the simplex, so the sampling posterior
/// is the untruncated Dirichlet with these parameters.
DirichletSpec posterior_params(const ContingencyTable3& table,
                               const DirichletSpec& prior);

/// One Dirichlet draw: independent unit-scale gamma variates normalized by
/// their sum; redrawn internally if every variate underflows to zero.
std::vector<double> sample_dirichlet(const std::vector<double>& alpha, Rng& rng);

/// Draw from the posterior simplex as a JointDistribution over `space`.
JointDistribution sample_simplex(const CategorySpace& space,
                                 const DirichletSpec& params, std::uint64_t seed);

/// Monte Carlo estimate of the posterior probability that the data-
/// generating distribution satisfies the instrumental inequalities, with a
/// two-sided Clopper-Pearson interval. Deterministic in (seed, n): the
/// sample stream is chunked with sub-seeds derived from (seed, chunk).
BayesReport posterior_model_probability(const ContingencyTable3& table,
                                        const DirichletSpec& prior,
                                        std::uint64_t n_samples, double level,
                                        std::uint64_t seed, double tolerance = 0.0);

/// Exact binomial interval: lower = BetaInv(alpha/2; x, n-x+1) (0 when
/// x = 0), upper = BetaInv(1-alpha/2; x+1, n-x) (1 when x = n).
std::pair<double, double> clopper_pearson(std::uint64_t x, std::uint64_t n,
                                          double level);

/// One report per symmetric prior parameter; sub-seeds derived from
/// (seed, index) so the sweep is reproducible as a whole.
std::vector<BayesReport> prior_sweep(const ContingencyTable3& table,
                                     const std::vector<double>& alphas,
                                     std::uint64_t n_samples, double level,
                                     std::uint64_t seed, double tolerance = 0.0);

}  // namespace causalaudit::bayes
