#pragma once

#include <array>
#include <optional>
#include <vector>

#include "causalaudit/rng.hpp"
#include "causalaudit/tables.hpp"

namespace causalaudit::iv {

/// Evaluation of max_x sum_y max_z K(x, y | z) <= 1 on a kernel, together
/// with the 2n pairwise slacks 1 - [K(x, 0 | z) + K(x, 1 | z')] for the
/// two cross orientations (z, z') in {(0,1), (1,0)}.
struct SlackReport {
  struct PairSlack {
    int d;           // treatment value
    int orientation; // 0: (z,z') = (0,1); 1: (z,z') = (1,0)
    double slack;    // >= 0 when the inequality holds
  };
  double max_lhs = 0.0;
  double tolerance = 0.0;
  bool satisfied = false;
  std::vector<PairSlack> pair_slacks;
};

SlackReport iv_slacks(const ConditionalKernel& kernel, double tolerance = 0.0);

/// Vertex of the kernel polytope: two unit cells, one per instrument
/// stratum. Diagonal vertices repeat the same (treatment, outcome) cell.
struct ExtremePoint {
  bool diagonal;
  int x0, y0;  // unit cell in stratum z = 0
  int x1, y1;  // unit cell in stratum z = 1

  std::vector<double> kernel_values(int n) const;
  ConditionalKernel to_kernel(const CategorySpace& space) const;
};

/// All 4n^2 - 2n vertices, deterministic order: off-diagonal points by
/// (x0, x1, y0, y1), then diagonal points by (x, y). Throws for n < 2.
std::vector<ExtremePoint> enumerate_extreme_points(int n);

/// Convex weights over enumerate_extreme_points(n), in that order.
struct ConvexDecomposition {
  std::vector<double> weights;
  double reconstruction_error = 0.0;
};

/// Expresses the kernel as a convex combination of vertices, or nullopt
/// when the kernel violates the inequalities (phase-one optimum > tol).
std::optional<ConvexDecomposition> decompose(const ConditionalKernel& kernel,
                                             double tol = 1e-9);

/// Discrete instrument model in response-function form: an instrument
/// distribution plus a mixture over deterministic response pairs
/// (r1: instrument -> treatment, r2: treatment -> outcome).
struct ResponsePair {
  std::array<int, 2> treatment_by_instrument;
  std::vector<int> outcome_by_treatment;  // size n, values in {0, 1}
};

struct RealizationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class ResponseFunctionIVModel {
 public:
  ResponseFunctionIVModel(int n, std::array<double, 2> p_instrument,
                          std::vector<std::pair<ResponsePair, double>> weights);

  int n() const { return n_; }
  const std::array<double, 2>& p_instrument() const { return p_instrument_; }
  const std::vector<std::pair<ResponsePair, double>>& weights() const {
    return weights_;
  }

  /// Interventional kernel P(X = x, Y = y | do(Z = z)) induced by the
  /// response mixture; exact sum over the weighted pairs.
  std::vector<double> induced_kernel_values() const;
  ConditionalKernel induced_kernel() const;

 private:
  int n_;
  std::array<double, 2> p_instrument_;
  std::vector<std::pair<ResponsePair, double>> weights_;
};

/// Deterministic response pair generating one extreme point: r1 maps the
/// instrument to the vertex cells' treatments, r2 maps those treatments to
/// the cells' outcomes and everything else to 0.
ResponsePair response_pair_for(const ExtremePoint& point, int n);

/// Pushes a feasible kernel onto a response-function model whose induced
/// kernel reproduces it within the decomposition tolerance. Throws
/// RealizationError when the kernel violates the inequalities.
ResponseFunctionIVModel realize(const ConditionalKernel& kernel,
                                const std::array<double, 2>& p_instrument);

/// Kernel drawn uniformly: each stratum is an independent flat Dirichlet
/// over its 2n cells.
ConditionalKernel random_kernel(const CategorySpace& space, Rng& rng);

/// Response model with a random support and Dirichlet weights; its induced
/// kernel always satisfies the inequalities.
ResponseFunctionIVModel random_response_model(int n, Rng& rng);

}  // namespace causalaudit::iv
