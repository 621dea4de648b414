#include "causalaudit/ivcore.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "causalaudit/linprog.hpp"

namespace causalaudit::iv {

SlackReport iv_slacks(const ConditionalKernel& kernel, double tolerance) {
  if (tolerance < 0.0) throw std::invalid_argument("tolerance must be >= 0");
  const int n = kernel.n_mediator();
  SlackReport report;
  report.tolerance = tolerance;
  report.pair_slacks.reserve(2 * n);
  double max_lhs = 0.0;
  for (int d = 0; d < n; ++d) {
    const double k00 = kernel.at(d, 0, 0);  // K(x, y=0 | z=0)
    const double k01 = kernel.at(d, 0, 1);  // K(x, y=0 | z=1)
    const double k10 = kernel.at(d, 1, 0);  // K(x, y=1 | z=0)
    const double k11 = kernel.at(d, 1, 1);  // K(x, y=1 | z=1)
    max_lhs = std::max(max_lhs, std::max(k00, k01) + std::max(k10, k11));
    report.pair_slacks.push_back({d, 0, 1.0 - (k00 + k11)});
    report.pair_slacks.push_back({d, 1, 1.0 - (k01 + k10)});
  }
  report.max_lhs = max_lhs;
  report.satisfied = max_lhs <= 1.0 + tolerance;
  return report;
}

std::vector<double> ExtremePoint::kernel_values(int n) const {
  std::vector<double> values(4 * n, 0.0);
  const auto idx = [n](int s, int d, int a) {
    return (static_cast<std::size_t>(s) * n + d) * 2 + a;
  };
  values[idx(0, x0, y0)] = 1.0;
  values[idx(1, x1, y1)] = 1.0;
  return values;
}

ConditionalKernel ExtremePoint::to_kernel(const CategorySpace& space) const {
  return ConditionalKernel(space, kernel_values(space.n_mediator()));
}

std::vector<ExtremePoint> enumerate_extreme_points(int n) {
  if (n < 2) throw std::domain_error("extreme points need n >= 2");
  std::vector<ExtremePoint> points;
  points.reserve(4 * n * n - 2 * n);
  for (int x0 = 0; x0 < n; ++x0) {
    for (int x1 = 0; x1 < n; ++x1) {
      if (x0 == x1) continue;
      for (int y0 = 0; y0 < 2; ++y0) {
        for (int y1 = 0; y1 < 2; ++y1) {
          points.push_back({false, x0, y0, x1, y1});
        }
      }
    }
  }
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < 2; ++y) {
      points.push_back({true, x, y, x, y});
    }
  }
  return points;
}

std::optional<ConvexDecomposition> decompose(const ConditionalKernel& kernel,
                                             double tol) {
  const int n = kernel.n_mediator();
  const auto points = enumerate_extreme_points(n);
  const std::size_t rows = 4 * static_cast<std::size_t>(n);

  // E lambda = kernel, lambda >= 0. The two normalization rows of every
  // vertex make sum(lambda) = 1 implicit.
  lp::Matrix a(rows, points.size());
  std::vector<double> b(kernel.values());
  for (std::size_t j = 0; j < points.size(); ++j) {
    const auto values = points[j].kernel_values(n);
    for (std::size_t i = 0; i < rows; ++i) a.at(i, j) = values[i];
  }

  const lp::Result result = lp::feasible_point(a, b, tol);
  if (result.status != lp::Status::kOptimal) return std::nullopt;

  ConvexDecomposition decomposition;
  decomposition.weights = result.x;
  decomposition.reconstruction_error = result.residual;
  return decomposition;
}

ResponseFunctionIVModel::ResponseFunctionIVModel(
    int n, std::array<double, 2> p_instrument,
    std::vector<std::pair<ResponsePair, double>> weights)
    : n_(n), p_instrument_(p_instrument), weights_(std::move(weights)) {
  if (n < 2) throw std::domain_error("response model needs n >= 2");
  double wsum = 0.0;
  for (const auto& [pair, w] : weights_) {
    if (w < 0.0) throw ValidationError("negative response weight");
    if (pair.outcome_by_treatment.size() != static_cast<std::size_t>(n)) {
      throw ValidationError("response pair outcome table size mismatch");
    }
    wsum += w;
  }
  if (std::abs(wsum - 1.0) > 1e-12) {
    throw ValidationError("response weights sum to " + std::to_string(wsum));
  }
  const double psum = p_instrument_[0] + p_instrument_[1];
  if (std::abs(psum - 1.0) > 1e-12 || p_instrument_[0] < 0.0 || p_instrument_[1] < 0.0) {
    throw ValidationError("instrument distribution invalid");
  }
}

std::vector<double> ResponseFunctionIVModel::induced_kernel_values() const {
  std::vector<double> values(4 * n_, 0.0);
  const auto idx = [this](int s, int d, int a) {
    return (static_cast<std::size_t>(s) * n_ + d) * 2 + a;
  };
  for (const auto& [pair, w] : weights_) {
    for (int z = 0; z < 2; ++z) {
      const int x = pair.treatment_by_instrument[z];
      const int y = pair.outcome_by_treatment[x];
      values[idx(z, x, y)] += w;
    }
  }
  return values;
}

ConditionalKernel ResponseFunctionIVModel::induced_kernel() const {
  return ConditionalKernel(CategorySpace::canonical(n_), induced_kernel_values());
}

ResponsePair response_pair_for(const ExtremePoint& point, int n) {
  ResponsePair pair;
  pair.treatment_by_instrument = {point.x0, point.x1};
  pair.outcome_by_treatment.assign(n, 0);
  pair.outcome_by_treatment[point.x0] = point.y0;
  pair.outcome_by_treatment[point.x1] = point.y1;
  return pair;
}

ResponseFunctionIVModel realize(const ConditionalKernel& kernel,
                                const std::array<double, 2>& p_instrument) {
  if (!(p_instrument[0] > 0.0) || !(p_instrument[1] > 0.0)) {
    throw RealizationError("instrument distribution must be strictly positive");
  }
  const auto decomposition = decompose(kernel);
  if (!decomposition) {
    throw RealizationError("kernel violates the instrumental inequalities");
  }
  const int n = kernel.n_mediator();
  const auto points = enumerate_extreme_points(n);
  std::vector<std::pair<ResponsePair, double>> weights;
  double kept = 0.0;
  for (std::size_t j = 0; j < points.size(); ++j) {
    const double w = decomposition->weights[j];
    if (w <= 0.0) continue;
    weights.emplace_back(response_pair_for(points[j], n), w);
    kept += w;
  }
  // The decomposition weights sum to 1 up to LP noise; renormalize so the
  // model invariant holds exactly.
  for (auto& [pair, w] : weights) w /= kept;
  return ResponseFunctionIVModel(n, p_instrument, std::move(weights));
}

ConditionalKernel random_kernel(const CategorySpace& space, Rng& rng) {
  const int n = space.n_mediator();
  std::vector<double> values(space.cells());
  for (int s = 0; s < 2; ++s) {
    double sum = 0.0;
    do {
      sum = 0.0;
      for (int d = 0; d < n; ++d) {
        for (int a = 0; a < 2; ++a) {
          const double g = rng.gamma(1.0);
          values[space.index(s, d, a)] = g;
          sum += g;
        }
      }
    } while (sum <= 0.0);
    for (int d = 0; d < n; ++d) {
      for (int a = 0; a < 2; ++a) values[space.index(s, d, a)] /= sum;
    }
  }
  return ConditionalKernel(space, std::move(values));
}

ResponseFunctionIVModel random_response_model(int n, Rng& rng) {
  const auto points = enumerate_extreme_points(n);
  // Random sparse support over vertex response pairs plus Dirichlet
  // weights; covers the whole model class by Caratheodory.
  const std::size_t support =
      2 + static_cast<std::size_t>(rng.below(points.size() - 1));
  std::vector<std::pair<ResponsePair, double>> weights;
  double sum = 0.0;
  for (std::size_t i = 0; i < support; ++i) {
    const auto& point = points[rng.below(points.size())];
    const double w = rng.gamma(1.0);
    if (w <= 0.0) continue;
    weights.emplace_back(response_pair_for(point, n), w);
    sum += w;
  }
  if (weights.empty()) {
    weights.emplace_back(response_pair_for(points[0], n), 1.0);
    sum = 1.0;
  }
  for (auto& [pair, w] : weights) w /= sum;
  const double p0 = 0.05 + 0.9 * rng.uniform();
  return ResponseFunctionIVModel(n, {p0, 1.0 - p0}, std::move(weights));
}

}  // namespace causalaudit::iv
