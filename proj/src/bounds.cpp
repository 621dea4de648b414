#include "causalaudit/bounds.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace causalaudit::bounds {

EffectInterval make_interval(double lower, double upper) {
  EffectInterval interval;
  interval.lower = lower;
  interval.upper = upper;
  interval.contains_zero = lower <= 0.0 && 0.0 <= upper;
  return interval;
}

EffectInterval cde_bounds(const ConditionalKernel& kernel, int d) {
  if (d < 0 || d >= kernel.n_mediator()) {
    throw std::domain_error("mediator value " + std::to_string(d) + " out of range");
  }
  const double lower = kernel.at(d, 1, 1) + kernel.at(d, 0, 0) - 1.0;
  const double upper = 1.0 - kernel.at(d, 0, 1) - kernel.at(d, 1, 0);
  return make_interval(lower, upper);
}

bool cde_zero_compatible(const ConditionalKernel& kernel) {
  for (int d = 0; d < kernel.n_mediator(); ++d) {
    if (!cde_bounds(kernel, d).contains_zero) return false;
  }
  return true;
}

double nde_point(const JointDistribution& joint, int s_from, int s_to) {
  const int n = joint.space().n_mediator();
  if (s_from < 0 || s_from > 1 || s_to < 0 || s_to > 1 || s_from == s_to) {
    throw std::domain_error("need two distinct attribute values");
  }
  double p_s_from = 0.0;
  for (int d = 0; d < n; ++d) {
    for (int a = 0; a < 2; ++a) p_s_from += joint.prob(s_from, d, a);
  }
  double effect = 0.0;
  for (int d = 0; d < n; ++d) {
    const double p_sd_from = joint.prob(s_from, d, 0) + joint.prob(s_from, d, 1);
    const double p_sd_to = joint.prob(s_to, d, 0) + joint.prob(s_to, d, 1);
    if (p_sd_from <= 0.0 || p_sd_to <= 0.0) {
      throw PositivityError("P(D=" + joint.space().d_labels()[d] + ", S=" +
                            joint.space().s_labels()[p_sd_from <= 0.0 ? s_from : s_to] +
                            ") is zero; mediation formula undefined");
    }
    const double accept_to = joint.prob(s_to, d, 1) / p_sd_to;
    const double accept_from = joint.prob(s_from, d, 1) / p_sd_from;
    effect += (accept_to - accept_from) * (p_sd_from / p_s_from);
  }
  return effect;
}

EffectInterval nde_bounds_binary(const ConditionalKernel& kernel,
                                 NdeDirection direction) {
  if (kernel.n_mediator() != 2) {
    throw std::domain_error("closed-form direct-effect bounds need a binary mediator");
  }
  // k(s, d, a) = P(A=a, D=d | S=s)
  const auto k = [&kernel](int s, int d, int a) { return kernel.at(d, a, s); };
  const auto p_a = [&](int s, int a) { return k(s, 0, a) + k(s, 1, a); };

  double lower, upper;
  if (direction == NdeDirection::kZeroToOne) {
    lower = std::max({p_a(0, 0) - 1.0,
                      k(0, 0, 0) - k(0, 1, 1) + k(1, 0, 1) - 1.0,
                      k(0, 1, 0) - k(0, 0, 1) + k(1, 1, 1) - 1.0});
    upper = std::min({1.0 - p_a(0, 1),
                      1.0 + k(0, 1, 0) - k(0, 0, 1) - k(1, 0, 0),
                      1.0 + k(0, 0, 0) - k(0, 1, 1) - k(1, 1, 0)});
  } else {
    lower = std::max({p_a(1, 0) - 1.0,
                      k(0, 0, 1) - k(1, 1, 1) + k(1, 0, 0) - 1.0,
                      k(0, 1, 1) - k(1, 0, 1) + k(1, 1, 0) - 1.0});
    upper = std::min({1.0 - p_a(1, 1),
                      1.0 + k(1, 0, 0) - k(0, 1, 0) - k(1, 1, 1),
                      1.0 + k(1, 1, 0) - k(0, 0, 0) - k(1, 0, 1)});
  }
  return make_interval(lower, upper);
}

}  // namespace causalaudit::bounds
