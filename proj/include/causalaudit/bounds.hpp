#pragma once

#include "causalaudit/tables.hpp"

namespace causalaudit::bounds {

struct EffectInterval {
  double lower = -1.0;
  double upper = 1.0;
  bool contains_zero = true;
};

EffectInterval make_interval(double lower, double upper);

/// Partial-identification interval for the controlled direct effect
/// P(A=1 | do(S=1), do(D=d)) - P(A=1 | do(S=0), do(D=d)):
///   [ K(d,1|1) + K(d,0|0) - 1,  1 - K(d,0|1) - K(d,1|0) ].
EffectInterval cde_bounds(const ConditionalKernel& kernel, int d);

/// True iff every department's interval contains zero; algebraically
/// identical to the instrumental inequalities at tolerance 0.
bool cde_zero_compatible(const ConditionalKernel& kernel);

/// Mediation-formula point estimate
///   sum_d (P(A=1|d,s_to) - P(A=1|d,s_from)) P(d|s_from).
/// Requires P(d, s) > 0 for every (d, s); causally meaningful as the
/// natural direct effect only under the confounder-free model class.
double nde_point(const JointDistribution& joint, int s_from, int s_to);

enum class NdeDirection { kZeroToOne, kOneToZero };

/// Closed-form bounds on the natural direct effect for a binary mediator
/// (max of three lower expressions, min of three upper ones) under
/// mediator-outcome confounding.
EffectInterval nde_bounds_binary(const ConditionalKernel& kernel,
                                 NdeDirection direction);

}  // namespace causalaudit::bounds
