#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "causalaudit/ivcore.hpp"
#include "causalaudit/tables.hpp"

namespace causalaudit::scm {

/// Which latent confounders the structural equations may read.
///   kNone:                S = f(U_S), D = f(S, U_D), A = f(S, D, U_A)
///   kMediatorOutcome:     D and A additionally share U
///   kMediatorOutcomeAttrMediator: S and D additionally share U_SD
enum class ConfoundingClass { kNone, kMediatorOutcome, kMediatorOutcomeAttrMediator };

std::string to_string(ConfoundingClass cls);
ConfoundingClass confounding_class_from_string(const std::string& token);

struct ExogenousVar {
  std::vector<double> pmf;  // support is {0, ..., pmf.size() - 1}
  int size() const { return static_cast<int>(pmf.size()); }
};

/// Fully enumerable three-variable SCM. Mechanisms are lookup tables over
/// every parent/exogenous configuration; absent confounders are
/// represented by single-point exogenous variables so the table layout is
/// uniform across classes.
class FiniteSCM {
 public:
  FiniteSCM(ConfoundingClass cls, int n_mediator, ExogenousVar u_s,
            ExogenousVar u_d, ExogenousVar u_a, ExogenousVar u_shared,
            ExogenousVar u_sd, std::vector<int> f_s, std::vector<int> f_d,
            std::vector<int> f_a);

  ConfoundingClass confounding() const { return cls_; }
  int n_mediator() const { return n_; }

  const ExogenousVar& u_s() const { return u_s_; }
  const ExogenousVar& u_d() const { return u_d_; }
  const ExogenousVar& u_a() const { return u_a_; }
  const ExogenousVar& u_shared() const { return u_shared_; }
  const ExogenousVar& u_sd() const { return u_sd_; }

  int f_s(int us, int usd) const { return f_s_[us * u_sd_.size() + usd]; }
  int f_d(int s, int u, int usd, int ud) const {
    return f_d_[((s * u_shared_.size() + u) * u_sd_.size() + usd) * u_d_.size() + ud];
  }
  int f_a(int s, int d, int u, int ua) const {
    return f_a_[((s * n_ + d) * u_shared_.size() + u) * u_a_.size() + ua];
  }

  const std::vector<int>& f_s_table() const { return f_s_; }
  const std::vector<int>& f_d_table() const { return f_d_; }
  const std::vector<int>& f_a_table() const { return f_a_; }

 private:
  ConfoundingClass cls_;
  int n_;
  ExogenousVar u_s_, u_d_, u_a_, u_shared_, u_sd_;
  std::vector<int> f_s_, f_d_, f_a_;
};

/// Hard intervention targets; unset fields keep their mechanism.
struct DoAssignment {
  std::optional<int> s;
  std::optional<int> d;
};

/// Marginal of the intervened system over a subset of {S, D, A}.
struct Marginal {
  std::array<bool, 3> included;  // S, D, A
  std::array<int, 3> card;
  std::vector<double> probs;

  // Pass -1 for variables not in the marginal.
  double at(int s, int d, int a) const;
};

/// A counterfactual joint event: several interventions evaluated on the
/// shared exogenous draw, with a predicate over the resulting outcome
/// values (one A per intervention).
struct PotentialOutcomeQuery {
  std::vector<DoAssignment> interventions;
  std::function<bool(const std::vector<int>&)> event;
};

struct FairnessVerdicts {
  bool graph_fair = false;
  bool ctrf_fair = false;
  bool inter_fair = false;
  bool obs_fair = false;
  bool kusner_ctrf_fair = false;
  bool path_dep_fair = false;
  bool positivity_s = false;
  bool positivity_sd = false;
};

/// Exact observational distribution by enumeration of the exogenous
/// product space; labels are the canonical ones.
JointDistribution observational(const FiniteSCM& model);

Marginal interventional(const FiniteSCM& model, const DoAssignment& intervention,
                        std::array<bool, 3> query);

/// Convenience scalar P(A = 1 | do(...)).
double prob_accept_under(const FiniteSCM& model, const DoAssignment& intervention);

double counterfactual_event_prob(const FiniteSCM& model,
                                 const PotentialOutcomeQuery& query);

/// Evaluates every fairness notion literally on the model. All
/// comparisons are cross-multiplied so they are exact whenever the
/// exogenous pmfs are dyadic rationals (random_model guarantees this).
FairnessVerdicts classify_fairness(const FiniteSCM& model);

struct ModelFlags {
  bool force_graph_fair = false;   // drop s from the outcome table
  bool force_kusner_fair = false;  // drop s from both outcome and mediator tables
};

/// Deterministic random model: exogenous supports of size <= 4 with pmfs
/// on the 1/16 grid, uniform random mechanism tables.
FiniteSCM random_model(ConfoundingClass cls, int n_mediator, std::uint64_t seed,
                       const ModelFlags& flags = {});

/// Builds a confounder-free model without the direct S -> A mechanism
/// input whose observational distribution reproduces the joint. Requires
/// A and S conditionally independent given D within 1e-9.
FiniteSCM realize_markov(const JointDistribution& joint);

/// Natural direct effect of switching s_from -> s_to while the mediator
/// follows its value under s_from; exact nested-counterfactual sum.
double nde_exact(const FiniteSCM& model, int s_from, int s_to);

/// Controlled direct effect at mediator value d.
double cde_exact(const FiniteSCM& model, int d);

/// P(D, A | do(S = s)) for both s, as a kernel.
ConditionalKernel interventional_kernel(const FiniteSCM& model);

/// The response-function mixture viewed as a finite SCM (shared exogenous
/// response variable confounding D and A; no direct S -> A input).
FiniteSCM from_response_model(const iv::ResponseFunctionIVModel& model);

/// Compact text serialization (mechanism tables plus pmfs).
std::string serialize(const FiniteSCM& model);
FiniteSCM parse_scm(const std::string& text);
FiniteSCM parse_scm_file(const std::string& path);

}  // namespace causalaudit::scm
