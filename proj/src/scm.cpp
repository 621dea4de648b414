#include "causalaudit/scm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace causalaudit::scm {

namespace {

constexpr double kPmfTolerance = 1e-12;

void check_pmf(const ExogenousVar& var, const char* name) {
  if (var.pmf.empty()) throw ValidationError(std::string(name) + ": empty pmf");
  double sum = 0.0;
  for (double p : var.pmf) {
    if (!(p >= 0.0)) throw ValidationError(std::string(name) + ": negative pmf entry");
    sum += p;
  }
  if (std::abs(sum - 1.0) > kPmfTolerance) {
    throw ValidationError(std::string(name) + ": pmf sums to " + std::to_string(sum));
  }
}

void check_table(const std::vector<int>& table, std::size_t size, int range,
                 const char* name) {
  if (table.size() != size) {
    throw ValidationError(std::string(name) + ": table has " +
                          std::to_string(table.size()) + " entries, expected " +
                          std::to_string(size));
  }
  for (int v : table) {
    if (v < 0 || v >= range) {
      throw ValidationError(std::string(name) + ": value out of range");
    }
  }
}

}  // namespace

std::string to_string(ConfoundingClass cls) {
  switch (cls) {
    case ConfoundingClass::kNone: return "none";
    case ConfoundingClass::kMediatorOutcome: return "d-a";
    case ConfoundingClass::kMediatorOutcomeAttrMediator: return "d-a+s-d";
  }
  throw std::logic_error("unknown confounding class");
}

ConfoundingClass confounding_class_from_string(const std::string& token) {
  if (token == "none") return ConfoundingClass::kNone;
  if (token == "d-a") return ConfoundingClass::kMediatorOutcome;
  if (token == "d-a+s-d") return ConfoundingClass::kMediatorOutcomeAttrMediator;
  throw ValidationError("unknown confounding class '" + token + "'");
}

FiniteSCM::FiniteSCM(ConfoundingClass cls, int n_mediator, ExogenousVar u_s,
                     ExogenousVar u_d, ExogenousVar u_a, ExogenousVar u_shared,
                     ExogenousVar u_sd, std::vector<int> f_s, std::vector<int> f_d,
                     std::vector<int> f_a)
    : cls_(cls),
      n_(n_mediator),
      u_s_(std::move(u_s)),
      u_d_(std::move(u_d)),
      u_a_(std::move(u_a)),
      u_shared_(std::move(u_shared)),
      u_sd_(std::move(u_sd)),
      f_s_(std::move(f_s)),
      f_d_(std::move(f_d)),
      f_a_(std::move(f_a)) {
  if (n_ < 2) throw ValidationError("mediator needs at least 2 values");
  check_pmf(u_s_, "U_S");
  check_pmf(u_d_, "U_D");
  check_pmf(u_a_, "U_A");
  check_pmf(u_shared_, "U");
  check_pmf(u_sd_, "U_SD");
  if (cls_ == ConfoundingClass::kNone && u_shared_.size() != 1) {
    throw ValidationError("confounder-free class cannot carry a shared U");
  }
  if (cls_ != ConfoundingClass::kMediatorOutcomeAttrMediator && u_sd_.size() != 1) {
    throw ValidationError("U_SD requires the attribute-mediator class");
  }
  check_table(f_s_, static_cast<std::size_t>(u_s_.size()) * u_sd_.size(), 2, "f_S");
  check_table(f_d_,
              static_cast<std::size_t>(2) * u_shared_.size() * u_sd_.size() * u_d_.size(),
              n_, "f_D");
  check_table(f_a_, static_cast<std::size_t>(2) * n_ * u_shared_.size() * u_a_.size(),
              2, "f_A");
}

namespace {

// Enumerates the exogenous product space. f(weight, us, ud, ua, u, usd).
template <class F>
void for_each_config(const FiniteSCM& m, F&& f) {
  for (int us = 0; us < m.u_s().size(); ++us) {
    const double p_us = m.u_s().pmf[us];
    for (int usd = 0; usd < m.u_sd().size(); ++usd) {
      const double p_usd = p_us * m.u_sd().pmf[usd];
      for (int u = 0; u < m.u_shared().size(); ++u) {
        const double p_u = p_usd * m.u_shared().pmf[u];
        for (int ud = 0; ud < m.u_d().size(); ++ud) {
          const double p_ud = p_u * m.u_d().pmf[ud];
          for (int ua = 0; ua < m.u_a().size(); ++ua) {
            f(p_ud * m.u_a().pmf[ua], us, ud, ua, u, usd);
          }
        }
      }
    }
  }
}

struct Solved {
  int s, d, a;
};

Solved solve_system(const FiniteSCM& m, const DoAssignment& doa, int us, int ud,
                    int ua, int u, int usd) {
  const int s = doa.s ? *doa.s : m.f_s(us, usd);
  const int d = doa.d ? *doa.d : m.f_d(s, u, usd, ud);
  const int a = m.f_a(s, d, u, ua);
  return {s, d, a};
}

}  // namespace

double Marginal::at(int s, int d, int a) const {
  const int vals[3] = {s, d, a};
  std::size_t idx = 0;
  for (int v = 0; v < 3; ++v) {
    if (!included[v]) continue;
    if (vals[v] < 0 || vals[v] >= card[v]) {
      throw std::out_of_range("marginal index out of range");
    }
    idx = idx * card[v] + vals[v];
  }
  return probs[idx];
}

JointDistribution observational(const FiniteSCM& model) {
  const CategorySpace space = CategorySpace::canonical(model.n_mediator());
  std::vector<double> probs(space.cells(), 0.0);
  for_each_config(model, [&](double w, int us, int ud, int ua, int u, int usd) {
    if (w == 0.0) return;
    const Solved v = solve_system(model, {}, us, ud, ua, u, usd);
    probs[space.index(v.s, v.d, v.a)] += w;
  });
  return JointDistribution(space, std::move(probs));
}

Marginal interventional(const FiniteSCM& model, const DoAssignment& intervention,
                        std::array<bool, 3> query) {
  Marginal out;
  out.included = query;
  out.card = {2, model.n_mediator(), 2};
  std::size_t cells = 1;
  for (int v = 0; v < 3; ++v) {
    if (query[v]) cells *= out.card[v];
  }
  out.probs.assign(cells, 0.0);
  for_each_config(model, [&](double w, int us, int ud, int ua, int u, int usd) {
    if (w == 0.0) return;
    const Solved v = solve_system(model, intervention, us, ud, ua, u, usd);
    const int vals[3] = {v.s, v.d, v.a};
    std::size_t idx = 0;
    for (int k = 0; k < 3; ++k) {
      if (query[k]) idx = idx * out.card[k] + vals[k];
    }
    out.probs[idx] += w;
  });
  return out;
}

double prob_accept_under(const FiniteSCM& model, const DoAssignment& intervention) {
  return interventional(model, intervention, {false, false, true}).probs[1];
}

double counterfactual_event_prob(const FiniteSCM& model,
                                 const PotentialOutcomeQuery& query) {
  if (query.interventions.empty()) {
    throw ValidationError("potential-outcome query needs at least one intervention");
  }
  if (!query.event) throw ValidationError("potential-outcome query has no event");
  double prob = 0.0;
  std::vector<int> outcomes(query.interventions.size());
  for_each_config(model, [&](double w, int us, int ud, int ua, int u, int usd) {
    if (w == 0.0) return;
    for (std::size_t i = 0; i < query.interventions.size(); ++i) {
      outcomes[i] = solve_system(model, query.interventions[i], us, ud, ua, u, usd).a;
    }
    if (query.event(outcomes)) prob += w;
  });
  return prob;
}

namespace {

struct JointSums {
  // All entries are plain sums of exogenous weights, so they stay exact
  // for dyadic pmfs.
  std::vector<double> joint;          // P(s, d, a), s-major
  std::vector<double> joint_sd;       // P(s, d)
  std::array<double, 2> p_s{};        // P(s)
  std::vector<double> p_d;            // P(d)
  std::vector<double> p_a1_d;         // P(A=1, d)
  std::vector<double> p_a1_sd;        // P(A=1, s, d)
};

JointSums accumulate_joint(const FiniteSCM& m) {
  const int n = m.n_mediator();
  JointSums sums;
  sums.joint.assign(4 * n, 0.0);
  sums.joint_sd.assign(2 * n, 0.0);
  sums.p_d.assign(n, 0.0);
  sums.p_a1_d.assign(n, 0.0);
  sums.p_a1_sd.assign(2 * n, 0.0);
  for_each_config(m, [&](double w, int us, int ud, int ua, int u, int usd) {
    if (w == 0.0) return;
    const Solved v = solve_system(m, {}, us, ud, ua, u, usd);
    sums.joint[(v.s * n + v.d) * 2 + v.a] += w;
    sums.joint_sd[v.s * n + v.d] += w;
    sums.p_s[v.s] += w;
    sums.p_d[v.d] += w;
    if (v.a == 1) {
      sums.p_a1_d[v.d] += w;
      sums.p_a1_sd[v.s * n + v.d] += w;
    }
  });
  return sums;
}

}  // namespace

FairnessVerdicts classify_fairness(const FiniteSCM& m) {
  const int n = m.n_mediator();
  FairnessVerdicts verdicts;
  const JointSums sums = accumulate_joint(m);

  verdicts.positivity_s = sums.p_s[0] > 0.0 && sums.p_s[1] > 0.0;
  verdicts.positivity_sd =
      std::all_of(sums.joint_sd.begin(), sums.joint_sd.end(),
                  [](double p) { return p > 0.0; });

  // Graphical notion: the outcome table is constant in s on every
  // positive-probability exogenous configuration, for every d.
  verdicts.graph_fair = true;
  for (int u = 0; u < m.u_shared().size() && verdicts.graph_fair; ++u) {
    if (m.u_shared().pmf[u] == 0.0) continue;
    for (int ua = 0; ua < m.u_a().size() && verdicts.graph_fair; ++ua) {
      if (m.u_a().pmf[ua] == 0.0) continue;
      for (int d = 0; d < n; ++d) {
        if (m.f_a(0, d, u, ua) != m.f_a(1, d, u, ua)) {
          verdicts.graph_fair = false;
          break;
        }
      }
    }
  }

  // Counterfactual notion: P(A^{do(S=s,D=d)} = A^{do(D=d)}) = 1 for all s, d.
  verdicts.ctrf_fair = true;
  for (int s = 0; s < 2 && verdicts.ctrf_fair; ++s) {
    for (int d = 0; d < n && verdicts.ctrf_fair; ++d) {
      double agree = 0.0;
      double total = 0.0;
      for_each_config(m, [&](double w, int us, int, int ua, int u, int usd) {
        if (w == 0.0) return;
        total += w;
        const int a_forced = m.f_a(s, d, u, ua);
        const int a_natural = m.f_a(m.f_s(us, usd), d, u, ua);
        if (a_forced == a_natural) agree += w;
      });
      if (agree != total) verdicts.ctrf_fair = false;
    }
  }

  // Interventional notion: P(A=1 | do(S=s), do(D=d)) = P(A=1 | do(D=d)).
  verdicts.inter_fair = true;
  for (int d = 0; d < n && verdicts.inter_fair; ++d) {
    const double p_do_d = prob_accept_under(m, DoAssignment{{}, d});
    for (int s = 0; s < 2; ++s) {
      const double p_do_sd = prob_accept_under(m, DoAssignment{s, d});
      if (p_do_sd != p_do_d) {
        verdicts.inter_fair = false;
        break;
      }
    }
  }

  // Observational notion: P(A=1 | s, d) = P(A=1 | d) whenever P(s, d) > 0,
  // compared as P(A1, s, d) P(d) = P(A1, d) P(s, d).
  verdicts.obs_fair = true;
  for (int s = 0; s < 2 && verdicts.obs_fair; ++s) {
    for (int d = 0; d < n; ++d) {
      if (sums.joint_sd[s * n + d] == 0.0) continue;
      const double lhs = sums.p_a1_sd[s * n + d] * sums.p_d[d];
      const double rhs = sums.p_a1_d[d] * sums.joint_sd[s * n + d];
      if (lhs != rhs) {
        verdicts.obs_fair = false;
        break;
      }
    }
  }

  // Counterfactual fairness in the attribute-flip sense:
  // P(A^{do(S=s')} = 1 | d, s) = P(A = 1 | d, s) on positive (s, d).
  verdicts.kusner_ctrf_fair = true;
  for (int s = 0; s < 2 && verdicts.kusner_ctrf_fair; ++s) {
    const int s_prime = 1 - s;
    std::vector<double> lhs(n, 0.0), rhs(n, 0.0);
    for_each_config(m, [&](double w, int us, int ud, int ua, int u, int usd) {
      if (w == 0.0) return;
      const Solved fact = solve_system(m, {}, us, ud, ua, u, usd);
      if (fact.s != s) return;
      const Solved flip = solve_system(m, DoAssignment{s_prime, {}}, us, ud, ua, u, usd);
      if (flip.a == 1) lhs[fact.d] += w;
      if (fact.a == 1) rhs[fact.d] += w;
    });
    for (int d = 0; d < n; ++d) {
      if (sums.joint_sd[s * n + d] == 0.0) continue;
      if (lhs[d] != rhs[d]) {
        verdicts.kusner_ctrf_fair = false;
        break;
      }
    }
  }

  // Path-dependent counterfactual fairness:
  // P(A^{do(S=s',D=d)} = 1 | d, s) = P(A = 1 | d, s) on positive (s, d).
  verdicts.path_dep_fair = true;
  for (int s = 0; s < 2 && verdicts.path_dep_fair; ++s) {
    const int s_prime = 1 - s;
    std::vector<double> lhs(n, 0.0);
    for_each_config(m, [&](double w, int us, int ud, int ua, int u, int usd) {
      if (w == 0.0) return;
      const Solved fact = solve_system(m, {}, us, ud, ua, u, usd);
      if (fact.s != s) return;
      if (m.f_a(s_prime, fact.d, u, ua) == 1) lhs[fact.d] += w;
    });
    for (int d = 0; d < n; ++d) {
      if (sums.joint_sd[s * n + d] == 0.0) continue;
      if (lhs[d] != sums.p_a1_sd[s * n + d]) {
        verdicts.path_dep_fair = false;
        break;
      }
    }
  }

  return verdicts;
}

namespace {

// Random pmf on the 1/16 grid so that every downstream probability is a
// dyadic rational and verdict comparisons stay exact.
ExogenousVar random_pmf(Rng& rng, int support) {
  std::vector<int> ticks(support, 0);
  for (int i = 0; i < 16; ++i) ticks[rng.below(support)]++;
  ExogenousVar var;
  var.pmf.resize(support);
  for (int i = 0; i < support; ++i) var.pmf[i] = ticks[i] / 16.0;
  return var;
}

std::vector<int> random_table(Rng& rng, std::size_t size, int range) {
  std::vector<int> table(size);
  for (auto& v : table) v = static_cast<int>(rng.below(range));
  return table;
}

}  // namespace

FiniteSCM random_model(ConfoundingClass cls, int n_mediator, std::uint64_t seed,
                       const ModelFlags& flags) {
  if (n_mediator < 2) throw ValidationError("mediator needs at least 2 values");
  Rng rng = Rng::derive(seed, 0x5c3 + 131 * static_cast<std::uint64_t>(cls) +
                                  17 * static_cast<std::uint64_t>(n_mediator));

  const auto support = [&rng]() { return 2 + static_cast<int>(rng.below(3)); };
  ExogenousVar u_s = random_pmf(rng, support());
  ExogenousVar u_d = random_pmf(rng, support());
  ExogenousVar u_a = random_pmf(rng, support());
  ExogenousVar u_shared{{1.0}};
  ExogenousVar u_sd{{1.0}};
  if (cls != ConfoundingClass::kNone) u_shared = random_pmf(rng, support());
  if (cls == ConfoundingClass::kMediatorOutcomeAttrMediator) {
    u_sd = random_pmf(rng, support());
  }

  std::vector<int> f_s = random_table(rng, u_s.pmf.size() * u_sd.pmf.size(), 2);

  // Structural variety: without it a uniformly random outcome table is
  // essentially never constant in s, and fair models would not occur.
  const bool drop_s_from_d = flags.force_kusner_fair || rng.uniform() < 0.25;
  const bool drop_s_from_a =
      flags.force_graph_fair || flags.force_kusner_fair || rng.uniform() < 0.4;

  std::vector<int> f_d;
  const std::size_t d_inner = u_shared.pmf.size() * u_sd.pmf.size() * u_d.pmf.size();
  if (drop_s_from_d) {
    const std::vector<int> shared = random_table(rng, d_inner, n_mediator);
    f_d.reserve(2 * d_inner);
    for (int s = 0; s < 2; ++s) f_d.insert(f_d.end(), shared.begin(), shared.end());
  } else {
    f_d = random_table(rng, 2 * d_inner, n_mediator);
  }

  std::vector<int> f_a;
  const std::size_t a_inner =
      static_cast<std::size_t>(n_mediator) * u_shared.pmf.size() * u_a.pmf.size();
  if (drop_s_from_a) {
    const std::vector<int> shared = random_table(rng, a_inner, 2);
    f_a.reserve(2 * a_inner);
    for (int s = 0; s < 2; ++s) f_a.insert(f_a.end(), shared.begin(), shared.end());
  } else {
    f_a = random_table(rng, 2 * a_inner, 2);
  }

  return FiniteSCM(cls, n_mediator, std::move(u_s), std::move(u_d), std::move(u_a),
                   std::move(u_shared), std::move(u_sd), std::move(f_s),
                   std::move(f_d), std::move(f_a));
}

namespace {

// Inverse-CDF discretization: one uniform exogenous variable whose atoms
// are the gaps between the pooled breakpoints, plus the per-context value
// table. Exactly reproduces each conditional law.
struct Atomization {
  std::vector<double> lengths;      // pmf of the atoms
  std::vector<double> midpoints;
};

Atomization atomize(std::vector<double> breakpoints) {
  breakpoints.push_back(0.0);
  breakpoints.push_back(1.0);
  std::sort(breakpoints.begin(), breakpoints.end());
  Atomization atoms;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    const double lo = std::clamp(breakpoints[i], 0.0, 1.0);
    const double hi = std::clamp(breakpoints[i + 1], 0.0, 1.0);
    if (hi - lo <= 0.0) continue;
    atoms.lengths.push_back(hi - lo);
    atoms.midpoints.push_back(0.5 * (lo + hi));
  }
  // Telescoping leaves the total within float noise of 1; rescale exactly.
  double total = 0.0;
  for (double l : atoms.lengths) total += l;
  for (double& l : atoms.lengths) l /= total;
  return atoms;
}

}  // namespace

FiniteSCM realize_markov(const JointDistribution& joint) {
  const CategorySpace& sp = joint.space();
  const int n = sp.n_mediator();

  std::array<double, 2> p_s{};
  std::vector<double> p_sd(2 * n, 0.0), p_d(n, 0.0), p_a1_sd(2 * n, 0.0),
      p_a1_d(n, 0.0);
  for (int s = 0; s < 2; ++s) {
    for (int d = 0; d < n; ++d) {
      for (int a = 0; a < 2; ++a) {
        const double p = joint.prob(s, d, a);
        p_s[s] += p;
        p_sd[s * n + d] += p;
        p_d[d] += p;
        if (a == 1) {
          p_a1_sd[s * n + d] += p;
          p_a1_d[d] += p;
        }
      }
    }
  }

  for (int s = 0; s < 2; ++s) {
    for (int d = 0; d < n; ++d) {
      if (p_sd[s * n + d] <= 0.0 || p_d[d] <= 0.0) continue;
      const double gap = p_a1_sd[s * n + d] / p_sd[s * n + d] - p_a1_d[d] / p_d[d];
      if (std::abs(gap) > 1e-9) {
        throw ValidationError(
            "joint violates A independent of S given D (gap " +
            std::to_string(gap) + " at d=" + std::to_string(d) + ")");
      }
    }
  }

  // Mediator: one uniform atomized against both conditional CDFs.
  std::array<std::vector<double>, 2> cdf_d;
  std::vector<double> breakpoints_d;
  for (int s = 0; s < 2; ++s) {
    cdf_d[s].resize(n);
    double acc = 0.0;
    const bool have = p_s[s] > 0.0;
    const int fallback = 1 - s;
    for (int d = 0; d < n; ++d) {
      double cond;
      if (have) {
        cond = p_sd[s * n + d] / p_s[s];
      } else if (p_s[fallback] > 0.0) {
        cond = p_sd[fallback * n + d] / p_s[fallback];
      } else {
        cond = (d == 0) ? 1.0 : 0.0;
      }
      acc += cond;
      cdf_d[s][d] = acc;
      breakpoints_d.push_back(acc);
    }
    cdf_d[s][n - 1] = 1.0;  // guard against cumulative rounding
  }
  const Atomization atoms_d = atomize(breakpoints_d);

  // Outcome: atomize against the acceptance rates per department.
  std::vector<double> q(n, 0.0);
  for (int d = 0; d < n; ++d) {
    if (p_d[d] > 0.0) q[d] = p_a1_d[d] / p_d[d];
  }
  const Atomization atoms_a = atomize(q);

  ExogenousVar u_s{{p_s[0], p_s[1]}};
  ExogenousVar u_d{atoms_d.lengths};
  ExogenousVar u_a{atoms_a.lengths};
  ExogenousVar unit{{1.0}};

  std::vector<int> f_s = {0, 1};
  std::vector<int> f_d(2 * atoms_d.lengths.size());
  for (int s = 0; s < 2; ++s) {
    for (std::size_t j = 0; j < atoms_d.lengths.size(); ++j) {
      const double mid = atoms_d.midpoints[j];
      int d = 0;
      while (d < n - 1 && mid >= cdf_d[s][d]) ++d;
      f_d[s * atoms_d.lengths.size() + j] = d;
    }
  }
  std::vector<int> f_a(2 * n * atoms_a.lengths.size());
  for (int s = 0; s < 2; ++s) {
    for (int d = 0; d < n; ++d) {
      for (std::size_t j = 0; j < atoms_a.lengths.size(); ++j) {
        f_a[(s * n + d) * atoms_a.lengths.size() + j] =
            atoms_a.midpoints[j] < q[d] ? 1 : 0;
      }
    }
  }

  return FiniteSCM(ConfoundingClass::kNone, n, std::move(u_s), std::move(u_d),
                   std::move(u_a), unit, unit, std::move(f_s), std::move(f_d),
                   std::move(f_a));
}

double nde_exact(const FiniteSCM& m, int s_from, int s_to) {
  double effect = 0.0;
  for_each_config(m, [&](double w, int, int ud, int ua, int u, int usd) {
    if (w == 0.0) return;
    const int d_natural = m.f_d(s_from, u, usd, ud);
    const int a_switched = m.f_a(s_to, d_natural, u, ua);
    const int a_baseline = m.f_a(s_from, d_natural, u, ua);
    effect += w * (a_switched - a_baseline);
  });
  return effect;
}

double cde_exact(const FiniteSCM& m, int d) {
  return prob_accept_under(m, DoAssignment{1, d}) -
         prob_accept_under(m, DoAssignment{0, d});
}

ConditionalKernel interventional_kernel(const FiniteSCM& model) {
  const CategorySpace space = CategorySpace::canonical(model.n_mediator());
  std::vector<double> values(space.cells(), 0.0);
  for (int s = 0; s < 2; ++s) {
    const Marginal marginal =
        interventional(model, DoAssignment{s, {}}, {false, true, true});
    for (int d = 0; d < model.n_mediator(); ++d) {
      for (int a = 0; a < 2; ++a) {
        values[space.index(s, d, a)] = marginal.at(-1, d, a);
      }
    }
  }
  return ConditionalKernel(space, std::move(values));
}

FiniteSCM from_response_model(const iv::ResponseFunctionIVModel& model) {
  const int n = model.n();
  const auto& entries = model.weights();
  ExogenousVar u_shared;
  u_shared.pmf.reserve(entries.size());
  for (const auto& [pair, w] : entries) u_shared.pmf.push_back(w);

  ExogenousVar u_s{{model.p_instrument()[0], model.p_instrument()[1]}};
  ExogenousVar unit{{1.0}};

  std::vector<int> f_s = {0, 1};
  std::vector<int> f_d(2 * entries.size());
  for (int s = 0; s < 2; ++s) {
    for (std::size_t r = 0; r < entries.size(); ++r) {
      f_d[s * entries.size() + r] = entries[r].first.treatment_by_instrument[s];
    }
  }
  // The outcome mechanism reads the shared response variable and the
  // mediator only; both attribute rows are identical.
  std::vector<int> f_a(2 * n * entries.size());
  for (int s = 0; s < 2; ++s) {
    for (int d = 0; d < n; ++d) {
      for (std::size_t r = 0; r < entries.size(); ++r) {
        f_a[(s * n + d) * entries.size() + r] =
            entries[r].first.outcome_by_treatment[d];
      }
    }
  }

  return FiniteSCM(ConfoundingClass::kMediatorOutcome, n, std::move(u_s), unit,
                   unit, std::move(u_shared), unit, std::move(f_s), std::move(f_d),
                   std::move(f_a));
}

namespace {

void write_pmf(std::ostringstream& out, const char* name, const ExogenousVar& var) {
  out << name << ' ' << var.size();
  char buf[32];
  for (double p : var.pmf) {
    std::snprintf(buf, sizeof(buf), "%.17g", p);
    out << ' ' << buf;
  }
  out << '\n';
}

void write_table(std::ostringstream& out, const char* name,
                 const std::vector<int>& table) {
  out << name;
  for (int v : table) out << ' ' << v;
  out << '\n';
}

}  // namespace

std::string serialize(const FiniteSCM& model) {
  std::ostringstream out;
  out << "finite-scm v1\n";
  out << "class " << to_string(model.confounding()) << '\n';
  out << "n " << model.n_mediator() << '\n';
  write_pmf(out, "u_s", model.u_s());
  write_pmf(out, "u_d", model.u_d());
  write_pmf(out, "u_a", model.u_a());
  write_pmf(out, "u", model.u_shared());
  write_pmf(out, "u_sd", model.u_sd());
  write_table(out, "f_s", model.f_s_table());
  write_table(out, "f_d", model.f_d_table());
  write_table(out, "f_a", model.f_a_table());
  return out.str();
}

FiniteSCM parse_scm(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  const auto next_line = [&](const char* what) {
    if (!std::getline(in, line)) {
      throw ValidationError(std::string("scm file truncated before ") + what);
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
  };

  next_line("header");
  if (line != "finite-scm v1") throw ValidationError("bad scm header '" + line + "'");

  const auto keyword_stream = [&](const char* key) {
    next_line(key);
    std::istringstream ls(line);
    std::string word;
    ls >> word;
    if (word != key) {
      throw ValidationError(std::string("expected '") + key + "', got '" + word + "'");
    }
    return ls;
  };

  auto cls_stream = keyword_stream("class");
  std::string cls_token;
  cls_stream >> cls_token;
  const ConfoundingClass cls = confounding_class_from_string(cls_token);

  auto n_stream = keyword_stream("n");
  int n = 0;
  n_stream >> n;

  const auto read_pmf = [&](const char* key) {
    auto ls = keyword_stream(key);
    int size = 0;
    ls >> size;
    if (size < 1) throw ValidationError(std::string(key) + ": bad support size");
    ExogenousVar var;
    var.pmf.resize(size);
    for (double& p : var.pmf) {
      if (!(ls >> p)) throw ValidationError(std::string(key) + ": truncated pmf");
    }
    return var;
  };

  ExogenousVar u_s = read_pmf("u_s");
  ExogenousVar u_d = read_pmf("u_d");
  ExogenousVar u_a = read_pmf("u_a");
  ExogenousVar u_shared = read_pmf("u");
  ExogenousVar u_sd = read_pmf("u_sd");

  const auto read_table = [&](const char* key, std::size_t size) {
    auto ls = keyword_stream(key);
    std::vector<int> table(size);
    for (int& v : table) {
      if (!(ls >> v)) throw ValidationError(std::string(key) + ": truncated table");
    }
    return table;
  };

  std::vector<int> f_s = read_table("f_s", u_s.pmf.size() * u_sd.pmf.size());
  std::vector<int> f_d = read_table(
      "f_d", 2 * u_shared.pmf.size() * u_sd.pmf.size() * u_d.pmf.size());
  std::vector<int> f_a =
      read_table("f_a", 2 * static_cast<std::size_t>(n) * u_shared.pmf.size() *
                            u_a.pmf.size());

  return FiniteSCM(cls, n, std::move(u_s), std::move(u_d), std::move(u_a),
                   std::move(u_shared), std::move(u_sd), std::move(f_s),
                   std::move(f_d), std::move(f_a));
}

FiniteSCM parse_scm_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open scm file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_scm(buffer.str());
}

}  // namespace causalaudit::scm
