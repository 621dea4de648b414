#include "causalaudit/audit.hpp"

#include <cmath>
#include <sstream>

#include <json.hpp>

namespace causalaudit::audit {

using ordered_json = nlohmann::ordered_json;

void AuditConfig::validate() const {
  if (n_samples < 1) throw ValidationError("n_samples must be >= 1");
  if (!(level > 0.0 && level < 1.0)) throw ValidationError("level must be in (0, 1)");
  if (!(alpha > 0.0)) throw ValidationError("alpha must be > 0");
  if (tolerance < 0.0) throw ValidationError("tolerance must be >= 0");
}

std::string to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::kRejected: return "REJECTED";
    case Verdict::kUndecidable: return "UNDECIDABLE";
    case Verdict::kUntestable: return "UNTESTABLE";
  }
  throw std::logic_error("unknown verdict");
}

namespace {

ordered_json slack_json(const iv::SlackReport& report) {
  ordered_json out;
  out["max_lhs"] = report.max_lhs;
  out["tolerance"] = report.tolerance;
  out["satisfied"] = report.satisfied;
  ordered_json slacks = ordered_json::array();
  for (const auto& s : report.pair_slacks) {
    slacks.push_back({{"d", s.d}, {"orientation", s.orientation}, {"slack", s.slack}});
  }
  out["pair_slacks"] = std::move(slacks);
  return out;
}

ordered_json bayes_json(const bayes::BayesReport& report) {
  ordered_json out;
  out["n_samples"] = report.n_samples;
  out["n_satisfying"] = report.n_satisfying;
  out["point_estimate"] = report.point_estimate;
  out["ci_lower"] = report.ci_lower;
  out["ci_upper"] = report.ci_upper;
  out["level"] = report.level;
  out["seed"] = report.seed;
  out["tolerance"] = report.tolerance;
  if (report.alpha > 0.0) out["alpha"] = report.alpha;
  ordered_json hist = ordered_json::array();
  const double width = bayes::kHistogramMax / bayes::kHistogramBins;
  for (std::size_t i = 0; i < report.max_lhs_histogram.size(); ++i) {
    if (report.max_lhs_histogram[i] == 0) continue;
    hist.push_back({{"bin_lower", i * width}, {"count", report.max_lhs_histogram[i]}});
  }
  out["max_lhs_histogram"] = std::move(hist);
  return out;
}

ordered_json test_json(const freq::TestResult& result) {
  ordered_json out;
  out["statistic"] = result.statistic;
  out["df"] = result.df;
  out["p_value"] = result.p_value;
  out["level"] = result.level;
  out["reject"] = result.reject;
  if (!result.strata.empty()) {
    ordered_json strata = ordered_json::array();
    for (const auto& s : result.strata) {
      strata.push_back({{"d", s.d},
                        {"statistic", s.statistic},
                        {"contributed", s.contributed}});
    }
    out["strata"] = std::move(strata);
  }
  return out;
}

ordered_json wrr_json(const freq::WrrReport& report) {
  ordered_json out;
  ordered_json entries = ordered_json::array();
  for (const auto& e : report.entries) {
    entries.push_back({{"d", e.d},
                       {"a", e.a},
                       {"gamma_hat", e.gamma_hat},
                       {"statistic", e.statistic},
                       {"p_one_sided", e.p_one_sided},
                       {"underflow", e.underflow},
                       {"challenged", e.challenged},
                       {"reject_adjusted", e.reject_adjusted}});
  }
  out["entries"] = std::move(entries);
  out["level"] = report.level;
  out["reject_global"] = report.reject_global;
  return out;
}

ordered_json interval_json(const bounds::EffectInterval& interval) {
  return {{"lower", interval.lower},
          {"upper", interval.upper},
          {"contains_zero", interval.contains_zero}};
}

}  // namespace

std::string AuditReport::to_json() const {
  ordered_json out;
  ordered_json dataset;
  dataset["path"] = input_path;
  dataset["total"] = total;
  dataset["n_departments"] = n_departments;
  ordered_json strata_json = ordered_json::array();
  for (const auto& s : strata) {
    strata_json.push_back(
        {{"sex", s.label}, {"count", s.count}, {"accept_rate", s.accept_rate}});
  }
  dataset["strata"] = std::move(strata_json);
  out["dataset"] = std::move(dataset);

  out["ml_iv"] = ml_iv ? slack_json(*ml_iv) : ordered_json(nullptr);
  out["bayes"] = bayes_report ? bayes_json(*bayes_report) : ordered_json(nullptr);
  out["wrr"] = wrr ? wrr_json(*wrr) : ordered_json(nullptr);
  out["ci_test"] = ci_test ? test_json(*ci_test) : ordered_json(nullptr);
  out["dp_test"] = dp_test ? test_json(*dp_test) : ordered_json(nullptr);

  ordered_json cde_json = ordered_json::array();
  for (const auto& row : cde) {
    ordered_json entry = interval_json(row.interval);
    entry["d"] = row.d;
    entry["department"] = row.label;
    cde_json.push_back(std::move(entry));
  }
  out["cde"] = std::move(cde_json);
  out["nde_point"] = nde_point_01 ? ordered_json(*nde_point_01) : ordered_json(nullptr);
  out["nde_bounds_0to1"] =
      nde_bounds_01 ? interval_json(*nde_bounds_01) : ordered_json(nullptr);
  out["nde_bounds_1to0"] =
      nde_bounds_10 ? interval_json(*nde_bounds_10) : ordered_json(nullptr);
  if (!untestable_reason.empty()) out["untestable_reason"] = untestable_reason;

  ordered_json config_json;
  config_json["input"] = config.input_path;
  config_json["alpha"] = config.alpha;
  config_json["samples"] = config.n_samples;
  config_json["level"] = config.level;
  config_json["seed"] = config.seed;
  config_json["tolerance"] = config.tolerance;
  config_json["reject_threshold"] = config.reject_threshold;
  out["config"] = std::move(config_json);
  out["verdict"] = to_string(verdict);
  return out.dump(2) + "\n";
}

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace

std::string AuditReport::to_text() const {
  std::ostringstream out;
  out << "dataset: " << input_path << "  (" << total << " records, "
      << n_departments << " departments)\n";
  for (const auto& s : strata) {
    out << "  " << s.label << ": " << s.count << " records, accept rate "
        << fmt(s.accept_rate) << "\n";
  }
  if (!untestable_reason.empty()) {
    out << "untestable: " << untestable_reason << "\n";
  }
  if (ml_iv) {
    out << "ML inequality check: max_lhs = " << fmt(ml_iv->max_lhs) << " -> "
        << (ml_iv->satisfied ? "satisfied" : "violated") << "\n";
  }
  if (bayes_report) {
    out << "posterior satisfaction: " << bayes_report->n_satisfying << "/"
        << bayes_report->n_samples << " = " << fmt(bayes_report->point_estimate)
        << ", " << fmt(bayes_report->level * 100) << "% CI ["
        << bayes_report->ci_lower << ", " << bayes_report->ci_upper << "]\n";
  }
  if (wrr) {
    double worst_gamma = -1.0;
    for (const auto& e : wrr->entries) worst_gamma = std::max(worst_gamma, e.gamma_hat);
    out << "association tests: max gamma_hat = " << fmt(worst_gamma) << " -> "
        << (wrr->reject_global ? "reject" : "no rejection") << "\n";
  }
  if (ci_test) {
    out << "conditional independence: chi2 = " << fmt(ci_test->statistic)
        << " (df " << ci_test->df << "), p = " << fmt(ci_test->p_value) << "\n";
  }
  if (dp_test) {
    out << "demographic parity: chi2 = " << fmt(dp_test->statistic)
        << " (df 1), p = " << fmt(dp_test->p_value) << "\n";
  }
  for (const auto& row : cde) {
    out << "CDE " << row.label << ": [" << fmt(row.interval.lower) << ", "
        << fmt(row.interval.upper) << "]"
        << (row.interval.contains_zero ? "" : "  (excludes 0)") << "\n";
  }
  if (nde_point_01) out << "NDE point (0 -> 1): " << fmt(*nde_point_01) << "\n";
  if (nde_bounds_01) {
    out << "NDE bounds (0 -> 1): [" << fmt(nde_bounds_01->lower) << ", "
        << fmt(nde_bounds_01->upper) << "]\n";
  }
  if (nde_bounds_10) {
    out << "NDE bounds (1 -> 0): [" << fmt(nde_bounds_10->lower) << ", "
        << fmt(nde_bounds_10->upper) << "]\n";
  }
  out << "verdict: " << to_string(verdict) << "\n";
  return out.str();
}

AuditReport run_audit(const ContingencyTable3& table, const AuditConfig& config) {
  config.validate();
  const CategorySpace& sp = table.space();
  const int n = sp.n_mediator();

  AuditReport report;
  report.config = config;
  report.input_path = config.input_path;
  report.total = table.total();
  report.n_departments = n;

  std::uint64_t stratum_total[2] = {0, 0};
  std::uint64_t stratum_accept[2] = {0, 0};
  for (int s = 0; s < 2; ++s) {
    for (int d = 0; d < n; ++d) {
      for (int a = 0; a < 2; ++a) {
        stratum_total[s] += table.count(s, d, a);
        if (a == 1) stratum_accept[s] += table.count(s, d, a);
      }
    }
  }
  for (int s = 0; s < 2; ++s) {
    report.strata.push_back(
        {sp.s_labels()[s], stratum_total[s],
         stratum_total[s] ? static_cast<double>(stratum_accept[s]) /
                                static_cast<double>(stratum_total[s])
                          : 0.0});
  }

  if (table.total() == 0) {
    report.verdict = Verdict::kUntestable;
    report.untestable_reason = "empty dataset";
    return report;
  }
  if (stratum_total[0] == 0 || stratum_total[1] == 0) {
    report.verdict = Verdict::kUntestable;
    report.untestable_reason = "positivity failure: sex stratum '" +
                               sp.s_labels()[stratum_total[0] == 0 ? 0 : 1] +
                               "' has no records";
    return report;
  }

  const JointDistribution joint = empirical_joint(table);
  const ConditionalKernel kernel = conditional_kernel(joint);

  report.ml_iv = freq::ml_iv_check(table);

  if (config.sections.bayes) {
    const bayes::DirichletSpec prior =
        bayes::DirichletSpec::symmetric(sp.cells(), config.alpha);
    bayes::BayesReport bayes_report = bayes::posterior_model_probability(
        table, prior, config.n_samples, config.level, config.seed,
        config.tolerance);
    bayes_report.alpha = config.alpha;
    report.bayes_report = std::move(bayes_report);
  }
  if (config.sections.wrr) report.wrr = freq::wrr_test(table, 0.05);
  if (config.sections.ci_test) {
    try {
      report.ci_test = freq::cond_indep_test(table, 0.05);
    } catch (const ValidationError&) {
      // No contributing stratum; leave the record empty.
    }
  }
  if (config.sections.dp_test) report.dp_test = freq::demographic_parity_test(table, 0.05);
  if (config.sections.bounds) {
    for (int d = 0; d < n; ++d) {
      report.cde.push_back({d, sp.d_labels()[d], bounds::cde_bounds(kernel, d)});
    }
    bool full_positivity = true;
    for (int s = 0; s < 2 && full_positivity; ++s) {
      for (int d = 0; d < n; ++d) {
        if (table.count(s, d, 0) + table.count(s, d, 1) == 0) {
          full_positivity = false;
          break;
        }
      }
    }
    if (full_positivity) report.nde_point_01 = bounds::nde_point(joint, 0, 1);
    if (n == 2) {
      report.nde_bounds_01 =
          bounds::nde_bounds_binary(kernel, bounds::NdeDirection::kZeroToOne);
      report.nde_bounds_10 =
          bounds::nde_bounds_binary(kernel, bounds::NdeDirection::kOneToZero);
    }
  }

  const bool bayes_rejects =
      report.bayes_report && report.bayes_report->ci_upper < config.reject_threshold;
  if (!report.ml_iv->satisfied || bayes_rejects) {
    report.verdict = Verdict::kRejected;
  } else {
    report.verdict = Verdict::kUndecidable;
  }
  return report;
}

SimulateResult run_simulate(const scm::FiniteSCM& model, std::uint64_t count,
                            std::uint64_t seed) {
  const JointDistribution joint = scm::observational(model);
  const CategorySpace& sp = joint.space();

  std::vector<double> cdf(joint.probs().size());
  double acc = 0.0;
  for (std::size_t i = 0; i < cdf.size(); ++i) {
    acc += joint.probs()[i];
    cdf[i] = acc;
  }
  cdf.back() = 1.0;

  Rng rng = Rng::derive(seed, 0x51e);
  std::ostringstream csv;
  csv << "sex,department,admitted,count\n";
  const int n = sp.n_mediator();
  for (std::uint64_t i = 0; i < count; ++i) {
    const double u = rng.uniform();
    const std::size_t cell =
        std::lower_bound(cdf.begin(), cdf.end(), u,
                         [](double c, double value) { return c <= value; }) -
        cdf.begin();
    const int s = static_cast<int>(cell / (2 * n));
    const int d = static_cast<int>((cell / 2) % n);
    const int a = static_cast<int>(cell % 2);
    csv << sp.s_labels()[s] << ',' << sp.d_labels()[d] << ',' << sp.a_labels()[a]
        << ",1\n";
  }

  SimulateResult result;
  result.csv = csv.str();
  result.verdicts = scm::classify_fairness(model);
  ordered_json verdicts_json;
  verdicts_json["graph_fair"] = result.verdicts.graph_fair;
  verdicts_json["ctrf_fair"] = result.verdicts.ctrf_fair;
  verdicts_json["inter_fair"] = result.verdicts.inter_fair;
  verdicts_json["obs_fair"] = result.verdicts.obs_fair;
  verdicts_json["kusner_ctrf_fair"] = result.verdicts.kusner_ctrf_fair;
  verdicts_json["path_dep_fair"] = result.verdicts.path_dep_fair;
  verdicts_json["positivity_s"] = result.verdicts.positivity_s;
  verdicts_json["positivity_sd"] = result.verdicts.positivity_sd;
  result.verdicts_json = verdicts_json.dump(2) + "\n";
  return result;
}

std::string format_vertices(int n) {
  const auto points = iv::enumerate_extreme_points(n);
  std::ostringstream out;
  for (const auto& p : points) {
    out << (p.diagonal ? "diagonal" : "off-diagonal") << ' ' << p.x0 << ' '
        << p.y0 << ' ' << p.x1 << ' ' << p.y1 << '\n';
  }
  return out.str();
}

std::string error_record(const std::string& type, const std::string& message) {
  ordered_json out;
  out["error"] = {{"type", type}, {"message", message}};
  return out.dump(2) + "\n";
}

std::string to_json(const iv::SlackReport& report) {
  return slack_json(report).dump(2) + "\n";
}

std::string to_json(const bayes::BayesReport& report) {
  return bayes_json(report).dump(2) + "\n";
}

std::string to_json(const freq::TestResult& result) {
  return test_json(result).dump(2) + "\n";
}

std::string to_json(const freq::WrrReport& report) {
  return wrr_json(report).dump(2) + "\n";
}

std::string sweep_to_json(const std::vector<bayes::BayesReport>& reports) {
  ordered_json out = ordered_json::array();
  for (const auto& r : reports) out.push_back(bayes_json(r));
  return out.dump(2) + "\n";
}

}  // namespace causalaudit::audit
