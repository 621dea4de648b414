#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "causalaudit/bayes.hpp"
#include "causalaudit/bounds.hpp"
#include "causalaudit/freq.hpp"
#include "causalaudit/scm.hpp"
#include "causalaudit/tables.hpp"

namespace causalaudit::audit {

inline constexpr std::uint64_t kDefaultSeed = 20230741;

struct AuditConfig {
  std::string input_path;
  LabelCoding coding;
  double alpha = 1.0;                  // symmetric prior parameter
  std::uint64_t n_samples = 1'000'000;
  double level = 0.95;
  std::uint64_t seed = kDefaultSeed;
  double tolerance = 0.0;              // membership tolerance for counting
  double reject_threshold = 0.05;      // bayes upper CI below this rejects
  struct Sections {
    bool bayes = true;
    bool wrr = true;
    bool ci_test = true;
    bool dp_test = true;
    bool bounds = true;
  } sections;

  void validate() const;
};

enum class Verdict { kRejected, kUndecidable, kUntestable };
std::string to_string(Verdict verdict);

struct AuditReport {
  struct StratumSummary {
    std::string label;
    std::uint64_t count = 0;
    double accept_rate = 0.0;
  };
  struct CdeRow {
    int d;
    std::string label;
    bounds::EffectInterval interval;
  };

  std::string input_path;
  std::uint64_t total = 0;
  int n_departments = 0;
  std::vector<StratumSummary> strata;

  std::optional<iv::SlackReport> ml_iv;
  std::optional<bayes::BayesReport> bayes_report;
  std::optional<freq::WrrReport> wrr;
  std::optional<freq::TestResult> ci_test;
  std::optional<freq::TestResult> dp_test;
  std::vector<CdeRow> cde;
  std::optional<double> nde_point_01;  // requires full positivity
  std::optional<bounds::EffectInterval> nde_bounds_01;  // binary mediator only
  std::optional<bounds::EffectInterval> nde_bounds_10;
  std::string untestable_reason;

  AuditConfig config;
  Verdict verdict = Verdict::kUndecidable;

  std::string to_json() const;  // fixed key order
  std::string to_text() const;
};

/// Runs every enabled test and bound on the table and applies the verdict
/// rule: UNTESTABLE on a positivity failure, REJECTED when the ML kernel
/// violates the inequalities or the posterior upper limit falls below the
/// rejection threshold, UNDECIDABLE otherwise.
AuditReport run_audit(const ContingencyTable3& table, const AuditConfig& config);

struct SimulateResult {
  std::string csv;  // long schema, one row per sampled record
  scm::FairnessVerdicts verdicts;
  std::string verdicts_json;
};

SimulateResult run_simulate(const scm::FiniteSCM& model, std::uint64_t count,
                            std::uint64_t seed);

/// One vertex per line: `<kind> x0 y0 x1 y1`, in enumeration order.
std::string format_vertices(int n);

/// Machine-readable error record used by the command-line front end.
std::string error_record(const std::string& type, const std::string& message);

/// Stand-alone JSON renderings of the per-test records (fixed key order),
/// used by the single-purpose subcommands.
std::string to_json(const iv::SlackReport& report);
std::string to_json(const bayes::BayesReport& report);
std::string to_json(const freq::TestResult& result);
std::string to_json(const freq::WrrReport& report);
std::string sweep_to_json(const std::vector<bayes::BayesReport>& reports);

}  // namespace causalaudit::audit
