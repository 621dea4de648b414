#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "causalaudit/audit.hpp"

namespace ca = causalaudit;

namespace {

ca::LabelCoding parse_coding(const std::string& spec) {
  // Format: column=label[,label...] groups separated by ';', e.g.
  //   sex=male,female;admitted=no,yes
  ca::LabelCoding coding;
  std::istringstream groups(spec);
  std::string group;
  while (std::getline(groups, group, ';')) {
    if (group.empty()) continue;
    const auto eq = group.find('=');
    if (eq == std::string::npos) {
      throw ca::SchemaError("coding group '" + group + "' lacks '='");
    }
    const std::string column = group.substr(0, eq);
    std::vector<std::string> labels;
    std::istringstream items(group.substr(eq + 1));
    std::string label;
    while (std::getline(items, label, ',')) labels.push_back(label);
    if (column == "sex") {
      coding.s_labels = labels;
    } else if (column == "department") {
      coding.d_labels = labels;
    } else if (column == "admitted") {
      coding.a_labels = labels;
    } else {
      throw ca::SchemaError("unknown coding column '" + column + "'");
    }
  }
  return coding;
}

std::vector<double> parse_alpha_list(const std::string& text) {
  std::vector<double> values;
  std::istringstream items(text);
  std::string item;
  while (std::getline(items, item, ',')) {
    if (item.empty()) continue;
    values.push_back(std::stod(item));
  }
  if (values.empty()) throw ca::ValidationError("empty alpha list");
  return values;
}

void emit(const std::string& body, const std::string& output_path) {
  if (output_path.empty()) {
    std::cout << body;
    return;
  }
  std::ofstream out(output_path);
  if (!out) throw ca::ValidationError("cannot write to '" + output_path + "'");
  out << body;
}

std::string error_type(const std::exception& err) {
  if (dynamic_cast<const ca::ParseError*>(&err)) return "parse";
  if (dynamic_cast<const ca::SchemaError*>(&err)) return "schema";
  if (dynamic_cast<const ca::PositivityError*>(&err)) return "positivity";
  if (dynamic_cast<const ca::ValidationError*>(&err)) return "validation";
  if (dynamic_cast<const std::domain_error*>(&err)) return "domain";
  return "internal";
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("CAUSAL_AUDIT_SEED")) {
    return std::strtoull(env, nullptr, 10);
  }
  return ca::audit::kDefaultSeed;
}

// Generator specs look like `random:d-a:n=3:seed=7[:graph-fair|:kusner-fair]`.
ca::scm::FiniteSCM load_model(const std::string& input) {
  if (input.rfind("random:", 0) != 0) return ca::scm::parse_scm_file(input);
  std::vector<std::string> parts;
  std::istringstream in(input);
  std::string part;
  while (std::getline(in, part, ':')) parts.push_back(part);
  if (parts.size() < 4) {
    throw ca::ValidationError(
        "generator spec must be random:<class>:n=<k>:seed=<s>[:graph-fair|:kusner-fair]");
  }
  const ca::scm::ConfoundingClass cls = ca::scm::confounding_class_from_string(parts[1]);
  int n = 0;
  std::uint64_t seed = 0;
  ca::scm::ModelFlags flags;
  for (std::size_t i = 2; i < parts.size(); ++i) {
    if (parts[i].rfind("n=", 0) == 0) {
      n = std::stoi(parts[i].substr(2));
    } else if (parts[i].rfind("seed=", 0) == 0) {
      seed = std::strtoull(parts[i].c_str() + 5, nullptr, 10);
    } else if (parts[i] == "graph-fair") {
      flags.force_graph_fair = true;
    } else if (parts[i] == "kusner-fair") {
      flags.force_kusner_fair = true;
    } else {
      throw ca::ValidationError("unknown generator field '" + parts[i] + "'");
    }
  }
  return ca::scm::random_model(cls, n, seed, flags);
}

struct CommonOpts {
  std::string input;
  std::string coding_spec;
  std::string output;
  std::string format = "json";
  double alpha = 1.0;
  std::uint64_t samples = 1'000'000;
  std::uint64_t seed = default_seed();
  double level = 0.95;
  double tolerance = 0.0;
};

void add_io_flags(CLI::App* cmd, CommonOpts& opts, bool with_input = true) {
  if (with_input) {
    cmd->add_option("--input", opts.input, "input CSV (sex,department,admitted,count)")
        ->required();
    cmd->add_option("--coding", opts.coding_spec,
                    "fixed label order, e.g. sex=male,female;admitted=no,yes");
  }
  cmd->add_option("--output", opts.output, "write the report here instead of stdout");
  cmd->add_option("--format", opts.format, "json or text")
      ->check(CLI::IsMember({"json", "text"}));
}

ca::ContingencyTable3 load_table(const CommonOpts& opts) {
  const ca::LabelCoding coding =
      opts.coding_spec.empty() ? ca::LabelCoding{} : parse_coding(opts.coding_spec);
  return ca::parse_long_csv_file(opts.input, coding);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Causal fairness audit for three-variable categorical data"};
  app.require_subcommand(1);

  CommonOpts audit_opts, iv_opts, bayes_opts, bounds_opts, wrr_opts, ci_opts,
      sweep_opts, sim_opts, vert_opts;
  std::string sweep_alphas = "0.01,1,100,100000";
  int vertices_n = 2;

  CLI::App* cmd_audit = app.add_subcommand("audit", "run every test and bound");
  add_io_flags(cmd_audit, audit_opts);
  cmd_audit->add_option("--alpha", audit_opts.alpha, "symmetric Dirichlet prior");
  cmd_audit->add_option("--samples", audit_opts.samples, "posterior sample count");
  cmd_audit->add_option("--seed", audit_opts.seed, "RNG seed");
  cmd_audit->add_option("--level", audit_opts.level, "confidence level");
  cmd_audit->add_option("--tolerance", audit_opts.tolerance, "membership tolerance");

  CLI::App* cmd_iv = app.add_subcommand("iv-check", "inequality check on the ML kernel");
  add_io_flags(cmd_iv, iv_opts);

  CLI::App* cmd_bayes = app.add_subcommand("bayes", "posterior inequality test");
  add_io_flags(cmd_bayes, bayes_opts);
  cmd_bayes->add_option("--alpha", bayes_opts.alpha, "symmetric Dirichlet prior");
  cmd_bayes->add_option("--samples", bayes_opts.samples, "posterior sample count");
  cmd_bayes->add_option("--seed", bayes_opts.seed, "RNG seed");
  cmd_bayes->add_option("--level", bayes_opts.level, "confidence level");
  cmd_bayes->add_option("--tolerance", bayes_opts.tolerance, "membership tolerance");

  CLI::App* cmd_bounds = app.add_subcommand("bounds", "direct-effect bounds");
  add_io_flags(cmd_bounds, bounds_opts);

  CLI::App* cmd_wrr = app.add_subcommand("wrr", "per-inequality association tests");
  add_io_flags(cmd_wrr, wrr_opts);
  cmd_wrr->add_option("--level", wrr_opts.level, "test level")->default_val(0.05);

  CLI::App* cmd_ci = app.add_subcommand("ci-test", "stratified conditional independence");
  add_io_flags(cmd_ci, ci_opts);
  cmd_ci->add_option("--level", ci_opts.level, "test level")->default_val(0.05);

  CLI::App* cmd_sweep = app.add_subcommand("sweep-prior", "prior sensitivity sweep");
  add_io_flags(cmd_sweep, sweep_opts);
  cmd_sweep->add_option("--alpha", sweep_alphas, "comma-separated prior parameters");
  cmd_sweep->add_option("--samples", sweep_opts.samples, "posterior sample count");
  cmd_sweep->add_option("--seed", sweep_opts.seed, "RNG seed");
  cmd_sweep->add_option("--level", sweep_opts.level, "confidence level");
  cmd_sweep->add_option("--tolerance", sweep_opts.tolerance, "membership tolerance");

  CLI::App* cmd_sim = app.add_subcommand(
      "simulate", "sample a dataset from a model file or generator spec");
  cmd_sim->add_option("--input", sim_opts.input,
                      "model file, or random:<class>:n=<k>:seed=<s>[:graph-fair|:kusner-fair]")
      ->required();
  cmd_sim->add_option("--samples", sim_opts.samples, "number of records")
      ->default_val(1000);
  cmd_sim->add_option("--seed", sim_opts.seed, "RNG seed");
  cmd_sim->add_option("--output", sim_opts.output, "CSV destination")->required();

  CLI::App* cmd_vert = app.add_subcommand("vertices", "list the kernel polytope vertices");
  cmd_vert->add_option("-n,--n", vertices_n, "mediator size")->required();
  cmd_vert->add_option("--output", vert_opts.output, "destination");

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_audit->parsed()) {
      const ca::ContingencyTable3 table = load_table(audit_opts);
      ca::audit::AuditConfig config;
      config.input_path = audit_opts.input;
      config.alpha = audit_opts.alpha;
      config.n_samples = audit_opts.samples;
      config.level = audit_opts.level;
      config.seed = audit_opts.seed;
      config.tolerance = audit_opts.tolerance;
      const ca::audit::AuditReport report = ca::audit::run_audit(table, config);
      emit(audit_opts.format == "json" ? report.to_json() : report.to_text(),
           audit_opts.output);
    } else if (cmd_iv->parsed()) {
      const auto report = ca::freq::ml_iv_check(load_table(iv_opts));
      if (iv_opts.format == "json") {
        emit(ca::audit::to_json(report), iv_opts.output);
      } else {
        std::ostringstream out;
        out << "max_lhs = " << report.max_lhs << " -> "
            << (report.satisfied ? "satisfied" : "violated") << "\n";
        emit(out.str(), iv_opts.output);
      }
    } else if (cmd_bayes->parsed()) {
      const ca::ContingencyTable3 table = load_table(bayes_opts);
      const auto prior = ca::bayes::DirichletSpec::symmetric(table.space().cells(),
                                                             bayes_opts.alpha);
      auto report = ca::bayes::posterior_model_probability(
          table, prior, bayes_opts.samples, bayes_opts.level, bayes_opts.seed,
          bayes_opts.tolerance);
      report.alpha = bayes_opts.alpha;
      if (bayes_opts.format == "json") {
        emit(ca::audit::to_json(report), bayes_opts.output);
      } else {
        std::ostringstream out;
        out << report.n_satisfying << "/" << report.n_samples << " satisfied, CI ["
            << report.ci_lower << ", " << report.ci_upper << "]\n";
        emit(out.str(), bayes_opts.output);
      }
    } else if (cmd_bounds->parsed()) {
      const ca::ContingencyTable3 table = load_table(bounds_opts);
      ca::audit::AuditConfig config;
      config.input_path = bounds_opts.input;
      config.sections.bayes = false;
      config.sections.wrr = false;
      config.sections.ci_test = false;
      config.sections.dp_test = false;
      const ca::audit::AuditReport report = ca::audit::run_audit(table, config);
      emit(bounds_opts.format == "json" ? report.to_json() : report.to_text(),
           bounds_opts.output);
    } else if (cmd_wrr->parsed()) {
      const auto report = ca::freq::wrr_test(load_table(wrr_opts), wrr_opts.level);
      if (wrr_opts.format == "json") {
        emit(ca::audit::to_json(report), wrr_opts.output);
      } else {
        std::ostringstream out;
        for (const auto& e : report.entries) {
          out << "d=" << e.d << " a=" << e.a << " gamma=" << e.gamma_hat
              << " p=" << e.p_one_sided << (e.challenged ? " challenged" : "")
              << "\n";
        }
        out << (report.reject_global ? "reject" : "no rejection") << "\n";
        emit(out.str(), wrr_opts.output);
      }
    } else if (cmd_ci->parsed()) {
      const auto result = ca::freq::cond_indep_test(load_table(ci_opts), ci_opts.level);
      if (ci_opts.format == "json") {
        emit(ca::audit::to_json(result), ci_opts.output);
      } else {
        std::ostringstream out;
        out << "chi2 = " << result.statistic << " (df " << result.df << "), p = "
            << result.p_value << "\n";
        emit(out.str(), ci_opts.output);
      }
    } else if (cmd_sweep->parsed()) {
      const ca::ContingencyTable3 table = load_table(sweep_opts);
      const auto reports = ca::bayes::prior_sweep(
          table, parse_alpha_list(sweep_alphas), sweep_opts.samples,
          sweep_opts.level, sweep_opts.seed, sweep_opts.tolerance);
      if (sweep_opts.format == "json") {
        emit(ca::audit::sweep_to_json(reports), sweep_opts.output);
      } else {
        std::ostringstream out;
        for (const auto& r : reports) {
          out << "alpha=" << r.alpha << ": " << r.n_satisfying << "/" << r.n_samples
              << ", CI [" << r.ci_lower << ", " << r.ci_upper << "]\n";
        }
        emit(out.str(), sweep_opts.output);
      }
    } else if (cmd_sim->parsed()) {
      const ca::scm::FiniteSCM model = load_model(sim_opts.input);
      const auto result = ca::audit::run_simulate(model, sim_opts.samples, sim_opts.seed);
      emit(result.csv, sim_opts.output);
      std::cout << result.verdicts_json;
    } else if (cmd_vert->parsed()) {
      emit(ca::audit::format_vertices(vertices_n), vert_opts.output);
    }
  } catch (const std::exception& err) {
    std::cerr << ca::audit::error_record(error_type(err), err.what());
    return 1;
  }
  return 0;
}
