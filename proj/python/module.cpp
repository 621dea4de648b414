#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "causalaudit/audit.hpp"
#include "causalaudit/bayes.hpp"
#include "causalaudit/bounds.hpp"
#include "causalaudit/freq.hpp"
#include "causalaudit/ivcore.hpp"
#include "causalaudit/scm.hpp"
#include "causalaudit/tables.hpp"

namespace py = pybind11;
using namespace causalaudit;

namespace {

LabelCoding coding_from_dict(const py::dict& coding) {
  LabelCoding out;
  for (const auto& item : coding) {
    const std::string key = py::cast<std::string>(item.first);
    const auto labels = py::cast<std::vector<std::string>>(item.second);
    if (key == "sex") {
      out.s_labels = labels;
    } else if (key == "department") {
      out.d_labels = labels;
    } else if (key == "admitted") {
      out.a_labels = labels;
    } else {
      throw SchemaError("unknown coding column '" + key + "'");
    }
  }
  return out;
}

py::dict slack_dict(const iv::SlackReport& report) {
  py::dict out;
  out["max_lhs"] = report.max_lhs;
  out["satisfied"] = report.satisfied;
  out["tolerance"] = report.tolerance;
  py::list slacks;
  for (const auto& s : report.pair_slacks) {
    py::dict entry;
    entry["d"] = s.d;
    entry["orientation"] = s.orientation;
    entry["slack"] = s.slack;
    slacks.append(entry);
  }
  out["pair_slacks"] = slacks;
  return out;
}

py::dict bayes_dict(const bayes::BayesReport& report) {
  py::dict out;
  out["n_samples"] = report.n_samples;
  out["n_satisfying"] = report.n_satisfying;
  out["point_estimate"] = report.point_estimate;
  out["ci"] = py::make_tuple(report.ci_lower, report.ci_upper);
  out["level"] = report.level;
  out["seed"] = report.seed;
  out["tolerance"] = report.tolerance;
  out["max_lhs_histogram"] = report.max_lhs_histogram;
  return out;
}

py::dict test_dict(const freq::TestResult& result) {
  py::dict out;
  out["statistic"] = result.statistic;
  out["df"] = result.df;
  out["p_value"] = result.p_value;
  out["reject"] = result.reject;
  return out;
}

py::dict wrr_dict(const freq::WrrReport& report) {
  py::dict out;
  py::list entries;
  for (const auto& e : report.entries) {
    py::dict entry;
    entry["d"] = e.d;
    entry["a"] = e.a;
    entry["gamma_hat"] = e.gamma_hat;
    entry["statistic"] = e.statistic;
    entry["p_one_sided"] = e.p_one_sided;
    entry["underflow"] = e.underflow;
    entry["challenged"] = e.challenged;
    entry["reject_adjusted"] = e.reject_adjusted;
    entries.append(entry);
  }
  out["entries"] = entries;
  out["reject_global"] = report.reject_global;
  return out;
}

py::dict interval_dict(const bounds::EffectInterval& interval) {
  py::dict out;
  out["lower"] = interval.lower;
  out["upper"] = interval.upper;
  out["contains_zero"] = interval.contains_zero;
  return out;
}

py::dict verdicts_dict(const scm::FairnessVerdicts& v) {
  py::dict out;
  out["graph_fair"] = v.graph_fair;
  out["ctrf_fair"] = v.ctrf_fair;
  out["inter_fair"] = v.inter_fair;
  out["obs_fair"] = v.obs_fair;
  out["kusner_ctrf_fair"] = v.kusner_ctrf_fair;
  out["path_dep_fair"] = v.path_dep_fair;
  out["positivity_s"] = v.positivity_s;
  out["positivity_sd"] = v.positivity_sd;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Causal fairness auditing on three-variable categorical data";

  py::register_exception<PositivityError>(m, "PositivityError", PyExc_ValueError);

  py::class_<ContingencyTable3>(m, "Table")
      .def_property_readonly("total", &ContingencyTable3::total)
      .def_property_readonly(
          "n_departments",
          [](const ContingencyTable3& t) { return t.space().n_mediator(); })
      .def("count", &ContingencyTable3::count, py::arg("s"), py::arg("d"),
           py::arg("a"))
      .def_property_readonly("s_labels",
                             [](const ContingencyTable3& t) {
                               return t.space().s_labels();
                             })
      .def_property_readonly("d_labels",
                             [](const ContingencyTable3& t) {
                               return t.space().d_labels();
                             })
      .def_property_readonly("a_labels",
                             [](const ContingencyTable3& t) {
                               return t.space().a_labels();
                             })
      .def("to_csv", &serialize_long_csv);

  py::class_<JointDistribution>(m, "Joint")
      .def("prob", &JointDistribution::prob, py::arg("s"), py::arg("d"),
           py::arg("a"))
      .def_property_readonly("probs", &JointDistribution::probs);

  py::class_<ConditionalKernel>(m, "Kernel")
      .def("at", &ConditionalKernel::at, py::arg("d"), py::arg("a"), py::arg("s"))
      .def_property_readonly("values", &ConditionalKernel::values)
      .def_property_readonly("n_departments", &ConditionalKernel::n_mediator);

  py::class_<scm::FiniteSCM>(m, "Model")
      .def_property_readonly("n_departments", &scm::FiniteSCM::n_mediator)
      .def("serialize", [](const scm::FiniteSCM& model) {
        return scm::serialize(model);
      });

  m.def(
      "parse_csv",
      [](const std::string& text, const py::object& coding) {
        return parse_long_csv(
            text, coding.is_none() ? LabelCoding{}
                                   : coding_from_dict(py::cast<py::dict>(coding)));
      },
      py::arg("text"), py::arg("coding") = py::none());
  m.def(
      "load_csv",
      [](const std::string& path, const py::object& coding) {
        return parse_long_csv_file(
            path, coding.is_none() ? LabelCoding{}
                                   : coding_from_dict(py::cast<py::dict>(coding)));
      },
      py::arg("path"), py::arg("coding") = py::none());

  m.def("empirical_joint", &empirical_joint, py::arg("table"));
  m.def("conditional_kernel", &conditional_kernel, py::arg("joint"));
  m.def(
      "kernel_from_values",
      [](int n, const std::vector<double>& values) {
        return ConditionalKernel(CategorySpace::canonical(n), values);
      },
      py::arg("n"), py::arg("values"),
      "Kernel from a flat (s, d, a)-ordered value list on canonical labels");

  m.def(
      "iv_slacks",
      [](const ConditionalKernel& kernel, double tolerance) {
        return slack_dict(iv::iv_slacks(kernel, tolerance));
      },
      py::arg("kernel"), py::arg("tolerance") = 0.0);
  m.def("extreme_points", [](int n) {
    py::list out;
    for (const auto& p : iv::enumerate_extreme_points(n)) {
      out.append(py::make_tuple(p.diagonal, p.x0, p.y0, p.x1, p.y1));
    }
    return out;
  });
  m.def(
      "decompose",
      [](const ConditionalKernel& kernel) -> py::object {
        const auto result = iv::decompose(kernel);
        if (!result) return py::none();
        return py::cast(result->weights);
      },
      py::arg("kernel"),
      "Convex vertex weights, or None when the kernel violates the inequalities");
  m.def(
      "realize_kernel",
      [](const ConditionalKernel& kernel, double p0) {
        return scm::from_response_model(iv::realize(kernel, {p0, 1.0 - p0}));
      },
      py::arg("kernel"), py::arg("p0") = 0.5,
      "Instrument model reproducing a feasible kernel, as a Model");

  m.def("clopper_pearson", &bayes::clopper_pearson, py::arg("x"), py::arg("n"),
        py::arg("level") = 0.95);
  m.def(
      "posterior_model_probability",
      [](const ContingencyTable3& table, double alpha, std::uint64_t n_samples,
         double level, std::uint64_t seed, double tolerance) {
        const auto prior =
            bayes::DirichletSpec::symmetric(table.space().cells(), alpha);
        return bayes_dict(bayes::posterior_model_probability(
            table, prior, n_samples, level, seed, tolerance));
      },
      py::arg("table"), py::arg("alpha") = 1.0, py::arg("n_samples") = 100000,
      py::arg("level") = 0.95, py::arg("seed") = audit::kDefaultSeed,
      py::arg("tolerance") = 0.0);
  m.def(
      "prior_sweep",
      [](const ContingencyTable3& table, const std::vector<double>& alphas,
         std::uint64_t n_samples, double level, std::uint64_t seed) {
        py::list out;
        for (const auto& r :
             bayes::prior_sweep(table, alphas, n_samples, level, seed)) {
          auto d = bayes_dict(r);
          d["alpha"] = r.alpha;
          out.append(d);
        }
        return out;
      },
      py::arg("table"), py::arg("alphas"), py::arg("n_samples") = 100000,
      py::arg("level") = 0.95, py::arg("seed") = audit::kDefaultSeed);

  m.def("ml_iv_check", [](const ContingencyTable3& table) {
    return slack_dict(freq::ml_iv_check(table));
  });
  m.def(
      "cond_indep_test",
      [](const ContingencyTable3& table, double level) {
        return test_dict(freq::cond_indep_test(table, level));
      },
      py::arg("table"), py::arg("level") = 0.05);
  m.def(
      "demographic_parity_test",
      [](const ContingencyTable3& table, double level) {
        return test_dict(freq::demographic_parity_test(table, level));
      },
      py::arg("table"), py::arg("level") = 0.05);
  m.def(
      "wrr_test",
      [](const ContingencyTable3& table, double level) {
        return wrr_dict(freq::wrr_test(table, level));
      },
      py::arg("table"), py::arg("level") = 0.05);

  m.def(
      "cde_bounds",
      [](const ConditionalKernel& kernel, int d) {
        return interval_dict(bounds::cde_bounds(kernel, d));
      },
      py::arg("kernel"), py::arg("d"));
  m.def("cde_zero_compatible", &bounds::cde_zero_compatible, py::arg("kernel"));
  m.def("nde_point", &bounds::nde_point, py::arg("joint"), py::arg("s_from"),
        py::arg("s_to"));
  m.def(
      "nde_bounds_binary",
      [](const ConditionalKernel& kernel, const std::string& direction) {
        const auto dir = direction == "0->1" ? bounds::NdeDirection::kZeroToOne
                                             : bounds::NdeDirection::kOneToZero;
        return interval_dict(bounds::nde_bounds_binary(kernel, dir));
      },
      py::arg("kernel"), py::arg("direction") = "0->1");

  m.def(
      "random_model",
      [](const std::string& confounding, int n, std::uint64_t seed,
         bool graph_fair, bool kusner_fair) {
        return scm::random_model(scm::confounding_class_from_string(confounding),
                                 n, seed, {graph_fair, kusner_fair});
      },
      py::arg("confounding") = "d-a", py::arg("n") = 3, py::arg("seed") = 0,
      py::arg("graph_fair") = false, py::arg("kusner_fair") = false);
  m.def("parse_model", &scm::parse_scm, py::arg("text"));
  m.def("classify_fairness", [](const scm::FiniteSCM& model) {
    return verdicts_dict(scm::classify_fairness(model));
  });
  m.def("observational", &scm::observational, py::arg("model"));
  m.def("interventional_kernel", &scm::interventional_kernel, py::arg("model"));
  m.def(
      "simulate",
      [](const scm::FiniteSCM& model, std::uint64_t count, std::uint64_t seed) {
        const auto result = audit::run_simulate(model, count, seed);
        return py::make_tuple(result.csv, verdicts_dict(result.verdicts));
      },
      py::arg("model"), py::arg("count") = 1000,
      py::arg("seed") = audit::kDefaultSeed);

  m.def(
      "audit",
      [](const ContingencyTable3& table, double alpha, std::uint64_t n_samples,
         double level, std::uint64_t seed, double tolerance) {
        audit::AuditConfig config;
        config.alpha = alpha;
        config.n_samples = n_samples;
        config.level = level;
        config.seed = seed;
        config.tolerance = tolerance;
        const auto report = audit::run_audit(table, config);
        py::dict out;
        out["verdict"] = audit::to_string(report.verdict);
        out["json"] = report.to_json();
        out["text"] = report.to_text();
        return out;
      },
      py::arg("table"), py::arg("alpha") = 1.0, py::arg("n_samples") = 100000,
      py::arg("level") = 0.95, py::arg("seed") = audit::kDefaultSeed,
      py::arg("tolerance") = 0.0);

  m.def("vertices_text", &audit::format_vertices, py::arg("n"));
}
