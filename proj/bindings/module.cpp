#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "primo/experiment.hpp"
#include "primo/policy.hpp"

namespace py = pybind11;

namespace {

py::object json_to_py(const nlohmann::json& j) {
  using value_t = nlohmann::json::value_t;
  switch (j.type()) {
    case value_t::boolean: return py::bool_(j.get<bool>());
    case value_t::number_integer: return py::int_(j.get<std::int64_t>());
    case value_t::number_unsigned: return py::int_(j.get<std::uint64_t>());
    case value_t::number_float: return py::float_(j.get<double>());
    case value_t::string: return py::str(j.get<std::string>());
    case value_t::array: {
      py::list out;
      for (const auto& e : j) out.append(json_to_py(e));
      return out;
    }
    case value_t::object: {
      py::dict out;
      for (auto it = j.begin(); it != j.end(); ++it)
        out[py::str(it.key())] = json_to_py(it.value());
      return out;
    }
    default: return py::none();
  }
}

primo::ExperimentConfig parse_or_throw(const std::string& text) {
  nlohmann::json raw;
  try {
    raw = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw py::value_error(std::string("JSON parse error: ") + e.what());
  }
  primo::ConfigLoadResult loaded = primo::parse_config(raw);
  if (!loaded.errors.empty()) {
    std::string msg = "invalid config:";
    for (const auto& e : loaded.errors) msg += "\n  " + e;
    throw py::value_error(msg);
  }
  return std::move(loaded.config);
}

}  // namespace

PYBIND11_MODULE(_primo, m) {
  m.doc() = "Bandit simulation core: inverse gap weighting with model-assisted "
            "covariate imputation";

  m.def(
      "igw_probabilities",
      [](const std::vector<double>& values, double gamma) {
        const primo::PolicyDistribution d = primo::igw_from_values(values, gamma);
        return d.probs;
      },
      py::arg("values"), py::arg("gamma"),
      "Inverse-gap-weighted action probabilities for one round's predicted values.");

  m.def(
      "gamma_practical",
      [](int s, double c, double rho, int num_actions) {
        primo::GammaSchedule g;
        g.mode = primo::GammaMode::practical;
        g.c = c;
        g.rho = rho;
        g.num_actions = num_actions;
        return primo::gamma_practical(s, g);
      },
      py::arg("s"), py::arg("c") = 1.0, py::arg("rho") = 0.5,
      py::arg("num_actions") = 2, "Tunable exploration schedule c*sqrt(K)*2^(s*rho).");

  m.def("log_guard", &primo::log_guard, py::arg("a"), py::arg("r"),
        "log2(4a/r) floored at 2.");

  m.def(
      "radius_rate",
      [](const std::string& kind, double param, double n) {
        return primo::radius_rate({primo::rate_kind_from_string(kind), param}, n);
      },
      py::arg("kind"), py::arg("param"), py::arg("n"),
      "Estimation-rate table entry for a function class at sample count n.");

  m.def("covering_rate", &primo::covering_rate, py::arg("delta0"),
        py::arg("covering_d"), py::arg("n"),
        "Covering-based propensity rate delta0^(d/(d+2)) * n^(-1/(d+2)).");

  m.def(
      "validate_config",
      [](const std::string& text) {
        nlohmann::json raw;
        try {
          raw = nlohmann::json::parse(text);
        } catch (const nlohmann::json::exception& e) {
          return std::vector<std::string>{std::string("JSON parse error: ") + e.what()};
        }
        return primo::parse_config(raw).errors;
      },
      py::arg("config_json"),
      "All validation problems for a config JSON string (empty list means ok).");

  m.def(
      "estimate_constants",
      [](const std::string& text) {
        primo::ExperimentConfig cfg = parse_or_throw(text);
        primo::ElasticityEstimate elasticity;
        primo::UpsilonEstimate upsilon;
        primo::resolve_schedule_constants(cfg, elasticity, upsilon);
        py::dict out;
        out["elasticity"] = elasticity.value;
        out["elasticity_per_action"] = elasticity.per_action;
        out["upsilon"] = upsilon.value;
        out["upsilon_per_action"] = upsilon.per_action;
        out["samples"] = elasticity.samples_used;
        return out;
      },
      py::arg("config_json"),
      "Model elasticity and reward-sensitivity floor for the configured "
      "environment.");

  m.def(
      "run_config",
      [](const std::string& text, bool include_traces) {
        const primo::ExperimentConfig cfg = parse_or_throw(text);
        const primo::ExperimentResult result = primo::run_experiment(cfg);
        py::dict out;
        out["summary"] = json_to_py(primo::summary_json(cfg, result));
        if (include_traces) {
          py::dict traces;
          const int reps = cfg.replications;
          for (std::size_t i = 0; i < cfg.algorithms.size(); ++i) {
            const auto first = result.traces.begin() + static_cast<std::ptrdiff_t>(i) * reps;
            traces[py::str(cfg.algorithms[i].tag)] =
                primo::trace_csv({first, first + reps});
          }
          out["traces"] = traces;
        }
        return out;
      },
      py::arg("config_json"), py::arg("include_traces") = false,
      "Run the configured experiment in memory; returns the summary and, "
      "optionally, per-algorithm CSV traces.");
}
