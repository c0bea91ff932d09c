#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mnemosim/decay.hpp"
#include "mnemosim/engine.hpp"
#include "mnemosim/error.hpp"
#include "mnemosim/influence.hpp"
#include "mnemosim/io.hpp"
#include "mnemosim/metrics.hpp"
#include "mnemosim/model.hpp"
#include "mnemosim/recall.hpp"
#include "mnemosim/temporal.hpp"

namespace py = pybind11;
using namespace mnemosim;

namespace {

ScenarioConfig config_from_text(const std::string& text) {
  auto loaded = parse_scenario_text(text);
  if (!loaded.report.empty()) throw Error(ErrorCode::ValidationFailed, "\n" + format_report(loaded.report));
  return loaded.config;
}

std::vector<Modifier> modifier_list(const std::vector<std::string>& names) {
  std::vector<Modifier> out;
  for (const auto& n : names) {
    auto m = parse_modifier(n);
    if (!m) throw Error(ErrorCode::ParseError, "unknown modifier '" + n + "'");
    out.push_back(*m);
  }
  return out;
}

Trace make_trace(const std::vector<bool>& prefix, const std::vector<bool>& period) {
  Trace t;
  t.prefix = prefix;
  t.period = period;
  return t;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "mnemosim simulation core";

  static py::exception<Error> error(m, "MnemosimError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(error, e.what());
    }
  });

  m.def("validate", [](const std::string& text) {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& v : parse_scenario_text(text).report) out.emplace_back(v.field, v.message);
    return out;
  }, py::arg("scenario_json"), "Violations as (field, message) pairs; empty when valid.");

  m.def("normalize", [](const std::string& text) { return to_json(config_from_text(text)).dump(); },
        py::arg("scenario_json"), "Parse and re-serialize a scenario with every field explicit.");

  m.def("simulate", [](const std::string& text, bool json_lines) {
    const Engine engine(config_from_text(text));
    auto result = engine.run();
    return std::make_pair(format_log(result.final_state.log, json_lines), result.metrics.dump());
  }, py::arg("scenario_json"), py::arg("json_lines") = false,
        "Run a scenario; returns (event log text, metrics JSON).");

  m.def("latency", [](const std::string& text, const std::string& target, std::optional<std::string> anchor,
                      std::optional<std::vector<std::string>> modifiers) {
    const Scenario scenario(config_from_text(text));
    LatencyQuery q;
    q.target = target;
    q.anchor = anchor;
    q.environment = scenario.environment_at(0.0);
    q.modifiers = modifiers ? modifier_list(*modifiers) : scenario.params().modifiers;
    const auto r = resolve_latency(scenario, q);
    std::vector<std::pair<std::string, double>> pipeline;
    for (const auto& s : r.pipeline) pipeline.emplace_back(s.stage, s.value);
    return std::make_pair(r.latency, pipeline);
  }, py::arg("scenario_json"), py::arg("target"), py::arg("anchor") = py::none(),
        py::arg("modifiers") = py::none(), "Recall latency and per-stage pipeline.");

  m.def("influence", [](const std::string& text, const std::string& src, const std::string& dst) {
    const Scenario scenario(config_from_text(text));
    const auto r = enumerate_recursive_influence(scenario.graph(), src, dst, scenario.params().path_cap,
                                                 CapPolicy::Truncate);
    return py::dict(py::arg("recursive") = r.value, py::arg("total") = scenario.graph().weight(src, dst) + r.value,
                    py::arg("path_count") = r.path_count, py::arg("capped") = r.capped);
  }, py::arg("scenario_json"), py::arg("src"), py::arg("dst"));

  m.def("always", [](const std::vector<bool>& prefix, const std::vector<bool>& period) {
    return always(make_trace(prefix, period));
  }, py::arg("prefix"), py::arg("period") = std::vector<bool>{});
  m.def("eventually", [](const std::vector<bool>& prefix, const std::vector<bool>& period) {
    return eventually(make_trace(prefix, period));
  }, py::arg("prefix"), py::arg("period") = std::vector<bool>{});
  m.def("next", [](const std::vector<bool>& prefix, const std::vector<bool>& period, std::size_t k) {
    return next(make_trace(prefix, period), k);
  }, py::arg("prefix"), py::arg("period"), py::arg("step"));
  m.def("check_next_box_commute", [](const std::vector<bool>& prefix, const std::vector<bool>& period) {
    return check_next_box_commute(make_trace(prefix, period));
  }, py::arg("prefix"), py::arg("period"));

  m.def("strength", [](double rate, double start, double t, double amplitude) {
    return strength(DecayCurve::ebbinghaus(rate, start, amplitude), t);
  }, py::arg("rate"), py::arg("t_f"), py::arg("t"), py::arg("amplitude") = 1.0);
  m.def("relation_latency", &relation_latency, py::arg("relation"), py::arg("environment"));
  m.def("transition_probability", &transition_probability, py::arg("elapsed"), py::arg("latency"));

  m.def("chain_entropy", [](const std::vector<double>& p) { return chain_entropy(p); }, py::arg("probabilities"));
  m.def("recall_efficiency", &recall_efficiency, py::arg("entropy_bits"));
  m.def("optimal_distribution", [](const std::vector<double>& scores, double beta, bool flipped) {
    return optimal_distribution(scores, beta, flipped ? OptimalSign::Flipped : OptimalSign::Literal);
  }, py::arg("scores"), py::arg("beta") = 1.0, py::arg("flipped") = false);
}
