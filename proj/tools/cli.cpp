#include "cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "mnemosim/engine.hpp"
#include "mnemosim/error.hpp"
#include "mnemosim/influence.hpp"
#include "mnemosim/io.hpp"
#include "mnemosim/metrics.hpp"
#include "mnemosim/model.hpp"
#include "mnemosim/temporal.hpp"

namespace mnemosim::cli {

namespace {

using nlohmann::json;

enum class Verbosity { Quiet, Info, Debug };

Verbosity verbosity_from_env() {
  const char* v = std::getenv("MNEMOSIM_LOG");
  if (!v) return Verbosity::Quiet;
  const std::string s = v;
  if (s == "debug") return Verbosity::Debug;
  if (s == "info") return Verbosity::Info;
  return Verbosity::Quiet;
}

class Logger {
 public:
  explicit Logger(std::ostream& err) : err_(err), level_(verbosity_from_env()) {}
  void info(const std::string& msg) const {
    if (level_ >= Verbosity::Info) err_ << "[info] " << msg << "\n";
  }
  void debug(const std::string& msg) const {
    if (level_ >= Verbosity::Debug) err_ << "[debug] " << msg << "\n";
  }

 private:
  std::ostream& err_;
  Verbosity level_;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string input;
  std::string output;
  std::string format;
  std::string metrics_out;
  std::uint64_t seed = 0;
  double horizon = 0.0;
  double dt = 0.0;
  std::string modifiers;
  bool stochastic = false;
  CLI::App* active = nullptr;  // the subcommand that was parsed

  std::string target, anchor, src, dst, mode, op, branch;
  std::int64_t step = 0;
  CLI::Option* step_opt = nullptr;
  CLI::Option* anchor_opt = nullptr;
  bool chains = false;
};

std::vector<Modifier> parse_modifier_list(const std::string& text) {
  std::vector<Modifier> out;
  if (text.empty() || text == "none") return out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto m = parse_modifier(item);
    if (!m) throw UsageError("--modifiers: unknown modifier '" + item + "'");
    out.push_back(*m);
  }
  return out;
}

void add_overrides(CLI::App* sub, Options& o) {
  sub->add_option("--seed", o.seed, "Override the scenario seed");
  sub->add_option("--horizon", o.horizon, "Override the simulation horizon");
  sub->add_option("--dt", o.dt, "Override the time step");
  sub->add_option("--modifiers", o.modifiers,
                  "Comma-separated latency modifiers: relation,feedback,bayesian,simultaneous");
  sub->add_flag("--stochastic", o.stochastic, "Sample transition times instead of using mean latencies");
}

void add_output(CLI::App* sub, Options& o, const std::string& default_format) {
  o.format = default_format;
  sub->add_option("--output,-o", o.output, "Write results to this path instead of stdout");
  sub->add_option("--format", o.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
}

ScenarioConfig load_config(const Options& o, const Logger& log) {
  auto loaded = load_scenario_file(o.input);
  auto& c = loaded.config;
  auto given = [&](const char* flag) { return o.active && o.active->count(flag) > 0; };
  if (given("--seed")) c.seed = o.seed;
  if (given("--horizon")) c.horizon = o.horizon;
  if (given("--dt")) c.dt = o.dt;
  if (given("--modifiers")) c.params.modifiers = parse_modifier_list(o.modifiers);
  if (o.stochastic) c.params.stochastic = true;
  // Overrides can themselves be invalid, so validate after applying them.
  auto report = loaded.report.empty() ? validate_scenario(c) : loaded.report;
  if (!report.empty())
    throw Error(ErrorCode::ValidationFailed,
                std::to_string(report.size()) + " problem(s) in scenario\n" + format_report(report));
  log.info("loaded " + o.input + ": " + std::to_string(c.propositions.size()) + " propositions, " +
           std::to_string(c.events.size()) + " events");
  return c;
}

void emit(const Options& o, std::ostream& out, const std::string& text) {
  if (o.output.empty()) {
    out << text;
    return;
  }
  std::ofstream file(o.output, std::ios::binary);
  if (!file) throw Error(ErrorCode::ParseError, "cannot open output '" + o.output + "'");
  file << text;
}

int cmd_validate(const Options& o, std::ostream& out, const Logger& log) {
  load_config(o, log);
  out << "OK\n";
  return 0;
}

int cmd_simulate(const Options& o, std::ostream& out, const Logger& log) {
  const Engine engine(load_config(o, log));
  const auto result = engine.run();
  log.info("processed " + std::to_string(result.final_state.events_processed) + " events, " +
           std::to_string(result.final_state.log.size()) + " log records");
  if (result.final_state.cascade_capped > 0)
    log.info("cascade depth cap hit " + std::to_string(result.final_state.cascade_capped) + " times");
  emit(o, out, format_log(result.final_state.log, o.format == "json"));
  if (!o.metrics_out.empty()) {
    std::ofstream file(o.metrics_out, std::ios::binary);
    if (!file) throw Error(ErrorCode::ParseError, "cannot open metrics output '" + o.metrics_out + "'");
    file << result.metrics.dump(2) << "\n";
  }
  return 0;
}

json truth_json(Truth t) {
  switch (t) {
    case Truth::True: return true;
    case Truth::False: return false;
    case Truth::Bottom: return "bot";
  }
  return "bot";
}

int cmd_check_temporal(const Options& o, std::ostream& out, const Logger& log) {
  const auto doc = load_trace_file(o.input);
  json result = {{"op", o.op}};
  const bool branching_op = o.op == "realized" || o.op == "superposition";
  if (branching_op != doc.branching.has_value())
    throw Error(ErrorCode::InvalidTrace, "--op " + o.op + " needs a " +
                                             (branching_op ? "branching trace (\"branches\")" : "linear trace (\"prefix\")"));
  if (o.op == "next" || o.op == "superposition") {
    if (!o.step_opt->count()) throw UsageError("--op " + o.op + " requires --step");
    if (o.step < 0) throw UsageError("--step must be >= 0");
  }

  if (doc.linear) {
    const auto& t = *doc.linear;
    log.debug("trace: prefix " + std::to_string(t.prefix.size()) + ", period " + std::to_string(t.period.size()));
    if (o.op == "box") {
      result["value"] = always(t);
    } else if (o.op == "diamond") {
      result["value"] = eventually(t);
    } else if (o.op == "next") {
      result["step"] = o.step;
      result["value"] = next(t, static_cast<std::size_t>(o.step));
    } else if (o.op == "theorem1") {
      result["always"] = always(t);
      result["eventually"] = eventually(t);
      result["holds"] = check_box_implies_diamond(t);
    } else {
      const auto c = evaluate_next_box_commute(t);
      result["next_always"] = c.next_always;
      result["always_next"] = c.always_next;
      result["holds"] = c.holds();
    }
  } else {
    const auto& bt = *doc.branching;
    if (o.op == "realized") {
      if (o.branch.empty()) throw UsageError("--op realized requires --branch");
      result["branch"] = o.branch;
      result["value"] = branch_realized(bt, o.branch);
    } else {
      result["step"] = o.step;
      json states = json::array();
      for (const auto& s : superposition(bt, static_cast<std::size_t>(o.step)))
        states.push_back({{"branch", s.branch}, {"value", truth_json(s.value)}});
      result["states"] = states;
    }
  }
  emit(o, out, result.dump() + "\n");
  return 0;
}

int cmd_latency(const Options& o, std::ostream& out, const Logger& log) {
  const Scenario scenario(load_config(o, log));
  LatencyQuery q;
  q.target = o.target;
  if (o.anchor_opt->count()) q.anchor = o.anchor;
  q.environment = scenario.environment_at(0.0);
  q.modifiers = scenario.params().modifiers;
  const auto r = resolve_latency(scenario, q);
  json pipeline = json::array();
  for (const auto& s : r.pipeline) pipeline.push_back({{"stage", s.stage}, {"T_R", json_number(s.value)}});
  json doc = {{"target", r.target},
              {"anchor", r.anchor ? json(*r.anchor) : json(nullptr)},
              {"environment", json_number(r.environment)},
              {"T_R", json_number(r.latency)},
              {"pipeline", pipeline}};
  emit(o, out, doc.dump() + "\n");
  return 0;
}

int cmd_influence(const Options& o, std::ostream& out, const Logger& log) {
  const Scenario scenario(load_config(o, log));
  const auto& g = scenario.graph();
  const auto cap = scenario.params().path_cap;
  scenario.registry().lookup(o.src);
  scenario.registry().lookup(o.dst);

  json doc = {{"src", o.src}, {"dst", o.dst}, {"mode", o.mode}};
  PathSum paths;
  if (o.src != o.dst) paths = enumerate_recursive_influence(g, o.src, o.dst, cap, CapPolicy::Truncate);
  if (paths.capped) log.info("path enumeration truncated at " + std::to_string(cap) + " paths");

  double value = 0.0;
  if (o.mode == "recursive") {
    if (o.src == o.dst) throw Error(ErrorCode::OutOfRange, "--src and --dst must differ for recursive influence");
    value = paths.value;
  } else if (o.mode == "total") {
    if (o.src == o.dst) throw Error(ErrorCode::OutOfRange, "--src and --dst must differ for total influence");
    value = g.weight(o.src, o.dst) + paths.value;
  } else {
    value = updated_recall_probability(g, o.src, o.dst, cap);
  }
  doc["value"] = json_number(value);
  doc["path_count"] = paths.path_count;
  doc["capped"] = paths.capped;
  emit(o, out, doc.dump() + "\n");
  return 0;
}

int cmd_metrics(const Options& o, std::ostream& out, const Logger& log) {
  const auto config = load_config(o, log);
  if (!o.chains) {
    const Engine engine(config);
    emit(o, out, engine.run().metrics.dump(2) + "\n");
    return 0;
  }
  const Scenario scenario(config);
  const auto rows = chain_summaries(scenario, scenario.params().modifiers, scenario.environment_at(0.0));
  if (o.format == "csv") {
    std::string text = "chain_id,H_bits,efficiency,mean_T_R\n";
    for (const auto& r : rows)
      text += r.chain_id + "," + format_double(r.entropy_bits) + "," + format_double(r.efficiency) + "," +
              format_double(r.mean_latency) + "\n";
    emit(o, out, text);
    return 0;
  }
  json chains = json::array();
  std::vector<double> h, t;
  for (const auto& r : rows) {
    chains.push_back({{"chain_id", r.chain_id},
                      {"H_bits", json_number(r.entropy_bits)},
                      {"efficiency", json_number(r.efficiency)},
                      {"mean_T_R", json_number(r.mean_latency)}});
    h.push_back(r.entropy_bits);
    t.push_back(r.mean_latency);
  }
  const auto corr = rank_correlation(h, t);
  json doc = {{"chains", chains}, {"rank_correlation", corr ? json_number(*corr) : json(nullptr)}};
  emit(o, out, doc.dump(2) + "\n");
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  const Logger log(err);
  Options o;

  CLI::App app{"Temporal memory dynamics simulator", "mnemosim"};
  app.require_subcommand(1);
  app.fallthrough(false);

  auto* validate = app.add_subcommand("validate", "Check a scenario file and print OK");
  validate->add_option("scenario", o.input, "Scenario JSON file")->required();
  add_overrides(validate, o);

  auto* simulate = app.add_subcommand("simulate", "Run a scenario and print the event log");
  simulate->add_option("scenario", o.input, "Scenario JSON file")->required();
  add_output(simulate, o, "csv");
  add_overrides(simulate, o);
  simulate->add_option("--metrics-out", o.metrics_out, "Also write the metrics bundle (JSON) to this path");

  auto* temporal = app.add_subcommand("check-temporal", "Evaluate temporal operators and theorems on a trace");
  temporal->add_option("trace", o.input, "Trace JSON file")->required();
  temporal
      ->add_option("--op", o.op, "Operator: box, diamond, next, theorem1, theorem2 (linear); realized, "
                                 "superposition (branching)")
      ->required()
      ->check(CLI::IsMember({"box", "diamond", "next", "theorem1", "theorem2", "realized", "superposition"}));
  o.step_opt = temporal->add_option("--step", o.step, "Step index for next and superposition");
  temporal->add_option("--branch", o.branch, "Branch id for realized");
  temporal->add_option("--output,-o", o.output, "Write results to this path instead of stdout");

  auto* latency = app.add_subcommand("latency", "Resolve the recall latency of a proposition");
  latency->add_option("scenario", o.input, "Scenario JSON file")->required();
  latency->add_option("--target", o.target, "Proposition whose latency is resolved")->required();
  o.anchor_opt = latency->add_option("--anchor", o.anchor, "Recalled anchor proposition");
  latency->add_option("--output,-o", o.output, "Write results to this path instead of stdout");
  add_overrides(latency, o);

  auto* influence = app.add_subcommand("influence", "Path-summed influence between two propositions");
  influence->add_option("scenario", o.input, "Scenario JSON file")->required();
  influence->add_option("--src", o.src, "Source proposition")->required();
  influence->add_option("--dst", o.dst, "Destination proposition")->required();
  o.mode = "total";
  influence->add_option("--mode", o.mode, "recursive, total or prob")
      ->check(CLI::IsMember({"recursive", "total", "prob"}))
      ->capture_default_str();
  influence->add_option("--output,-o", o.output, "Write results to this path instead of stdout");
  add_overrides(influence, o);

  auto* metrics = app.add_subcommand("metrics", "Chain entropy and latency metrics");
  metrics->add_option("scenario", o.input, "Scenario JSON file")->required();
  metrics->add_flag("--chains", o.chains, "Per-chain entropy table instead of the simulation metrics bundle");
  add_output(metrics, o, "csv");
  add_overrides(metrics, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  for (auto* sub : app.get_subcommands()) o.active = sub;
  try {
    if (validate->parsed()) return cmd_validate(o, out, log);
    if (simulate->parsed()) return cmd_simulate(o, out, log);
    if (temporal->parsed()) return cmd_check_temporal(o, out, log);
    if (latency->parsed()) return cmd_latency(o, out, log);
    if (influence->parsed()) return cmd_influence(o, out, log);
    if (metrics->parsed()) return cmd_metrics(o, out, log);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    const std::string what = e.what();
    err << "error: " << what << (what.ends_with('\n') ? "" : "\n");
    return 1;
  }
  return 2;
}

}  // namespace mnemosim::cli
