#include "mnemosim/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

#include "mnemosim/error.hpp"

namespace mnemosim {

using nlohmann::json;

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (value == 0.0) value = 0.0;  // drop the sign of -0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

json json_number(double value) {
  if (std::isnan(value)) return nullptr;
  if (std::isinf(value)) return format_double(value);
  return std::stod(format_double(value));
}

namespace {

std::string at(const std::string& base, std::size_t i) { return base + "[" + std::to_string(i) + "]"; }
std::string dot(const std::string& base, const std::string& key) { return base.empty() ? key : base + "." + key; }

// Reads typed fields out of a JSON object, recording schema problems with
// their field paths instead of throwing.
class Reader {
 public:
  explicit Reader(ValidationReport& report) : report_(report) {}

  void fail(std::string field, std::string message) { report_.push_back({std::move(field), std::move(message)}); }

  bool object(const json& v, const std::string& field, std::initializer_list<std::string_view> allowed) {
    if (!v.is_object()) {
      fail(field.empty() ? "<root>" : field, "expected an object");
      return false;
    }
    for (const auto& [key, _] : v.items()) {
      bool known = false;
      for (auto a : allowed) known = known || key == a;
      if (!known) fail(dot(field, key), "unknown key");
    }
    return true;
  }

  bool array(const json& v, const std::string& field) {
    if (v.is_array()) return true;
    fail(field, "expected an array");
    return false;
  }

  void number(const json& obj, const std::string& base, const char* key, double& out) {
    if (!obj.contains(key)) return;
    const auto& v = obj.at(key);
    if (v.is_number()) out = v.get<double>();
    else fail(dot(base, key), "expected a number");
  }

  template <class Int>
  void integer(const json& obj, const std::string& base, const char* key, Int& out) {
    if (!obj.contains(key)) return;
    const auto& v = obj.at(key);
    if (v.is_number_integer() && (std::is_signed_v<Int> || v.is_number_unsigned() || v.get<std::int64_t>() >= 0))
      out = v.get<Int>();
    else
      fail(dot(base, key), std::is_signed_v<Int> ? "expected an integer" : "expected a non-negative integer");
  }

  void boolean(const json& obj, const std::string& base, const char* key, bool& out) {
    if (!obj.contains(key)) return;
    const auto& v = obj.at(key);
    if (v.is_boolean()) out = v.get<bool>();
    else fail(dot(base, key), "expected true or false");
  }

  bool string(const json& v, const std::string& field, std::string& out) {
    if (!v.is_string()) {
      fail(field, "expected a string");
      return false;
    }
    out = v.get<std::string>();
    return true;
  }

  void string(const json& obj, const std::string& base, const char* key, std::string& out, bool required) {
    if (!obj.contains(key)) {
      if (required) fail(dot(base, key), "missing required key");
      return;
    }
    string(obj.at(key), dot(base, key), out);
  }

  void strings(const json& obj, const std::string& base, const char* key, std::vector<std::string>& out) {
    if (!obj.contains(key)) return;
    const auto field = dot(base, key);
    if (!array(obj.at(key), field)) return;
    const auto& arr = obj.at(key);
    for (std::size_t i = 0; i < arr.size(); ++i) {
      std::string s;
      if (string(arr[i], at(field, i), s)) out.push_back(std::move(s));
    }
  }

  void numbers(const json& obj, const std::string& base, const char* key, std::vector<double>& out) {
    if (!obj.contains(key)) return;
    const auto field = dot(base, key);
    if (!array(obj.at(key), field)) return;
    const auto& arr = obj.at(key);
    for (std::size_t i = 0; i < arr.size(); ++i) {
      if (arr[i].is_number()) out.push_back(arr[i].get<double>());
      else fail(at(field, i), "expected a number");
    }
  }

  std::optional<Truth> truth(const json& v, const std::string& field) {
    if (v.is_boolean()) return v.get<bool>() ? Truth::True : Truth::False;
    if (v.is_string() && v.get<std::string>() == "bot") return Truth::Bottom;
    fail(field, "expected true, false or \"bot\"");
    return std::nullopt;
  }

  void truths(const json& obj, const std::string& base, const char* key, std::vector<Truth>& out) {
    if (!obj.contains(key)) return;
    const auto field = dot(base, key);
    if (!array(obj.at(key), field)) return;
    const auto& arr = obj.at(key);
    for (std::size_t i = 0; i < arr.size(); ++i) {
      if (auto t = truth(arr[i], at(field, i))) out.push_back(*t);
    }
  }

 private:
  ValidationReport& report_;
};

std::optional<Phase> parse_phase(std::string_view s) {
  if (s == "unresolved") return Phase::Unresolved;
  if (s == "decayed") return Phase::Decayed;
  if (s == "realized") return Phase::Realized;
  return std::nullopt;
}

void read_propositions(Reader& r, const json& arr, std::vector<Proposition>& out) {
  if (!r.array(arr, "propositions")) return;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const auto base = at("propositions", i);
    const auto& v = arr[i];
    if (!r.object(v, base, {"id", "decay_constant", "base_latency", "initial_amplitude", "initial"})) continue;
    Proposition p;
    r.string(v, base, "id", p.id, true);
    r.number(v, base, "decay_constant", p.decay_constant);
    r.number(v, base, "base_latency", p.base_latency);
    r.number(v, base, "initial_amplitude", p.initial_amplitude);
    std::string phase;
    r.string(v, base, "initial", phase, false);
    if (!phase.empty()) {
      if (auto ph = parse_phase(phase)) p.initial_phase = *ph;
      else r.fail(base + ".initial", "expected \"unresolved\" or \"decayed\"");
    }
    out.push_back(std::move(p));
  }
}

void read_contexts(Reader& r, const json& arr, std::vector<ContextDef>& out) {
  if (!r.array(arr, "contexts")) return;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const auto base = at("contexts", i);
    const auto& v = arr[i];
    if (!r.object(v, base, {"id", "members", "within"})) continue;
    ContextDef c;
    r.string(v, base, "id", c.id, true);
    r.strings(v, base, "members", c.members);
    r.strings(v, base, "within", c.within);
    out.push_back(std::move(c));
  }
}

void read_relations(Reader& r, const json& arr, std::vector<RelationEntry>& out) {
  if (!r.array(arr, "relations")) return;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const auto base = at("relations", i);
    const auto& v = arr[i];
    if (!r.object(v, base, {"a", "b", "r", "r_u"})) continue;
    RelationEntry e;
    r.string(v, base, "a", e.a, true);
    r.string(v, base, "b", e.b, true);
    r.number(v, base, "r", e.r);
    r.number(v, base, "r_u", e.r_u);
    out.push_back(std::move(e));
  }
}

void read_environment(Reader& r, const json& v, Environment& out) {
  const std::string field = "params.environment";
  if (v.is_number()) {
    out = v.get<double>();
    return;
  }
  if (!v.is_array()) {
    r.fail(field, "expected a number or an array of {time, value}");
    return;
  }
  std::vector<EnvironmentPoint> points;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto base = at(field, i);
    if (!r.object(v[i], base, {"time", "value"})) continue;
    EnvironmentPoint p;
    r.number(v[i], base, "time", p.time);
    r.number(v[i], base, "value", p.value);
    points.push_back(p);
  }
  out = std::move(points);
}

void read_branch(Reader& r, const json& v, const std::string& base, BranchSeries& out) {
  if (!r.object(v, base, {"prefix", "period"})) return;
  r.truths(v, base, "prefix", out.prefix);
  r.truths(v, base, "period", out.period);
}

void read_params(Reader& r, const json& v, Params& p) {
  const std::string base = "params";
  if (!r.object(v, base,
                {"tau", "tau_e", "tau_c", "eps_h", "alpha_fb", "alpha_res", "beta", "lambda_path", "eps_cross",
                 "tau_res", "environment", "modifiers", "latency_law", "propagation_mode", "optimal_sign",
                 "realization_duration", "cascade_depth", "path_cap", "stochastic", "propagation", "scheduling",
                 "simultaneous_fixed_point", "chains", "bayes", "branches"}))
    return;
  r.number(v, base, "tau", p.tau);
  r.number(v, base, "tau_e", p.tau_e);
  r.number(v, base, "tau_c", p.tau_c);
  r.number(v, base, "eps_h", p.eps_h);
  r.number(v, base, "alpha_fb", p.alpha_fb);
  r.number(v, base, "alpha_res", p.alpha_res);
  r.number(v, base, "beta", p.beta);
  r.number(v, base, "lambda_path", p.lambda_path);
  r.number(v, base, "eps_cross", p.eps_cross);
  r.number(v, base, "tau_res", p.tau_res);
  if (v.contains("environment")) read_environment(r, v.at("environment"), p.environment);

  if (v.contains("modifiers")) {
    std::vector<std::string> names;
    r.strings(v, base, "modifiers", names);
    p.modifiers.clear();
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (auto m = parse_modifier(names[i])) p.modifiers.push_back(*m);
      else r.fail(at("params.modifiers", i), "unknown modifier '" + names[i] + "'");
    }
  }

  if (v.contains("latency_law")) {
    const auto& law = v.at("latency_law");
    const std::string field = "params.latency_law";
    if (r.object(law, field, {"kind", "exponent"})) {
      std::string kind;
      r.string(law, field, "kind", kind, false);
      if (kind == "reciprocal") p.latency_law.kind = LatencyLaw::Kind::Reciprocal;
      else if (kind == "reciprocal_power") p.latency_law.kind = LatencyLaw::Kind::ReciprocalPower;
      else if (!kind.empty()) r.fail(field + ".kind", "expected \"reciprocal\" or \"reciprocal_power\"");
      r.number(law, field, "exponent", p.latency_law.exponent);
    }
  }

  std::string mode;
  r.string(v, base, "propagation_mode", mode, false);
  if (mode == "literal") p.propagation_mode = PropagationMode::Literal;
  else if (mode == "per_edge") p.propagation_mode = PropagationMode::PerEdge;
  else if (!mode.empty()) r.fail("params.propagation_mode", "expected \"literal\" or \"per_edge\"");

  std::string sign;
  r.string(v, base, "optimal_sign", sign, false);
  if (sign == "literal") p.optimal_sign = OptimalSign::Literal;
  else if (sign == "flipped") p.optimal_sign = OptimalSign::Flipped;
  else if (!sign.empty()) r.fail("params.optimal_sign", "expected \"literal\" or \"flipped\"");

  r.number(v, base, "realization_duration", p.realization_duration);
  r.integer(v, base, "cascade_depth", p.cascade_depth);
  r.integer(v, base, "path_cap", p.path_cap);
  r.boolean(v, base, "stochastic", p.stochastic);
  r.boolean(v, base, "propagation", p.propagation);
  r.boolean(v, base, "scheduling", p.scheduling);
  r.boolean(v, base, "simultaneous_fixed_point", p.simultaneous_fixed_point);

  if (v.contains("chains") && r.array(v.at("chains"), "params.chains")) {
    const auto& arr = v.at("chains");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const auto field = at("params.chains", i);
      if (!r.object(arr[i], field, {"id", "members", "probabilities"})) continue;
      ChainDef c;
      r.string(arr[i], field, "id", c.id, true);
      r.strings(arr[i], field, "members", c.members);
      r.numbers(arr[i], field, "probabilities", c.probabilities);
      p.chains.push_back(std::move(c));
    }
  }

  if (v.contains("bayes")) {
    const auto& b = v.at("bayes");
    const std::string field = "params.bayes";
    if (r.object(b, field, {"priors", "likelihoods"})) {
      BayesParams bp;
      if (b.contains("priors")) {
        const auto& priors = b.at("priors");
        if (!priors.is_object()) {
          r.fail(field + ".priors", "expected an object");
        } else {
          for (const auto& [id, prior] : priors.items()) {
            if (prior.is_number()) bp.priors[id] = prior.get<double>();
            else r.fail(field + ".priors." + id, "expected a number");
          }
        }
      }
      if (b.contains("likelihoods") && r.array(b.at("likelihoods"), field + ".likelihoods")) {
        const auto& arr = b.at("likelihoods");
        for (std::size_t i = 0; i < arr.size(); ++i) {
          const auto lf = at(field + ".likelihoods", i);
          if (!r.object(arr[i], lf, {"of", "given", "p"})) continue;
          LikelihoodEntry l;
          r.string(arr[i], lf, "of", l.of, true);
          r.string(arr[i], lf, "given", l.given, true);
          r.number(arr[i], lf, "p", l.p);
          bp.likelihoods.push_back(std::move(l));
        }
      }
      p.bayes = std::move(bp);
    }
  }

  if (v.contains("branches")) {
    const auto& b = v.at("branches");
    if (!b.is_object()) {
      r.fail("params.branches", "expected an object");
    } else {
      for (const auto& [id, series] : b.items()) {
        BranchSeries s;
        read_branch(r, series, "params.branches." + id, s);
        p.branches[id] = std::move(s);
      }
    }
  }
}

std::optional<EventKind> parse_event_kind(std::string_view s) {
  if (s == "recall") return EventKind::Recall;
  if (s == "trigger") return EventKind::Trigger;
  if (s == "environment") return EventKind::Environment;
  if (s == "measure") return EventKind::Measure;
  return std::nullopt;
}

void read_events(Reader& r, const json& arr, std::vector<EventDef>& out) {
  if (!r.array(arr, "events")) return;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const auto base = at("events", i);
    const auto& v = arr[i];
    if (!r.object(v, base, {"time", "kind", "target", "context", "value", "branch", "step"})) continue;
    EventDef e;
    r.number(v, base, "time", e.time);
    std::string kind;
    r.string(v, base, "kind", kind, true);
    if (auto k = parse_event_kind(kind)) e.kind = *k;
    else if (!kind.empty()) r.fail(base + ".kind", "expected recall, trigger, environment or measure");
    r.string(v, base, "target", e.target, false);
    if (v.contains("context")) {
      std::string c;
      if (r.string(v.at("context"), base + ".context", c)) e.context = std::move(c);
    }
    r.number(v, base, "value", e.value);
    r.string(v, base, "branch", e.branch, false);
    r.integer(v, base, "step", e.step);
    out.push_back(std::move(e));
  }
}

}  // namespace

LoadedScenario parse_scenario(const json& doc) {
  LoadedScenario out;
  ValidationReport schema;
  Reader r(schema);
  if (r.object(doc, "", {"propositions", "contexts", "relations", "params", "events", "horizon", "dt", "seed"})) {
    auto& c = out.config;
    if (doc.contains("propositions")) read_propositions(r, doc.at("propositions"), c.propositions);
    else r.fail("propositions", "missing required key");
    if (doc.contains("contexts")) read_contexts(r, doc.at("contexts"), c.contexts);
    if (doc.contains("relations")) read_relations(r, doc.at("relations"), c.relations);
    if (doc.contains("params")) read_params(r, doc.at("params"), c.params);
    if (doc.contains("events")) read_events(r, doc.at("events"), c.events);
    r.number(doc, "", "horizon", c.horizon);
    r.number(doc, "", "dt", c.dt);
    r.integer(doc, "", "seed", c.seed);
  }
  out.report = schema.empty() ? validate_scenario(out.config) : std::move(schema);
  return out;
}

LoadedScenario parse_scenario_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, std::string("invalid JSON: ") + e.what());
  }
  return parse_scenario(doc);
}

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json truth_json(Truth t) {
  switch (t) {
    case Truth::True: return true;
    case Truth::False: return false;
    case Truth::Bottom: return "bot";
  }
  return "bot";
}

json series_json(const BranchSeries& s) {
  json prefix = json::array(), period = json::array();
  for (Truth t : s.prefix) prefix.push_back(truth_json(t));
  for (Truth t : s.period) period.push_back(truth_json(t));
  return {{"prefix", prefix}, {"period", period}};
}

}  // namespace

LoadedScenario load_scenario_file(const std::filesystem::path& path) { return parse_scenario_text(read_file(path)); }

json to_json(const ScenarioConfig& c) {
  json doc;
  doc["propositions"] = json::array();
  for (const auto& p : c.propositions) {
    doc["propositions"].push_back({{"id", p.id},
                                   {"decay_constant", p.decay_constant},
                                   {"base_latency", p.base_latency},
                                   {"initial_amplitude", p.initial_amplitude},
                                   {"initial", std::string(to_string(p.initial_phase))}});
  }
  doc["contexts"] = json::array();
  for (const auto& ctx : c.contexts)
    doc["contexts"].push_back({{"id", ctx.id}, {"members", ctx.members}, {"within", ctx.within}});
  doc["relations"] = json::array();
  for (const auto& r : c.relations) doc["relations"].push_back({{"a", r.a}, {"b", r.b}, {"r", r.r}, {"r_u", r.r_u}});

  const auto& p = c.params;
  json params;
  params["tau"] = p.tau;
  params["tau_e"] = p.tau_e;
  params["tau_c"] = p.tau_c;
  params["eps_h"] = p.eps_h;
  params["alpha_fb"] = p.alpha_fb;
  params["alpha_res"] = p.alpha_res;
  params["beta"] = p.beta;
  params["lambda_path"] = p.lambda_path;
  params["eps_cross"] = p.eps_cross;
  params["tau_res"] = p.tau_res;
  if (const auto* scalar = std::get_if<double>(&p.environment)) {
    params["environment"] = *scalar;
  } else {
    json points = json::array();
    for (const auto& pt : std::get<std::vector<EnvironmentPoint>>(p.environment))
      points.push_back({{"time", pt.time}, {"value", pt.value}});
    params["environment"] = points;
  }
  params["modifiers"] = json::array();
  for (Modifier m : p.modifiers) params["modifiers"].push_back(std::string(to_string(m)));
  params["latency_law"] = {
      {"kind", p.latency_law.kind == LatencyLaw::Kind::Reciprocal ? "reciprocal" : "reciprocal_power"},
      {"exponent", p.latency_law.exponent}};
  params["propagation_mode"] = p.propagation_mode == PropagationMode::Literal ? "literal" : "per_edge";
  params["optimal_sign"] = p.optimal_sign == OptimalSign::Literal ? "literal" : "flipped";
  params["realization_duration"] = p.realization_duration;
  params["cascade_depth"] = p.cascade_depth;
  params["path_cap"] = p.path_cap;
  params["stochastic"] = p.stochastic;
  params["propagation"] = p.propagation;
  params["scheduling"] = p.scheduling;
  params["simultaneous_fixed_point"] = p.simultaneous_fixed_point;
  params["chains"] = json::array();
  for (const auto& ch : p.chains) {
    json entry = {{"id", ch.id}, {"members", ch.members}};
    if (!ch.probabilities.empty()) entry["probabilities"] = ch.probabilities;
    params["chains"].push_back(entry);
  }
  if (p.bayes) {
    json likelihoods = json::array();
    for (const auto& l : p.bayes->likelihoods)
      likelihoods.push_back({{"of", l.of}, {"given", l.given}, {"p", l.p}});
    params["bayes"] = {{"priors", json(p.bayes->priors)}, {"likelihoods", likelihoods}};
  }
  params["branches"] = json::object();
  for (const auto& [id, s] : p.branches) params["branches"][id] = series_json(s);
  doc["params"] = params;

  doc["events"] = json::array();
  for (const auto& e : c.events) {
    json ev = {{"time", e.time}, {"kind", std::string(to_string(e.kind))}};
    if (!e.target.empty()) ev["target"] = e.target;
    if (e.context) ev["context"] = *e.context;
    if (e.kind == EventKind::Environment || e.value != EventDef{}.value) ev["value"] = e.value;
    if (!e.branch.empty()) ev["branch"] = e.branch;
    if (e.kind == EventKind::Measure || e.step != 0) ev["step"] = e.step;
    doc["events"].push_back(ev);
  }
  doc["horizon"] = c.horizon;
  doc["dt"] = c.dt;
  doc["seed"] = c.seed;
  return doc;
}

TraceDocument parse_trace(const json& doc) {
  ValidationReport problems;
  Reader r(problems);
  TraceDocument out;
  if (r.object(doc, "", {"prefix", "period", "dt", "branches"})) {
    double dt = 1.0;
    r.number(doc, "", "dt", dt);
    if (!(std::isfinite(dt) && dt > 0.0)) r.fail("dt", "dt must be positive");
    if (doc.contains("branches")) {
      if (doc.contains("prefix") || doc.contains("period"))
        r.fail("branches", "a trace is either linear (prefix/period) or branching, not both");
      BranchingTrace bt;
      bt.dt = dt;
      const auto& b = doc.at("branches");
      if (!b.is_object() || b.empty()) {
        r.fail("branches", "expected a non-empty object");
      } else {
        for (const auto& [id, series] : b.items()) {
          BranchSeries s;
          read_branch(r, series, "branches." + id, s);
          if (s.prefix.empty() && s.period.empty()) r.fail("branches." + id, "branch series must be non-empty");
          bt.branches[id] = std::move(s);
        }
      }
      out.branching = std::move(bt);
    } else {
      std::vector<Truth> prefix, period;
      if (!doc.contains("prefix")) r.fail("prefix", "missing required key");
      r.truths(doc, "", "prefix", prefix);
      r.truths(doc, "", "period", period);
      Trace t;
      t.dt = dt;
      auto lower = [&](const std::vector<Truth>& in, std::vector<bool>& dst, const char* key) {
        for (std::size_t i = 0; i < in.size(); ++i) {
          if (in[i] == Truth::Bottom) r.fail(at(key, i), "\"bot\" is only allowed in branching traces");
          dst.push_back(in[i] == Truth::True);
        }
      };
      lower(prefix, t.prefix, "prefix");
      lower(period, t.period, "period");
      out.linear = std::move(t);
    }
  }
  if (!problems.empty()) throw Error(ErrorCode::InvalidTrace, "\n" + format_report(problems));
  return out;
}

TraceDocument load_trace_file(const std::filesystem::path& path) {
  json doc;
  try {
    doc = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, std::string("invalid JSON: ") + e.what());
  }
  return parse_trace(doc);
}

}  // namespace mnemosim
