#include "mnemosim/engine.hpp"

#include <cmath>
#include <sstream>

#include "mnemosim/error.hpp"
#include "mnemosim/io.hpp"
#include "mnemosim/recall.hpp"
#include "mnemosim/temporal.hpp"

namespace mnemosim {

std::string_view to_string(SimulationEvent::Kind kind) {
  using K = SimulationEvent::Kind;
  switch (kind) {
    case K::ExternalRecall: return "recall";
    case K::Trigger: return "trigger";
    case K::EnvironmentChange: return "environment";
    case K::Measure: return "measure";
    case K::PropagatedRecall: return "propagate";
    case K::Transition: return "transition";
    case K::DecayOnset: return "decay-onset";
  }
  return "recall";
}

double current_strength(const PropositionRuntime& p, Time t) {
  switch (p.memory.phase) {
    case Phase::Realized: return 1.0;
    case Phase::Decayed: return strength(p.curve, std::max(t, p.curve.start));
    case Phase::Unresolved: return 0.0;
  }
  return 0.0;
}

Time sample_transition_delay(std::mt19937_64& rng, Time latency) {
  // 53 high bits -> uniform in [0, 1); inverse CDF of 1 - exp(-t / latency).
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return -latency * std::log1p(-u);
}

namespace {

std::string truth_name(Truth v) {
  switch (v) {
    case Truth::True: return "true";
    case Truth::False: return "false";
    case Truth::Bottom: return "bot";
  }
  return "bot";
}

void log_unchanged(SimulationState& state, const PropositionId& p, Time t, std::string cause,
                   std::optional<double> latency = std::nullopt) {
  const auto& rt = state.props.at(p);
  state.log.push_back({t, p, rt.memory.phase, rt.memory.phase, current_strength(rt, t), latency, std::move(cause)});
}

}  // namespace

Engine::Engine(ScenarioConfig config) : scenario_(std::move(config)) {}

bool Engine::modifier_active(Modifier m) const {
  const auto& mods = scenario_.params().modifiers;
  return std::ranges::find(mods, m) != mods.end();
}

void Engine::schedule(SimulationState& state, SimulationEvent event) const {
  event.sequence = state.next_sequence++;
  state.queue.insert(std::move(event));
}

SimulationState Engine::initial_state() const {
  const auto& config = scenario_.config();
  const auto& params = config.params;

  SimulationState state;
  state.rng.seed(config.seed);
  state.environment = scenario_.environment_at(0.0);

  for (const auto& id : scenario_.ids()) {
    const auto& prop = scenario_.registry().lookup(id);
    PropositionRuntime rt;
    rt.rate = prop.decay_constant;
    rt.resilience.alpha = params.alpha_res;
    rt.memory.phase = prop.initial_phase;
    rt.curve = DecayCurve::ebbinghaus(prop.decay_constant, 0.0, prop.initial_amplitude);
    if (prop.initial_phase == Phase::Decayed) {
      rt.memory.t_f = 0.0;
      rt.memory.last_reset = 0.0;
    }
    state.props.emplace(id, std::move(rt));
    log_unchanged(state, id, 0.0, "init");
  }

  using K = SimulationEvent::Kind;
  if (const auto* schedule_points = std::get_if<std::vector<EnvironmentPoint>>(&params.environment)) {
    for (std::size_t i = 0; i < schedule_points->size(); ++i) {
      SimulationEvent ev;
      ev.time = (*schedule_points)[i].time;
      ev.kind = K::EnvironmentChange;
      ev.value = (*schedule_points)[i].value;
      ev.cause = "environment-schedule#" + std::to_string(i);
      schedule(state, std::move(ev));
    }
  }
  for (std::size_t i = 0; i < config.events.size(); ++i) {
    const auto& def = config.events[i];
    SimulationEvent ev;
    ev.time = def.time;
    ev.target = def.target;
    ev.context = def.context;
    ev.value = def.value;
    ev.branch = def.branch;
    ev.step = def.step;
    switch (def.kind) {
      case EventKind::Recall: ev.kind = K::ExternalRecall; break;
      case EventKind::Trigger: ev.kind = K::Trigger; break;
      case EventKind::Environment: ev.kind = K::EnvironmentChange; break;
      case EventKind::Measure: ev.kind = K::Measure; break;
    }
    ev.cause = std::string(to_string(def.kind)) + "#" + std::to_string(i);
    schedule(state, std::move(ev));
  }
  return state;
}

void Engine::realize(SimulationState& state, const PropositionId& p, Time t, const std::string& cause, int depth,
                     std::optional<double> latency) const {
  const auto& params = scenario_.params();
  const auto& prop = scenario_.registry().lookup(p);
  auto& rt = state.props.at(p);
  const Phase before = rt.memory.phase;

  if (rt.resilience.recall_times.empty() || t > rt.resilience.recall_times.back())
    rt.resilience = accumulate_resilience(std::move(rt.resilience), t);
  const auto adjusted = adjusted_decay_rate(prop.decay_constant, rt.resilience.value, params.tau_res);
  rt.rate = adjusted.rate;
  rt.decay_negligible = adjusted.negligible;

  rt.memory = {Phase::Realized, t, t + params.realization_duration, t};
  ++rt.recalls;
  ++rt.transition_generation;
  rt.scheduled_transition.reset();

  SimulationEvent onset;
  onset.time = t + params.realization_duration;
  onset.kind = SimulationEvent::Kind::DecayOnset;
  onset.target = p;
  onset.generation = ++rt.onset_generation;
  onset.cause = "decay-onset";
  schedule(state, std::move(onset));

  state.log.push_back({t, p, before, Phase::Realized, 1.0, latency, cause});

  if (depth >= params.cascade_depth) {
    ++state.cascade_capped;
    return;
  }

  const bool use_feedback = modifier_active(Modifier::Feedback);
  const bool use_bayes = modifier_active(Modifier::Bayesian);

  for (const auto& [q, relation] : scenario_.graph().neighbors(p)) {
    auto& qt = state.props.at(q);
    const auto& qprop = scenario_.registry().lookup(q);

    if (use_feedback) qt.feedback[p] += feedback(params.alpha_fb, relation);

    std::optional<double> posterior;
    if (use_bayes) {
      auto key = std::make_pair(p, q);
      auto it = state.beliefs.find(key);
      if (it == state.beliefs.end()) it = state.beliefs.emplace(key, scenario_.belief_table()).first;
      const auto members = scenario_.candidates_for(p);
      try {
        posterior = iterate_recall_update(it->second, p, q, members, 1).back();
      } catch (const Error& e) {
        if (e.code() != ErrorCode::ZeroMarginal) throw;
        posterior = 0.0;
      }
    }

    if (qt.memory.phase == Phase::Decayed) {
      qt.curve = posterior ? DecayCurve::bayesian(*posterior, qt.rate, t, qprop.initial_amplitude)
                           : DecayCurve::ebbinghaus(qt.rate, t, qprop.initial_amplitude);
      qt.memory.last_reset = t;
      log_unchanged(state, q, t, "reset:" + p);
    }

    if (!params.scheduling || qt.memory.phase == Phase::Realized) continue;

    LatencyQuery query;
    query.target = q;
    query.anchor = p;
    query.environment = state.environment;
    query.modifiers = params.modifiers;
    if (use_feedback) query.feedback = qt.feedback[p];
    query.posterior = posterior;
    const Time latency_q = resolve_latency(scenario_, query).latency;
    if (std::isinf(latency_q)) continue;

    const Time delay = params.stochastic ? sample_transition_delay(state.rng, latency_q) : latency_q;
    const Time at = t + delay;
    if (qt.scheduled_transition && *qt.scheduled_transition <= at) continue;

    qt.scheduled_transition = at;
    SimulationEvent transition;
    transition.time = at;
    transition.kind = SimulationEvent::Kind::Transition;
    transition.target = q;
    transition.source = p;
    transition.value = latency_q;
    transition.generation = ++qt.transition_generation;
    transition.depth = depth + 1;
    transition.cause = "transition:" + p + ">" + q;
    schedule(state, std::move(transition));

    const std::string verb = at > scenario_.config().horizon ? "pending:" : "schedule:";
    log_unchanged(state, q, t, verb + p + ">" + q + "@" + format_double(at), latency_q);
  }

  if (!params.propagation) return;
  const auto& h = scenario_.hierarchy();
  std::map<PropositionId, ContextId> reached;
  for (const auto& c_k : h.contexts_of(p)) {
    for (const auto& c_l : h.ancestors(c_k)) {
      for (const auto& q : h.members(c_l)) {
        if (q == p || reached.contains(q) || state.props.at(q).memory.phase == Phase::Realized) continue;
        if (propagates(h, scenario_.relations(), p, q, c_k, c_l, params.tau)) reached.emplace(q, c_l);
      }
    }
  }
  for (const auto& [q, c_l] : reached) {
    SimulationEvent ev;
    ev.time = t;
    ev.kind = SimulationEvent::Kind::PropagatedRecall;
    ev.target = q;
    ev.source = p;
    ev.depth = depth + 1;
    ev.cause = "propagate:" + p + ">" + q + "@" + c_l;
    schedule(state, std::move(ev));
  }
}

SimulationState Engine::step(SimulationState state, const SimulationEvent& event) const {
  using K = SimulationEvent::Kind;
  if (event.time < state.clock)
    throw Error(ErrorCode::ClockRegression,
                "event at " + format_double(event.time) + " precedes clock " + format_double(state.clock));
  state.clock = event.time;
  ++state.events_processed;
  const Time t = event.time;

  switch (event.kind) {
    case K::ExternalRecall:
      realize(state, event.target, t, event.cause, 0, std::nullopt);
      break;

    case K::PropagatedRecall:
      if (state.props.at(event.target).memory.phase != Phase::Realized)
        realize(state, event.target, t, event.cause, event.depth, std::nullopt);
      break;

    case K::Transition: {
      auto& rt = state.props.at(event.target);
      if (event.generation != rt.transition_generation) break;
      rt.scheduled_transition.reset();
      if (rt.memory.phase != Phase::Realized)
        realize(state, event.target, t, event.cause, event.depth, event.value);
      break;
    }

    case K::DecayOnset: {
      auto& rt = state.props.at(event.target);
      if (event.generation != rt.onset_generation || rt.memory.phase != Phase::Realized) break;
      const auto& prop = scenario_.registry().lookup(event.target);
      rt.memory.phase = Phase::Decayed;
      rt.memory.t_f = t;
      rt.memory.last_reset = t;
      rt.curve = DecayCurve::ebbinghaus(rt.rate, t, prop.initial_amplitude);
      state.log.push_back({t, event.target, Phase::Realized, Phase::Decayed, strength(rt.curve, t), std::nullopt,
                           event.cause});
      break;
    }

    case K::Trigger: {
      auto& rt = state.props.at(event.target);
      std::vector<PropositionId> trigger;
      if (event.context) {
        const auto& members = scenario_.hierarchy().members(*event.context);
        trigger.assign(members.begin(), members.end());
      }
      const std::string cause = event.context ? event.cause + ":" + *event.context : event.cause;
      if (rt.memory.phase != Phase::Decayed || (rt.memory.t_f && !(t > *rt.memory.t_f))) {
        log_unchanged(state, event.target, t, cause + ";ignored");
        break;
      }
      const MemoryState next = reactivate(rt.memory, trigger, t);
      if (next.phase != Phase::Realized) {
        log_unchanged(state, event.target, t, cause + ";empty");
        break;
      }
      realize(state, event.target, t, cause, 0, std::nullopt);
      break;
    }

    case K::EnvironmentChange:
      state.environment = event.value;
      state.log.push_back({t, "*", std::nullopt, std::nullopt, std::nullopt, std::nullopt,
                           event.cause + ":" + format_double(event.value)});
      break;

    case K::Measure: {
      const auto& series = scenario_.params().branches.at(event.branch);
      const Truth outcome =
          branch_value_at(series, static_cast<std::size_t>(event.step)).value_or(Truth::Bottom);
      const std::string cause =
          event.cause + ":" + event.branch + "@" + std::to_string(event.step) + "=" + truth_name(outcome);
      if (outcome != Truth::Bottom && state.props.at(event.target).memory.phase != Phase::Realized)
        realize(state, event.target, t, cause, 0, std::nullopt);
      else
        log_unchanged(state, event.target, t, cause);
      break;
    }
  }
  return state;
}

SimulationResult Engine::run() const {
  SimulationState state = initial_state();
  const Time horizon = scenario_.config().horizon;
  while (!state.queue.empty()) {
    auto it = state.queue.begin();
    if (it->time > horizon) break;
    SimulationEvent event = *it;
    state.queue.erase(it);
    state = step(std::move(state), event);
  }
  SimulationResult result;
  result.metrics = metrics_bundle(state);
  result.final_state = std::move(state);
  return result;
}

nlohmann::json Engine::metrics_bundle(const SimulationState& state) const {
  const auto& config = scenario_.config();
  nlohmann::json out;
  out["horizon"] = json_number(config.horizon);
  out["seed"] = config.seed;
  out["events_processed"] = state.events_processed;
  out["log_records"] = state.log.size();
  out["cascade_capped"] = state.cascade_capped;
  out["environment"] = json_number(state.environment);

  nlohmann::json props = nlohmann::json::object();
  for (const auto& [id, rt] : state.props) {
    nlohmann::json p;
    p["phase"] = std::string(to_string(rt.memory.phase));
    p["strength"] = json_number(current_strength(rt, config.horizon));
    p["recalls"] = rt.recalls;
    p["resilience"] = json_number(rt.resilience.value);
    p["decay_rate"] = json_number(rt.rate);
    p["decay_negligible"] = rt.decay_negligible;
    p["pending_transition"] = rt.scheduled_transition ? json_number(*rt.scheduled_transition) : nlohmann::json(nullptr);
    props[id] = std::move(p);
  }
  out["propositions"] = std::move(props);

  std::vector<ChainSummary> summaries;
  try {
    summaries = chain_summaries(scenario_, config.params.modifiers, state.environment);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::InsufficientData && e.code() != ErrorCode::MissingAnchor) throw;
    out["chains_error"] = e.what();
  }
  nlohmann::json chains = nlohmann::json::array();
  for (const auto& s : summaries) {
    chains.push_back({{"chain_id", s.chain_id},
                      {"H_bits", json_number(s.entropy_bits)},
                      {"efficiency", json_number(s.efficiency)},
                      {"mean_T_R", json_number(s.mean_latency)}});
  }
  out["chains"] = std::move(chains);
  if (summaries.size() >= 2) {
    const auto corr = rank_correlation(
        [&] {
          std::vector<double> v;
          for (const auto& s : summaries) v.push_back(s.entropy_bits);
          return v;
        }(),
        [&] {
          std::vector<double> v;
          for (const auto& s : summaries) v.push_back(s.mean_latency);
          return v;
        }());
    out["rank_correlation"] = corr ? json_number(*corr) : nlohmann::json(nullptr);
  }
  return out;
}

std::map<PropositionId, Phase> replay_phases(const std::vector<EventLogRecord>& log) {
  std::map<PropositionId, Phase> phases;
  for (const auto& r : log) {
    if (r.prop != "*" && r.phase_after) phases[r.prop] = *r.phase_after;
  }
  return phases;
}

std::string log_csv_header() { return "time,prop,phase_before,phase_after,strength,latency,cause"; }

namespace {

std::string optional_number(const std::optional<double>& v) { return v ? format_double(*v) : ""; }
std::string optional_phase(const std::optional<Phase>& p) { return p ? std::string(to_string(*p)) : ""; }

std::string json_field(const std::optional<double>& v) {
  if (!v) return "null";
  if (std::isinf(*v)) return *v > 0 ? "\"inf\"" : "\"-inf\"";
  return format_double(*v);
}
std::string json_phase(const std::optional<Phase>& p) {
  return p ? "\"" + std::string(to_string(*p)) + "\"" : "null";
}

}  // namespace

std::string to_csv_row(const EventLogRecord& r) {
  std::ostringstream out;
  out << format_double(r.time) << ',' << r.prop << ',' << optional_phase(r.phase_before) << ','
      << optional_phase(r.phase_after) << ',' << optional_number(r.strength) << ',' << optional_number(r.latency)
      << ',' << r.cause;
  return out.str();
}

std::string to_json_line(const EventLogRecord& r) {
  std::ostringstream out;
  out << "{\"time\":" << format_double(r.time) << ",\"prop\":" << nlohmann::json(r.prop).dump()
      << ",\"phase_before\":" << json_phase(r.phase_before) << ",\"phase_after\":" << json_phase(r.phase_after)
      << ",\"strength\":" << json_field(r.strength) << ",\"latency\":" << json_field(r.latency)
      << ",\"cause\":" << nlohmann::json(r.cause).dump() << "}";
  return out.str();
}

std::string format_log(const std::vector<EventLogRecord>& log, bool json_lines) {
  std::string out;
  if (!json_lines) out += log_csv_header() + "\n";
  for (const auto& r : log) out += (json_lines ? to_json_line(r) : to_csv_row(r)) + "\n";
  return out;
}

}  // namespace mnemosim
