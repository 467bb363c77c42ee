#include <algorithm>

#include "ftr/error.hpp"
#include "ftr/simkit.hpp"

namespace ftr::sim {

const char* to_string(AdsState state) {
  switch (state) {
    case AdsState::normal_operation: return "normal-operation";
    case AdsState::degraded_operation: return "degraded-operation";
    case AdsState::minimal_risk_maneuver_nadf: return "minimal-risk-maneuver-nadf";
    case AdsState::safe_halt_engaged: return "safe-halt-engaged";
    case AdsState::minimal_risk_condition_reached: return "minimal-risk-condition-reached";
    case AdsState::unsafe: return "unsafe";
  }
  return "?";
}

const char* to_string(TrajectorySource source) {
  return source == TrajectorySource::normal ? "normal" : "emergency";
}

bool transition_allowed(AdsState from, AdsState to) {
  if (from == to) return true;
  switch (from) {
    case AdsState::normal_operation:
    case AdsState::degraded_operation: return true;
    case AdsState::minimal_risk_maneuver_nadf:
      return to == AdsState::minimal_risk_condition_reached || to == AdsState::safe_halt_engaged ||
             to == AdsState::unsafe;
    case AdsState::safe_halt_engaged:
      return to == AdsState::minimal_risk_condition_reached || to == AdsState::unsafe;
    case AdsState::minimal_risk_condition_reached:
    case AdsState::unsafe: return false;
  }
  return false;
}

namespace {

const Component& require_component(const SystemModel& model, const std::string& path,
                                   const char* role) {
  const Component* c = model.find(path);
  if (c == nullptr) throw ScenarioError(std::string("unknown ") + role + " '" + path + "'");
  return *c;
}

template <typename T>
const T& metric_as(const PerformanceValue& p, const std::string& name, const std::string& where) {
  const auto it = p.find(name);
  if (it == p.end() || !std::holds_alternative<T>(it->second))
    throw ScenarioError(where + " has no metric '" + name + "' of the expected kind");
  return std::get<T>(it->second);
}

int health_of(const SystemModel& model, const std::string& path, const FaultCombination& f) {
  if (path.empty()) return 1;
  return evaluate_operability(model, path, f, Mode::conservative).as_int();
}

bool operating(AdsState s) {
  return s == AdsState::normal_operation || s == AdsState::degraded_operation;
}

}  // namespace

void AdsScenario::check(const SystemModel& model) const {
  const auto& t = require_component(model, target, "target");
  const auto& n = require_component(model, nadf, "nadf");
  require_component(model, safe_halt, "safe-halt");
  if (!selector.empty()) require_component(model, selector, "selector");
  if (!actuation.empty()) require_component(model, actuation, "actuation");
  const auto& nominal_missions = metric_as<TokenSet>(t.nominal, missions_metric, target);
  const auto& nominal_quality = metric_as<Vector>(t.nominal, quality_metric, target);
  metric_as<TokenSet>(n.nominal, missions_metric, nadf);
  metric_as<Vector>(n.nominal, quality_metric, nadf);
  if (nominal_quality.size() != nominal_missions.size())
    throw ScenarioError("quality vector needs one entry per nominal mission");
  for (const auto& spec : t.metrics)
    if (spec.name != missions_metric && spec.name != quality_metric)
      throw ScenarioError("target metric '" + spec.name + "' is not observable in the simulation");
  if (maneuver_steps == 0 || maneuver_steps > 1000000)
    throw ScenarioError("maneuver steps must be in [1, 1000000]");
  for (const auto& r : requests)
    if (!nominal_missions.count(r)) throw ScenarioError("mission '" + r + "' is not nominal");
  for (const auto& [mission, time] : mission_time)
    if (!(time > 0)) throw ScenarioError("mission time of '" + mission + "' must be > 0");
  for (const auto& inj : injections)
    if (inj.at < 0 || inj.at > static_cast<double>(requests.size()))
      throw ScenarioError("injection index " + format_number(inj.at) + " is outside the run");
}

AdsHealth ads_health(const SystemModel& model, const AdsScenario& s,
                     const FaultCombination& faults) {
  AdsHealth h;
  h.nadf = health_of(model, s.nadf, faults);
  h.safe_halt = health_of(model, s.safe_halt, faults);
  h.selector = health_of(model, s.selector, faults);
  h.actuation = health_of(model, s.actuation, faults);
  const auto& nadf = *model.find(s.nadf);
  if (h.nadf == 1) {
    const auto p = available_performance(model, s.nadf, faults, Mode::conservative);
    h.missions = metric_as<TokenSet>(p, s.missions_metric, s.nadf);
    h.quality = metric_as<Vector>(p, s.quality_metric, s.nadf);
  } else {
    h.quality.assign(metric_as<Vector>(nadf.nominal, s.quality_metric, s.nadf).size(), 0.0);
  }
  if (!s.actuation.empty() && h.actuation == 1) {
    const auto& mc = *model.find(s.actuation);
    if (mc.metric(s.quality_metric) != nullptr) {
      const auto p = available_performance(model, s.actuation, faults, Mode::conservative);
      const auto& q = metric_as<Vector>(p, s.quality_metric, s.actuation);
      for (std::size_t i = 0; i < h.quality.size() && i < q.size(); ++i)
        h.quality[i] = std::min(h.quality[i], q[i]);
    }
  }
  return h;
}

AdsState decide_ads_state(const AdsHealth& h, const TokenSet& nominal_missions,
                          const Vector& nominal_quality) {
  if (h.selector < 0 || h.actuation < 0) return AdsState::unsafe;
  if (h.nadf < 0)
    return h.safe_halt == 1 && h.selector == 1 && h.actuation == 1 ? AdsState::safe_halt_engaged
                                                                   : AdsState::unsafe;
  // Without a working fallback, continuing the mission is not acceptable.
  if (h.nadf == 0 || h.safe_halt < 1 || h.selector == 0 || h.actuation == 0 ||
      h.missions.empty())
    return AdsState::minimal_risk_maneuver_nadf;
  bool degraded = h.missions != nominal_missions;
  for (std::size_t i = 0; i < nominal_quality.size(); ++i)
    if (i >= h.quality.size() || h.quality[i] < nominal_quality[i]) degraded = true;
  return degraded ? AdsState::degraded_operation : AdsState::normal_operation;
}

SimOutcome simulate_ads(const SystemModel& model, const AdsScenario& s) {
  s.check(model);
  const auto& target = *model.find(s.target);
  const auto& nominal_missions = std::get<TokenSet>(target.nominal.at(s.missions_metric));
  const auto& nominal_quality = std::get<Vector>(target.nominal.at(s.quality_metric));
  {
    FaultCombination all;
    for (const auto& inj : s.injections) all.insert(inj.fault);
    check_request(model, s.target, all);
  }
  const std::vector<std::string> mission_order(nominal_missions.begin(), nominal_missions.end());
  auto mission_index = [&](const std::string& m) {
    return static_cast<std::size_t>(
        std::find(mission_order.begin(), mission_order.end(), m) - mission_order.begin());
  };

  SimOutcome out;
  AdsState state = AdsState::normal_operation;
  FaultCombination active;
  AdsHealth health = ads_health(model, s, active);
  std::size_t maneuver = 0;
  const double first_injection = s.injections.empty()
                                     ? 0.0
                                     : std::min_element(s.injections.begin(), s.injections.end(),
                                                        [](const auto& a, const auto& b) {
                                                          return a.at < b.at;
                                                        })->at;

  TokenSet completed;
  Vector measured_quality(mission_order.size(), 0.0);
  std::vector<bool> measured(mission_order.size(), false);

  auto move_to = [&](AdsState next, std::size_t step) {
    if (next == state) return;
    if (!transition_allowed(state, next))
      throw TransitionError(std::string("illegal transition ") + to_string(state) + " -> " +
                            to_string(next) + " at step " + std::to_string(step));
    state = next;
    out.trace.push_back({static_cast<double>(step), "state", to_string(state)});
    const auto source = state == AdsState::safe_halt_engaged ? TrajectorySource::emergency
                                                             : TrajectorySource::normal;
    out.trace.push_back({static_cast<double>(step), "trajectory", to_string(source)});
  };

  out.trace.push_back({0.0, "state", to_string(state)});
  out.trace.push_back({0.0, "trajectory", to_string(TrajectorySource::normal)});

  // Runs past the last request until any maneuver has finished.
  for (std::size_t step = 0;; ++step) {
    bool changed = false;
    for (const auto& inj : s.injections) {
      if (inj.at <= static_cast<double>(step) && !active.contains(inj.fault)) {
        active.insert(inj.fault);
        out.trace.push_back({static_cast<double>(step), "inject", inj.fault});
        changed = true;
      }
    }
    if (changed) {
      health = ads_health(model, s, active);
      const auto decided = decide_ads_state(health, nominal_missions, nominal_quality);
      if (operating(state)) {
        move_to(decided, step);
      } else if (state == AdsState::minimal_risk_maneuver_nadf &&
                 (decided == AdsState::unsafe || decided == AdsState::safe_halt_engaged)) {
        move_to(decided, step);
        maneuver = 0;
      } else if (state == AdsState::safe_halt_engaged && decided == AdsState::unsafe) {
        move_to(decided, step);
      }
    }

    const bool have_request = step < s.requests.size();
    if (!have_request && (operating(state) || state == AdsState::unsafe ||
                          state == AdsState::minimal_risk_condition_reached))
      break;

    if (state == AdsState::minimal_risk_maneuver_nadf || state == AdsState::safe_halt_engaged) {
      if (++maneuver >= s.maneuver_steps) move_to(AdsState::minimal_risk_condition_reached, step);
    }
    if (!have_request) continue;

    const auto& mission = s.requests[step];
    const auto i = mission_index(mission);
    const bool post = static_cast<double>(step) >= first_injection;
    const double q = i < health.quality.size() ? health.quality[i] : 0.0;
    if (operating(state) && health.missions.count(mission) && q > 0) {
      const auto it = s.mission_time.find(mission);
      const double nominal_time = it == s.mission_time.end() ? 1.0 : it->second;
      const double actual_time = nominal_time / q;
      out.trace.push_back({static_cast<double>(step), "complete",
                           mission + " " + format_number(actual_time)});
      if (post) {
        completed.insert(mission);
        const double ratio = nominal_time / actual_time;
        measured_quality[i] = measured[i] ? std::min(measured_quality[i], ratio) : ratio;
        measured[i] = true;
      }
    } else {
      out.trace.push_back({static_cast<double>(step), "reject", mission});
    }
  }

  out.safe_state_observed = state != AdsState::unsafe;
  out.functionality_observed = operating(state);
  out.measured_performance[s.missions_metric] = completed;
  out.measured_performance[s.quality_metric] = measured_quality;
  out.trace.push_back({static_cast<double>(s.requests.size()), "final", to_string(state)});
  return out;
}

}  // namespace ftr::sim
