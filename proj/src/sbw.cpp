#include <algorithm>
#include <cmath>
#include <random>

#include "ftr/error.hpp"
#include "ftr/simkit.hpp"

namespace ftr::sim {

void SbwScenario::check() const {
  auto require = [](bool ok, const std::string& message) {
    if (!ok) throw ScenarioError(message);
  };
  require(step > 0 && std::isfinite(step), "step size must be > 0");
  require(duration > 0 && std::isfinite(duration), "duration must be > 0");
  require(tolerance > 0, "tolerance band must be > 0");
  require(rack_limit > 0, "rack limit must be > 0");
  require(sample_period >= step, "sample period must be at least one step");
  require(noise >= 0, "noise amplitude must be >= 0");
  require(duration / step <= 1e8, "too many integration steps");
  require(!motors.empty(), "at least one motor is required");
  require(!reference.empty(), "reference profile is empty");
  for (std::size_t i = 1; i < reference.size(); ++i)
    require(reference[i].time > reference[i - 1].time, "reference times must increase");
  for (const auto& inj : injections)
    require(inj.at >= 0 && inj.at <= duration, "injection time " + format_number(inj.at) +
                                                    " is outside [0, duration]");
  for (const auto& [path, cap] : capability) {
    require(cap.well_formed(), "capability of " + path + " has lo > hi");
    require(std::find(motors.begin(), motors.end(), path) != motors.end(),
            "capability given for unknown motor " + path);
  }
}

double SbwScenario::reference_at(double t) const {
  double angle = reference.front().angle;
  for (const auto& p : reference)
    if (p.time <= t) angle = p.angle;
  return angle;
}

namespace {

const Interval& interval_metric(const PerformanceValue& p, const std::string& name,
                                const std::string& where) {
  const auto it = p.find(name);
  if (it == p.end() || !std::holds_alternative<Interval>(it->second))
    throw ScenarioError(where + " has no interval metric '" + name + "'");
  return std::get<Interval>(it->second);
}

struct Actuators {
  std::vector<Interval> motors;
  bool controller_ok = true;
};

Actuators actuators_for(const SystemModel& model, const SbwScenario& s,
                        const FaultCombination& active) {
  Actuators a;
  for (const auto& path : s.motors) {
    // Conservative: a motor without a matching rule is treated as lost.
    const auto o = evaluate_operability(model, path, active, Mode::conservative);
    if (o.as_int() < 1) {
      a.motors.push_back({0.0, 0.0});
      continue;
    }
    const auto declared = interval_metric(
        available_performance(model, path, active, Mode::conservative), s.torque_metric, path);
    const auto cap_it = s.capability.find(path);
    const Interval plant = cap_it != s.capability.end()
                               ? cap_it->second
                               : interval_metric(model.find(path)->nominal, s.torque_metric, path);
    Interval usable{std::max(plant.lo, declared.lo), std::min(plant.hi, declared.hi)};
    if (!usable.well_formed()) usable = {0.0, 0.0};
    a.motors.push_back(usable);
  }
  if (!s.controller.empty())
    a.controller_ok =
        evaluate_operability(model, s.controller, active, Mode::conservative).as_int() == 1;
  return a;
}

}  // namespace

SimOutcome simulate_sbw(const SystemModel& model, const SbwScenario& s) {
  s.check();
  for (const auto& path : s.motors)
    if (model.find(path) == nullptr) throw ScenarioError("unknown motor '" + path + "'");
  if (!s.controller.empty() && model.find(s.controller) == nullptr)
    throw ScenarioError("unknown controller '" + s.controller + "'");
  const Component* target = model.find(s.target);
  if (target == nullptr) throw ScenarioError("unknown target '" + s.target + "'");
  for (const auto& spec : target->metrics)
    if (spec.name != s.torque_metric && spec.name != s.angle_metric)
      throw ScenarioError("target metric '" + spec.name + "' is not observable in the plant");

  auto injections = s.injections;
  std::stable_sort(injections.begin(), injections.end(),
                   [](const Injection& a, const Injection& b) { return a.at < b.at; });
  {
    FaultCombination all;
    for (const auto& inj : injections) all.insert(inj.fault);
    check_request(model, s.target, all);
  }

  SimOutcome out;
  std::mt19937_64 rng(s.seed);
  std::uniform_real_distribution<double> noise(-s.noise, s.noise);

  const auto steps = static_cast<std::size_t>(std::llround(s.duration / s.step));
  const auto sample_every = std::max<std::size_t>(1, std::llround(s.sample_period / s.step));
  const double first_injection = injections.empty() ? 0.0 : injections.front().at;
  const double settle_from = s.duration * 0.8;

  FaultCombination active;
  std::size_t next_injection = 0;
  Actuators act = actuators_for(model, s, active);

  double angle = 0.0;
  bool tracking = true;
  bool within_limits = true;
  Interval torque_envelope{-HUGE_VAL, HUGE_VAL};
  Interval angle_envelope{HUGE_VAL, -HUGE_VAL};
  std::vector<double> applied(s.motors.size(), 0.0);

  for (std::size_t i = 0; i <= steps; ++i) {
    const double t = static_cast<double>(i) * s.step;
    bool changed = false;
    while (next_injection < injections.size() && injections[next_injection].at <= t + 1e-12) {
      active.insert(injections[next_injection].fault);
      out.trace.push_back({t, "inject", injections[next_injection].fault});
      ++next_injection;
      changed = true;
    }
    if (changed) act = actuators_for(model, s, active);
    const bool post = t + 1e-12 >= first_injection;

    const double desired = s.reference_at(t);
    const double measured = angle + (s.noise > 0 ? noise(rng) : 0.0);
    double demand = act.controller_ok ? s.kp * (desired - measured) : 0.0;

    Interval pool{0.0, 0.0};
    for (const auto& m : act.motors) pool = {pool.lo + m.lo, pool.hi + m.hi};
    demand = std::clamp(demand, pool.lo, pool.hi);
    double total = 0.0;
    for (std::size_t m = 0; m < act.motors.size(); ++m) {
      const auto& range = act.motors[m];
      double share = 0.0;
      if (demand > 0 && pool.hi > 0) share = demand * range.hi / pool.hi;
      if (demand < 0 && pool.lo < 0) share = demand * range.lo / pool.lo;
      applied[m] = std::clamp(share, range.lo, range.hi);
      total += applied[m];
    }

    if (post) {
      torque_envelope = {std::max(torque_envelope.lo, pool.lo),
                         std::min(torque_envelope.hi, pool.hi)};
      angle_envelope = {std::min(angle_envelope.lo, angle), std::max(angle_envelope.hi, angle)};
      if (std::abs(angle) >= s.rack_limit) within_limits = false;
    }
    if (t + 1e-12 >= settle_from && std::abs(desired - angle) > s.tolerance) tracking = false;

    if (i % sample_every == 0) {
      out.trace.push_back({t, "reference", format_number(desired)});
      out.trace.push_back({t, "angle", format_number(angle)});
      out.trace.push_back({t, "torque-demand", format_number(demand)});
      for (std::size_t m = 0; m < s.motors.size(); ++m)
        out.trace.push_back({t, s.motors[m] + ".torque", format_number(applied[m])});
    }

    if (!std::isfinite(angle) || !std::isfinite(total))
      throw ScenarioError("non-finite plant state at t=" + format_number(t) + "\n" +
                          format_trace(out.trace));
    if (i == steps) break;
    angle += s.step * s.gain * (total + s.disturbance);
    if (angle >= s.rack_limit || angle <= -s.rack_limit) {
      angle = std::clamp(angle, -s.rack_limit, s.rack_limit);
    }
  }

  out.safe_state_observed = within_limits;
  out.functionality_observed = within_limits && tracking;
  if (!within_limits) out.trace.push_back({s.duration, "event", "rack-limit-reached"});
  for (const auto& spec : target->metrics) {
    if (spec.name == s.torque_metric) out.measured_performance[spec.name] = torque_envelope;
    else out.measured_performance[spec.name] = angle_envelope;
  }
  return out;
}

}  // namespace ftr::sim
