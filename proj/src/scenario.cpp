#include <cmath>
#include <sstream>

#include "ftr/error.hpp"
#include "ftr/simkit.hpp"

namespace ftr::sim {

std::string format_trace(const std::vector<TraceRecord>& trace) {
  std::ostringstream out;
  for (const auto& r : trace) out << format_number(r.time) << '\t' << r.signal << '\t' << r.value << '\n';
  return out.str();
}

const std::string& Scenario::target() const {
  return std::visit([](const auto& s) -> const std::string& { return s.target; }, body);
}

FaultCombination Scenario::injected() const {
  FaultCombination f;
  std::visit(
      [&](const auto& s) {
        for (const auto& i : s.injections) f.insert(i.fault);
      },
      body);
  return f;
}

void Scenario::inject_at_start(const FaultCombination& faults) {
  std::visit(
      [&](auto& s) {
        s.injections.clear();
        for (const auto& id : faults.members()) s.injections.push_back({0.0, id});
      },
      body);
}

SimOutcome simulate(const SystemModel& model, const Scenario& scenario) {
  if (const auto* sbw = std::get_if<SbwScenario>(&scenario.body)) return simulate_sbw(model, *sbw);
  return simulate_ads(model, std::get<AdsScenario>(scenario.body));
}

namespace {

using dsl::Cursor;
using dsl::Token;
using dsl::TokenKind;

double finite_number(Cursor& cur, std::string_view what) {
  const Token t = cur.peek();
  const double v = cur.expect_number(what);
  if (!std::isfinite(v)) cur.fail_at(t, std::string(what) + " must be finite");
  return v;
}

std::size_t count(Cursor& cur, std::string_view what) {
  const Token t = cur.peek();
  const double v = cur.expect_number(what);
  if (!(v >= 0 && v <= 1e12) || v != std::floor(v))
    cur.fail_at(t, std::string(what) + " must be a non-negative integer");
  return static_cast<std::size_t>(v);
}

Injection injection(Cursor& cur) {
  Injection i;
  i.at = finite_number(cur, "injection time");
  i.fault = cur.expect_word("fault id");
  return i;
}

bool sbw_key(Cursor& cur, const std::string& key, SbwScenario& s) {
  if (key == "target") s.target = cur.expect_word("target path");
  else if (key == "motor") s.motors.push_back(cur.expect_word("motor path"));
  else if (key == "controller") s.controller = cur.expect_word("controller path");
  else if (key == "torque-metric") s.torque_metric = cur.expect_word("metric name");
  else if (key == "angle-metric") s.angle_metric = cur.expect_word("metric name");
  else if (key == "gain") s.gain = finite_number(cur, key);
  else if (key == "kp") s.kp = finite_number(cur, key);
  else if (key == "disturbance") s.disturbance = finite_number(cur, key);
  else if (key == "rack-limit") s.rack_limit = finite_number(cur, key);
  else if (key == "step") s.step = finite_number(cur, key);
  else if (key == "duration") s.duration = finite_number(cur, key);
  else if (key == "tolerance") s.tolerance = finite_number(cur, key);
  else if (key == "noise") s.noise = finite_number(cur, key);
  else if (key == "seed") s.seed = count(cur, key);
  else if (key == "sample-period") s.sample_period = finite_number(cur, key);
  else if (key == "reference") {
    ReferencePoint p;
    p.time = finite_number(cur, "reference time");
    p.angle = finite_number(cur, "reference angle");
    s.reference.push_back(p);
  } else if (key == "inject") s.injections.push_back(injection(cur));
  else if (key == "capability") {
    const std::string path = cur.expect_word("motor path");
    const Token t = cur.peek();
    const auto value = cur.parse_value();
    const auto* interval = std::get_if<Interval>(&value);
    if (interval == nullptr) cur.fail_at(t, "capability must be an interval");
    s.capability[path] = *interval;
  } else return false;
  return true;
}

bool ads_key(Cursor& cur, const std::string& key, AdsScenario& s) {
  if (key == "target") s.target = cur.expect_word("target path");
  else if (key == "nadf") s.nadf = cur.expect_word("component path");
  else if (key == "safe-halt") s.safe_halt = cur.expect_word("component path");
  else if (key == "selector") s.selector = cur.expect_word("component path");
  else if (key == "actuation") s.actuation = cur.expect_word("component path");
  else if (key == "missions-metric") s.missions_metric = cur.expect_word("metric name");
  else if (key == "quality-metric") s.quality_metric = cur.expect_word("metric name");
  else if (key == "request") s.requests.push_back(cur.expect_word("mission"));
  else if (key == "inject") s.injections.push_back(injection(cur));
  else if (key == "maneuver-steps") s.maneuver_steps = count(cur, key);
  else if (key == "mission-time") {
    const std::string mission = cur.expect_word("mission");
    s.mission_time[mission] = finite_number(cur, "mission time");
  } else return false;
  return true;
}

}  // namespace

Scenario parse_scenario(std::string_view text) {
  Cursor cur(dsl::tokenize(text));
  cur.skip_newlines();
  if (!cur.accept_word("scenario")) cur.fail("expected 'scenario'");
  const Token kind_token = cur.peek();
  const std::string kind = cur.expect_word("scenario kind");
  Scenario scenario;
  if (kind == "sbw") scenario.body = SbwScenario{};
  else if (kind == "ads") scenario.body = AdsScenario{};
  else cur.fail_at(kind_token, "unknown scenario kind '" + kind + "' (expected sbw or ads)");
  cur.expect_line_end();
  while (true) {
    if (cur.at_end()) cur.fail("missing 'end' for scenario");
    const Token head = cur.peek();
    const std::string key = cur.expect_word("scenario key");
    if (key == "end") break;
    const bool known = std::visit(
        [&](auto& s) {
          if constexpr (std::is_same_v<std::decay_t<decltype(s)>, SbwScenario>)
            return sbw_key(cur, key, s);
          else
            return ads_key(cur, key, s);
        },
        scenario.body);
    if (!known) cur.fail_at(head, "unknown " + kind + " scenario key '" + key + "'");
    cur.expect_line_end();
  }
  cur.expect_line_end();
  if (!cur.at_end()) cur.fail("unexpected content after 'end'");
  if (scenario.target().empty()) throw ScenarioError("scenario has no target");
  if (const auto* sbw = std::get_if<SbwScenario>(&scenario.body)) sbw->check();
  return scenario;
}

}  // namespace ftr::sim
