#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ftr/classifier.hpp"
#include "ftr/dsl.hpp"
#include "ftr/model.hpp"

namespace ftr::sim {

struct TraceRecord {
  double time = 0.0;
  std::string signal;
  std::string value;
};

/// Line-delimited "time<TAB>signal<TAB>value" records.
std::string format_trace(const std::vector<TraceRecord>& trace);

struct SimOutcome {
  bool functionality_observed = false;
  bool safe_state_observed = false;
  PerformanceValue measured_performance;
  std::vector<TraceRecord> trace;
};

struct Injection {
  double at = 0.0;  // seconds for steer-by-wire, request index for ADS
  std::string fault;
};

// ---------------------------------------------------------------------------
// Steer-by-wire: rack angle driven by the pooled motor torque,
//   d(angle)/dt = gain * (motor torque + disturbance),
// clamped at the rack limits.

struct ReferencePoint {
  double time = 0.0;
  double angle = 0.0;
};

struct SbwScenario {
  std::string target;                // system whose regime is cross-checked
  std::vector<std::string> motors;   // motor component paths
  std::string controller;            // ECU path; empty means always healthy
  std::string torque_metric = "torque";
  std::string angle_metric = "angle";

  double gain = 1.0;          // deg / (s * Nm)
  double kp = 50.0;           // Nm / deg
  double disturbance = 10.0;  // constant rack load, Nm
  double rack_limit = 40.0;   // deg
  double step = 1e-3;         // s
  double duration = 10.0;     // s
  double tolerance = 1.0;     // tracking band, deg
  double noise = 0.0;         // uniform angle sensor noise amplitude, deg
  std::uint64_t seed = 1;
  double sample_period = 0.01;  // trace decimation, s

  std::vector<ReferencePoint> reference;  // piecewise constant
  std::vector<Injection> injections;
  /// Physical torque limits per motor; defaults to the motor's nominal torque.
  std::map<std::string, Interval> capability;

  /// Throws ScenarioError when an invariant does not hold.
  void check() const;
  double reference_at(double t) const;
};

/// Runs the plant with the injected faults. Motors whose effect rule leaves
/// them non-functional are torque-free from injection onward; functional
/// motors are limited by both the plant capability and any declared torque.
SimOutcome simulate_sbw(const SystemModel& model, const SbwScenario& scenario);

// ---------------------------------------------------------------------------
// Automated driving system with a Safe Halt fallback.

enum class AdsState {
  normal_operation,
  degraded_operation,
  minimal_risk_maneuver_nadf,
  safe_halt_engaged,
  minimal_risk_condition_reached,
  unsafe
};

const char* to_string(AdsState state);

enum class TrajectorySource { normal, emergency };

const char* to_string(TrajectorySource source);

/// The only transitions simulate_ads may take (self-loops are implicit).
bool transition_allowed(AdsState from, AdsState to);

struct AdsScenario {
  std::string target;
  std::string nadf;        // normal operation automated driving functionality
  std::string safe_halt;
  std::string selector;    // trajectory selection; empty means always healthy
  std::string actuation;   // motion control; empty means always healthy
  std::string missions_metric = "missions";
  std::string quality_metric = "quality";

  std::vector<std::string> requests;  // mission sequence, drawn from the nominal set
  std::vector<Injection> injections;  // `at` is the request index
  std::size_t maneuver_steps = 2;
  std::map<std::string, double> mission_time;  // nominal completion time per mission

  void check(const SystemModel& model) const;
};

/// Health of the ADS subsystems under a fault combination, read from the model.
struct AdsHealth {
  int nadf = 1;
  int safe_halt = 1;
  int selector = 1;
  int actuation = 1;
  TokenSet missions;
  Vector quality;
};

AdsHealth ads_health(const SystemModel& model, const AdsScenario& scenario,
                     const FaultCombination& faults);

/// The state the trajectory selection logic drives the vehicle to for the
/// given health, starting from an operating state.
AdsState decide_ads_state(const AdsHealth& health, const TokenSet& nominal_missions,
                          const Vector& nominal_quality);

/// Steps the mission sequence; throws TransitionError if the run ever leaves
/// the transition table.
SimOutcome simulate_ads(const SystemModel& model, const AdsScenario& scenario);

// ---------------------------------------------------------------------------
// Scenario files reuse the model lexer:
//   scenario sbw ... end   or   scenario ads ... end

struct Scenario {
  std::variant<SbwScenario, AdsScenario> body;

  const std::string& target() const;
  FaultCombination injected() const;
  /// Replaces all injections by `faults` injected at time / step zero.
  void inject_at_start(const FaultCombination& faults);
};

/// Throws dsl::SyntaxError or ScenarioError.
Scenario parse_scenario(std::string_view text);

SimOutcome simulate(const SystemModel& model, const Scenario& scenario);

// ---------------------------------------------------------------------------

struct ConsistencyReport {
  FaultCombination combination;
  std::string target;
  RegimeVerdict predicted;
  RegimeVerdict observed;
  std::vector<std::string> differing_criteria;

  bool match() const { return differing_criteria.empty() && predicted.regime == observed.regime; }
};

/// Regime recomputed from observed facts: operability from the observed safe
/// state and functionality, performance from the measured values.
RegimeVerdict observed_regime(const SystemModel& model, std::string_view target,
                              const FaultCombination& combination, const SimOutcome& outcome);

ConsistencyReport crosscheck(const SystemModel& model, std::string_view target,
                             const FaultCombination& combination, const SimOutcome& outcome,
                             Mode mode = Mode::strict);

/// Runs `scenario` once per combination of at most `k` faults from the model's
/// universe, each injected at the start, and cross-checks every outcome.
std::vector<ConsistencyReport> crosscheck_all(const SystemModel& model, const Scenario& scenario,
                                              std::size_t k, Mode mode = Mode::strict);

}  // namespace ftr::sim
