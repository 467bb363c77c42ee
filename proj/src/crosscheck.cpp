#include "ftr/error.hpp"
#include "ftr/simkit.hpp"

namespace ftr::sim {

RegimeVerdict observed_regime(const SystemModel& model, std::string_view target,
                              const FaultCombination& combination, const SimOutcome& outcome) {
  check_request(model, target, combination);
  const Component& component = *model.find(target);
  const Answer y = Answer::yes, n = Answer::no, s = Answer::skipped;
  RegimeVerdict v;
  v.evidence = "observed";
  if (combination.empty()) {
    v.regime = Regime::operational;
    v.trace = {n, s, s, s};
  } else if (!outcome.safe_state_observed) {
    v.regime = Regime::fail_unsafe;
    v.trace = {y, n, s, s};
  } else if (!outcome.functionality_observed) {
    v.regime = Regime::fail_safe;
    v.trace = {y, y, n, s};
  } else {
    v.comparison =
        compare_performance(outcome.measured_performance, component.nominal, component.metrics);
    const bool meets = v.comparison == Comparison::at_least_nominal;
    v.regime = meets ? Regime::fail_operational : Regime::fail_degraded;
    v.trace = {y, y, y, meets ? y : n};
  }
  return v;
}

ConsistencyReport crosscheck(const SystemModel& model, std::string_view target,
                             const FaultCombination& combination, const SimOutcome& outcome,
                             Mode mode) {
  ConsistencyReport r;
  r.combination = combination;
  r.target = model.path_of(target);
  r.predicted = classify(model, target, combination, mode);
  r.observed = observed_regime(model, target, combination, outcome);
  const Answer CriteriaTrace::*fields[4] = {&CriteriaTrace::fault_present,
                                            &CriteriaTrace::safe_state,
                                            &CriteriaTrace::functional,
                                            &CriteriaTrace::performance};
  for (int i = 0; i < 4; ++i)
    if (r.predicted.trace.*fields[i] != r.observed.trace.*fields[i])
      r.differing_criteria.emplace_back(kCriterionNames[i]);
  return r;
}

std::vector<ConsistencyReport> crosscheck_all(const SystemModel& model, const Scenario& scenario,
                                              std::size_t k, Mode mode) {
  std::vector<ConsistencyReport> out;
  for (const auto& f : subsets_up_to(model.fault_universe(), k)) {
    Scenario run = scenario;
    run.inject_at_start(f);
    out.push_back(crosscheck(model, scenario.target(), f, simulate(model, run), mode));
  }
  return out;
}

}  // namespace ftr::sim
