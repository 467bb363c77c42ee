#include "ftr/classifier.hpp"

#include <algorithm>
#include <map>

#include "ftr/composition.hpp"
#include "ftr/error.hpp"
#include "ftr/internal/evaluator.hpp"

namespace ftr {

const char* to_string(Mode mode) { return mode == Mode::strict ? "strict" : "conservative"; }

std::optional<Mode> mode_from_string(std::string_view text) {
  if (text == "strict") return Mode::strict;
  if (text == "conservative") return Mode::conservative;
  return std::nullopt;
}

void check_request(const SystemModel& model, std::string_view target,
                   const FaultCombination& combination) {
  if (model.find(target) == nullptr)
    throw InvalidRequest("unknown or ambiguous target '" + std::string(target) + "'");
  const auto universe = model.fault_universe();
  for (const auto& id : combination.members())
    if (!std::binary_search(universe.begin(), universe.end(), id))
      throw InvalidRequest("fault '" + id + "' is not declared in the model");
}

namespace detail {

Evaluator::Evaluator(const SystemModel& model, const FaultCombination& combination, Mode mode)
    : model_(model), combination_(combination), mode_(mode) {}

const NodeState& Evaluator::operability(const Component& c, const std::string& path) {
  if (const auto it = nodes_.find(&c); it != nodes_.end()) return it->second;
  NodeState state = evaluate_node(c, path);
  if (!state.matched && mode_ == Mode::conservative) {
    state.matched = true;
    state.safe = false;
    state.functional = false;
    state.evidence = "unmatched at " + state.unmatched_path + " (conservative)";
  }
  return nodes_.emplace(&c, std::move(state)).first->second;
}

NodeState Evaluator::evaluate_node(const Component& c, const std::string& path) {
  NodeState state;
  if (combination_.empty()) {
    state.evidence = "fault-free";
    return state;
  }
  for (std::size_t i = 0; i < c.rules.size(); ++i) {
    const auto& rule = c.rules[i];
    if (!rule.match.matches(combination_)) continue;
    state.rule = &rule;
    state.safe = rule.maintains_safe_state;
    state.functional = rule.maintains_safe_state && rule.provides_functionality;
    state.evidence = path + " rule " + std::to_string(i) + " (" + to_string(rule.match.kind) + ")";
    if (!rule.note.empty()) state.evidence += ": " + rule.note;
    return state;
  }
  if (c.composition && c.composition->combiner == OperabilityCombiner::min_of_children &&
      !c.children.empty()) {
    int worst = 1;
    for (const auto& child : c.children) {
      const auto& cs = operability(child, path + "." + child.name);
      if (!cs.matched) {
        state.matched = false;
        state.unmatched_path = cs.unmatched_path;
        return state;
      }
      worst = std::min(worst, cs.value());
    }
    state.safe = worst >= 0;
    state.functional = worst == 1;
    state.evidence = path + " min-of-children";
    return state;
  }
  const auto local = model_.subtree_faults(c);
  const bool touched = std::any_of(combination_.members().begin(), combination_.members().end(),
                                   [&](const std::string& id) { return local.count(id) != 0; });
  if (!touched) {
    state.evidence = path + " unaffected";
    return state;
  }
  state.matched = false;
  state.unmatched_path = path;
  return state;
}

const PerformanceValue& Evaluator::contributed(const Component& c, const std::string& path) {
  if (const auto it = performance_.find(&c); it != performance_.end()) return it->second;
  const auto& state = operability(c, path);
  if (!state.matched) throw NoMatchingRule(state.unmatched_path, combination_.to_string());

  PerformanceValue out;
  if (state.value() < 1) {
    // A component that is not providing its functionality delivers nothing.
    for (const auto& spec : c.metrics) out[spec.name] = zero_value(spec.kind, spec.length);
  } else if (combination_.empty() && !c.composition) {
    out = c.nominal;
  } else {
    const PerformanceValue own = state.rule ? state.rule->performance : PerformanceValue{};
    if (c.composition) {
      ChildStates children;
      for (const auto& binding : c.composition->bindings) {
        for (const auto& source : binding.sources) add_child(c, path, source.child, true, children);
        for (const auto& child : binding.table_children) add_child(c, path, child, false, children);
      }
      out = propagate(c, children, own);
    } else {
      out = c.nominal;
      for (const auto& [name, value] : own) out[name] = value;
    }
  }
  return performance_.emplace(&c, std::move(out)).first->second;
}

void Evaluator::add_child(const Component& parent, const std::string& parent_path,
                          const std::string& relative, bool with_performance,
                          ChildStates& children) {
  const Component* node = parent.descendant(relative);
  if (node == nullptr)
    throw CompositionError("unknown child '" + relative + "' at " + parent_path);
  const auto child_path = parent_path + "." + relative;
  const auto& state = operability(*node, child_path);
  if (!state.matched) throw NoMatchingRule(state.unmatched_path, combination_.to_string());
  auto& slot = children[relative];
  slot.operability = state.value();
  if (with_performance) slot.performance = contributed(*node, child_path);
}

}  // namespace detail

namespace {

const Component& resolve(const SystemModel& model, std::string_view target,
                         const FaultCombination& combination, std::string& path) {
  check_request(model, target, combination);
  path = model.path_of(target);
  return *model.find(path);
}

CriteriaTrace trace_of(Answer fault, Answer safe, Answer functional, Answer performance) {
  return {fault, safe, functional, performance};
}

}  // namespace

OperabilityVerdict evaluate_operability(const SystemModel& model, std::string_view target,
                                        const FaultCombination& combination, Mode mode) {
  std::string path;
  const auto& component = resolve(model, target, combination, path);
  detail::Evaluator evaluator(model, combination, mode);
  const auto& state = evaluator.operability(component, path);
  if (!state.matched) throw NoMatchingRule(state.unmatched_path, combination.to_string());
  return OperabilityVerdict::from(state.safe, state.functional, state.evidence);
}

PerformanceValue available_performance(const SystemModel& model, std::string_view target,
                                       const FaultCombination& combination, Mode mode) {
  std::string path;
  const auto& component = resolve(model, target, combination, path);
  if (combination.empty()) return component.nominal;
  detail::Evaluator evaluator(model, combination, mode);
  return evaluator.contributed(component, path);
}

namespace detail {

Classified classify_full(const SystemModel& model, const Component& component,
                         const std::string& path, const FaultCombination& combination, Mode mode) {
  Classified out;
  auto& v = out.verdict;
  // Fault present?
  if (combination.empty()) {
    v.regime = Regime::operational;
    v.trace = trace_of(Answer::no, Answer::skipped, Answer::skipped, Answer::skipped);
    v.evidence = "fault-free";
    out.operability = OperabilityVerdict::from(true, true, v.evidence);
    return out;
  }
  Evaluator evaluator(model, combination, mode);
  const auto& state = evaluator.operability(component, path);
  if (!state.matched) {
    v.regime = Regime::unknown;
    v.trace = trace_of(Answer::yes, Answer::undetermined, Answer::undetermined,
                       Answer::undetermined);
    v.evidence = "unmatched at " + state.unmatched_path;
    return out;
  }
  out.operability = OperabilityVerdict::from(state.safe, state.functional, state.evidence);
  v.evidence = state.evidence;
  // Safe state maintained?
  if (!state.safe) {
    v.regime = Regime::fail_unsafe;
    v.trace = trace_of(Answer::yes, Answer::no, Answer::skipped, Answer::skipped);
    return out;
  }
  // Functionality provided?
  if (!state.functional) {
    v.regime = Regime::fail_safe;
    v.trace = trace_of(Answer::yes, Answer::yes, Answer::no, Answer::skipped);
    return out;
  }
  // Available performance >= nominal?
  PerformanceValue available;
  try {
    available = evaluator.contributed(component, path);
  } catch (const NoMatchingRule& e) {
    v.regime = Regime::unknown;
    v.trace = trace_of(Answer::yes, Answer::yes, Answer::yes, Answer::undetermined);
    v.evidence = "unmatched at " + e.path();
    return out;
  }
  v.comparison = compare_performance(available, component.nominal, component.metrics);
  if (v.comparison == Comparison::at_least_nominal) {
    v.regime = Regime::fail_operational;
    v.trace = trace_of(Answer::yes, Answer::yes, Answer::yes, Answer::yes);
  } else {
    v.regime = Regime::fail_degraded;
    v.trace = trace_of(Answer::yes, Answer::yes, Answer::yes, Answer::no);
  }
  return out;
}

}  // namespace detail

RegimeVerdict classify(const SystemModel& model, std::string_view target,
                       const FaultCombination& combination, Mode mode) {
  std::string path;
  const auto& component = resolve(model, target, combination, path);
  return detail::classify_full(model, component, path, combination, mode).verdict;
}

RegimeVerdict classify_by_definition(const SystemModel& model, std::string_view target,
                                     const FaultCombination& combination, Mode mode) {
  std::string path;
  const auto& component = resolve(model, target, combination, path);

  RegimeVerdict v;
  std::optional<OperabilityVerdict> o;
  try {
    o = evaluate_operability(model, path, combination, mode);
  } catch (const NoMatchingRule& e) {
    if (!combination.empty()) {
      v.evidence = "unmatched at " + e.path();
      v.trace = {Answer::yes, Answer::undetermined, Answer::undetermined, Answer::undetermined};
      return v;
    }
  }
  const int value = o ? o->as_int() : 1;

  // p_a(f) >= p_nom is only defined where the system provides its functionality.
  std::optional<bool> at_least_nominal;
  if (!combination.empty() && value == 1) {
    try {
      const auto available = available_performance(model, path, combination, mode);
      v.comparison = compare_performance(available, component.nominal, component.metrics);
      at_least_nominal = v.comparison == Comparison::at_least_nominal;
    } catch (const NoMatchingRule& e) {
      v.evidence = "unmatched at " + e.path();
      v.trace = {Answer::yes, Answer::yes, Answer::yes, Answer::undetermined};
      return v;
    }
  }

  const bool faulty = !combination.empty();
  const bool in_operational = !faulty;
  const bool in_fail_unsafe = faulty && value == -1;
  const bool in_fail_safe = faulty && value == 0;
  const bool in_fail_operational = faulty && value == 1 && at_least_nominal.value_or(false);
  const bool in_fail_degraded = faulty && value == 1 && !at_least_nominal.value_or(true);

  const int hits = in_operational + in_fail_unsafe + in_fail_safe + in_fail_operational +
                   in_fail_degraded;
  if (hits != 1) throw Error("regime sets overlap or leave a gap for " + combination.to_string());

  v.evidence = faulty ? o->evidence : "fault-free";
  const Answer y = Answer::yes, n = Answer::no, s = Answer::skipped;
  if (in_operational) {
    v.regime = Regime::operational;
    v.trace = {n, s, s, s};
  } else if (in_fail_unsafe) {
    v.regime = Regime::fail_unsafe;
    v.trace = {y, n, s, s};
  } else if (in_fail_safe) {
    v.regime = Regime::fail_safe;
    v.trace = {y, y, n, s};
  } else if (in_fail_operational) {
    v.regime = Regime::fail_operational;
    v.trace = {y, y, y, y};
  } else {
    v.regime = Regime::fail_degraded;
    v.trace = {y, y, y, n};
  }
  return v;
}

}  // namespace ftr
