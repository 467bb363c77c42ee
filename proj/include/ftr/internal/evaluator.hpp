#pragma once

// Shared between the classifier translation units; not part of the public API.

#include <map>
#include <optional>
#include <string>

#include "ftr/classifier.hpp"
#include "ftr/composition.hpp"

namespace ftr::detail {

struct NodeState {
  bool matched = true;
  bool safe = true;
  bool functional = true;
  const EffectRule* rule = nullptr;
  std::string evidence;
  std::string unmatched_path;

  int value() const { return !safe ? -1 : (functional ? 1 : 0); }
};

/// Evaluates o(f) and contributed performance for every component under one
/// fault combination, memoized per component.
class Evaluator {
 public:
  Evaluator(const SystemModel& model, const FaultCombination& combination, Mode mode);

  const NodeState& operability(const Component& c, const std::string& path);
  /// Throws NoMatchingRule (strict mode) when some needed component is unmatched.
  const PerformanceValue& contributed(const Component& c, const std::string& path);

 private:
  NodeState evaluate_node(const Component& c, const std::string& path);
  void add_child(const Component& parent, const std::string& parent_path,
                 const std::string& relative, bool with_performance, ChildStates& children);

  const SystemModel& model_;
  const FaultCombination& combination_;
  Mode mode_;
  std::map<const Component*, NodeState> nodes_;
  std::map<const Component*, PerformanceValue> performance_;
};

struct Classified {
  RegimeVerdict verdict;
  std::optional<OperabilityVerdict> operability;
};

Classified classify_full(const SystemModel& model, const Component& component,
                         const std::string& path, const FaultCombination& combination, Mode mode);

}  // namespace ftr::detail
