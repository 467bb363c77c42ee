#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ftr/values.hpp"

namespace ftr {

/// A fault the model can inject. Ids are unique across the whole model.
struct Fault {
  std::string id;
  std::string description;

  friend bool operator==(const Fault&, const Fault&) = default;
};

/// A subset f of the fault universe F; the empty combination is the fault-free case.
class FaultCombination {
 public:
  FaultCombination() = default;
  FaultCombination(std::initializer_list<std::string> ids) : members_(ids) {}
  explicit FaultCombination(std::set<std::string> ids) : members_(std::move(ids)) {}

  /// Parses "fA+fB"; "", "∅", "none" and "{}" denote the empty combination.
  static FaultCombination parse(std::string_view text);

  const std::set<std::string>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  bool contains(const std::string& id) const { return members_.count(id) != 0; }
  bool is_subset_of(const FaultCombination& other) const;

  void insert(std::string id) { members_.insert(std::move(id)); }

  /// Sorted ids joined with '+', or "∅".
  std::string to_string() const;

  friend bool operator==(const FaultCombination&, const FaultCombination&) = default;
  friend auto operator<=>(const FaultCombination& a, const FaultCombination& b) {
    if (a.size() != b.size()) return a.size() <=> b.size();
    return a.members_ <=> b.members_;
  }

 private:
  std::set<std::string> members_;
};

struct MetricSpec {
  std::string name;
  MetricKind kind = MetricKind::scalar;
  std::string unit;
  Direction direction = Direction::higher_is_better;
  std::size_t length = 0;  // vector kind only
  double tolerance = 0.0;  // absolute slack on scalar comparisons

  friend bool operator==(const MetricSpec&, const MetricSpec&) = default;
};

/// Metric name -> value. Used both for nominal and available performance.
using PerformanceValue = std::map<std::string, MetricValue>;

enum class MatchKind { exact_set, superset_of, cardinality_at_most, cardinality_exactly, any };

const char* to_string(MatchKind kind);

struct FaultMatch {
  MatchKind kind = MatchKind::any;
  std::set<std::string> faults;  // exact_set, superset_of
  std::size_t cardinality = 0;   // cardinality_*

  bool matches(const FaultCombination& combination) const;
  friend bool operator==(const FaultMatch&, const FaultMatch&) = default;
};

/// The model author's declaration of how a component behaves under a matching
/// combination. Declared performance overrides nominal for the listed metrics only.
struct EffectRule {
  FaultMatch match;
  bool provides_functionality = true;
  bool maintains_safe_state = true;
  PerformanceValue performance;  // empty means "nominal"
  std::string note;

  friend bool operator==(const EffectRule&, const EffectRule&) = default;
};

enum class Kernel {
  interval_sum,
  set_intersection,
  vector_min,
  scalar_min,
  all_children_required,
  custom_table
};

const char* to_string(Kernel kernel);

enum class OperabilityCombiner { min_of_children, declared_by_effect_rules };

const char* to_string(OperabilityCombiner combiner);

/// Path of a child component relative to the composing component plus the
/// metric read from it.
struct MetricSource {
  std::string child;  // dotted relative path, e.g. "MotorA" or "SafeHalt.Perception"
  std::string metric;

  friend bool operator==(const MetricSource&, const MetricSource&) = default;
};

/// Health pattern over the table's children; nullopt is a wildcard.
struct TableRow {
  std::vector<std::optional<int>> health;
  MetricValue value;

  friend bool operator==(const TableRow&, const TableRow&) = default;
};

struct MetricBinding {
  std::string metric;  // parent metric
  Kernel kernel = Kernel::interval_sum;
  std::vector<MetricSource> sources;  // every kernel except custom_table
  std::vector<std::string> table_children;  // custom_table only
  std::vector<TableRow> rows;               // custom_table only

  friend bool operator==(const MetricBinding&, const MetricBinding&) = default;
};

struct CompositionRule {
  OperabilityCombiner combiner = OperabilityCombiner::declared_by_effect_rules;
  std::vector<MetricBinding> bindings;

  const MetricBinding* binding_for(std::string_view metric) const;
  friend bool operator==(const CompositionRule&, const CompositionRule&) = default;
};

struct Component {
  std::string name;
  std::string functionality;
  std::string predicate;
  std::vector<Fault> faults;
  std::vector<MetricSpec> metrics;
  PerformanceValue nominal;
  std::vector<EffectRule> rules;
  std::optional<CompositionRule> composition;
  std::vector<Component> children;

  const MetricSpec* metric(std::string_view metric_name) const;
  const Component* child(std::string_view child_name) const;
  /// Resolves a dotted path relative to this component ("" is this component).
  const Component* descendant(std::string_view relative_path) const;

  friend bool operator==(const Component&, const Component&) = default;
};

/// A hierarchical system: one root component and everything below it.
struct SystemModel {
  Component root;

  /// Resolves "SbW.MotorA" (full dotted path) or a component name that is
  /// unique in the tree. Returns nullptr when nothing or several match.
  const Component* find(std::string_view path) const;
  /// Full dotted path of a component found by find(); empty when absent.
  std::string path_of(std::string_view path_or_name) const;

  /// F: every declared fault id, sorted.
  std::vector<std::string> fault_universe() const;
  /// Fault ids declared in the subtree rooted at `component`.
  std::set<std::string> subtree_faults(const Component& component) const;
  /// Dotted paths of every component in pre-order.
  std::vector<std::string> component_paths() const;

  friend bool operator==(const SystemModel&, const SystemModel&) = default;
};

// ---------------------------------------------------------------------------
// Verdicts

enum class Operability : int { unsafe = -1, safe_nonfunctional = 0, operable = 1 };

/// o(f) with the facts it was derived from. The value is never stored
/// separately from (safe_state, functional), so no fourth case exists.
struct OperabilityVerdict {
  bool safe_state = true;
  bool functional = true;
  std::string evidence;

  Operability value() const {
    if (!safe_state) return Operability::unsafe;
    return functional ? Operability::operable : Operability::safe_nonfunctional;
  }
  int as_int() const { return static_cast<int>(value()); }

  static OperabilityVerdict from(bool safe_state, bool functional, std::string evidence);
};

enum class Regime { operational, fail_operational, fail_degraded, fail_safe, fail_unsafe, unknown };

const char* to_string(Regime regime);
std::optional<Regime> regime_from_string(std::string_view text);

enum class Comparison { at_least_nominal, below_nominal, incomparable, not_applicable };

const char* to_string(Comparison comparison);
std::optional<Comparison> comparison_from_string(std::string_view text);

/// Answer to one of the four decision criteria. `skipped` means the walk
/// stopped before reaching it.
enum class Answer { yes, no, skipped, undetermined };

const char* to_string(Answer answer);
std::optional<Answer> answer_from_string(std::string_view text);

struct CriteriaTrace {
  Answer fault_present = Answer::skipped;
  Answer safe_state = Answer::skipped;
  Answer functional = Answer::skipped;
  Answer performance = Answer::skipped;

  friend bool operator==(const CriteriaTrace&, const CriteriaTrace&) = default;
};

inline constexpr const char* kCriterionNames[4] = {"fault-present", "safe-state", "functionality",
                                                   "performance"};

struct RegimeVerdict {
  Regime regime = Regime::unknown;
  CriteriaTrace trace;
  Comparison comparison = Comparison::not_applicable;
  std::string evidence;

  friend bool operator==(const RegimeVerdict&, const RegimeVerdict&) = default;
};

// ---------------------------------------------------------------------------
// Validation

struct Diagnostic {
  std::string code;      // stable, e.g. "interval-inverted"
  std::string path;      // component path, possibly suffixed ".metric"
  std::optional<std::size_t> rule_index;
  std::string element;   // key into a source-span map, see dsl.hpp
  std::string message;
};

/// Checks every structural invariant of the model. Empty result means valid.
std::vector<Diagnostic> validate_model(const SystemModel& model);

// ---------------------------------------------------------------------------
// Performance ordering

/// Per-metric partial order: scalars and vectors by >=, intervals and sets by
/// containment of nominal in available. Throws MetricMismatch if names or
/// kinds disagree with `specs`.
Comparison compare_performance(const PerformanceValue& available, const PerformanceValue& nominal,
                               const std::vector<MetricSpec>& specs);

}  // namespace ftr
