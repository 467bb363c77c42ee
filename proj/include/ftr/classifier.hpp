#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ftr/model.hpp"

namespace ftr {

/// strict: a combination no rule covers is reported as unknown.
/// conservative: it is treated as not maintaining a safe state.
enum class Mode { strict, conservative };

const char* to_string(Mode mode);
std::optional<Mode> mode_from_string(std::string_view text);

struct ClassificationRequest {
  const SystemModel* model = nullptr;
  std::string target;
  FaultCombination combination;
  Mode mode = Mode::strict;
};

/// Throws InvalidRequest unless the target exists and the combination is a
/// subset of the model's fault universe.
void check_request(const SystemModel& model, std::string_view target,
                   const FaultCombination& combination);

/// o(f) for `target`. Strict mode throws NoMatchingRule for an uncovered
/// combination; conservative mode returns -1 with evidence "unmatched".
OperabilityVerdict evaluate_operability(const SystemModel& model, std::string_view target,
                                        const FaultCombination& combination,
                                        Mode mode = Mode::strict);

/// p_a(f) for `target`. Meaningful when evaluate_operability gave +1.
/// Throws NoMatchingRule when a rule needed for the composition is missing.
PerformanceValue available_performance(const SystemModel& model, std::string_view target,
                                       const FaultCombination& combination,
                                       Mode mode = Mode::strict);

/// Walks the four criteria in order: fault present, safe state,
/// functionality, performance at least nominal.
RegimeVerdict classify(const SystemModel& model, std::string_view target,
                       const FaultCombination& combination, Mode mode = Mode::strict);

/// Set-membership evaluation of the regime definitions, independent of the
/// decision walk. Used to witness that both agree.
RegimeVerdict classify_by_definition(const SystemModel& model, std::string_view target,
                                     const FaultCombination& combination,
                                     Mode mode = Mode::strict);

inline constexpr unsigned long long kDefaultBudget = 1ULL << 20;

struct EnumerationOptions {
  std::size_t max_cardinality = 1;
  Mode mode = Mode::strict;
  unsigned long long budget = kDefaultBudget;
  unsigned jobs = 1;
};

struct ClassifiedCombination {
  FaultCombination combination;
  RegimeVerdict verdict;
  std::optional<OperabilityVerdict> operability;  // nullopt when unmatched in strict mode
};

struct EnumerationReport {
  std::string target;
  std::size_t max_cardinality = 0;
  Mode mode = Mode::strict;
  std::vector<ClassifiedCombination> entries;  // ordered by size, then lexicographically
  std::map<Regime, std::vector<FaultCombination>> regime_sets;

  const ClassifiedCombination* find(const FaultCombination& combination) const;
};

/// Number of subsets of an n-element universe with at most k members,
/// saturating at ULLONG_MAX.
unsigned long long combinations_up_to(std::size_t universe, std::size_t k);

/// Every subset of `universe` with at most `k` members, smallest first and
/// lexicographic within a size.
std::vector<FaultCombination> subsets_up_to(const std::vector<std::string>& universe,
                                            std::size_t k);

/// Classifies every combination with |f| <= k. Throws BudgetExceeded before
/// doing any work when the count exceeds the budget.
EnumerationReport enumerate(const SystemModel& model, std::string_view target,
                            const EnumerationOptions& options = {});

/// Inclusion-minimal members of the fail-unsafe set.
std::vector<FaultCombination> minimal_unsafe_cut_sets(const EnumerationReport& report);

/// Pairs (subset, superset) among the enumerated combinations where the
/// superset classifies strictly better on performance. Monotonicity is not
/// assumed by the classifier; this is a lint only.
struct MonotonicityWarning {
  FaultCombination subset;
  FaultCombination superset;
};

std::vector<MonotonicityWarning> lint_monotonicity(const EnumerationReport& report);

}  // namespace ftr
