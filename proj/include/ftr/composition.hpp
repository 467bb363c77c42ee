#pragma once

#include <functional>
#include <map>
#include <string>

#include "ftr/model.hpp"
#include "ftr/values.hpp"

namespace ftr {

/// [a.lo + b.lo, a.hi + b.hi]: pooled capability of two parallel providers.
Interval interval_sum(const Interval& a, const Interval& b);
/// Unit-checked form; throws UnitMismatch.
Quantity<Interval> interval_sum(const Quantity<Interval>& a, const Quantity<Interval>& b);

/// outer.lo <= inner.lo && inner.hi <= outer.hi, with optional absolute slack.
bool interval_contains(const Interval& outer, const Interval& inner, double tolerance = 0.0);
bool interval_contains(const Quantity<Interval>& outer, const Quantity<Interval>& inner);

TokenSet set_intersection(const TokenSet& a, const TokenSet& b);

/// Componentwise minimum; throws MetricMismatch on length mismatch.
Vector vector_min(const Vector& a, const Vector& b);

/// What a child hands to its parent's composition: its operability and the
/// performance it contributes.
struct ChildState {
  int operability = 1;
  PerformanceValue performance;
};

/// Keyed by the child path relative to the composing component.
using ChildStates = std::map<std::string, ChildState>;

/// Applies `target`'s composition rule to its children's states. The result
/// covers every metric of `target`: bound metrics come from their kernel,
/// unbound ones from `own` when present there and from nominal otherwise.
/// Throws CompositionError for a missing child, a missing metric, or a custom
/// table without a matching row.
PerformanceValue propagate(const Component& target, const ChildStates& children,
                           const PerformanceValue& own);

/// Unbound metrics at nominal, addressing the target by path inside `model`.
PerformanceValue propagate(const SystemModel& model, std::string_view target,
                           const ChildStates& children);

}  // namespace ftr
