#include "ftr/composition.hpp"

#include <algorithm>
#include <iterator>

#include "ftr/error.hpp"

namespace ftr {

Interval interval_sum(const Interval& a, const Interval& b) { return {a.lo + b.lo, a.hi + b.hi}; }

Quantity<Interval> interval_sum(const Quantity<Interval>& a, const Quantity<Interval>& b) {
  if (a.unit != b.unit) throw UnitMismatch("cannot add [" + a.unit + "] and [" + b.unit + "]");
  return {interval_sum(a.value, b.value), a.unit};
}

bool interval_contains(const Interval& outer, const Interval& inner, double tolerance) {
  return outer.lo <= inner.lo + tolerance && inner.hi <= outer.hi + tolerance;
}

bool interval_contains(const Quantity<Interval>& outer, const Quantity<Interval>& inner) {
  if (outer.unit != inner.unit)
    throw UnitMismatch("cannot compare [" + outer.unit + "] with [" + inner.unit + "]");
  return interval_contains(outer.value, inner.value);
}

TokenSet set_intersection(const TokenSet& a, const TokenSet& b) {
  TokenSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
  return out;
}

Vector vector_min(const Vector& a, const Vector& b) {
  if (a.size() != b.size())
    throw MetricMismatch("vector lengths differ: " + std::to_string(a.size()) + " vs " +
                         std::to_string(b.size()));
  Vector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = std::min(a[i], b[i]);
  return out;
}

namespace {

const ChildState& state_of(const ChildStates& children, const std::string& child,
                           const std::string& parent) {
  const auto it = children.find(child);
  if (it == children.end())
    throw CompositionError("missing child '" + child + "' for composition at " + parent);
  return it->second;
}

const MetricValue& source_value(const ChildStates& children, const MetricSource& source,
                                const std::string& parent, MetricKind expected) {
  const auto& state = state_of(children, source.child, parent);
  const auto it = state.performance.find(source.metric);
  if (it == state.performance.end())
    throw CompositionError("child '" + source.child + "' provides no metric '" + source.metric +
                           "' at " + parent);
  if (kind_of(it->second) != expected)
    throw CompositionError("metric '" + source.child + "." + source.metric + "' is not of kind " +
                           to_string(expected) + " at " + parent);
  return it->second;
}

std::string health_text(const std::vector<int>& health) {
  std::string out = "(";
  for (std::size_t i = 0; i < health.size(); ++i) {
    if (i) out += ", ";
    out += std::to_string(health[i]);
  }
  return out + ")";
}

MetricValue apply_binding(const Component& target, const MetricSpec& spec,
                          const MetricBinding& binding, const ChildStates& children) {
  const std::string where = target.name + "." + binding.metric;
  switch (binding.kernel) {
    case Kernel::interval_sum: {
      Interval acc{0.0, 0.0};
      for (const auto& source : binding.sources)
        acc = interval_sum(acc, std::get<Interval>(source_value(children, source, where,
                                                                 MetricKind::interval)));
      return acc;
    }
    case Kernel::set_intersection: {
      std::optional<TokenSet> acc;
      for (const auto& source : binding.sources) {
        const auto& s = std::get<TokenSet>(source_value(children, source, where, MetricKind::set));
        acc = acc ? set_intersection(*acc, s) : s;
      }
      return acc.value_or(TokenSet{});
    }
    case Kernel::vector_min: {
      std::optional<Vector> acc;
      for (const auto& source : binding.sources) {
        const auto& v = std::get<Vector>(source_value(children, source, where, MetricKind::vector));
        acc = acc ? vector_min(*acc, v) : v;
      }
      return acc.value_or(Vector(spec.length, 0.0));
    }
    case Kernel::scalar_min: {
      std::optional<double> acc;
      for (const auto& source : binding.sources) {
        const double x = std::get<double>(source_value(children, source, where, MetricKind::scalar));
        acc = acc ? std::min(*acc, x) : x;
      }
      return acc.value_or(0.0);
    }
    case Kernel::all_children_required: {
      bool all_operable = true;
      for (const auto& source : binding.sources)
        all_operable = all_operable && state_of(children, source.child, where).operability == 1;
      if (binding.sources.empty() || !all_operable) return zero_value(spec.kind, spec.length);
      return source_value(children, binding.sources.front(), where, spec.kind);
    }
    case Kernel::custom_table: {
      std::vector<int> health;
      for (const auto& child : binding.table_children)
        health.push_back(state_of(children, child, where).operability);
      for (const auto& row : binding.rows) {
        if (row.health.size() != health.size()) continue;
        bool hit = true;
        for (std::size_t i = 0; i < health.size() && hit; ++i)
          hit = !row.health[i] || *row.health[i] == health[i];
        if (hit) return row.value;
      }
      throw CompositionError("no table entry for health " + health_text(health) + " at " + where);
    }
  }
  throw CompositionError("unknown kernel at " + where);
}

}  // namespace

PerformanceValue propagate(const Component& target, const ChildStates& children,
                           const PerformanceValue& own) {
  if (!target.composition)
    throw CompositionError("component '" + target.name + "' has no composition rule");
  PerformanceValue out;
  for (const auto& spec : target.metrics) {
    if (const auto* binding = target.composition->binding_for(spec.name)) {
      out[spec.name] = apply_binding(target, spec, *binding, children);
    } else if (const auto it = own.find(spec.name); it != own.end()) {
      out[spec.name] = it->second;
    } else if (const auto nom = target.nominal.find(spec.name); nom != target.nominal.end()) {
      out[spec.name] = nom->second;
    } else {
      throw CompositionError("metric '" + spec.name + "' of '" + target.name +
                             "' is neither bound nor nominal");
    }
  }
  return out;
}

PerformanceValue propagate(const SystemModel& model, std::string_view target,
                           const ChildStates& children) {
  const Component* component = model.find(target);
  if (component == nullptr) throw InvalidRequest("unknown component '" + std::string(target) + "'");
  return propagate(*component, children, {});
}

}  // namespace ftr
