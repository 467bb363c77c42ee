#include <cmath>
#include <map>
#include <set>

#include "ftr/dsl.hpp"
#include "ftr/model.hpp"

namespace ftr {

namespace {

class Validator {
 public:
  explicit Validator(const SystemModel& model) : model_(model) {
    const auto all = model.fault_universe();
    universe_.insert(all.begin(), all.end());
  }

  std::vector<Diagnostic> run() {
    visit(model_.root, model_.root.name);
    return std::move(out_);
  }

 private:
  void report(std::string code, std::string path, std::string element, std::string message,
              std::optional<std::size_t> rule = std::nullopt) {
    out_.push_back({std::move(code), std::move(path), rule, std::move(element), std::move(message)});
  }

  void check_value(const MetricSpec& spec, const MetricValue& value, const std::string& where,
                   const std::string& element, std::optional<std::size_t> rule = std::nullopt) {
    if (kind_of(value) != spec.kind) {
      report("kind-mismatch", where, element,
             std::string("value of kind ") + to_string(kind_of(value)) + " for " +
                 to_string(spec.kind) + " metric at " + where,
             rule);
      return;
    }
    auto finite = [](double x) { return std::isfinite(x); };
    switch (spec.kind) {
      case MetricKind::scalar:
        if (!finite(std::get<double>(value)))
          report("non-finite", where, element, "non-finite number at " + where, rule);
        break;
      case MetricKind::interval: {
        const auto& i = std::get<Interval>(value);
        if (!finite(i.lo) || !finite(i.hi))
          report("non-finite", where, element, "non-finite number at " + where, rule);
        else if (!i.well_formed())
          report("interval-inverted", where, element, "interval lo>hi at " + where, rule);
        break;
      }
      case MetricKind::vector: {
        const auto& v = std::get<Vector>(value);
        if (v.size() != spec.length)
          report("vector-length-mismatch", where, element,
                 "vector of length " + std::to_string(v.size()) + " for declared length " +
                     std::to_string(spec.length) + " at " + where,
                 rule);
        for (double x : v)
          if (!finite(x)) {
            report("non-finite", where, element, "non-finite number at " + where, rule);
            break;
          }
        break;
      }
      case MetricKind::set:
        for (const auto& token : std::get<TokenSet>(value))
          if (!dsl::is_identifier(token))
            report("invalid-token", where, element, "invalid set member '" + token + "' at " + where,
                   rule);
        break;
    }
  }

  void visit(const Component& c, const std::string& path) {
    if (!dsl::is_identifier(c.name) || c.name.find('.') != std::string::npos)
      report("invalid-name", path, element_key(path), "invalid component name '" + c.name + "'");

    std::set<std::string> child_names;
    for (const auto& child : c.children)
      if (!child_names.insert(child.name).second)
        report("duplicate-component", path + "." + child.name, element_key(path + "." + child.name),
               "duplicate component path " + path + "." + child.name);

    for (const auto& fault : c.faults) {
      const auto element = element_key(path, "fault", fault.id);
      if (fault.id.empty()) {
        report("empty-fault-id", path, element, "empty fault id at " + path);
        continue;
      }
      if (!dsl::is_identifier(fault.id) || fault.id.find('.') != std::string::npos)
        report("invalid-fault-id", path, element, "invalid fault id '" + fault.id + "' at " + path);
      const auto [it, fresh] = fault_owner_.emplace(fault.id, path);
      if (!fresh)
        report("duplicate-fault", path, element,
               "duplicate fault id '" + fault.id + "' at " + path + " (also declared at " +
                   it->second + ")");
    }

    std::set<std::string> metric_names;
    for (const auto& spec : c.metrics) {
      const auto where = path + "." + spec.name;
      const auto element = element_key(path, "metric", spec.name);
      if (!dsl::is_identifier(spec.name) || spec.name.find('.') != std::string::npos)
        report("invalid-name", where, element, "invalid metric name '" + spec.name + "'");
      if (!metric_names.insert(spec.name).second)
        report("duplicate-metric", where, element, "duplicate metric at " + where);
      if (spec.kind == MetricKind::vector && spec.length < 1)
        report("vector-length", where, element, "vector metric needs length >= 1 at " + where);
      if (spec.kind != MetricKind::vector && spec.length != 0)
        report("vector-length", where, element, "length given for non-vector metric at " + where);
      const bool needs_containment = spec.kind == MetricKind::interval || spec.kind == MetricKind::set;
      if (needs_containment != (spec.direction == Direction::containment))
        report("direction-mismatch", where, element,
               std::string(to_string(spec.kind)) + " metric cannot use direction " +
                   to_string(spec.direction) + " at " + where);
      if (!(spec.tolerance >= 0.0) || !std::isfinite(spec.tolerance))
        report("invalid-tolerance", where, element, "tolerance must be finite and >= 0 at " + where);
    }

    for (const auto& spec : c.metrics) {
      const auto it = c.nominal.find(spec.name);
      const auto where = path + "." + spec.name;
      if (it == c.nominal.end())
        report("nominal-missing", where, element_key(path, "metric", spec.name),
               "no nominal value for " + where);
      else
        check_value(spec, it->second, where, element_key(path, "nominal", spec.name));
    }
    for (const auto& [name, value] : c.nominal)
      if (c.metric(name) == nullptr)
        report("nominal-unknown", path + "." + name, element_key(path, "nominal", name),
               "nominal value for undeclared metric " + path + "." + name);

    for (std::size_t i = 0; i < c.rules.size(); ++i) check_rule(c, path, i);
    if (c.composition) check_composition(c, path);

    for (const auto& child : c.children) visit(child, path + "." + child.name);
  }

  void check_rule(const Component& c, const std::string& path, std::size_t index) {
    const auto& rule = c.rules[index];
    const auto element = element_key(path, "rule", std::to_string(index));
    for (const auto& id : rule.match.faults)
      if (universe_.count(id) == 0)
        report("unknown-fault", path, element,
               "rule " + std::to_string(index) + " at " + path + " references undeclared fault '" +
                   id + "'",
               index);
    if ((rule.match.kind == MatchKind::any || rule.match.kind == MatchKind::cardinality_at_most ||
         rule.match.kind == MatchKind::cardinality_exactly) &&
        !rule.match.faults.empty())
      report("match-shape", path, element, "fault list given for a cardinality/any match", index);
    for (const auto& [name, value] : rule.performance) {
      const auto* spec = c.metric(name);
      const auto where = path + "." + name;
      if (spec == nullptr) {
        report("rule-unknown-metric", where, element,
               "rule " + std::to_string(index) + " sets undeclared metric " + where, index);
        continue;
      }
      if (c.composition && c.composition->binding_for(name) != nullptr)
        report("rule-sets-composed-metric", where, element,
               "rule " + std::to_string(index) + " sets metric " + where +
                   " which the composition already produces",
               index);
      check_value(*spec, value, where, element, index);
    }
  }

  void check_composition(const Component& c, const std::string& path) {
    const auto& comp = *c.composition;
    if (c.children.empty())
      report("composition-without-children", path, element_key(path, "compose"),
             "composition declared on leaf component " + path);
    std::set<std::string> bound;
    for (const auto& binding : comp.bindings) {
      const auto where = path + "." + binding.metric;
      const auto element = element_key(path, "bind", binding.metric);
      const auto* spec = c.metric(binding.metric);
      if (spec == nullptr) {
        report("binding-unknown-metric", where, element, "binding for undeclared metric " + where);
        continue;
      }
      if (!bound.insert(binding.metric).second)
        report("binding-duplicate", where, element, "metric " + where + " bound twice");

      auto kernel_kind_ok = [&](MetricKind kind) {
        switch (binding.kernel) {
          case Kernel::interval_sum: return kind == MetricKind::interval;
          case Kernel::set_intersection: return kind == MetricKind::set;
          case Kernel::vector_min: return kind == MetricKind::vector;
          case Kernel::scalar_min: return kind == MetricKind::scalar;
          default: return true;
        }
      };
      if (!kernel_kind_ok(spec->kind))
        report("binding-kind", where, element,
               std::string(to_string(binding.kernel)) + " cannot produce " + to_string(spec->kind) +
                   " metric " + where);

      if (binding.kernel == Kernel::custom_table) {
        check_table(c, path, binding, *spec);
        continue;
      }
      if (binding.sources.empty())
        report("binding-empty", where, element, "binding for " + where + " has no sources");
      for (const auto& source : binding.sources) {
        const auto* child = source.child.empty() ? nullptr : c.descendant(source.child);
        if (child == nullptr || child == &c) {
          report("binding-unknown-child", where, element,
                 "binding for " + where + " references unknown child '" + source.child + "'");
          continue;
        }
        const auto* child_spec = child->metric(source.metric);
        const auto source_name = path + "." + source.child + "." + source.metric;
        if (child_spec == nullptr) {
          report("binding-unknown-child-metric", where, element,
                 "binding for " + where + " references unknown metric " + source_name);
          continue;
        }
        if (child_spec->kind != spec->kind)
          report("binding-kind", where, element,
                 "source " + source_name + " has kind " + to_string(child_spec->kind) + ", " +
                     where + " has kind " + to_string(spec->kind));
        else if (spec->kind == MetricKind::vector && child_spec->length != spec->length)
          report("binding-vector-length", where, element,
                 "source " + source_name + " has length " + std::to_string(child_spec->length));
        if (child_spec->unit != spec->unit)
          report("binding-unit", where, element,
                 "source " + source_name + " has unit '" + child_spec->unit + "', " + where +
                     " has unit '" + spec->unit + "'");
      }
    }
  }

  void check_table(const Component& c, const std::string& path, const MetricBinding& binding,
                   const MetricSpec& spec) {
    const auto where = path + "." + binding.metric;
    const auto element = element_key(path, "bind", binding.metric);
    if (binding.table_children.empty())
      report("binding-empty", where, element, "custom table for " + where + " lists no children");
    for (const auto& child : binding.table_children) {
      const auto* node = child.empty() ? nullptr : c.descendant(child);
      if (node == nullptr || node == &c)
        report("binding-unknown-child", where, element,
               "custom table for " + where + " references unknown child '" + child + "'");
    }
    if (!binding.sources.empty())
      report("binding-shape", where, element, "custom table for " + where + " takes no sources");
    for (const auto& row : binding.rows) {
      if (row.health.size() != binding.table_children.size())
        report("table-arity", where, element,
               "table row has " + std::to_string(row.health.size()) + " health entries, expected " +
                   std::to_string(binding.table_children.size()));
      for (const auto& h : row.health)
        if (h && (*h < -1 || *h > 1))
          report("table-health", where, element, "health value must be -1, 0 or 1 at " + where);
      check_value(spec, row.value, where, element);
    }
  }

  const SystemModel& model_;
  std::set<std::string> universe_;
  std::map<std::string, std::string> fault_owner_;
  std::vector<Diagnostic> out_;
};

}  // namespace

std::vector<Diagnostic> validate_model(const SystemModel& model) { return Validator(model).run(); }

}  // namespace ftr
