#include "random_model.hpp"

#include <stdexcept>

namespace ftr::testing {

namespace {

struct MetricShape {
  std::string name;
  MetricKind kind;
  std::string unit;
  std::size_t length;
};

class Generator {
 public:
  Generator(std::mt19937_64& rng, const RandomModelOptions& options) : rng_(rng), opt_(options) {}

  SystemModel run() {
    const auto metric_count = 1 + below(3);
    for (std::size_t i = 0; i < metric_count; ++i) {
      static const MetricKind kinds[] = {MetricKind::scalar, MetricKind::interval,
                                         MetricKind::vector, MetricKind::set};
      const auto kind = kinds[below(4)];
      shapes_.push_back({"m" + std::to_string(i), kind, chance(0.5) ? "u" + std::to_string(i) : "",
                         kind == MetricKind::vector ? 1 + below(3) : 0});
    }

    SystemModel model;
    model.root = shape("S", 0);
    // Faults are scattered over the whole tree.
    const auto fault_count = below(opt_.max_faults + 1);
    std::vector<Component*> nodes;
    collect(model.root, nodes);
    for (std::size_t i = 0; i < fault_count; ++i) {
      Fault f{"f" + std::to_string(i), chance(0.5) ? text() : ""};
      universe_.push_back(f.id);
      nodes[below(nodes.size())]->faults.push_back(std::move(f));
    }
    decorate(model.root);
    return model;
  }

 private:
  std::size_t below(std::size_t n) {
    return n == 0 ? 0 : std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_);
  }
  bool chance(double p) { return std::bernoulli_distribution(p)(rng_); }
  double grid() { return static_cast<double>(static_cast<int>(below(7)) - 3); }

  double number() {
    switch (below(4)) {
      case 0: return grid();
      case 1: return grid() / 4.0;
      case 2: return std::uniform_real_distribution<double>(-1e3, 1e3)(rng_);
      default: return grid() * 1e-7;
    }
  }

  std::string text() {
    static const char* plain[] = {"motor", "planner lost", "short circuit", "watchdog", ""};
    if (!opt_.exotic_text) return plain[below(5)];
    std::string out;
    const auto n = below(12);
    for (std::size_t i = 0; i < n; ++i) {
      static const char alphabet[] = "ab Z#\"\\\t\n\r,[]{}()->*\x01\x7f\xc3\xa9";
      out += alphabet[below(sizeof alphabet - 1)];
    }
    return out;
  }

  Component shape(const std::string& name, std::size_t depth) {
    Component c;
    c.name = name;
    if (depth < opt_.max_depth && (depth == 0 ? chance(0.85) : chance(0.4))) {
      const auto n = 1 + below(opt_.max_children);
      for (std::size_t i = 0; i < n; ++i) c.children.push_back(shape("C" + std::to_string(next_id_++), depth + 1));
    }
    return c;
  }

  void collect(Component& c, std::vector<Component*>& out) {
    out.push_back(&c);
    for (auto& child : c.children) collect(child, out);
  }

  MetricValue value(const MetricShape& s) {
    switch (s.kind) {
      case MetricKind::scalar: return number();
      case MetricKind::interval: {
        double a = grid(), b = grid();
        if (a > b) std::swap(a, b);
        return Interval{a, b};
      }
      case MetricKind::vector: {
        Vector v;
        for (std::size_t i = 0; i < s.length; ++i) v.push_back(grid());
        return v;
      }
      case MetricKind::set: {
        TokenSet t;
        for (const char* token : {"a", "b", "c"})
          if (chance(0.6)) t.insert(token);
        return t;
      }
    }
    throw std::logic_error("bad kind");
  }

  // Declared metrics of every node are chosen before any binding refers to them.
  void declare(Component& c) {
    for (const auto& s : shapes_) {
      if (!chance(0.7)) continue;
      MetricSpec spec;
      spec.name = s.name;
      spec.kind = s.kind;
      spec.unit = s.unit;
      spec.length = s.length;
      spec.direction = (s.kind == MetricKind::interval || s.kind == MetricKind::set)
                           ? Direction::containment
                           : Direction::higher_is_better;
      if (chance(0.1)) spec.tolerance = below(3) * 0.5;
      c.metrics.push_back(spec);
      c.nominal[s.name] = value(s);
    }
    for (auto& child : c.children) declare(child);
  }

  void paths(const Component& c, const std::string& prefix, std::vector<std::pair<std::string, const Component*>>& out) {
    for (const auto& child : c.children) {
      const auto p = prefix.empty() ? child.name : prefix + "." + child.name;
      out.emplace_back(p, &child);
      paths(child, p, out);
    }
  }

  const MetricShape& shape_of(const std::string& name) const {
    for (const auto& s : shapes_)
      if (s.name == name) return s;
    throw std::logic_error("unknown metric");
  }

  void compose(Component& c) {
    if (c.children.empty() || !chance(0.65)) return;
    CompositionRule rule;
    rule.combiner = chance(0.5) ? OperabilityCombiner::min_of_children
                                : OperabilityCombiner::declared_by_effect_rules;
    std::vector<std::pair<std::string, const Component*>> below_me;
    paths(c, "", below_me);
    for (const auto& spec : c.metrics) {
      if (!chance(0.7)) continue;
      const auto& s = shape_of(spec.name);
      MetricBinding b;
      b.metric = spec.name;
      const auto pick = below(10);
      if (pick < 2) {
        b.kernel = Kernel::custom_table;
        for (const auto& [p, node] : below_me)
          if (chance(0.5) && b.table_children.size() < 2) b.table_children.push_back(p);
        if (b.table_children.empty()) b.table_children.push_back(below_me.front().first);
        const auto rows = below(3);
        for (std::size_t r = 0; r < rows; ++r) {
          TableRow row;
          for (std::size_t i = 0; i < b.table_children.size(); ++i) {
            const auto h = below(4);
            row.health.push_back(h == 3 ? std::nullopt : std::optional<int>(static_cast<int>(h) - 1));
          }
          row.value = value(s);
          b.rows.push_back(std::move(row));
        }
        TableRow fallback;
        fallback.health.assign(b.table_children.size(), std::nullopt);
        fallback.value = value(s);
        b.rows.push_back(std::move(fallback));
      } else {
        switch (s.kind) {
          case MetricKind::scalar: b.kernel = Kernel::scalar_min; break;
          case MetricKind::interval: b.kernel = Kernel::interval_sum; break;
          case MetricKind::vector: b.kernel = Kernel::vector_min; break;
          case MetricKind::set: b.kernel = Kernel::set_intersection; break;
        }
        if (pick < 4) b.kernel = Kernel::all_children_required;
        for (const auto& [p, node] : below_me)
          if (node->metric(spec.name) != nullptr && chance(0.7)) b.sources.push_back({p, spec.name});
        if (b.sources.empty()) continue;
      }
      rule.bindings.push_back(std::move(b));
    }
    c.composition = std::move(rule);
  }

  void rules(Component& c) {
    const auto n = below(4);
    for (std::size_t i = 0; i < n; ++i) {
      EffectRule r;
      switch (below(5)) {
        case 0: r.match.kind = MatchKind::exact_set; break;
        case 1: r.match.kind = MatchKind::superset_of; break;
        case 2: r.match.kind = MatchKind::cardinality_at_most; break;
        case 3: r.match.kind = MatchKind::cardinality_exactly; break;
        default: r.match.kind = MatchKind::any; break;
      }
      if (r.match.kind == MatchKind::exact_set || r.match.kind == MatchKind::superset_of) {
        for (const auto& id : universe_)
          if (chance(0.4)) r.match.faults.insert(id);
      } else if (r.match.kind != MatchKind::any) {
        r.match.cardinality = below(3);
      }
      r.maintains_safe_state = chance(0.75);
      r.provides_functionality = chance(0.6);
      for (const auto& spec : c.metrics) {
        if (c.composition && c.composition->binding_for(spec.name) != nullptr) continue;
        if (chance(0.35)) r.performance[spec.name] = value(shape_of(spec.name));
      }
      if (chance(0.3)) r.note = text();
      c.rules.push_back(std::move(r));
    }
  }

  void finish(Component& c) {
    compose(c);
    rules(c);
    if (chance(0.6)) c.functionality = text();
    if (chance(0.2)) c.predicate = "p" + std::to_string(below(3));
    for (auto& child : c.children) finish(child);
  }

  void decorate(Component& root) {
    declare(root);
    finish(root);
  }

  std::mt19937_64& rng_;
  RandomModelOptions opt_;
  std::vector<MetricShape> shapes_;
  std::vector<std::string> universe_;
  std::size_t next_id_ = 0;
};

}  // namespace

SystemModel random_model(std::mt19937_64& rng, const RandomModelOptions& options) {
  for (int attempt = 0; attempt < 100; ++attempt) {
    auto model = Generator(rng, options).run();
    if (validate_model(model).empty()) return model;
  }
  throw std::runtime_error("random model generator keeps producing invalid models");
}

}  // namespace ftr::testing
