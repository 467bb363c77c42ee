#include "ftr/model.hpp"

#include <algorithm>
#include <functional>

#include "ftr/error.hpp"

namespace ftr {

namespace {

constexpr std::string_view kEmptySymbol = "\xE2\x88\x85";  // ∅

std::string_view trim(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(" \t\r\n");
  return text.substr(first, last - first + 1);
}

}  // namespace

FaultCombination FaultCombination::parse(std::string_view text) {
  text = trim(text);
  FaultCombination out;
  if (text.empty() || text == kEmptySymbol || text == "none" || text == "{}") return out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto plus = text.find('+', start);
    const auto piece = trim(text.substr(start, plus == std::string_view::npos ? text.npos : plus - start));
    if (piece.empty()) throw InvalidRequest("empty fault id in combination '" + std::string(text) + "'");
    out.insert(std::string(piece));
    if (plus == std::string_view::npos) break;
    start = plus + 1;
  }
  return out;
}

bool FaultCombination::is_subset_of(const FaultCombination& other) const {
  return std::includes(other.members_.begin(), other.members_.end(), members_.begin(),
                       members_.end());
}

std::string FaultCombination::to_string() const {
  if (members_.empty()) return std::string(kEmptySymbol);
  std::string out;
  for (const auto& id : members_) {
    if (!out.empty()) out += '+';
    out += id;
  }
  return out;
}

const char* to_string(MatchKind kind) {
  switch (kind) {
    case MatchKind::exact_set: return "exact-set";
    case MatchKind::superset_of: return "superset-of";
    case MatchKind::cardinality_at_most: return "cardinality-at-most";
    case MatchKind::cardinality_exactly: return "cardinality-exactly";
    case MatchKind::any: return "any";
  }
  return "?";
}

bool FaultMatch::matches(const FaultCombination& combination) const {
  switch (kind) {
    case MatchKind::exact_set: return combination.members() == faults;
    case MatchKind::superset_of:
      return std::includes(combination.members().begin(), combination.members().end(),
                           faults.begin(), faults.end());
    case MatchKind::cardinality_at_most: return combination.size() <= cardinality;
    case MatchKind::cardinality_exactly: return combination.size() == cardinality;
    case MatchKind::any: return true;
  }
  return false;
}

const char* to_string(Kernel kernel) {
  switch (kernel) {
    case Kernel::interval_sum: return "interval-sum";
    case Kernel::set_intersection: return "set-intersection";
    case Kernel::vector_min: return "vector-min";
    case Kernel::scalar_min: return "scalar-min";
    case Kernel::all_children_required: return "all-children-required";
    case Kernel::custom_table: return "custom-table";
  }
  return "?";
}

const char* to_string(OperabilityCombiner combiner) {
  switch (combiner) {
    case OperabilityCombiner::min_of_children: return "min-of-children";
    case OperabilityCombiner::declared_by_effect_rules: return "declared-by-effect-rules";
  }
  return "?";
}

const MetricBinding* CompositionRule::binding_for(std::string_view metric) const {
  for (const auto& binding : bindings)
    if (binding.metric == metric) return &binding;
  return nullptr;
}

const MetricSpec* Component::metric(std::string_view metric_name) const {
  for (const auto& spec : metrics)
    if (spec.name == metric_name) return &spec;
  return nullptr;
}

const Component* Component::child(std::string_view child_name) const {
  for (const auto& c : children)
    if (c.name == child_name) return &c;
  return nullptr;
}

const Component* Component::descendant(std::string_view relative_path) const {
  const Component* node = this;
  while (!relative_path.empty()) {
    const auto dot = relative_path.find('.');
    node = node->child(relative_path.substr(0, dot));
    if (node == nullptr) return nullptr;
    relative_path = dot == std::string_view::npos ? std::string_view{} : relative_path.substr(dot + 1);
  }
  return node;
}

const Component* SystemModel::find(std::string_view path) const {
  const auto resolved = path_of(path);
  if (resolved.empty()) return nullptr;
  if (resolved == root.name) return &root;
  return root.descendant(std::string_view(resolved).substr(root.name.size() + 1));
}

std::string SystemModel::path_of(std::string_view path_or_name) const {
  if (path_or_name.empty()) return {};
  // Full path first.
  const auto dot = path_or_name.find('.');
  const std::string_view head = dot == std::string_view::npos ? path_or_name : path_or_name.substr(0, dot);
  if (head == std::string_view(root.name)) {
    if (dot == std::string_view::npos) return root.name;
    if (root.descendant(path_or_name.substr(dot + 1)) != nullptr) return std::string(path_or_name);
  }
  if (dot != std::string_view::npos) return {};
  // Unique bare name.
  std::string found;
  int hits = 0;
  std::function<void(const Component&, const std::string&)> walk = [&](const Component& c,
                                                                       const std::string& p) {
    if (c.name == path_or_name) {
      ++hits;
      found = p;
    }
    for (const auto& child : c.children) walk(child, p + "." + child.name);
  };
  walk(root, root.name);
  return hits == 1 ? found : std::string{};
}

std::vector<std::string> SystemModel::fault_universe() const {
  auto faults = subtree_faults(root);
  return {faults.begin(), faults.end()};
}

std::set<std::string> SystemModel::subtree_faults(const Component& component) const {
  std::set<std::string> out;
  std::function<void(const Component&)> walk = [&](const Component& c) {
    for (const auto& fault : c.faults) out.insert(fault.id);
    for (const auto& child : c.children) walk(child);
  };
  walk(component);
  return out;
}

std::vector<std::string> SystemModel::component_paths() const {
  std::vector<std::string> out;
  std::function<void(const Component&, const std::string&)> walk = [&](const Component& c,
                                                                       const std::string& p) {
    out.push_back(p);
    for (const auto& child : c.children) walk(child, p + "." + child.name);
  };
  walk(root, root.name);
  return out;
}

OperabilityVerdict OperabilityVerdict::from(bool safe_state, bool functional, std::string evidence) {
  OperabilityVerdict v;
  v.safe_state = safe_state;
  v.functional = safe_state && functional;
  v.evidence = std::move(evidence);
  return v;
}

const char* to_string(Regime regime) {
  switch (regime) {
    case Regime::operational: return "operational";
    case Regime::fail_operational: return "fail-operational";
    case Regime::fail_degraded: return "fail-degraded";
    case Regime::fail_safe: return "fail-safe";
    case Regime::fail_unsafe: return "fail-unsafe";
    case Regime::unknown: return "unknown";
  }
  return "?";
}

std::optional<Regime> regime_from_string(std::string_view text) {
  for (auto r : {Regime::operational, Regime::fail_operational, Regime::fail_degraded,
                 Regime::fail_safe, Regime::fail_unsafe, Regime::unknown})
    if (text == to_string(r)) return r;
  return std::nullopt;
}

const char* to_string(Comparison comparison) {
  switch (comparison) {
    case Comparison::at_least_nominal: return "at-least-nominal";
    case Comparison::below_nominal: return "below-nominal";
    case Comparison::incomparable: return "incomparable";
    case Comparison::not_applicable: return "not-applicable";
  }
  return "?";
}

std::optional<Comparison> comparison_from_string(std::string_view text) {
  for (auto c : {Comparison::at_least_nominal, Comparison::below_nominal, Comparison::incomparable,
                 Comparison::not_applicable})
    if (text == to_string(c)) return c;
  return std::nullopt;
}

const char* to_string(Answer answer) {
  switch (answer) {
    case Answer::yes: return "yes";
    case Answer::no: return "no";
    case Answer::skipped: return "-";
    case Answer::undetermined: return "?";
  }
  return "?";
}

std::optional<Answer> answer_from_string(std::string_view text) {
  for (auto a : {Answer::yes, Answer::no, Answer::skipped, Answer::undetermined})
    if (text == to_string(a)) return a;
  return std::nullopt;
}

}  // namespace ftr
