#include "ftr/dsl.hpp"

#include <sstream>

namespace ftr {

std::string element_key(std::string_view path, std::string_view kind, std::string_view name) {
  std::string key(path);
  if (!kind.empty()) {
    key += '#';
    key += kind;
    if (!name.empty()) {
      key += ':';
      key += name;
    }
  }
  return key;
}

std::optional<SourceSpan> ModelDocument::span_of(const std::string& element) const {
  if (const auto it = spans.find(element); it != spans.end()) return it->second;
  // Fall back to the enclosing component.
  if (const auto hash = element.find('#'); hash != std::string::npos) {
    if (const auto it = spans.find(element.substr(0, hash)); it != spans.end()) return it->second;
  }
  return std::nullopt;
}

std::string format_diagnostic(const ParseDiagnostic& d, std::string_view file) {
  std::ostringstream out;
  if (!file.empty()) out << file << ':';
  out << d.span.begin.line << ':' << d.span.begin.column << ": " << d.code << ": " << d.message;
  return out.str();
}

namespace {

using dsl::Cursor;
using dsl::SyntaxError;
using dsl::Token;
using dsl::TokenKind;

constexpr std::size_t kMaxDepth = 64;

class ModelParser {
 public:
  ModelParser(Cursor& cursor, std::map<std::string, SourceSpan>& spans)
      : cur_(cursor), spans_(spans) {}

  Component parse_root() {
    cur_.skip_newlines();
    if (cur_.at_end()) throw NoRoot{};
    if (!(cur_.peek().kind == TokenKind::word && cur_.peek().text == "component"))
      cur_.fail("expected 'component'");
    Component root = parse_component("", 0);
    cur_.skip_newlines();
    if (!cur_.at_end()) cur_.fail("only one root component is allowed");
    return root;
  }

  struct NoRoot {};

 private:
  SourceSpan line_span(const Token& first) const {
    return {first.pos, cur_.peek().pos};
  }

  Component parse_component(const std::string& parent_path, std::size_t depth) {
    if (depth > kMaxDepth) cur_.fail("components nested too deeply");
    const Token start = cur_.next();  // "component"
    Component c;
    c.name = cur_.expect_word("component name");
    const std::string path = parent_path.empty() ? c.name : parent_path + "." + c.name;
    cur_.expect_line_end();
    bool have_functionality = false;
    bool have_compose = false;
    while (true) {
      if (cur_.at_end()) cur_.fail("missing 'end' for component " + path);
      const Token head = cur_.peek();
      if (head.kind != TokenKind::word) cur_.fail("expected a section keyword");
      const std::string& word = head.text;
      if (word == "end") {
        cur_.next();
        spans_[element_key(path)] = {start.pos, cur_.peek().pos};
        cur_.expect_line_end();
        return c;
      }
      if (word == "component") {
        c.children.push_back(parse_component(path, depth + 1));
      } else if (word == "functionality") {
        if (have_functionality) cur_.fail("duplicate 'functionality' in " + path);
        have_functionality = true;
        cur_.next();
        c.functionality = cur_.expect_string("functionality text");
        if (cur_.accept_word("predicate")) c.predicate = cur_.expect_word("predicate name");
        cur_.expect_line_end();
      } else if (word == "faults") {
        parse_faults(c, path);
      } else if (word == "metrics") {
        parse_metrics(c, path);
      } else if (word == "nominal") {
        parse_nominal(c, path);
      } else if (word == "compose") {
        if (have_compose) cur_.fail("duplicate 'compose' in " + path);
        have_compose = true;
        parse_compose(c, path);
      } else if (word == "on-fault") {
        parse_rule(c, path);
      } else {
        cur_.fail("unknown keyword '" + word + "'");
      }
    }
  }

  void open_block() {
    cur_.next();
    cur_.expect_line_end();
  }

  bool close_block() {
    if (cur_.peek().kind == TokenKind::word && cur_.peek().text == "end") {
      cur_.next();
      cur_.expect_line_end();
      return true;
    }
    if (cur_.at_end()) cur_.fail("missing 'end'");
    return false;
  }

  void parse_faults(Component& c, const std::string& path) {
    open_block();
    while (!close_block()) {
      const Token first = cur_.peek();
      Fault fault;
      fault.id = cur_.expect_word("fault id");
      if (cur_.peek().kind == TokenKind::string) fault.description = cur_.next().text;
      spans_[element_key(path, "fault", fault.id)] = line_span(first);
      cur_.expect_line_end();
      c.faults.push_back(std::move(fault));
    }
  }

  void parse_metrics(Component& c, const std::string& path) {
    open_block();
    while (!close_block()) {
      const Token first = cur_.peek();
      MetricSpec spec;
      spec.name = cur_.expect_word("metric name");
      const Token kind_token = cur_.peek();
      const std::string kind = cur_.expect_word("metric kind");
      if (kind == "scalar") spec.kind = MetricKind::scalar;
      else if (kind == "interval") spec.kind = MetricKind::interval;
      else if (kind == "vector") spec.kind = MetricKind::vector;
      else if (kind == "set") spec.kind = MetricKind::set;
      else cur_.fail_at(kind_token, "unknown metric kind '" + kind + "'");
      spec.direction = (spec.kind == MetricKind::interval || spec.kind == MetricKind::set)
                           ? Direction::containment
                           : Direction::higher_is_better;
      if (spec.kind == MetricKind::vector) {
        const Token len = cur_.peek();
        const double n = cur_.expect_number("vector length");
        if (!(n >= 0 && n <= 1e6) || n != static_cast<double>(static_cast<std::size_t>(n)))
          cur_.fail_at(len, "vector length must be a non-negative integer");
        spec.length = static_cast<std::size_t>(n);
      }
      if (cur_.accept_word("unit")) spec.unit = cur_.expect_string("unit label");
      if (cur_.accept_word("higher-is-better")) spec.direction = Direction::higher_is_better;
      else if (cur_.accept_word("containment")) spec.direction = Direction::containment;
      if (cur_.accept_word("tolerance")) spec.tolerance = cur_.expect_number("tolerance");
      spans_[element_key(path, "metric", spec.name)] = line_span(first);
      cur_.expect_line_end();
      c.metrics.push_back(std::move(spec));
    }
  }

  void parse_nominal(Component& c, const std::string& path) {
    open_block();
    while (!close_block()) {
      const Token first = cur_.peek();
      const std::string name = cur_.expect_word("metric name");
      if (c.nominal.count(name)) cur_.fail_at(first, "duplicate nominal value for '" + name + "'");
      c.nominal[name] = cur_.parse_value();
      spans_[element_key(path, "nominal", name)] = line_span(first);
      cur_.expect_line_end();
    }
  }

  void parse_compose(Component& c, const std::string& path) {
    const Token start = cur_.next();  // "compose"
    CompositionRule rule;
    const Token combiner = cur_.peek();
    const std::string name = cur_.expect_word("operability combiner");
    if (name == "min-of-children") rule.combiner = OperabilityCombiner::min_of_children;
    else if (name == "declared-by-effect-rules")
      rule.combiner = OperabilityCombiner::declared_by_effect_rules;
    else cur_.fail_at(combiner, "unknown operability combiner '" + name + "'");
    cur_.expect_line_end();
    while (!close_block()) rule.bindings.push_back(parse_binding(path));
    spans_[element_key(path, "compose")] = {start.pos, cur_.peek().pos};
    c.composition = std::move(rule);
  }

  MetricBinding parse_binding(const std::string& path) {
    const Token first = cur_.peek();
    MetricBinding b;
    b.metric = cur_.expect_word("bound metric");
    const Token kernel_token = cur_.peek();
    const std::string kernel = cur_.expect_word("composition kernel");
    static const std::pair<const char*, Kernel> kKernels[] = {
        {"interval-sum", Kernel::interval_sum},
        {"set-intersection", Kernel::set_intersection},
        {"vector-min", Kernel::vector_min},
        {"scalar-min", Kernel::scalar_min},
        {"all-children-required", Kernel::all_children_required},
        {"custom-table", Kernel::custom_table}};
    bool known = false;
    for (const auto& [text, k] : kKernels)
      if (kernel == text) {
        b.kernel = k;
        known = true;
      }
    if (!known) cur_.fail_at(kernel_token, "unknown composition kernel '" + kernel + "'");

    if (b.kernel == Kernel::custom_table) {
      while (!cur_.at_line_end()) b.table_children.push_back(cur_.expect_word("child path"));
      spans_[element_key(path, "bind", b.metric)] = line_span(first);
      cur_.expect_line_end();
      while (!close_block()) {
        if (!cur_.accept_word("row")) cur_.fail("expected 'row' or 'end'");
        TableRow row;
        while (!(cur_.peek().kind == TokenKind::punct && cur_.peek().text == "->")) {
          if (cur_.accept_punct('*')) {
            row.health.push_back(std::nullopt);
            continue;
          }
          const Token h = cur_.peek();
          const double value = cur_.expect_number("health value, '*' or '->'");
          if (value != -1.0 && value != 0.0 && value != 1.0)
            cur_.fail_at(h, "health value must be -1, 0, 1 or '*'");
          row.health.push_back(static_cast<int>(value));
        }
        cur_.next();  // "->"
        row.value = cur_.parse_value();
        cur_.expect_line_end();
        b.rows.push_back(std::move(row));
      }
      return b;
    }
    while (!cur_.at_line_end()) {
      const Token src = cur_.peek();
      const std::string text = cur_.expect_word("child.metric source");
      const auto dot = text.rfind('.');
      if (dot == std::string::npos || dot == 0 || dot + 1 == text.size())
        cur_.fail_at(src, "source must be written child.metric");
      b.sources.push_back({text.substr(0, dot), text.substr(dot + 1)});
    }
    spans_[element_key(path, "bind", b.metric)] = line_span(first);
    cur_.expect_line_end();
    return b;
  }

  void parse_rule(Component& c, const std::string& path) {
    const Token start = cur_.next();  // "on-fault"
    EffectRule rule;
    const Token kind_token = cur_.peek();
    const std::string kind = cur_.expect_word("match kind");
    if (kind == "any") {
      rule.match.kind = MatchKind::any;
    } else if (kind == "exact-set" || kind == "superset-of") {
      rule.match.kind = kind == "exact-set" ? MatchKind::exact_set : MatchKind::superset_of;
      while (!cur_.at_line_end()) rule.match.faults.insert(cur_.expect_word("fault id"));
    } else if (kind == "cardinality-at-most" || kind == "cardinality-exactly") {
      rule.match.kind = kind == "cardinality-at-most" ? MatchKind::cardinality_at_most
                                                      : MatchKind::cardinality_exactly;
      const Token n_token = cur_.peek();
      const double n = cur_.expect_number("cardinality");
      if (!(n >= 0 && n <= 1e9) || n != static_cast<double>(static_cast<std::size_t>(n)))
        cur_.fail_at(n_token, "cardinality must be a non-negative integer");
      rule.match.cardinality = static_cast<std::size_t>(n);
    } else {
      cur_.fail_at(kind_token, "unknown match kind '" + kind + "'");
    }
    cur_.expect_line_end();
    while (!close_block()) {
      const Token head = cur_.peek();
      const std::string word = cur_.expect_word("rule statement");
      if (word == "safe") rule.maintains_safe_state = true;
      else if (word == "unsafe") rule.maintains_safe_state = false;
      else if (word == "functional") rule.provides_functionality = true;
      else if (word == "not-functional") rule.provides_functionality = false;
      else if (word == "note") rule.note = cur_.expect_string("note text");
      else if (word == "perf") {
        if (!cur_.accept_word("nominal")) {
          const Token metric_token = cur_.peek();
          const std::string metric = cur_.expect_word("metric name");
          if (rule.performance.count(metric))
            cur_.fail_at(metric_token, "duplicate performance entry for '" + metric + "'");
          rule.performance[metric] = cur_.parse_value();
        }
      } else {
        cur_.fail_at(head, "unknown rule statement '" + word + "'");
      }
      cur_.expect_line_end();
    }
    spans_[element_key(path, "rule", std::to_string(c.rules.size()))] = {start.pos,
                                                                          cur_.peek().pos};
    c.rules.push_back(std::move(rule));
  }

  Cursor& cur_;
  std::map<std::string, SourceSpan>& spans_;
};

void emit_component(std::ostringstream& out, const Component& c, int depth) {
  const std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
  const std::string in = pad + "  ";
  const std::string in2 = in + "  ";
  out << pad << "component " << c.name << '\n';
  if (!c.functionality.empty() || !c.predicate.empty()) {
    out << in << "functionality " << dsl::quote(c.functionality);
    if (!c.predicate.empty()) out << " predicate " << c.predicate;
    out << '\n';
  }
  if (!c.faults.empty()) {
    out << in << "faults\n";
    for (const auto& f : c.faults) {
      out << in2 << f.id;
      if (!f.description.empty()) out << ' ' << dsl::quote(f.description);
      out << '\n';
    }
    out << in << "end\n";
  }
  if (!c.metrics.empty()) {
    out << in << "metrics\n";
    for (const auto& m : c.metrics) {
      out << in2 << m.name << ' ' << to_string(m.kind);
      if (m.kind == MetricKind::vector) out << ' ' << m.length;
      out << " unit " << dsl::quote(m.unit) << ' ' << to_string(m.direction);
      if (m.tolerance != 0.0) out << " tolerance " << format_number(m.tolerance);
      out << '\n';
    }
    out << in << "end\n";
  }
  if (!c.nominal.empty()) {
    out << in << "nominal\n";
    for (const auto& [name, value] : c.nominal) out << in2 << name << ' ' << format_value(value) << '\n';
    out << in << "end\n";
  }
  if (c.composition) {
    out << in << "compose " << to_string(c.composition->combiner) << '\n';
    for (const auto& b : c.composition->bindings) {
      out << in2 << b.metric << ' ' << to_string(b.kernel);
      if (b.kernel == Kernel::custom_table) {
        for (const auto& child : b.table_children) out << ' ' << child;
        out << '\n';
        for (const auto& row : b.rows) {
          out << in2 << "  row";
          for (const auto& h : row.health) {
            if (h) out << ' ' << *h;
            else out << " *";
          }
          out << " -> " << format_value(row.value) << '\n';
        }
        out << in2 << "end\n";
      } else {
        for (const auto& s : b.sources) out << ' ' << s.child << '.' << s.metric;
        out << '\n';
      }
    }
    out << in << "end\n";
  }
  for (const auto& r : c.rules) {
    out << in << "on-fault " << to_string(r.match.kind);
    if (r.match.kind == MatchKind::exact_set || r.match.kind == MatchKind::superset_of)
      for (const auto& id : r.match.faults) out << ' ' << id;
    if (r.match.kind == MatchKind::cardinality_at_most ||
        r.match.kind == MatchKind::cardinality_exactly)
      out << ' ' << r.match.cardinality;
    out << '\n';
    out << in2 << (r.maintains_safe_state ? "safe" : "unsafe") << '\n';
    out << in2 << (r.provides_functionality ? "functional" : "not-functional") << '\n';
    if (r.performance.empty()) out << in2 << "perf nominal\n";
    for (const auto& [name, value] : r.performance)
      out << in2 << "perf " << name << ' ' << format_value(value) << '\n';
    if (!r.note.empty()) out << in2 << "note " << dsl::quote(r.note) << '\n';
    out << in << "end\n";
  }
  for (const auto& child : c.children) emit_component(out, child, depth + 1);
  out << pad << "end\n";
}

}  // namespace

ModelDocument parse_model(std::string_view text) {
  ModelDocument doc;
  doc.source = std::string(text);
  try {
    Cursor cursor(dsl::tokenize(text));
    ModelParser parser(cursor, doc.spans);
    SystemModel model;
    model.root = parser.parse_root();
    const auto diagnostics = validate_model(model);
    if (diagnostics.empty()) {
      doc.model = std::move(model);
      return doc;
    }
    for (const auto& d : diagnostics) {
      ParseDiagnostic pd{d.code, d.message, {}};
      if (const auto span = doc.span_of(d.element)) pd.span = *span;
      doc.diagnostics.push_back(std::move(pd));
    }
  } catch (const SyntaxError& e) {
    doc.diagnostics.push_back({"syntax", e.what(), e.span()});
  } catch (const ModelParser::NoRoot&) {
    doc.diagnostics.push_back({"no-root", "no root component", {}});
  }
  return doc;
}

std::string serialize_model(const SystemModel& model) {
  std::ostringstream out;
  emit_component(out, model.root, 0);
  return out.str();
}

}  // namespace ftr
