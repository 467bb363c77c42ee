#include "ftr/report.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "json.hpp"

#include "ftr/dsl.hpp"
#include "ftr/error.hpp"

namespace ftr {

using nlohmann::json;

std::string model_digest(const SystemModel& model) {
  const auto text = serialize_model(model);
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(text.data(), text.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw Error("sha256 failed");
  std::string out = "sha256:";
  char hex[3];
  for (unsigned i = 0; i < len; ++i) {
    std::snprintf(hex, sizeof hex, "%02x", md[i]);
    out += hex;
  }
  return out;
}

CrosscheckRow to_row(const sim::ConsistencyReport& report) {
  return {report.target, report.combination, report.predicted.regime, report.observed.regime,
          report.differing_criteria};
}

bool ReportBundle::has_fail_unsafe() const {
  return std::any_of(targets.begin(), targets.end(), [](const TargetReport& t) {
    const auto it = t.enumeration.regime_sets.find(Regime::fail_unsafe);
    return it != t.enumeration.regime_sets.end() && !it->second.empty();
  });
}

bool ReportBundle::has_mismatch() const {
  return std::any_of(crosschecks.begin(), crosschecks.end(),
                     [](const CrosscheckRow& r) { return !r.match(); });
}

ReportBundle build_report(const SystemModel& model, const std::vector<std::string>& targets,
                          const EnumerationOptions& options) {
  ReportBundle bundle;
  bundle.model_digest = model_digest(model);
  bundle.max_cardinality = options.max_cardinality;
  bundle.mode = options.mode;
  for (const auto& target : targets) {
    TargetReport t;
    t.enumeration = enumerate(model, target, options);
    t.cut_sets = minimal_unsafe_cut_sets(t.enumeration);
    bundle.targets.push_back(std::move(t));
  }
  return bundle;
}

std::optional<Format> format_from_string(std::string_view text) {
  if (text == "json") return Format::json;
  if (text == "csv") return Format::csv;
  if (text == "markdown" || text == "md") return Format::markdown;
  return std::nullopt;
}

namespace {

json criteria_json(const CriteriaTrace& t) {
  return {{kCriterionNames[0], to_string(t.fault_present)},
          {kCriterionNames[1], to_string(t.safe_state)},
          {kCriterionNames[2], to_string(t.functional)},
          {kCriterionNames[3], to_string(t.performance)}};
}

json verdict_json(const FaultCombination& combination, const RegimeVerdict& v,
                  const OperabilityVerdict* o) {
  json j = {{"combination", combination.to_string()},
            {"regime", to_string(v.regime)},
            {"criteria", criteria_json(v.trace)},
            {"comparison", to_string(v.comparison)},
            {"evidence", v.evidence}};
  if (o != nullptr)
    j["operability"] = {{"value", o->as_int()},
                        {"safe_state", o->safe_state},
                        {"functional", o->functional},
                        {"evidence", o->evidence}};
  else
    j["operability"] = nullptr;
  return j;
}

json combinations_json(const std::vector<FaultCombination>& list) {
  json out = json::array();
  for (const auto& f : list) out.push_back(f.to_string());
  return out;
}

std::string render_json(const ReportBundle& b) {
  json root;
  root["schema_version"] = kReportSchemaVersion;
  root["tool_version"] = b.tool_version;
  root["model_digest"] = b.model_digest;
  root["parameters"] = {{"max_cardinality", b.max_cardinality}, {"mode", to_string(b.mode)}};
  root["targets"] = json::array();
  for (const auto& t : b.targets) {
    json jt;
    jt["target"] = t.enumeration.target;
    jt["verdicts"] = json::array();
    for (const auto& e : t.enumeration.entries)
      jt["verdicts"].push_back(
          verdict_json(e.combination, e.verdict, e.operability ? &*e.operability : nullptr));
    jt["regime_sets"] = json::object();
    for (const auto& [regime, list] : t.enumeration.regime_sets)
      jt["regime_sets"][to_string(regime)] = combinations_json(list);
    jt["cut_sets"] = combinations_json(t.cut_sets);
    root["targets"].push_back(std::move(jt));
  }
  root["crosschecks"] = json::array();
  for (const auto& r : b.crosschecks)
    root["crosschecks"].push_back({{"target", r.target},
                                   {"combination", r.combination.to_string()},
                                   {"predicted", to_string(r.predicted)},
                                   {"observed", to_string(r.observed)},
                                   {"differing_criteria", r.differing_criteria},
                                   {"match", r.match()}});
  return root.dump(2) + "\n";
}

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n\r") == std::string::npos) return text;
  std::string out = "\"";
  for (const char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string fact(const std::optional<OperabilityVerdict>& o, bool OperabilityVerdict::*field) {
  if (!o) return "unknown";
  return (*o).*field ? "true" : "false";
}

std::string render_csv(const ReportBundle& b) {
  std::string out = "combination,target,regime,safe_state,functional,perf_comparison\n";
  for (const auto& t : b.targets)
    for (const auto& e : t.enumeration.entries) {
      out += csv_field(e.combination.to_string()) + ',' + csv_field(t.enumeration.target) + ',' +
             to_string(e.verdict.regime) + ',' +
             fact(e.operability, &OperabilityVerdict::safe_state) + ',' +
             fact(e.operability, &OperabilityVerdict::functional) + ',' +
             to_string(e.verdict.comparison) + '\n';
    }
  return out;
}

std::string md_cell(const std::string& text) {
  std::string out;
  for (const char c : text) {
    if (c == '|') out += "\\|";
    else if (c == '\n') out += ' ';
    else out += c;
  }
  return out;
}

std::string render_markdown(const ReportBundle& b) {
  std::ostringstream out;
  out << "# Fault tolerance regimes\n\n";
  out << "- model: `" << b.model_digest << "`\n";
  out << "- tool version: " << b.tool_version << "\n";
  out << "- max cardinality: " << b.max_cardinality << ", mode: " << to_string(b.mode) << "\n";
  for (const auto& t : b.targets) {
    out << "\n## " << md_cell(t.enumeration.target) << "\n\n";
    out << "| f | fault present | safe state | functionality | performance >= nominal | regime | "
           "evidence |\n";
    out << "|---|---|---|---|---|---|---|\n";
    for (const auto& e : t.enumeration.entries) {
      const auto& tr = e.verdict.trace;
      out << "| " << md_cell(e.combination.to_string()) << " | " << to_string(tr.fault_present)
          << " | " << to_string(tr.safe_state) << " | " << to_string(tr.functional) << " | "
          << to_string(tr.performance) << " | " << to_string(e.verdict.regime) << " | "
          << md_cell(e.verdict.evidence) << " |\n";
    }
    out << "\nMinimal unsafe cut sets: ";
    if (t.cut_sets.empty()) out << "none";
    for (std::size_t i = 0; i < t.cut_sets.size(); ++i)
      out << (i ? ", " : "") << '`' << t.cut_sets[i].to_string() << '`';
    out << "\n";
  }
  if (!b.crosschecks.empty()) {
    out << "\n## Simulation cross-check\n\n";
    out << "| target | f | predicted | observed | differing criteria | match |\n";
    out << "|---|---|---|---|---|---|\n";
    for (const auto& r : b.crosschecks) {
      std::string diff;
      for (const auto& c : r.differing_criteria) diff += (diff.empty() ? "" : ", ") + c;
      out << "| " << md_cell(r.target) << " | " << md_cell(r.combination.to_string()) << " | "
          << to_string(r.predicted) << " | " << to_string(r.observed) << " | "
          << (diff.empty() ? "-" : diff) << " | " << (r.match() ? "yes" : "no") << " |\n";
    }
  }
  return out.str();
}

template <typename T>
T required(const std::optional<T>& value, const std::string& what) {
  if (!value) throw Error("malformed report: bad " + what);
  return *value;
}

CriteriaTrace parse_criteria(const json& j) {
  CriteriaTrace t;
  t.fault_present = required(answer_from_string(j.at(kCriterionNames[0]).get<std::string>()), "answer");
  t.safe_state = required(answer_from_string(j.at(kCriterionNames[1]).get<std::string>()), "answer");
  t.functional = required(answer_from_string(j.at(kCriterionNames[2]).get<std::string>()), "answer");
  t.performance = required(answer_from_string(j.at(kCriterionNames[3]).get<std::string>()), "answer");
  return t;
}

std::vector<FaultCombination> parse_combinations(const json& j) {
  std::vector<FaultCombination> out;
  for (const auto& item : j) out.push_back(FaultCombination::parse(item.get<std::string>()));
  return out;
}

bool same(const std::optional<OperabilityVerdict>& a, const std::optional<OperabilityVerdict>& b) {
  if (a.has_value() != b.has_value()) return false;
  if (!a) return true;
  return a->safe_state == b->safe_state && a->functional == b->functional &&
         a->evidence == b->evidence;
}

bool same(const EnumerationReport& a, const EnumerationReport& b) {
  if (a.target != b.target || a.max_cardinality != b.max_cardinality || a.mode != b.mode ||
      a.regime_sets != b.regime_sets || a.entries.size() != b.entries.size())
    return false;
  for (std::size_t i = 0; i < a.entries.size(); ++i) {
    const auto& x = a.entries[i];
    const auto& y = b.entries[i];
    if (x.combination != y.combination || !(x.verdict == y.verdict) ||
        !same(x.operability, y.operability))
      return false;
  }
  return true;
}

}  // namespace

std::string render(const ReportBundle& bundle, Format format) {
  switch (format) {
    case Format::json: return render_json(bundle);
    case Format::csv: return render_csv(bundle);
    case Format::markdown: return render_markdown(bundle);
  }
  return {};
}

ReportBundle parse_json_report(std::string_view text) {
  try {
    const json root = json::parse(text);
    if (root.at("schema_version").get<int>() != kReportSchemaVersion)
      throw Error("unsupported report schema version");
    ReportBundle b;
    b.tool_version = root.at("tool_version").get<std::string>();
    b.model_digest = root.at("model_digest").get<std::string>();
    const auto& params = root.at("parameters");
    b.max_cardinality = params.at("max_cardinality").get<std::size_t>();
    b.mode = required(mode_from_string(params.at("mode").get<std::string>()), "mode");
    for (const auto& jt : root.at("targets")) {
      TargetReport t;
      t.enumeration.target = jt.at("target").get<std::string>();
      t.enumeration.max_cardinality = b.max_cardinality;
      t.enumeration.mode = b.mode;
      for (const auto& jv : jt.at("verdicts")) {
        ClassifiedCombination e;
        e.combination = FaultCombination::parse(jv.at("combination").get<std::string>());
        e.verdict.regime = required(regime_from_string(jv.at("regime").get<std::string>()), "regime");
        e.verdict.trace = parse_criteria(jv.at("criteria"));
        e.verdict.comparison =
            required(comparison_from_string(jv.at("comparison").get<std::string>()), "comparison");
        e.verdict.evidence = jv.at("evidence").get<std::string>();
        const auto& jo = jv.at("operability");
        if (!jo.is_null())
          e.operability = OperabilityVerdict{jo.at("safe_state").get<bool>(),
                                             jo.at("functional").get<bool>(),
                                             jo.at("evidence").get<std::string>()};
        t.enumeration.entries.push_back(std::move(e));
      }
      for (const auto& [name, list] : jt.at("regime_sets").items())
        t.enumeration.regime_sets[required(regime_from_string(name), "regime")] =
            parse_combinations(list);
      t.cut_sets = parse_combinations(jt.at("cut_sets"));
      b.targets.push_back(std::move(t));
    }
    for (const auto& jr : root.at("crosschecks")) {
      CrosscheckRow r;
      r.target = jr.at("target").get<std::string>();
      r.combination = FaultCombination::parse(jr.at("combination").get<std::string>());
      r.predicted = required(regime_from_string(jr.at("predicted").get<std::string>()), "regime");
      r.observed = required(regime_from_string(jr.at("observed").get<std::string>()), "regime");
      r.differing_criteria = jr.at("differing_criteria").get<std::vector<std::string>>();
      b.crosschecks.push_back(std::move(r));
    }
    return b;
  } catch (const json::exception& e) {
    throw Error(std::string("malformed report: ") + e.what());
  }
}

bool operator==(const ReportBundle& a, const ReportBundle& b) {
  if (a.model_digest != b.model_digest || a.tool_version != b.tool_version ||
      a.max_cardinality != b.max_cardinality || a.mode != b.mode ||
      a.crosschecks != b.crosschecks || a.targets.size() != b.targets.size())
    return false;
  for (std::size_t i = 0; i < a.targets.size(); ++i)
    if (!same(a.targets[i].enumeration, b.targets[i].enumeration) ||
        a.targets[i].cut_sets != b.targets[i].cut_sets)
      return false;
  return true;
}

std::string render_verdict_json(std::string_view target, const FaultCombination& combination,
                                const RegimeVerdict& verdict, const OperabilityVerdict* operability) {
  json j = verdict_json(combination, verdict, operability);
  j["target"] = std::string(target);
  return j.dump(2) + "\n";
}

}  // namespace ftr
