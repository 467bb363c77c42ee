#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "ftr/classifier.hpp"
#include "ftr/simkit.hpp"

namespace ftr {

inline constexpr int kReportSchemaVersion = 1;
inline constexpr const char* kToolVersion = "0.3.0";

/// "sha256:<hex>" of the canonical serialization.
std::string model_digest(const SystemModel& model);

struct CrosscheckRow {
  std::string target;
  FaultCombination combination;
  Regime predicted = Regime::unknown;
  Regime observed = Regime::unknown;
  std::vector<std::string> differing_criteria;

  bool match() const { return differing_criteria.empty() && predicted == observed; }
  friend bool operator==(const CrosscheckRow&, const CrosscheckRow&) = default;
};

CrosscheckRow to_row(const sim::ConsistencyReport& report);

struct TargetReport {
  EnumerationReport enumeration;
  std::vector<FaultCombination> cut_sets;
};

struct ReportBundle {
  std::string model_digest;
  std::string tool_version = kToolVersion;
  std::size_t max_cardinality = 1;
  Mode mode = Mode::strict;
  std::vector<TargetReport> targets;
  std::vector<CrosscheckRow> crosschecks;

  bool has_fail_unsafe() const;
  bool has_mismatch() const;
};

/// Enumerates each target and computes its cut sets.
ReportBundle build_report(const SystemModel& model, const std::vector<std::string>& targets,
                          const EnumerationOptions& options);

enum class Format { json, csv, markdown };

std::optional<Format> format_from_string(std::string_view text);

std::string render(const ReportBundle& bundle, Format format);

/// Inverse of the json rendering. Throws Error on malformed input.
ReportBundle parse_json_report(std::string_view text);

bool operator==(const ReportBundle& a, const ReportBundle& b);

/// Single verdict as a json object (used by `classify`).
std::string render_verdict_json(std::string_view target, const FaultCombination& combination,
                                const RegimeVerdict& verdict, const OperabilityVerdict* operability);

}  // namespace ftr
