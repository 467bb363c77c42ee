// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "ftr/classifier.hpp"
#include "ftr/dsl.hpp"
#include "ftr/error.hpp"
#include "ftr/report.hpp"
#include "ftr/simkit.hpp"
#include "support/fixtures.hpp"
#include "support/random_model.hpp"

#ifndef FTM_BINARY
#error "FTM_BINARY must name the ftm executable"
#endif

using namespace ftr;

namespace {

// Runtime limits in seconds; 0 means unbounded.
constexpr double kLimitSbw = 1.0;
constexpr double kLimitAds = 1.0;
constexpr double kLimitEquivalence = 60.0;
constexpr double kLimitCrosscheck = 30.0;

constexpr int kRandomModels = 1000;
constexpr std::size_t kRandomMaxFaults = 4;
constexpr int kRoundTripModels = 500;
constexpr int kFuzzInputs = 100000;

struct Check {
  std::ostringstream notes;
  bool ok = true;

  void expect(bool condition, const std::string& what) {
    if (!condition) {
      ok = false;
      notes << "\n    failed: " << what;
    }
  }
};

FaultCombination F(std::string_view text) { return FaultCombination::parse(text); }

std::string regime(const SystemModel& m, std::string_view target, std::string_view f) {
  return to_string(classify(m, target, F(f)).regime);
}

struct Corpus {
  std::vector<SystemModel> models;
};

const Corpus& corpus() {
  static const Corpus c = [] {
    Corpus out;
    out.models.push_back(testing::bundled("sbw.ftm"));
    out.models.push_back(testing::bundled("ads.ftm"));
    std::mt19937_64 rng(0xC0FFEE);
    testing::RandomModelOptions options;
    options.max_faults = kRandomMaxFaults;
    for (int i = 0; i < kRandomModels; ++i) out.models.push_back(testing::random_model(rng, options));
    return out;
  }();
  return c;
}

void criterion1(Check& c) {
  const auto sbw = testing::bundled("sbw.ftm");
  const auto weak = testing::bundled("sbw_weak_motor_b.ftm");
  c.expect(evaluate_operability(sbw, "SbW.MotorA", F("fA")).as_int() == 0, "o_A(fA) = 0");
  c.expect(regime(sbw, "SbW.MotorA", "fA") == "fail-safe", "Motor A fail-safe for fA");
  c.expect(regime(sbw, "SbW", "fA") == "fail-operational",
           "SbW fail-operational when Motor B contains the system nominal");
  const auto v = classify(weak, "SbW", F("fA"));
  c.expect(v.regime == Regime::fail_degraded, "SbW fail-degraded with the weaker Motor B");
  c.expect(v.trace.safe_state == Answer::yes, "safe state maintained with the weaker Motor B");
}

void criterion2(Check& c) {
  const auto ads = testing::bundled("ads.ftm");
  c.expect(regime(ads, "ADS", "fNADF_sensor") == "fail-operational", "full missions kept");
  const auto partial = available_performance(ads, "ADS", F("fNADF_partial"));
  const auto& missions = std::get<TokenSet>(partial.at("missions"));
  c.expect(!missions.empty() && missions.size() < 3, "empty != M_a < M_nom");
  c.expect(regime(ads, "ADS", "fNADF_partial") == "fail-degraded", "missions lost");
  c.expect(regime(ads, "ADS", "fNADF_quality") == "fail-degraded", "quality below nominal");
  c.expect(evaluate_operability(ads, "ADS.NADF", F("fNADF_all")).as_int() == 0, "o_NADF = 0");
  c.expect(regime(ads, "ADS", "fNADF_all") == "fail-safe", "fail-safe via minimal risk maneuver");
  c.expect(evaluate_operability(ads, "ADS.NADF", F("fNADF_total")).as_int() == -1, "o_NADF = -1");
  c.expect(evaluate_operability(ads, "ADS", F("fNADF_total")).as_int() == 0, "o_ADS = 0");
  c.expect(regime(ads, "ADS", "fNADF_total") == "fail-safe", "fail-safe via Safe Halt");
}

void criterion3(Check& c) {
  std::size_t compared = 0, mismatches = 0;
  for (const auto& m : corpus().models) {
    const auto universe = m.fault_universe();
    const auto all = subsets_up_to(universe, universe.size());
    for (const auto& target : m.component_paths())
      for (const auto& f : all)
        for (const auto mode : {Mode::strict, Mode::conservative}) {
          ++compared;
          std::string e1, e2;
          RegimeVerdict a, b;
          try {
            a = classify(m, target, f, mode);
          } catch (const Error& e) {
            e1 = e.what();
          }
          try {
            b = classify_by_definition(m, target, f, mode);
          } catch (const Error& e) {
            e2 = e.what();
          }
          if (!(a == b) || e1 != e2) ++mismatches;
        }
  }
  c.notes << " [" << compared << " verdict pairs, " << mismatches << " mismatches]";
  c.expect(mismatches == 0, "zero mismatches");
}

void criterion4(Check& c) {
  std::size_t violations = 0, checked = 0;
  for (const auto& m : corpus().models) {
    const auto universe = m.fault_universe();
    for (const auto& target : m.component_paths())
      for (const auto mode : {Mode::strict, Mode::conservative}) {
        EnumerationOptions o;
        o.max_cardinality = universe.size();
        o.mode = mode;
        const auto r = enumerate(m, target, o);
        std::map<FaultCombination, int> seen;
        for (const auto& [reg, list] : r.regime_sets)
          for (const auto& f : list) ++seen[f];
        for (const auto& e : r.entries) {
          ++checked;
          if (seen[e.combination] != 1) ++violations;
          if (mode == Mode::conservative && e.verdict.regime == Regime::unknown) ++violations;
        }
        std::size_t total = 0;
        for (const auto& [reg, list] : r.regime_sets) total += list.size();
        if (total != r.entries.size()) ++violations;
      }
  }
  c.notes << " [" << checked << " combinations, " << violations << " violations]";
  c.expect(violations == 0, "regime sets pairwise disjoint and exhaustive");
}

void criterion5(Check& c) {
  const auto sbw = testing::bundled("sbw.ftm");
  EnumerationOptions o;
  o.max_cardinality = sbw.fault_universe().size();
  const auto r = enumerate(sbw, "SbW", o);
  c.expect(r.entries.size() == 8, "2^|F| = 8 combinations classified");
  const auto* both = r.find(F("fA+fB"));
  c.expect(both != nullptr && both->verdict.regime == Regime::fail_unsafe, "{fA, fB} fail-unsafe");
  for (const auto& e : r.entries)
    c.expect(e.verdict.regime != Regime::unknown, "no unknown verdict for " + e.combination.to_string());
  c.expect(minimal_unsafe_cut_sets(r) == std::vector<FaultCombination>{F("fA+fB")},
           "minimal cut sets = [{fA, fB}]");
}

void criterion6(Check& c) {
  std::size_t runs = 0;
  for (const auto& [model_file, scenario_file] :
       {std::pair{"sbw.ftm", "sbw.scn"}, std::pair{"ads.ftm", "ads.scn"}}) {
    const auto m = testing::bundled(model_file);
    const auto s = sim::parse_scenario(testing::read_text(testing::model_path(scenario_file)));
    for (const auto& r : sim::crosscheck_all(m, s, 2)) {
      ++runs;
      c.expect(r.match(), std::string(model_file) + " " + r.combination.to_string() + " matches");
    }
  }
  const auto sbw = testing::bundled("sbw.ftm");
  const auto corrupted =
      sim::parse_scenario(testing::read_text(std::string(FTR_FIXTURES_DIR) + "/sbw_corrupted.scn"));
  const auto bad = sim::crosscheck(sbw, "SbW", corrupted.injected(), sim::simulate(sbw, corrupted));
  c.expect(!bad.match(), "corrupted fixture mismatches");
  c.expect(bad.differing_criteria == std::vector<std::string>{"performance"},
           "mismatch flagged on the performance criterion");
  c.notes << " [" << runs << " simulated combinations]";
}

void criterion7(Check& c) {
  auto round_trip = [&](const SystemModel& m, const std::string& label) {
    const auto text = serialize_model(m);
    const auto doc = parse_model(text);
    c.expect(doc.ok() && *doc.model == m, label + ": parse(serialize(m)) == m");
    if (doc.ok()) c.expect(serialize_model(*doc.model) == text, label + ": fixed point");
  };
  round_trip(testing::bundled("sbw.ftm"), "sbw");
  round_trip(testing::bundled("ads.ftm"), "ads");
  std::mt19937_64 rng(0xD51);
  testing::RandomModelOptions options;
  options.exotic_text = true;
  for (int i = 0; i < kRoundTripModels; ++i)
    round_trip(testing::random_model(rng, options), "random model " + std::to_string(i));

  // Half raw bytes, half byte-level mutations of the bundled model text.
  const auto seed_text = testing::read_text(testing::model_path("ads.ftm"));
  std::uniform_int_distribution<int> byte(0, 255);
  std::size_t rejected = 0;
  for (int i = 0; i < kFuzzInputs; ++i) {
    std::string text;
    if (i % 2 == 0) {
      text.resize(rng() % 256);
      for (auto& ch : text) ch = static_cast<char>(byte(rng));
    } else {
      text = seed_text;
      for (int k = 0; k < 3; ++k) text[rng() % text.size()] = static_cast<char>(byte(rng));
    }
    try {
      const auto doc = parse_model(text);
      if (!doc.ok()) ++rejected;
      if (doc.ok() == !doc.diagnostics.empty()) c.expect(false, "model xor diagnostics");
    } catch (...) {
      c.expect(false, "parser threw on fuzz input " + std::to_string(i));
    }
  }
  c.notes << " [" << kRoundTripModels << " random round trips, " << kFuzzInputs
          << " fuzz inputs, " << rejected << " rejected]";
}

std::string run_cli(const std::string& args, int& status) {
  const std::string command = std::string(FTM_BINARY) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(command.c_str(), "r");
  std::string out;
  if (pipe == nullptr) {
    status = -1;
    return out;
  }
  char buffer[4096];
  std::size_t n;
  while ((n = fread(buffer, 1, sizeof buffer, pipe)) > 0) out.append(buffer, n);
  const int raw = pclose(pipe);
  status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return out;
}

void criterion8(Check& c) {
  const auto model = testing::model_path("sbw.ftm");
  int s1 = 0, s2 = 0;
  const auto motor = run_cli("classify " + model + " --target SbW.MotorA --faults fA", s1);
  const auto system = run_cli("classify " + model + " --target SbW --faults fA", s2);
  c.expect(s1 == 0 && s2 == 0, "both invocations exit 0");
  c.expect(motor.find("\"regime\": \"fail-safe\"") != std::string::npos, "Motor A fail-safe");
  c.expect(system.find("\"regime\": \"fail-operational\"") != std::string::npos,
           "SbW fail-operational");
}

struct Criterion {
  int number;
  const char* title;
  double limit;
  std::function<void(Check&)> run;
};

}  // namespace

int main() {
  const Criterion criteria[] = {
      {1, "steer-by-wire reproduction", kLimitSbw, criterion1},
      {2, "ADS reproduction", kLimitAds, criterion2},
      {3, "tree/definition equivalence", kLimitEquivalence, criterion3},
      {4, "partition property", 0, criterion4},
      {5, "multi-fault handling", 0, criterion5},
      {6, "simulation cross-check", kLimitCrosscheck, criterion6},
      {7, "DSL round trip and fuzzing", 0, criterion7},
      {8, "hierarchy applicability via CLI", 0, criterion8},
  };
  // The random corpus is shared by criteria 3 and 4; build it outside the timers.
  corpus();
  int failures = 0;
  for (const auto& cr : criteria) {
    Check check;
    const auto start = std::chrono::steady_clock::now();
    try {
      cr.run(check);
    } catch (const std::exception& e) {
      check.expect(false, std::string("exception: ") + e.what());
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (cr.limit > 0 && seconds >= cr.limit)
      check.expect(false, "runtime " + std::to_string(seconds) + " s over the limit");
    if (!check.ok) ++failures;
    std::printf("criterion %d %s: %s (%.3f s%s)%s\n", cr.number, cr.title,
                check.ok ? "PASS" : "FAIL", seconds,
                cr.limit > 0 ? (", limit " + std::to_string(static_cast<int>(cr.limit)) + " s").c_str()
                             : "",
                check.notes.str().c_str());
  }
  return failures;
}
