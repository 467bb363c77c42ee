// ftm: fault tolerance regime analysis from the command line.
//
// Exit codes: 0 ok, 1 model/scenario could not be loaded or is invalid,
// 2 fail-unsafe found or simulation mismatch, 3 usage error.

#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "ftr/classifier.hpp"
#include "ftr/dsl.hpp"
#include "ftr/error.hpp"
#include "ftr/report.hpp"
#include "ftr/simkit.hpp"

namespace {

enum Exit : int { kOk = 0, kInvalid = 1, kGate = 2, kUsage = 3 };

struct LoadFailure {};
struct UsageFailure {
  std::string message;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot read " << path << "\n";
    throw LoadFailure{};
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

ftr::SystemModel load_model(const std::string& path) {
  auto doc = ftr::parse_model(read_file(path));
  for (const auto& d : doc.diagnostics) std::cerr << ftr::format_diagnostic(d, path) << "\n";
  if (!doc.ok()) throw LoadFailure{};
  return std::move(*doc.model);
}

ftr::sim::Scenario load_scenario(const std::string& path) {
  const auto text = read_file(path);
  try {
    return ftr::sim::parse_scenario(text);
  } catch (const ftr::dsl::SyntaxError& e) {
    std::cerr << path << ':' << e.span().begin.line << ':' << e.span().begin.column
              << ": syntax: " << e.what() << "\n";
  } catch (const ftr::ScenarioError& e) {
    std::cerr << path << ": scenario: " << e.what() << "\n";
  }
  throw LoadFailure{};
}

void emit(const std::string& bytes, const std::string& output) {
  if (output.empty() || output == "-") {
    std::cout << bytes << std::flush;
    return;
  }
  std::ofstream out(output, std::ios::binary);
  if (!out) throw UsageFailure{"cannot write " + output};
  out << bytes;
}

ftr::Mode parse_mode(const std::string& text) {
  if (auto m = ftr::mode_from_string(text)) return *m;
  throw UsageFailure{"unknown mode '" + text + "'"};
}

ftr::Format parse_format(const std::string& text) {
  if (auto f = ftr::format_from_string(text)) return *f;
  throw UsageFailure{"unknown format '" + text + "'"};
}

nlohmann::json outcome_json(const ftr::sim::SimOutcome& o) {
  nlohmann::json perf = nlohmann::json::object();
  for (const auto& [name, value] : o.measured_performance) perf[name] = ftr::format_value(value);
  return {{"functionality_observed", o.functionality_observed},
          {"safe_state_observed", o.safe_state_observed},
          {"measured_performance", perf}};
}

nlohmann::json crosscheck_json(const ftr::sim::ConsistencyReport& r) {
  return {{"target", r.target},
          {"combination", r.combination.to_string()},
          {"predicted", ftr::to_string(r.predicted.regime)},
          {"observed", ftr::to_string(r.observed.regime)},
          {"differing_criteria", r.differing_criteria},
          {"match", r.match()}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fault tolerance regime analysis for hierarchical system models", "ftm"};
  app.set_config("--config", "", "read options from a TOML/INI file");
  app.set_version_flag("--version", ftr::kToolVersion);
  app.require_subcommand(1);

  std::string model_path, combination, mode_text = "strict", format_text = "json", output;
  std::string scenario_path, trace_path;
  std::vector<std::string> targets;
  std::size_t k = 1;
  std::size_t sim_k = 0;
  bool sim_k_set = false;
  unsigned long long budget = ftr::kDefaultBudget;
  unsigned jobs = 1;

  auto add_model = [&](CLI::App* cmd) {
    cmd->add_option("model", model_path, "model file")->required();
  };
  auto add_enumeration = [&](CLI::App* cmd) {
    cmd->add_option("-k,--max-cardinality", k, "largest fault combination to enumerate");
    cmd->add_option("--mode", mode_text, "strict or conservative");
    cmd->add_option("--budget", budget, "maximum number of combinations");
    cmd->add_option("-j,--jobs", jobs, "worker threads")->envname("FTM_JOBS");
  };

  auto* validate = app.add_subcommand("validate", "parse and validate a model");
  add_model(validate);

  auto* classify = app.add_subcommand("classify", "classify one fault combination");
  add_model(classify);
  classify->add_option("--target", targets, "component path or unique name")->required()->expected(1);
  classify->add_option("--faults", combination, "combination such as fA+fB")->required();
  classify->add_option("--mode", mode_text, "strict or conservative");

  auto* enumerate = app.add_subcommand("enumerate", "classify all combinations up to k");
  add_model(enumerate);
  enumerate->add_option("--target", targets, "component path or unique name")->required();
  add_enumeration(enumerate);
  enumerate->add_option("--format", format_text, "json, csv or markdown");
  enumerate->add_option("-o,--output", output, "output file (default stdout)");

  auto* simulate = app.add_subcommand("simulate", "run a scenario and cross-check the verdict");
  add_model(simulate);
  simulate->add_option("--scenario", scenario_path, "scenario file")->required();
  auto* faults_opt =
      simulate->add_option("--faults", combination, "inject this combination at the start");
  auto* all_opt = simulate->add_option("--all", sim_k, "cross-check every combination up to N");
  simulate->add_option("--trace", trace_path, "write the trace of a single run to this file");
  simulate->add_option("--mode", mode_text, "strict or conservative");
  simulate->add_option("-o,--output", output, "output file (default stdout)");
  faults_opt->excludes(all_opt);

  auto* report = app.add_subcommand("report", "enumeration plus optional simulation cross-check");
  add_model(report);
  report->add_option("--target", targets, "component path or unique name")->required();
  add_enumeration(report);
  report->add_option("--scenario", scenario_path, "scenario used for the cross-check");
  auto* report_sim_k =
      report->add_option("--sim-k", sim_k, "cross-check combinations up to N (default k)");
  report->add_option("--format", format_text, "json, csv or markdown");
  report->add_option("-o,--output", output, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e, std::cerr, std::cerr);
    return kUsage;
  }
  sim_k_set = report_sim_k->count() > 0;

  try {
    const auto mode = parse_mode(mode_text);
    if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());

    if (validate->parsed()) {
      const auto model = load_model(model_path);
      std::cerr << model_path << ": ok (" << model.component_paths().size() << " components, "
                << model.fault_universe().size() << " faults)\n";
      return kOk;
    }

    if (classify->parsed()) {
      const auto model = load_model(model_path);
      const auto f = ftr::FaultCombination::parse(combination);
      const auto& target = targets.front();
      ftr::check_request(model, target, f);
      const auto path = model.path_of(target);
      const auto verdict = ftr::classify(model, path, f, mode);
      std::optional<ftr::OperabilityVerdict> o;
      if (verdict.regime != ftr::Regime::unknown && !f.empty())
        o = ftr::evaluate_operability(model, path, f, mode);
      std::cout << ftr::render_verdict_json(path, f, verdict, o ? &*o : nullptr);
      if (verdict.regime == ftr::Regime::unknown)
        std::cerr << "warning: no effect rule decides " << f.to_string() << " (" << verdict.evidence
                  << ")\n";
      return verdict.regime == ftr::Regime::fail_unsafe ? kGate : kOk;
    }

    if (enumerate->parsed() || report->parsed()) {
      const auto model = load_model(model_path);
      const auto format = parse_format(format_text);
      std::optional<ftr::sim::Scenario> scenario;
      if (report->parsed() && !scenario_path.empty()) scenario = load_scenario(scenario_path);
      ftr::EnumerationOptions options;
      options.max_cardinality = k;
      options.mode = mode;
      options.budget = budget;
      options.jobs = jobs;
      auto bundle = ftr::build_report(model, targets, options);
      if (scenario) {
        for (const auto& r : ftr::sim::crosscheck_all(model, *scenario, sim_k_set ? sim_k : k, mode))
          bundle.crosschecks.push_back(ftr::to_row(r));
      }
      emit(ftr::render(bundle, format), output);
      for (const auto& t : bundle.targets) {
        for (const auto& cut : t.cut_sets)
          std::cerr << t.enumeration.target << ": minimal unsafe cut set " << cut.to_string() << "\n";
        for (const auto& w : ftr::lint_monotonicity(t.enumeration))
          std::cerr << t.enumeration.target << ": warning: " << w.superset.to_string()
                    << " performs better than its subset " << w.subset.to_string() << "\n";
      }
      for (const auto& r : bundle.crosschecks)
        if (!r.match())
          std::cerr << "mismatch: " << r.target << " " << r.combination.to_string() << "\n";
      return bundle.has_fail_unsafe() || bundle.has_mismatch() ? kGate : kOk;
    }

    if (simulate->parsed()) {
      const auto model = load_model(model_path);
      auto scenario = load_scenario(scenario_path);
      nlohmann::json out;
      bool mismatch = false;
      if (all_opt->count() > 0) {
        out["crosschecks"] = nlohmann::json::array();
        for (const auto& r : ftr::sim::crosscheck_all(model, scenario, sim_k, mode)) {
          out["crosschecks"].push_back(crosscheck_json(r));
          mismatch = mismatch || !r.match();
        }
      } else {
        if (faults_opt->count() > 0) scenario.inject_at_start(ftr::FaultCombination::parse(combination));
        const auto f = scenario.injected();
        ftr::check_request(model, scenario.target(), f);
        const auto outcome = ftr::sim::simulate(model, scenario);
        const auto r = ftr::sim::crosscheck(model, scenario.target(), f, outcome, mode);
        out["outcome"] = outcome_json(outcome);
        out["crosscheck"] = crosscheck_json(r);
        mismatch = !r.match();
        if (!trace_path.empty()) {
          std::ofstream trace(trace_path, std::ios::binary);
          if (!trace) throw UsageFailure{"cannot write " + trace_path};
          trace << ftr::sim::format_trace(outcome.trace);
        }
      }
      emit(out.dump(2) + "\n", output);
      return mismatch ? kGate : kOk;
    }
  } catch (const LoadFailure&) {
    return kInvalid;
  } catch (const UsageFailure& e) {
    std::cerr << "error: " << e.message << "\n";
    return kUsage;
  } catch (const ftr::InvalidRequest& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ftr::BudgetExceeded& e) {
    std::cerr << "error: " << e.what() << " (raise --budget or lower -k)\n";
    return kUsage;
  } catch (const ftr::ScenarioError& e) {
    std::cerr << "error: scenario: " << e.what() << "\n";
    return kInvalid;
  } catch (const ftr::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  }
  return kUsage;
}
