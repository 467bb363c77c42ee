#include <algorithm>
#include <climits>
#include <exception>
#include <thread>

#include "ftr/classifier.hpp"
#include "ftr/error.hpp"
#include "ftr/internal/evaluator.hpp"

namespace ftr {

unsigned long long combinations_up_to(std::size_t universe, std::size_t k) {
  k = std::min(k, universe);
  unsigned long long total = 0;
  unsigned long long binom = 1;  // C(universe, i)
  for (std::size_t i = 0; i <= k; ++i) {
    if (i > 0) {
      // binom * (n - i + 1) / i, saturating
      const unsigned long long factor = universe - i + 1;
      if (binom > ULLONG_MAX / factor) return ULLONG_MAX;
      binom = binom * factor / i;
    }
    if (total > ULLONG_MAX - binom) return ULLONG_MAX;
    total += binom;
  }
  return total;
}

std::vector<FaultCombination> subsets_up_to(const std::vector<std::string>& universe,
                                            std::size_t k) {
  std::vector<std::string> sorted = universe;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  k = std::min(k, sorted.size());

  std::vector<FaultCombination> out;
  out.emplace_back();
  std::vector<std::size_t> idx;
  for (std::size_t size = 1; size <= k; ++size) {
    idx.resize(size);
    for (std::size_t i = 0; i < size; ++i) idx[i] = i;
    while (true) {
      FaultCombination f;
      for (auto i : idx) f.insert(sorted[i]);
      out.push_back(std::move(f));
      // next lexicographic index tuple
      std::size_t pos = size;
      while (pos > 0 && idx[pos - 1] == sorted.size() - size + pos - 1) --pos;
      if (pos == 0) break;
      ++idx[pos - 1];
      for (std::size_t j = pos; j < size; ++j) idx[j] = idx[j - 1] + 1;
    }
  }
  return out;
}

const ClassifiedCombination* EnumerationReport::find(const FaultCombination& combination) const {
  for (const auto& entry : entries)
    if (entry.combination == combination) return &entry;
  return nullptr;
}

EnumerationReport enumerate(const SystemModel& model, std::string_view target,
                            const EnumerationOptions& options) {
  check_request(model, target, {});
  const auto universe = model.fault_universe();
  const auto needed = combinations_up_to(universe.size(), options.max_cardinality);
  if (needed > options.budget) throw BudgetExceeded(needed, options.budget);

  const auto path = model.path_of(target);
  const Component& component = *model.find(path);

  EnumerationReport report;
  report.target = path;
  report.max_cardinality = options.max_cardinality;
  report.mode = options.mode;

  const auto combinations = subsets_up_to(universe, options.max_cardinality);
  report.entries.resize(combinations.size());

  const unsigned jobs = std::max(1u, std::min<unsigned>(options.jobs, combinations.size()));
  std::vector<std::exception_ptr> failures(jobs);
  auto work = [&](unsigned worker) {
    try {
      for (std::size_t i = worker; i < combinations.size(); i += jobs) {
        auto classified =
            detail::classify_full(model, component, path, combinations[i], options.mode);
        report.entries[i] = {combinations[i], std::move(classified.verdict),
                             std::move(classified.operability)};
      }
    } catch (...) {
      failures[worker] = std::current_exception();
    }
  };
  if (jobs == 1) {
    work(0);
  } else {
    std::vector<std::thread> threads;
    for (unsigned w = 0; w < jobs; ++w) threads.emplace_back(work, w);
    for (auto& t : threads) t.join();
  }
  for (const auto& failure : failures)
    if (failure) std::rethrow_exception(failure);

  for (const auto& entry : report.entries)
    report.regime_sets[entry.verdict.regime].push_back(entry.combination);
  return report;
}

std::vector<FaultCombination> minimal_unsafe_cut_sets(const EnumerationReport& report) {
  std::vector<FaultCombination> unsafe;
  if (const auto it = report.regime_sets.find(Regime::fail_unsafe); it != report.regime_sets.end())
    unsafe = it->second;
  std::sort(unsafe.begin(), unsafe.end());
  std::vector<FaultCombination> minimal;
  for (const auto& candidate : unsafe) {
    const bool dominated = std::any_of(minimal.begin(), minimal.end(), [&](const auto& m) {
      return m.is_subset_of(candidate);
    });
    if (!dominated) minimal.push_back(candidate);
  }
  return minimal;
}

std::vector<MonotonicityWarning> lint_monotonicity(const EnumerationReport& report) {
  std::vector<MonotonicityWarning> out;
  for (const auto& sub : report.entries) {
    if (sub.combination.empty() || sub.verdict.regime != Regime::fail_degraded) continue;
    for (const auto& super : report.entries) {
      if (super.combination.size() <= sub.combination.size()) continue;
      if (super.verdict.regime != Regime::fail_operational) continue;
      if (sub.combination.is_subset_of(super.combination))
        out.push_back({sub.combination, super.combination});
    }
  }
  return out;
}

}  // namespace ftr
