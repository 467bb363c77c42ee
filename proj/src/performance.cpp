#include <algorithm>

#include "ftr/composition.hpp"
#include "ftr/error.hpp"
#include "ftr/model.hpp"

namespace ftr {

namespace {

enum class Order { meets, worse, incomparable };

Order compare_metric(const MetricSpec& spec, const MetricValue& available,
                     const MetricValue& nominal) {
  if (kind_of(available) != spec.kind || kind_of(nominal) != spec.kind)
    throw MetricMismatch("metric '" + spec.name + "' does not have kind " + to_string(spec.kind));
  const double eps = spec.tolerance;
  switch (spec.kind) {
    case MetricKind::scalar:
      return std::get<double>(available) >= std::get<double>(nominal) - eps ? Order::meets
                                                                            : Order::worse;
    case MetricKind::vector: {
      const auto& a = std::get<Vector>(available);
      const auto& n = std::get<Vector>(nominal);
      if (a.size() != n.size())
        throw MetricMismatch("metric '" + spec.name + "' vector lengths differ");
      for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] < n[i] - eps) return Order::worse;
      return Order::meets;
    }
    case MetricKind::interval: {
      const auto& a = std::get<Interval>(available);
      const auto& n = std::get<Interval>(nominal);
      if (interval_contains(a, n, eps)) return Order::meets;
      if (interval_contains(n, a, eps)) return Order::worse;
      return Order::incomparable;
    }
    case MetricKind::set: {
      const auto& a = std::get<TokenSet>(available);
      const auto& n = std::get<TokenSet>(nominal);
      if (std::includes(a.begin(), a.end(), n.begin(), n.end())) return Order::meets;
      if (std::includes(n.begin(), n.end(), a.begin(), a.end())) return Order::worse;
      return Order::incomparable;
    }
  }
  return Order::incomparable;
}

}  // namespace

Comparison compare_performance(const PerformanceValue& available, const PerformanceValue& nominal,
                               const std::vector<MetricSpec>& specs) {
  if (available.size() != specs.size() || nominal.size() != specs.size())
    throw MetricMismatch("performance values do not cover the metric specs");
  bool worse = false;
  bool incomparable = false;
  for (const auto& spec : specs) {
    const auto a = available.find(spec.name);
    const auto n = nominal.find(spec.name);
    if (a == available.end() || n == nominal.end())
      throw MetricMismatch("metric '" + spec.name + "' missing from a performance value");
    switch (compare_metric(spec, a->second, n->second)) {
      case Order::meets: break;
      case Order::worse: worse = true; break;
      case Order::incomparable: incomparable = true; break;
    }
  }
  if (incomparable) return Comparison::incomparable;
  return worse ? Comparison::below_nominal : Comparison::at_least_nominal;
}

}  // namespace ftr
