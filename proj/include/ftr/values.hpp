#pragma once

#include <set>
#include <string>
#include <variant>
#include <vector>

namespace ftr {

/// Closed interval [lo, hi]. A well-formed interval has lo <= hi.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  bool well_formed() const { return lo <= hi; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// A value tagged with its unit label. Units are compared as strings only.
template <typename T>
struct Quantity {
  T value;
  std::string unit;
};

using TokenSet = std::set<std::string>;
using Vector = std::vector<double>;

/// One metric value; the alternative must agree with the metric's kind.
using MetricValue = std::variant<double, Interval, Vector, TokenSet>;

enum class MetricKind { scalar, interval, vector, set };
enum class Direction { higher_is_better, containment };

const char* to_string(MetricKind kind);
const char* to_string(Direction direction);

MetricKind kind_of(const MetricValue& value);

/// The value a metric takes when its provider delivers nothing:
/// 0, [0, 0], a zero vector of the given length, or the empty set.
MetricValue zero_value(MetricKind kind, std::size_t length);

/// Shortest decimal text that parses back to the same double.
std::string format_number(double value);

/// Canonical text of a value: 3, [-50, 50], (0.9, 0.8), {m1, m2}.
std::string format_value(const MetricValue& value);

}  // namespace ftr
