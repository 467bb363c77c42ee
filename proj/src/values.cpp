#include "ftr/values.hpp"

#include <charconv>
#include <cmath>

namespace ftr {

const char* to_string(MetricKind kind) {
  switch (kind) {
    case MetricKind::scalar: return "scalar";
    case MetricKind::interval: return "interval";
    case MetricKind::vector: return "vector";
    case MetricKind::set: return "set";
  }
  return "?";
}

const char* to_string(Direction direction) {
  switch (direction) {
    case Direction::higher_is_better: return "higher-is-better";
    case Direction::containment: return "containment";
  }
  return "?";
}

MetricKind kind_of(const MetricValue& value) {
  switch (value.index()) {
    case 0: return MetricKind::scalar;
    case 1: return MetricKind::interval;
    case 2: return MetricKind::vector;
    default: return MetricKind::set;
  }
}

MetricValue zero_value(MetricKind kind, std::size_t length) {
  switch (kind) {
    case MetricKind::scalar: return 0.0;
    case MetricKind::interval: return Interval{0.0, 0.0};
    case MetricKind::vector: return Vector(length, 0.0);
    case MetricKind::set: return TokenSet{};
  }
  return 0.0;
}

std::string format_number(double value) {
  if (value == 0.0) return "0";  // folds -0
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buffer[64];
  auto [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
  return std::string(buffer, end);
}

namespace {

template <typename Range, typename Fn>
std::string join(const Range& range, Fn&& fn) {
  std::string out;
  bool first = true;
  for (const auto& item : range) {
    if (!first) out += ", ";
    first = false;
    out += fn(item);
  }
  return out;
}

}  // namespace

std::string format_value(const MetricValue& value) {
  struct Visitor {
    std::string operator()(double x) const { return format_number(x); }
    std::string operator()(const Interval& i) const {
      return "[" + format_number(i.lo) + ", " + format_number(i.hi) + "]";
    }
    std::string operator()(const Vector& v) const {
      return "(" + join(v, [](double x) { return format_number(x); }) + ")";
    }
    std::string operator()(const TokenSet& s) const {
      return "{" + join(s, [](const std::string& t) { return t; }) + "}";
    }
  };
  return std::visit(Visitor{}, value);
}

}  // namespace ftr
