#pragma once

#include <stdexcept>
#include <string>

namespace ftr {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Performance values whose metric names or kinds disagree.
class MetricMismatch : public Error {
 public:
  using Error::Error;
};

class UnitMismatch : public Error {
 public:
  using Error::Error;
};

/// A component has no effect rule for the combination and no fallback applies.
class NoMatchingRule : public Error {
 public:
  NoMatchingRule(std::string path, const std::string& combination)
      : Error("no effect rule matches " + combination + " at " + path),
        path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

/// Missing child, unbound metric, absent custom-table entry.
class CompositionError : public Error {
 public:
  using Error::Error;
};

class BudgetExceeded : public Error {
 public:
  BudgetExceeded(unsigned long long needed, unsigned long long budget)
      : Error("enumeration needs " + std::to_string(needed) +
              " combinations, budget is " + std::to_string(budget)),
        needed_(needed),
        budget_(budget) {}
  unsigned long long needed() const { return needed_; }
  unsigned long long budget() const { return budget_; }

 private:
  unsigned long long needed_;
  unsigned long long budget_;
};

/// Unknown target path, fault id outside the universe, malformed literal.
class InvalidRequest : public Error {
 public:
  using Error::Error;
};

class ScenarioError : public Error {
 public:
  using Error::Error;
};

/// Simulation left its declared state transition table.
class TransitionError : public Error {
 public:
  using Error::Error;
};

}  // namespace ftr
