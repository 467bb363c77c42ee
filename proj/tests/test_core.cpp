#include "doctest.h"

#include "ftr/dsl.hpp"
#include "ftr/error.hpp"
#include "ftr/model.hpp"
#include "support/fixtures.hpp"

using namespace ftr;

namespace {

MetricSpec interval_spec(const std::string& name) {
  return {name, MetricKind::interval, "Nm", Direction::containment, 0, 0.0};
}
MetricSpec scalar_spec(const std::string& name, double tolerance = 0.0) {
  return {name, MetricKind::scalar, "", Direction::higher_is_better, 0, tolerance};
}
MetricSpec set_spec(const std::string& name) {
  return {name, MetricKind::set, "", Direction::containment, 0, 0.0};
}
MetricSpec vector_spec(const std::string& name, std::size_t n) {
  return {name, MetricKind::vector, "", Direction::higher_is_better, n, 0.0};
}

bool has_code(const std::vector<Diagnostic>& ds, const std::string& code) {
  for (const auto& d : ds)
    if (d.code == code) return true;
  return false;
}

}  // namespace

TEST_CASE("fault combination literals") {
  CHECK(FaultCombination::parse("").empty());
  CHECK(FaultCombination::parse("\xE2\x88\x85").empty());
  const auto f = FaultCombination::parse("fB+fA");
  CHECK(f.size() == 2);
  CHECK(f.to_string() == "fA+fB");
  CHECK(FaultCombination{}.to_string() == "\xE2\x88\x85");
  CHECK_THROWS_AS(FaultCombination::parse("fA++fB"), InvalidRequest);
  CHECK(FaultCombination::parse("fA").is_subset_of(f));
  CHECK_FALSE(f.is_subset_of(FaultCombination::parse("fA")));
}

TEST_CASE("value formatting") {
  CHECK(format_value(Interval{-50, 50}) == "[-50, 50]");
  CHECK(format_value(Vector{0.9, 0.8}) == "(0.9, 0.8)");
  CHECK(format_value(TokenSet{"m2", "m1"}) == "{m1, m2}");
  CHECK(format_value(TokenSet{}) == "{}");
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(-0.0) == "0");
  CHECK(format_number(1e-7) == "1e-07");
}

TEST_CASE("compare_performance") {
  const std::vector<MetricSpec> torque{interval_spec("torque")};
  SUBCASE("containment meets nominal") {
    CHECK(compare_performance({{"torque", Interval{-60, 60}}}, {{"torque", Interval{-50, 50}}},
                              torque) == Comparison::at_least_nominal);
  }
  SUBCASE("strict subset of the nominal mission set is below nominal") {
    CHECK(compare_performance({{"missions", TokenSet{"m1"}}},
                              {{"missions", TokenSet{"m1", "m2"}}},
                              {set_spec("missions")}) == Comparison::below_nominal);
  }
  SUBCASE("overlapping intervals are incomparable") {
    CHECK(compare_performance({{"torque", Interval{-40, 70}}}, {{"torque", Interval{-50, 50}}},
                              torque) == Comparison::incomparable);
  }
  SUBCASE("equality counts as at least nominal") {
    CHECK(compare_performance({{"torque", Interval{-50, 50}}}, {{"torque", Interval{-50, 50}}},
                              torque) == Comparison::at_least_nominal);
    CHECK(compare_performance({{"x", 2.0}}, {{"x", 2.0}}, {scalar_spec("x")}) ==
          Comparison::at_least_nominal);
  }
  SUBCASE("scalar tolerance") {
    CHECK(compare_performance({{"x", 1.95}}, {{"x", 2.0}}, {scalar_spec("x")}) ==
          Comparison::below_nominal);
    CHECK(compare_performance({{"x", 1.95}}, {{"x", 2.0}}, {scalar_spec("x", 0.1)}) ==
          Comparison::at_least_nominal);
  }
  SUBCASE("vectors componentwise") {
    const std::vector<MetricSpec> q{vector_spec("q", 2)};
    CHECK(compare_performance({{"q", Vector{1, 1}}}, {{"q", Vector{1, 0.5}}}, q) ==
          Comparison::at_least_nominal);
    CHECK(compare_performance({{"q", Vector{1, 0.4}}}, {{"q", Vector{1, 0.5}}}, q) ==
          Comparison::below_nominal);
  }
  SUBCASE("incomparable dominates below") {
    const std::vector<MetricSpec> specs{interval_spec("torque"), scalar_spec("x")};
    CHECK(compare_performance({{"torque", Interval{-40, 70}}, {"x", 0.0}},
                              {{"torque", Interval{-50, 50}}, {"x", 1.0}},
                              specs) == Comparison::incomparable);
  }
  SUBCASE("metric mismatch") {
    CHECK_THROWS_AS(compare_performance({{"speed", 1.0}}, {{"torque", Interval{0, 1}}}, torque),
                    MetricMismatch);
    CHECK_THROWS_AS(compare_performance({{"torque", 1.0}}, {{"torque", Interval{0, 1}}}, torque),
                    MetricMismatch);
  }
}

TEST_CASE("operability verdict has exactly three cases") {
  CHECK(OperabilityVerdict::from(true, true, "").as_int() == 1);
  CHECK(OperabilityVerdict::from(true, false, "").as_int() == 0);
  CHECK(OperabilityVerdict::from(false, true, "").as_int() == -1);
  CHECK(OperabilityVerdict::from(false, false, "").as_int() == -1);
  CHECK_FALSE(OperabilityVerdict::from(false, true, "").functional);
}

TEST_CASE("validate_model") {
  SUBCASE("bundled models are valid") {
    CHECK(validate_model(testing::bundled("sbw.ftm")).empty());
    CHECK(validate_model(testing::bundled("ads.ftm")).empty());
  }
  SUBCASE("inverted interval") {
    auto m = testing::bundled("sbw.ftm");
    auto* b = const_cast<Component*>(m.find("SbW.MotorB"));
    b->nominal["torque"] = Interval{60, -60};
    const auto ds = validate_model(m);
    REQUIRE(ds.size() == 1);
    CHECK(ds[0].code == "interval-inverted");
    CHECK(ds[0].message == "interval lo>hi at SbW.MotorB.torque");
    CHECK(ds[0].path == "SbW.MotorB.torque");
  }
  SUBCASE("duplicate fault id") {
    auto m = testing::bundled("sbw.ftm");
    auto* b = const_cast<Component*>(m.find("SbW.MotorB"));
    b->faults.push_back({"fA", ""});
    const auto ds = validate_model(m);
    REQUIRE(has_code(ds, "duplicate-fault"));
    CHECK(ds[0].message.find("duplicate fault id") != std::string::npos);
  }
  SUBCASE("missing nominal and kind mismatch") {
    auto m = testing::bundled("sbw.ftm");
    auto* a = const_cast<Component*>(m.find("SbW.MotorA"));
    a->nominal.erase("torque");
    CHECK(has_code(validate_model(m), "nominal-missing"));
    a->nominal["torque"] = 3.0;
    CHECK(has_code(validate_model(m), "kind-mismatch"));
  }
  SUBCASE("rule with undeclared fault carries its rule index") {
    auto m = testing::bundled("sbw.ftm");
    auto* a = const_cast<Component*>(m.find("SbW.MotorA"));
    a->rules[0].match.faults.insert("fX");
    const auto ds = validate_model(m);
    REQUIRE(ds.size() == 1);
    CHECK(ds[0].code == "unknown-fault");
    CHECK(ds[0].rule_index == std::optional<std::size_t>(0));
  }
  SUBCASE("interval metric must use containment") {
    auto m = testing::bundled("sbw.ftm");
    m.root.metrics[0].direction = Direction::higher_is_better;
    CHECK(has_code(validate_model(m), "direction-mismatch"));
  }
  SUBCASE("interval-sum cannot bind a set") {
    auto m = testing::bundled("ads.ftm");
    m.root.composition->bindings[0].kernel = Kernel::interval_sum;
    CHECK(has_code(validate_model(m), "binding-kind"));
  }
  SUBCASE("a rule may not set a composed metric") {
    auto m = testing::bundled("sbw.ftm");
    m.root.rules[1].performance["torque"] = Interval{0, 0};
    CHECK(has_code(validate_model(m), "rule-sets-composed-metric"));
  }
}

TEST_CASE("model lookup") {
  const auto m = testing::bundled("sbw.ftm");
  CHECK(m.root.children.size() == 3);
  CHECK(m.path_of("MotorA") == "SbW.MotorA");
  CHECK(m.find("SbW.MotorB") != nullptr);
  CHECK(m.find("SbW.Nope") == nullptr);
  CHECK(m.fault_universe() == std::vector<std::string>{"fA", "fB", "fECU"});
}
