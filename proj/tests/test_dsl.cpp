#include "doctest.h"

#include "ftr/dsl.hpp"
#include "support/fixtures.hpp"

using namespace ftr;

namespace {

const ParseDiagnostic& only(const ModelDocument& doc) {
  REQUIRE(doc.diagnostics.size() == 1);
  return doc.diagnostics.front();
}

}  // namespace

TEST_CASE("bundled steer-by-wire file") {
  const auto doc = parse_model(testing::read_text(testing::model_path("sbw.ftm")));
  REQUIRE(doc.ok());
  CHECK(doc.diagnostics.empty());
  const auto& root = doc.model->root;
  CHECK(root.name == "SbW");
  REQUIRE(root.children.size() == 3);
  CHECK(root.children[0].name == "MotorA");
  CHECK(root.children[1].name == "MotorB");
  CHECK(root.children[2].name == "ECU");
  CHECK(root.predicate == "tracks_reference");
  CHECK(std::get<Interval>(root.nominal.at("torque")) == Interval{-50, 50});
  REQUIRE(doc.span_of("SbW.MotorB#fault:fB"));
  CHECK(doc.span_of("SbW.MotorB#fault:fB")->begin.line == 45);
}

TEST_CASE("empty input has no root") {
  for (const char* text : {"", "\n\n", "# only a comment\n"}) {
    const auto doc = parse_model(text);
    const auto& d = only(doc);
    CHECK(d.code == "no-root");
    CHECK(d.message == "no root component");
  }
}

TEST_CASE("dangling fault reference points at its rule") {
  const auto doc = parse_model(R"(component S
  faults
    fA
  end
  on-fault superset-of fX
    safe
    functional
  end
end
)");
  CHECK_FALSE(doc.ok());
  const auto& d = only(doc);
  CHECK(d.code == "unknown-fault");
  CHECK(d.message.find("fX") != std::string::npos);
  CHECK(d.span.begin.line == 5);
  CHECK(d.span.begin.column == 3);
}

TEST_CASE("validation diagnostics carry spans") {
  const auto doc = parse_model(R"(component Motors
  component B
    metrics
      torque interval unit "Nm" containment
    end
    nominal
      torque [60, -60]
    end
  end
end
)");
  const auto& d = only(doc);
  CHECK(d.code == "interval-inverted");
  CHECK(d.message == "interval lo>hi at Motors.B.torque");
  CHECK(d.span.begin.line == 7);
  CHECK(format_diagnostic(d, "m.ftm") == "m.ftm:7:7: interval-inverted: " + d.message);
}

TEST_CASE("syntax errors") {
  struct Case {
    const char* text;
    std::size_t line;
    const char* fragment;
  };
  const Case cases[] = {
      {"component S\n  faults\n    fA\n", 4, "missing 'end'"},
      {"component S\nend\ncomponent T\nend\n", 3, "only one root"},
      {"component S\n  metrics\n    x blob unit \"\" containment\n  end\nend\n", 3,
       "unknown metric kind"},
      {"component S\n  functionality \"open\n", 2, "unterminated string"},
      {"component S\n  on-fault any\n    perf x [1, 2\n  end\nend\n", 3, "expected ']'"},
      {"component S\n  nominal\n    x 1e\n  end\nend\n", 3, "malformed number"},
      {"component S\n  wibble\nend\n", 2, "unknown keyword"},
      {"component S\n  faults\n    fA @\n  end\nend\n", 3, "unexpected character"},
  };
  for (const auto& c : cases) {
    CAPTURE(c.text);
    const auto doc = parse_model(c.text);
    const auto& d = only(doc);
    CHECK(d.code == "syntax");
    CHECK(d.span.begin.line == c.line);
    CHECK(d.message.find(c.fragment) != std::string::npos);
  }
}

TEST_CASE("line endings and comments") {
  const auto doc = parse_model("component S # root\r\n  faults\r\n    fA \"x\"\r\n  end\r\nend\r\n");
  REQUIRE(doc.ok());
  CHECK(doc.model->root.faults.at(0).description == "x");
}

TEST_CASE("serialization") {
  const auto sbw = testing::bundled("sbw.ftm");
  const auto text = serialize_model(sbw);
  CHECK(text.find("[-50, 50]") != std::string::npos);
  CHECK(text.find('\r') == std::string::npos);
  const auto again = parse_model(text);
  REQUIRE(again.ok());
  CHECK(*again.model == sbw);

  const auto ads = testing::bundled("ads.ftm");
  const auto once = serialize_model(*parse_model(serialize_model(ads)).model);
  const auto twice = serialize_model(*parse_model(once).model);
  CHECK(once == twice);
  CHECK(once == serialize_model(ads));
}

TEST_CASE("minimal model built in code") {
  SystemModel m;
  m.root.name = "Solo";
  const auto text = serialize_model(m);
  CHECK(text == "component Solo\nend\n");
  const auto doc = parse_model(text);
  REQUIRE(doc.ok());
  CHECK(*doc.model == m);
}

TEST_CASE("free text survives escaping") {
  SystemModel m;
  m.root.name = "S";
  m.root.functionality = "say \"hi\"\\\n\t\x01 done";
  m.root.faults.push_back({"f1", "#not a comment"});
  const auto doc = parse_model(serialize_model(m));
  REQUIRE(doc.ok());
  CHECK(*doc.model == m);
}

TEST_CASE("identifier helper") {
  CHECK(dsl::is_identifier("MotorA"));
  CHECK(dsl::is_identifier("f_NADF-1.x"));
  CHECK_FALSE(dsl::is_identifier("1abc"));
  CHECK_FALSE(dsl::is_identifier("a->b"));
  CHECK_FALSE(dsl::is_identifier(""));
}
