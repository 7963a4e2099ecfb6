#include <doctest.h>

#include <fstream>
#include <sstream>

#include "lh/model.hpp"

using namespace lh;

namespace {

std::string fixture(const std::string& name) { return std::string(LH_FIXTURE_DIR) + "/" + name; }

std::vector<std::string> schema_errors(const std::string& text) {
  try {
    parse_model(text);
  } catch (const SchemaError& e) {
    return e.messages();
  }
  return {};
}

bool mentions(const std::vector<std::string>& msgs, const std::string& needle) {
  for (auto& m : msgs)
    if (m.find(needle) != std::string::npos) return true;
  return false;
}

}  // namespace

TEST_CASE("empty documents are valid") {
  Model m = parse_model(R"({"spaces": {}})");
  CHECK(m.spaces.empty());
  CHECK(m.algebras.empty());
  CHECK(parse_model("{}").morphisms.empty());
}

TEST_CASE("the [x,x] = y fixture loads with one algebra") {
  Model m = load_model(fixture("leibniz_xx.json"));
  REQUIRE(m.algebras.size() == 1);
  AlgebraPtr A = m.algebra("xx");
  CHECK(A->V->dim() == 2);
  Vector x = Vector::basis(A->V, "x");
  CHECK(A->op(2, {x, x}) == Vector::basis(A->V, "y"));
  CHECK(check_jacobi(*A, 3).pass);
  CHECK_FALSE(check_jacobi(*load_model(fixture("leibniz_xx_broken.json")).algebra("xx"), 3).pass);
}

TEST_CASE("schema errors") {
  const std::string base = R"({"spaces": {"V": {"x": 0, "h": 1}}, "algebras": {"A": {"kind": "2-term", "space": "V", "operations": {"2": {"x,x": {"x": RAT}}}}}})";
  auto with = [&](const std::string& rat) {
    std::string s = base;
    s.replace(s.find("RAT"), 3, rat);
    return s;
  };
  CHECK(schema_errors(with("\"1/2\"")).empty());
  auto zero_den = schema_errors(with("\"1/0\""));
  REQUIRE_FALSE(zero_den.empty());
  CHECK(mentions(zero_den, "/algebras/A/operations/2/x,x/x"));
  CHECK_FALSE(schema_errors(with("0.5")).empty());

  auto unknown = schema_errors(R"({"spaces": {"V": {"x": 0}}, "algebras": {"A": {"kind": "2-term", "space": "V", "operations": {"2": {"x,z": {"x": "1"}}}}}})");
  CHECK(mentions(unknown, "unknown label 'z'"));
  // l_2 must have degree 0: x,x -> h violates it
  auto degree = schema_errors(R"({"spaces": {"V": {"x": 0, "h": 1}}, "algebras": {"A": {"kind": "2-term", "space": "V", "operations": {"2": {"x,x": {"h": "1"}}}}}})");
  CHECK_FALSE(degree.empty());
  auto missing = schema_errors(R"({"algebras": {"A": {"kind": "2-term", "space": "W"}}})");
  CHECK(mentions(missing, "unknown space 'W'"));
  CHECK(mentions(schema_errors(R"({"widgets": {}})"), "/widgets"));
  auto syntax = schema_errors("{\n  \"spaces\": {\n    \"V\": {\"x\": 0,}\n  }\n}");
  REQUIRE(syntax.size() == 1);
  CHECK(mentions(syntax, "line 3"));
  CHECK(mentions(schema_errors(R"({"spaces": {"V": {"a+b": 0}}})"), "labels may not"));
}

TEST_CASE("every error of a document is reported") {
  auto errs = schema_errors(R"({"spaces": {"V": {"x": 0}}, "algebras": {
    "A": {"kind": "2-term", "space": "V", "operations": {"2": {"x,x": {"x": "1/0"}}}},
    "B": {"kind": "weird", "space": "V"}}})");
  CHECK(errs.size() >= 2);
  CHECK(mentions(errs, "/algebras/A"));
  CHECK(mentions(errs, "/algebras/B"));
}

TEST_CASE("label expressions") {
  auto S = make_space("G", {{"r", 0}, {"a", -1}, {"c", -1}});
  CHECK(parse_label_expr(S, "2*a + 2*c") == Vector::basis(S, "a", 2) + Vector::basis(S, "c", 2));
  CHECK(parse_label_expr(S, "-1/2*r+a-a") == Vector::basis(S, "r", Scalar(-1, 2)));
  CHECK(parse_label_expr(S, "0").is_zero());
  CHECK_THROWS_AS(parse_label_expr(S, "q"), SchemaError);
  CHECK_THROWS_AS(parse_label_expr(S, "1/0*a"), SchemaError);
}

TEST_CASE("scenario round trip") {
  Model m = load_model(fixture("scenario.json"));
  CHECK(m.algebras.size() == 2);
  CHECK(m.morphisms.size() == 3);
  CHECK(m.homotopies.size() == 2);
  CHECK(m.linfty.size() == 1);
  CHECK(m.concordances.size() == 2);
  std::ifstream in(fixture("scenario.json"));
  json doc = json::parse(in);
  for (auto& name : {"A", "B"}) {
    json out = algebra_to_json(*m.algebra(name), "2-term");
    CHECK(out["operations"] == doc["algebras"][name]["operations"]);
  }
  CHECK(morphism_to_json(*m.morphism("g")) == doc["morphisms"]["g"]);
  CHECK(homotopy_to_json(m.homotopy("tau"), "g", "h") == doc["homotopies"]["tau"]);
  CHECK_THROWS_AS(m.morphism("nope"), SchemaError);
}

TEST_CASE("reports render deterministically") {
  Report r;
  r.note("b");
  r.note("a");
  r.checked = 3;
  r.fail({"b", {"x", "y"}, "1", "0"});
  std::string text = report_text("demo", r);
  CHECK(text ==
        "demo: FAIL (3 checks)\n"
        "  [ok]   a\n"
        "  [FAIL] b\n"
        "  counterexample b at (x, y): 1 != 0\n");
  json j = to_json(r);
  CHECK(j.dump() ==
        R"({"pass":false,"checked":3,"identities":{"a":true,"b":false},"failures":[{"identity":"b","tuple":["x","y"],"lhs":"1","rhs":"0"}]})");
}
