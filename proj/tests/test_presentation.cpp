#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "repnet/builtins.hpp"
#include "repnet/parser.hpp"
#include "repnet/presentation.hpp"

using namespace repnet;

namespace {

const char* kBraidSource = R"(# three-strand braid system
name braid3
structure group
generator s arity 2->2 invertible
relation R2a: s * inv(s) = id^2
relation R2b: inv(s) * s = id^2
relation R3: (s x id) * (id x s) * (s x id) = (id x s) * (s x id) * (id x s)
)";

const char* kTlSource = R"(
name tl
structure algebra
scalar delta = 1.0
generator U arity 2->2
relation hook: place(U,1,3) * place(U,2,3) * place(U,1,3) = place(U,1,3)
relation loop: U * U = delta U
)";

}  // namespace

TEST_CASE("braid-style source parses to one invertible generator and three relations") {
  const Presentation p = parse_presentation(kBraidSource);
  CHECK(p.name == "braid3");
  CHECK(p.kind == StructureKind::group);
  REQUIRE(p.generators.size() == 1);
  CHECK(p.generators[0].invertible);
  CHECK(p.generators[0].inverse_name == "s_inv");
  REQUIRE(p.relations.size() == 3);
  CHECK(p.relations[2].label == "R3");
  const Arity a = arity_of(*p.relations[2].lhs, p);
  CHECK(a.in_blocks == 3);
  CHECK(a.out_blocks == 3);
}

TEST_CASE("undeclared symbol is reported with its name") {
  const char* bad =
      "structure group\n"
      "generator s arity 2->2\n"
      "relation s * t = t * s\n";
  CHECK_THROWS_WITH_AS(parse_presentation(bad),
                       doctest::Contains("undeclared symbol t"), ParseError);
}

TEST_CASE("scalar symbols bind inside relations") {
  const Presentation p = parse_presentation(kTlSource);
  REQUIRE(p.relations.size() == 2);
  const RelExpr& rhs = *p.relations[1].rhs;
  CHECK(rhs.kind == RelExpr::Kind::scale);
  CHECK(rhs.scalar_sym == "delta");
  CHECK(rhs.a->kind == RelExpr::Kind::gen);
  CHECK(p.scalars.at("delta") == 1.0);
}

TEST_CASE("serialize / parse round-trip is structurally equal") {
  for (const char* src : {kBraidSource, kTlSource}) {
    const Presentation p = parse_presentation(src);
    const Presentation q = parse_presentation(serialize(p));
    CHECK(structurally_equal(p, q));
  }
  for (const std::string& name : builtin_names()) {
    std::map<std::string, double> params;
    if (name == "temperley_lieb") params["delta"] = 1.0;
    const Presentation p = builtin(name, params);
    const Presentation q = parse_presentation(serialize(p));
    // Parsed invertible generators default to <name>_inv; compare the rest.
    CHECK(q.relations.size() == p.relations.size());
    CHECK(q.kind == p.kind);
    CHECK(q.semantics == p.semantics);
    for (std::size_t i = 0; i < p.relations.size(); ++i) {
      CHECK(structurally_equal(*p.relations[i].lhs, *q.relations[i].lhs));
      CHECK(structurally_equal(*p.relations[i].rhs, *q.relations[i].rhs));
    }
  }
}

TEST_CASE("arity mismatch in a relation is rejected") {
  const char* bad =
      "structure custom\n"
      "generator s arity 2->2\n"
      "relation s = id\n";  // 2 blocks vs 1 block
  CHECK_THROWS(parse_presentation(bad));
}

TEST_CASE("sum requires equal arities and parses") {
  const char* good =
      "structure lie\n"
      "generator a arity 1->1\n"
      "generator b arity 1->1\n"
      "relation bracket: (a * b) + -1 (b * a) = 0.0 a\n";
  const Presentation p = parse_presentation(good);
  CHECK(p.kind == StructureKind::lie_algebra);
  CHECK(p.relations[0].lhs->kind == RelExpr::Kind::sum);

  const char* bad =
      "structure custom\n"
      "generator a arity 1->1\n"
      "generator c arity 2->2\n"
      "relation a + c = a + c\n";
  CHECK_THROWS(parse_presentation(bad));
}

TEST_CASE("place desugars to an arity-preserving product") {
  const Presentation p = parse_presentation(kTlSource);
  const RelExprPtr placed = expr::place("U", 2, 5);
  CHECK(arity_of(*placed, p).in_blocks == 5);
  const RelExprPtr des = desugar(placed);
  CHECK(des->kind == RelExpr::Kind::product);
  CHECK(arity_of(*des, p).in_blocks == 5);
  CHECK(arity_of(*des, p).out_blocks == 5);

  CHECK_THROWS(arity_of(*expr::place("U", 5, 5), p));  // needs 1 <= i <= m-1
  CHECK_THROWS(arity_of(*expr::place("U", 0, 5), p));
}

TEST_CASE("builtin braid carries the paper's relation labels") {
  const Presentation p = builtin("braid", {});
  REQUIRE(p.relations.size() == 3);
  CHECK(p.relations[0].label == "f∘g=id");
  CHECK(p.relations[1].label == "g∘f=id");
  CHECK(p.relations[2].label == "set-theoretic Yang Baxter");
  CHECK(p.generators[0].inverse_name == "g");
}

TEST_CASE("builtin temperley_lieb takes delta and has three relations") {
  const Presentation p = builtin("temperley_lieb", {{"delta", 1.0}});
  REQUIRE(p.relations.size() == 3);
  CHECK(p.relations[0].label == "U1 U2 U1 = U1");
  CHECK(p.relations[1].label == "U2 U1 U2 = U2");
  CHECK(p.relations[2].label == "U^2 = delta U");
  CHECK(p.scalars.at("delta") == 1.0);
  CHECK_THROWS(builtin("temperley_lieb", {}));
}

TEST_CASE("builtin rt_system has the seven link-move relations under tensor semantics") {
  const Presentation p = builtin("rt_system", {});
  CHECK(p.semantics == ProductSemantics::tensor);
  REQUIRE(p.relations.size() == 7);
  CHECK(p.relations[0].label == "n.R = n");
  bool has_u_row = false;
  for (const auto& r : p.relations)
    if (r.label == "(id⊗n)(u⊗id) = id") has_u_row = true;
  CHECK(has_u_row);
  CHECK(p.generators.size() == 3);
}

TEST_CASE("unknown builtin is rejected") {
  CHECK_THROWS(builtin("nope", {}));
}

TEST_CASE("every builtin passes the validator used for parsed presentations") {
  for (const std::string& name : builtin_names()) {
    std::map<std::string, double> params;
    if (name == "temperley_lieb") params["delta"] = 1.3;
    CHECK_NOTHROW(validate(builtin(name, params)));
  }
}

TEST_CASE("zero-arity generators require tensor semantics") {
  Presentation p;
  p.kind = StructureKind::custom;
  p.generators.push_back({"n", 2, 0, false, ""});
  CHECK_THROWS(validate(p));
  p.semantics = ProductSemantics::tensor;
  CHECK_NOTHROW(validate(p));
}

TEST_CASE("syntax errors carry line and column") {
  try {
    parse_presentation("structure group\ngenerator s arity 2->\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line == 2);
    CHECK(e.col > 1);
  }
}
