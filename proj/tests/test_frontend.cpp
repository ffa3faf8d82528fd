#include "doctest.h"
#include "helpers.hpp"

using namespace poly;
using namespace helpers;

TEST_CASE("the division program parses to a five-rule AST") {
  ProgramAST ast = parse_program_file(fixture("division.poly"));
  CHECK(ast.sorts == std::vector<std::string>{"n"});
  CHECK(ast.constructors.size() == 2);
  CHECK(ast.functions.size() == 2);
  CHECK(ast.rules.size() == 5);
}

TEST_CASE("empty input is a syntax error") { CHECK_THROWS_AS(parse_program(""), SyntaxError); }

TEST_CASE("let-tuple rules parse") {
  TermP t = parse_term("let (l1, l2) = split(l) in (cons(x, l1), cons(y, l2))");
  REQUIRE(t->k == Term::K::Let);
  CHECK(t->binders == std::vector<std::string>{"l1", "l2"});
  CHECK(t->bound->head == "split");
  CHECK(t->body->k == Term::K::Tuple);
}

TEST_CASE("unknown symbols and arities are rejected during elaboration") {
  ProgramAST ast = parse_program("sorts: n\nconstructors:\n zero : -> n\nfunctions:\n f : n -> n\nrules:\n f(g(x)) => x\n");
  CHECK_THROWS_AS(elaborate(ast), UnknownSymbol);
  ProgramAST ast2 = parse_program("sorts: n\nconstructors:\n zero : -> n\nfunctions:\n f : n -> n\nrules:\n f(zero(x)) => zero\n");
  CHECK_THROWS_AS(elaborate(ast2), ArityError);
}

TEST_CASE("non-linear patterns are rejected") {
  ProgramAST ast =
      parse_program("sorts: n\nconstructors:\n zero : -> n\nfunctions:\n f : n, n -> n\nrules:\n f(x, x) => x\n");
  CHECK_THROWS_AS(elaborate(ast), NonLinearPattern);
}

TEST_CASE("duplication inserts exactly one delta per extra use") {
  ProgramAST ast = parse_program(
      "sorts: n\nconstructors:\n zero : -> n\nfunctions:\n f : n -> n\n g : n, n -> n\nrules:\n f(x) => g(x, x)\n");
  Polygraph P = elaborate(ast);
  const ThreeCell* r = nullptr;
  for (const auto& c : P.three_cells)
    if (c.kind == RuleKind::Computation) r = &c;
  REQUIRE(r);
  size_t deltas = size_wrt(r->rhs, [&](CellId c) { return P.cell(c).tag == StructureTag::Delta; });
  CHECK(deltas == 1);
}

TEST_CASE("swapped variables insert exactly one crossing") {
  ProgramAST ast = parse_program(
      "sorts: n\nconstructors:\n zero : -> n\nfunctions:\n f : n, n -> n\n g : n, n -> n\nrules:\n f(x, y) => g(y, x)\n");
  Polygraph P = elaborate(ast);
  const ThreeCell* r = nullptr;
  for (const auto& c : P.three_cells)
    if (c.kind == RuleKind::Computation) r = &c;
  REQUIRE(r);
  size_t taus = size_wrt(r->rhs, [&](CellId c) { return P.cell(c).tag == StructureTag::Tau; });
  CHECK(taus == 1);
}

TEST_CASE("erasure inserts one eps per unused variable") {
  Polygraph D = load("division.poly");
  // minus(zero, succ(y)) => zero erases y
  for (const auto& r : D.three_cells) {
    if (r.name != "minus(zero, succ(y))") continue;
    CHECK(size_wrt(r.rhs, [&](CellId c) { return D.cell(c).tag == StructureTag::Eps; }) == 1);
    CHECK(size_wrt(r.rhs, [&](CellId c) { return D.cell(c).kind == CellKind::Constructor; }) == 1);
    return;
  }
  FAIL("rule not found");
}

TEST_CASE("the lhs of minus(x, zero) is (id * zero) ; minus") {
  Polygraph D = load("division.poly");
  for (const auto& r : D.three_cells) {
    if (r.name != "minus(x, zero)") continue;
    REQUIRE(r.lhs.slices.size() == 2);
    CHECK(D.cell(r.lhs.slices[0].cell).name == "zero");
    CHECK(r.lhs.slices[0].left == 1);
    CHECK(D.cell(r.lhs.slices[1].cell).name == "minus");
    CHECK(r.rhs.degenerate());
    return;
  }
  FAIL("rule not found");
}

TEST_CASE("elaborated rules validate, including pattern shape") {
  for (const auto& f : {"division.poly", "sort.poly", "arith.poly"}) CHECK(validate_polygraph(load(f)).ok());
}

TEST_CASE("encode/decode round-trips on random values") {
  Polygraph F = load("sort.poly");
  std::mt19937_64 rng(17);
  for (int i = 0; i < 200; ++i) {
    TermP t = nlist(random_list(rng, 10, 2));
    Diagram d = encode_value(F, t);
    auto back = decode_value(F, d);
    REQUIRE(back.size() == 1);
    CHECK(term_eq(back[0], t));
    // id up to exchange on the diagram side
    CHECK(diagram_equal(F, encode_value(F, back[0]), d));
  }
}

TEST_CASE("the list [2;1] encodes with size 5") {
  Polygraph F = load("sort.poly");
  Diagram d = encode_value(F, nlist({2, 1}));
  CHECK(d.size() == 5);
}

TEST_CASE("tuples of values decode componentwise") {
  Polygraph F = load("sort.poly");
  Diagram d = compose0(F, encode_value(F, nlist({1})), encode_value(F, nlist({})));
  auto ts = decode_value(F, d);
  REQUIRE(ts.size() == 2);
  CHECK(list_of(ts[0]) == std::vector<int>{1});
  CHECK(list_of(ts[1]).empty());
}

TEST_CASE("diagrams containing function cells are not values") {
  Polygraph F = load("sort.poly");
  Diagram d = encode_value(F, nlist({1}));
  append_slice(F, d, 0, F.two_id("sort"));
  CHECK_THROWS_AS(decode_value(F, d), NotAValue);
}

TEST_CASE("value literal sugar understands numerals and lists") {
  Polygraph D = load("division.poly");
  CHECK(nat_of(parse_value_literal(D, "7", D.one_id("n"))) == 7);
  Polygraph F = load("sort.poly");
  TermP l = parse_value_literal(F, "[2,1]", F.one_id("l"));
  CHECK(list_of(l) == std::vector<int>{2, 1});
  CHECK(pretty_term(F, l) == "[2,1]");
}
