#include "doctest.h"
#include "helpers.hpp"

using namespace poly;
using namespace helpers;

TEST_CASE("erasing a numeral matches one structure rule at the eraser") {
  Polygraph D = load("division.poly");
  Diagram d = encode_value(D, nat(2));
  append_slice(D, d, 0, D.eps(D.one_id("n")));
  auto ms = find_redexes(D, d);
  REQUIRE(ms.size() == 1);
  CHECK(D.three_cells[ms[0].rule].kind == RuleKind::Structure);
  CHECK(D.cell(d.slices[ms[0].anchor].cell).tag == StructureTag::Eps);
}

TEST_CASE("sorting [2;1] has exactly one computation redex, the 2-element rule") {
  Polygraph F = load("sort.poly");
  Diagram d = encode_value(F, nlist({2, 1}));
  append_slice(F, d, 0, F.two_id("sort"));
  auto ms = find_redexes(F, d);
  REQUIRE(ms.size() == 1);
  CHECK(F.three_cells[ms[0].rule].name == "sort(cons(x, cons(y, l)))");
}

TEST_CASE("values are normal forms") {
  Polygraph F = load("sort.poly");
  std::mt19937_64 rng(5);
  for (int i = 0; i < 50; ++i) {
    Diagram d = encode_value(F, nlist(random_list(rng, 8, 2)));
    CHECK(find_redexes(F, d).empty());
    auto res = normalize(F, d);
    CHECK(res.trace.events.empty());
  }
}

TEST_CASE("one step on minus(3,1) matches the term-rewriting oracle") {
  Polygraph D = load("division.poly");
  Diagram d = compose0(D, encode_value(D, nat(3)), encode_value(D, nat(1)));
  append_slice(D, d, 0, D.two_id("minus"));
  d = exchange_normal_form(D, d);
  auto ms = find_redexes(D, d);
  REQUIRE(ms.size() == 1);
  CHECK(D.three_cells[ms[0].rule].name == "minus(succ(x), succ(y))");
  Diagram stepped = apply_match(D, d, ms[0]);
  // oracle: the decoded one-step result is minus(2, 0) as a term
  Diagram expect = compose0(D, encode_value(D, nat(2)), encode_value(D, nat(0)));
  append_slice(D, expect, 0, D.two_id("minus"));
  CHECK(diagram_equal(D, stepped, expect));
}

TEST_CASE("size bookkeeping holds on random applications") {
  Polygraph F = load("sort.poly");
  std::mt19937_64 rng(29);
  for (int i = 0; i < 40; ++i) {
    Diagram d = encode_value(F, nlist(random_list(rng, 6, 2)));
    append_slice(F, d, 0, F.two_id("sort"));
    auto res = normalize(F, d);  // normalize() itself asserts the identity per step
    for (const auto& ev : res.trace.events) {
      const ThreeCell& r = *std::find_if(F.three_cells.begin(), F.three_cells.end(),
                                         [&](const ThreeCell& c) { return c.name == ev.rule; });
      CHECK(ev.size_after == ev.size_before - r.lhs.size() + r.rhs.size());
    }
  }
}

TEST_CASE("evaluate realizes the division semantics") {
  Polygraph D = load("division.poly");
  CellId minus = D.two_id("minus"), div = D.two_id("div");
  auto m = evaluate(D, minus, {nat(5), nat(2)});
  REQUIRE(m.status == EvalStatus::Value);
  CHECK(nat_of(m.outputs[0]) == 3);
  auto q = evaluate(D, div, {nat(7), nat(1)});
  REQUIRE(q.status == EvalStatus::Value);
  CHECK(nat_of(q.outputs[0]) == 3);
}

TEST_CASE("fuel zero on a nontrivial input reports exhaustion with a partial trace") {
  Polygraph D = load("division.poly");
  auto r = evaluate(D, D.two_id("div"), {nat(3), nat(1)}, Strategy::LeftmostTopmost, 0);
  CHECK(r.status == EvalStatus::FuelExhausted);
  CHECK(r.trace.events.empty());
}

TEST_CASE("strategies agree on certified programs") {
  Polygraph D = load("division.poly");
  Polygraph F = load("sort.poly");
  Polygraph N = load("arith.poly");
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<long long> small(0, 9);
  for (int i = 0; i < 30; ++i) {
    auto a = nat(small(rng)), b = nat(small(rng));
    for (CellId f : {D.two_id("minus"), D.two_id("div")}) {
      auto r1 = evaluate(D, f, {a, b}, Strategy::LeftmostTopmost);
      auto r2 = evaluate(D, f, {a, b}, Strategy::StructureEager);
      REQUIRE(r1.status == EvalStatus::Value);
      REQUIRE(r2.status == EvalStatus::Value);
      CHECK(term_eq(r1.outputs[0], r2.outputs[0]));
    }
    for (CellId f : {N.two_id("add"), N.two_id("mult")}) {
      auto r1 = evaluate(N, f, {a, b}, Strategy::LeftmostTopmost);
      auto r2 = evaluate(N, f, {a, b}, Strategy::StructureEager);
      CHECK(term_eq(r1.outputs[0], r2.outputs[0]));
    }
    TermP l = nlist(random_list(rng, 8, 2));
    auto r1 = evaluate(F, F.two_id("sort"), {l}, Strategy::LeftmostTopmost);
    auto r2 = evaluate(F, F.two_id("sort"), {l}, Strategy::StructureEager);
    REQUIRE(r1.status == EvalStatus::Value);
    CHECK(term_eq(r1.outputs[0], r2.outputs[0]));
  }
}

TEST_CASE("trace counts split into computation and structure") {
  Polygraph F = load("sort.poly");
  auto r = evaluate(F, F.two_id("sort"), {nlist({2, 1, 0})});
  CHECK(r.trace.total() == r.trace.computation() + r.trace.structure());
}

TEST_CASE("completeness holds for division and finds constructed gaps") {
  Polygraph D = load("division.poly");
  CHECK(check_completeness(D, 4).complete());

  // remove minus(x, zero): (m, 0) inputs become stuck
  Polygraph D2 = D;
  D2.three_cells.erase(std::remove_if(D2.three_cells.begin(), D2.three_cells.end(),
                                      [](const ThreeCell& r) { return r.name == "minus(x, zero)"; }),
                       D2.three_cells.end());
  auto rep = check_completeness(D2, 2);
  CHECK(!rep.complete());
  bool found = false;
  for (const auto& g : rep.gaps) {
    if (g.function != "minus") continue;
    if (nat_of(g.args[1]) == 0) found = true;
  }
  CHECK(found);
}

TEST_CASE("a program with no rules is incomplete everywhere") {
  ProgramAST ast = parse_program("sorts: n\nconstructors:\n zero : -> n\nfunctions:\n f : n -> n\nrules:\n");
  Polygraph P = elaborate(ast);
  // only structure rules exist; f has no rule at all
  auto rep = check_completeness(P, 3);
  CHECK(!rep.complete());
  CHECK(rep.gaps.size() == rep.checked);
}

TEST_CASE("orthogonality: arith is orthogonal, duplicates overlap, equal right sides are weak") {
  Polygraph N = load("arith.poly");
  CHECK(check_orthogonal(N).orthogonal());

  Polygraph N2 = N;
  for (const auto& r : N.three_cells)
    if (r.name == "add(zero, y)") {
      ThreeCell dup = r;
      dup.name = "add(zero, y)#dup";
      // different rhs: zero instead of y, so the overlap is not weak
      Diagram rhs = identity(r.rhs.src);
      append_slice(N2, rhs, 0, N2.eps(N2.one_id("n")));
      append_slice(N2, rhs, 0, N2.two_id("zero"));
      dup.rhs = rhs;
      N2.three_cells.push_back(dup);
    }
  auto rep = check_orthogonal(N2);
  CHECK(!rep.orthogonal());

  // f(nil, m) => m and f(x, nil) => x overlap at (nil, nil) with equal sides
  ProgramAST ast = parse_program(
      "sorts: l\nconstructors:\n nil : -> l\n one : l -> l\nfunctions:\n f : l, l -> l\nrules:\n"
      " f(nil, m) => m\n f(x, nil) => x\n f(one(x), one(y)) => f(x, y)\n");
  Polygraph P = elaborate(ast);
  auto wrep = check_orthogonal(P);
  REQUIRE(wrep.overlaps.size() == 1);
  CHECK(wrep.overlaps[0].weak);
  CHECK(wrep.orthogonal());
}

TEST_CASE("matching is complete for pattern-shaped rules") {
  Polygraph F = load("sort.poly");
  RuleIndex idx(F);
  std::mt19937_64 rng(37);
  for (int i = 0; i < 60; ++i) {
    auto xs = random_list(rng, 6, 2);
    Diagram d = encode_value(F, nlist(xs));
    append_slice(F, d, 0, F.two_id("sort"));
    auto ms = find_redexes(F, idx, d);
    bool head_match = false;
    for (const auto& m : ms) head_match = head_match || F.cell(d.slices[m.anchor].cell).name == "sort";
    CHECK(head_match);
  }
}
