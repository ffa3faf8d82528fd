#include "doctest.h"
#include "helpers.hpp"

using namespace poly;
using namespace helpers;

namespace {

const ThreeCell& rule_named(const Polygraph& P, const std::string& name) {
  for (const auto& r : P.three_cells)
    if (r.name == name) return r;
  throw std::runtime_error("no rule " + name);
}

}  // namespace

TEST_CASE("domain descriptors parse and enumerate") {
  Domain d = parse_domain("2N+1");
  CHECK(d.contains(1));
  CHECK(d.contains(7));
  CHECK(!d.contains(4));
  CHECK(d.nth(3) == 7);
  CHECK(d.clamp_below(8) == 7);
  Domain s = parse_domain("{1}");
  CHECK(s.count_up_to(64) == 1);
  Domain c = parse_domain("N+1");
  CHECK(c.contains(1));
  CHECK(!c.contains(0));
  CHECK_THROWS(parse_domain("2N+0"));  // members must be >= 1
}

TEST_CASE("currents on the third sort rule equal 2x+5 on both sides") {
  Polygraph F = load("sort.poly");
  Interp it = parse_interp_file(F, fixture("sort.interp"));
  const ThreeCell& r = rule_named(F, "sort(cons(x, cons(y, l)))");
  for (long long x = 0; x <= 30; ++x) {
    std::vector<long long> pt{1, 1, 2 * x + 1};
    CHECK(eval_current(it, r.lhs, pt) == std::vector<long long>{2 * x + 5});
    CHECK(eval_current(it, r.rhs, pt) == std::vector<long long>{2 * x + 5});
  }
}

TEST_CASE("heats on the third sort rule: lhs is 2x^2+8x+9 and dominates the rhs") {
  Polygraph F = load("sort.poly");
  Interp it = parse_interp_file(F, fixture("sort.interp"));
  Differential dd = base_differential(it);
  const ThreeCell& r = rule_named(F, "sort(cons(x, cons(y, l)))");
  for (long long x = 0; x <= 30; ++x) {
    std::vector<long long> pt{1, 1, 2 * x + 1};
    long long lhs = eval_heat(it, dd, r.lhs, pt);
    long long rhs = eval_heat(it, dd, r.rhs, pt);
    CHECK(lhs == 2 * x * x + 8 * x + 9);
    CHECK(lhs > rhs);
  }
}

TEST_CASE("the derived max interpretation is equal on both sides of the third sort rule") {
  Polygraph F = load("sort.poly");
  Interp it = parse_interp_file(F, fixture("sort.interp"));
  Differential dphi = derived_max(it);
  const ThreeCell& r = rule_named(F, "sort(cons(x, cons(y, l)))");
  for (long long x = 0; x <= 30; ++x) {
    std::vector<long long> pt{1, 1, 2 * x + 1};
    // the largest current in the rule is the one entering the head, 2x+5
    CHECK(eval_heat(it, dphi, r.lhs, pt) == 2 * x + 5);
    CHECK(eval_heat(it, dphi, r.rhs, pt) == 2 * x + 5);
  }
}

TEST_CASE("nu measures value sizes") {
  Polygraph F = load("sort.poly");
  Interp nu = nu_interp(F);
  Diagram d = encode_value(F, nlist({2, 1}));
  std::span<const long long> empty;
  CHECK(eval_current(nu, d, empty) == std::vector<long long>{5});
}

TEST_CASE("functorial and differential relations hold across compositions") {
  Polygraph F = load("sort.poly");
  Interp it = parse_interp_file(F, fixture("sort.interp"));
  Differential dd = base_differential(it);
  Differential dphi = derived_max(it);
  std::mt19937_64 rng(41);
  for (int i = 0; i < 100; ++i) {
    Diagram a = random_diagram(F, rng, 4, 8, true);
    Diagram b = random_diagram(F, rng, 4, 8, true);
    auto xa = random_point(it, a.src, rng, 6);
    auto xb = random_point(it, b.src, rng, 6);
    // star-0: product map, heats add / max
    Diagram ab = compose0(F, a, b);
    std::vector<long long> x = xa;
    x.insert(x.end(), xb.begin(), xb.end());
    auto va = eval_current(it, a, xa);
    auto vb = eval_current(it, b, xb);
    auto vab = eval_current(it, ab, x);
    std::vector<long long> expect = va;
    expect.insert(expect.end(), vb.begin(), vb.end());
    CHECK(vab == expect);
    CHECK(eval_heat(it, dd, ab, x) == eval_heat(it, dd, a, xa) + eval_heat(it, dd, b, xb));
    CHECK(eval_heat(it, dphi, ab, x) == std::max(eval_heat(it, dphi, a, xa), eval_heat(it, dphi, b, xb)));
    // star-1: composition, d(f;g) = df + dg(phi f)
    Diagram c = identity(a.tgt);
    if (!a.tgt.empty()) append_slice(F, c, 0, F.delta(a.tgt[0]));
    Diagram ac = compose1(F, a, c);
    CHECK(eval_heat(it, dd, ac, xa) == eval_heat(it, dd, a, xa) + eval_heat(it, dd, c, va));
  }
}

TEST_CASE("evaluation is invariant under exchange") {
  Polygraph F = load("sort.poly");
  Interp it = parse_interp_file(F, fixture("sort.interp"));
  Differential dd = base_differential(it);
  std::mt19937_64 rng(43);
  for (int i = 0; i < 100; ++i) {
    Diagram d = random_diagram(F, rng, 4, 12, true);
    auto x = random_point(it, d.src, rng, 6);
    auto v = eval_current(it, d, x);
    long long h = eval_heat(it, dd, d, x);
    Diagram e = d;
    random_swaps(F, e, rng, 50);
    CHECK(eval_current(it, e, x) == v);
    CHECK(eval_heat(it, dd, e, x) == h);
    Diagram nf = exchange_normal_form(F, e);
    CHECK(eval_current(it, nf, x) == v);
    CHECK(eval_heat(it, dd, nf, x) == h);
  }
}

TEST_CASE("structure heat of a duplication tree is the sum over pairs") {
  Polygraph F = load("sort.poly");
  Interp it = parse_interp_file(F, fixture("sort.interp"));
  Differential ds = structure_heat(it);
  CellId l = F.one_id("l");
  for (int n = 1; n <= 4; ++n) {
    Word u(n, l);
    Diagram d = dup_word(F, u);
    std::vector<long long> x;
    for (int i = 0; i < n; ++i) x.push_back(2 * i + 1);
    long long expect = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) expect += x[i] * x[j];
    CHECK(eval_heat(it, ds, d, x) == expect);
  }
}

TEST_CASE("structure heat vanishes on values and drops strictly across structure rules") {
  Polygraph F = load("sort.poly");
  Interp it = parse_interp_file(F, fixture("sort.interp"));
  Differential ds = structure_heat(it);
  std::mt19937_64 rng(47);
  std::span<const long long> empty;
  for (int i = 0; i < 30; ++i) {
    Diagram v = encode_value(F, nlist(random_list(rng, 6, 2)));
    CHECK(eval_heat(it, ds, v, empty) == 0);
  }
  for (const auto& r : F.three_cells) {
    if (r.kind != RuleKind::Structure) continue;
    Verdict v = check_compatible(it, CheckKind::StructureHeat, r, true, 24);
    CHECK(v.ok());
  }
}

TEST_CASE("additivity: paper interpretations have gamma = 1, a doubling constructor fails") {
  for (const auto& [p, i] : {std::pair{"division.poly", "division.interp"}, {"sort.poly", "sort.interp"},
                             {"arith.poly", "arith.interp"}}) {
    Polygraph P = load(p);
    Interp it = parse_interp_file(P, fixture(i));
    auto res = check_additive(it);
    CHECK(res.verdict.ok());
    CHECK(res.gamma == 1);
  }
  Polygraph D = load("division.poly");
  Interp bad = parse_interp_file(D, fixture("division.interp"));
  bad.currents[D.two_id("succ")] = {1, {parse_cell_map("2*x", {"x"}).outs[0]}};
  CHECK(!check_additive(bad).verdict.ok());
}

TEST_CASE("cartesian check accepts the defaults and rejects heated structure cells") {
  Polygraph D = load("division.poly");
  Interp it = parse_interp_file(D, fixture("division.interp"));
  CHECK(check_cartesian(it).ok());
  Interp bad = it;
  bad.heats[D.delta(D.one_id("n"))] = Expr::constant(1);
  CHECK(!check_cartesian(bad).ok());
}

TEST_CASE("monotonicity checking on maps") {
  Polygraph F = load("sort.poly");
  Interp it = parse_interp_file(F, fixture("sort.interp"));
  Word nn{F.one_id("l"), F.one_id("l")};
  auto xy = parse_cell_map("x+y", {"x", "y"});
  CHECK(check_monotone_map(it, xy.outs, nn, 16).ok());
  auto bad = parse_cell_map("5-x", {"x", "y"});
  CHECK(!check_monotone_map(it, bad.outs, nn, 16).ok());
  // the split current is monotone on the odd progression
  Word l1{F.one_id("l")};
  CHECK(check_monotone_map(it, it.currents[F.two_id("split")].outs, l1, 32).ok());
}

TEST_CASE("strict compatibility produces counterexamples when sabotaged") {
  Polygraph F = load("sort.poly");
  Interp it = parse_interp_file(F, fixture("sort.interp"));
  Interp bad = it;
  bad.heats[F.two_id("sort")] = Expr::constant(0);
  const ThreeCell& r = rule_named(F, "sort(cons(x, cons(y, l)))");
  Verdict v = check_compatible(bad, CheckKind::Heat, r, true, 32);
  CHECK(!v.ok());
  CHECK(v.status == Verdict::Status::Counterexample);
}

TEST_CASE("the raw-argument merge heat agrees with the paper's change of variables") {
  Polygraph F = load("sort.poly");
  Interp it = parse_interp_file(F, fixture("sort.interp"));
  ExprP merge_heat = it.heats[F.two_id("merge")];
  for (long long x = 0; x <= 20; ++x) {
    for (long long y = 0; y <= 20; ++y) {
      std::vector<long long> raw{2 * x + 1, 2 * y + 1};
      long long expect = (x * y == 0) ? 1 : x + y;
      CHECK(eval_expr(merge_heat, raw) == expect);
    }
  }
}

TEST_CASE("certify passes on all three fixtures and the serial sweep agrees with OpenMP") {
  for (const auto& [p, i] : {std::pair{"division.poly", "division.interp"}, {"sort.poly", "sort.interp"},
                             {"arith.poly", "arith.interp"}}) {
    Polygraph P = load(p);
    Interp it = parse_interp_file(P, fixture(i));
    Certificate par = certify(P, it, 32, 3, true);
    Certificate ser = certify(P, it, 32, 3, false);
    CHECK(par.member());
    CHECK(ser.member());
    REQUIRE(par.rules.size() == ser.rules.size());
    for (size_t k = 0; k < par.rules.size(); ++k) {
      CHECK(par.rules[k].phi_compatible.ok() == ser.rules[k].phi_compatible.ok());
      CHECK(par.rules[k].heat_strict.ok() == ser.rules[k].heat_strict.ok());
    }
  }
}

TEST_CASE("parallel and serial sweeps report the same first counterexample") {
  Polygraph F = load("sort.poly");
  Interp bad = parse_interp_file(F, fixture("sort.interp"));
  bad.heats[F.two_id("merge")] = Expr::constant(0);
  const ThreeCell& r = rule_named(F, "merge(cons(n0, l), cons(n0, m))");
  Verdict vp = check_compatible(bad, CheckKind::Heat, r, true, 64, true);
  Verdict vs = check_compatible(bad, CheckKind::Heat, r, true, 64, false);
  REQUIRE(!vp.ok());
  REQUIRE(!vs.ok());
  CHECK(vp.point == vs.point);
}
