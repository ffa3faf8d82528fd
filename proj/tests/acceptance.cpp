// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one pass/fail line per criterion.

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <iostream>
#include <random>

#include "helpers.hpp"
#include "poly/tmc.hpp"

using namespace poly;
using namespace helpers;

namespace {

int failures = 0;
int expected_failures = 0;

void report(int criterion, bool ok, const std::string& detail, bool expected_fail = false) {
  if (!ok && expected_fail) ++expected_failures;
  if (!ok && !expected_fail) ++failures;
  std::printf("CRITERION %d: %s%s — %s\n", criterion, ok ? "PASS" : "FAIL",
              (!ok && expected_fail) ? " (expected, see decisions ledger)" : "", detail.c_str());
}

struct Fixture {
  Polygraph prog;
  Interp interp;
  Fixture(const std::string& p, const std::string& i) : prog(load(p)), interp(parse_interp_file(prog, fixture(i))) {}
};

size_t structure_rule_count(const Polygraph& P) {
  size_t n = 0;
  for (const auto& r : P.three_cells) n += r.kind == RuleKind::Structure;
  return n;
}

void criterion1(Fixture& D, Fixture& F) {
  size_t d = structure_rule_count(D.prog);
  size_t f = structure_rule_count(F.prog);
  report(1, d == 8 && f == 30,
         "structure 3-cells: division " + std::to_string(d) + " (want 8), fusion sort " + std::to_string(f) +
             " (want 6N+18 = 30 at N = 2)");
}

void criterion2(Fixture& D, Fixture& F, Fixture& N) {
  bool ok = true;
  std::string bad;
  CellId minus = D.prog.two_id("minus"), divc = D.prog.two_id("div");
  for (long long m = 0; m <= 10 && ok; ++m) {
    for (long long n = 0; n <= 10 && ok; ++n) {
      auto r1 = evaluate(D.prog, minus, {nat(m), nat(n)});
      auto r2 = evaluate(D.prog, divc, {nat(m), nat(n)});
      if (r1.status != EvalStatus::Value || nat_of(r1.outputs[0]) != std::max<long long>(0, m - n)) {
        ok = false;
        bad = "minus(" + std::to_string(m) + "," + std::to_string(n) + ")";
      } else if (r2.status != EvalStatus::Value || nat_of(r2.outputs[0]) != m / (n + 1)) {
        ok = false;
        bad = "div(" + std::to_string(m) + "," + std::to_string(n) + ")";
      }
    }
  }
  std::mt19937_64 rng(2024);
  CellId sort = F.prog.two_id("sort");
  for (int i = 0; i < 200 && ok; ++i) {
    auto xs = random_list(rng, 20, 2);
    auto r = evaluate(F.prog, sort, {nlist(xs)});
    auto expect = xs;
    std::sort(expect.begin(), expect.end());
    if (r.status != EvalStatus::Value || list_of(r.outputs[0]) != expect) {
      ok = false;
      bad = "sort run " + std::to_string(i);
    }
  }
  CellId add = N.prog.two_id("add"), mult = N.prog.two_id("mult");
  for (long long m = 0; m <= 12 && ok; ++m) {
    for (long long n = 0; n <= 12 && ok; ++n) {
      auto r1 = evaluate(N.prog, add, {nat(m), nat(n)});
      auto r2 = evaluate(N.prog, mult, {nat(m), nat(n)});
      if (nat_of(r1.outputs[0]) != m + n || nat_of(r2.outputs[0]) != m * n) {
        ok = false;
        bad = "arith(" + std::to_string(m) + "," + std::to_string(n) + ")";
      }
    }
  }
  report(2, ok,
         ok ? "minus/div exact for m,n <= 10; sort equals a comparison sort on 200 random lists (length <= 20); "
              "add/mult exact for m,n <= 12"
            : "first mismatch at " + bad);
}

void criterion3(Fixture& F) {
  BoundSet bs = compute_bounds(F.prog, F.interp);
  CellId sort = F.prog.two_id("sort");
  const FunctionBounds& fb = bs.per_function.at(sort);
  const Word& src = F.prog.cell(sort).src;
  std::vector<long long> nu{5};
  long long P5 = eval_bound(F.interp, fb.P, src, nu);
  long long Q5 = eval_bound(F.interp, fb.Q, src, nu);
  TraceSampler s = make_sampler(F.interp);
  auto r = evaluate(F.prog, sort, {nlist({2, 1})}, Strategy::LeftmostTopmost, 10'000'000, &s);
  bool ok =
      P5 == 9 && Q5 == 234 && r.status == EvalStatus::Value && r.trace.computation() <= 9 && r.trace.total() <= 234;
  report(3, ok,
         "P_sort(5) = " + std::to_string(P5) + " (want 9), Q_sort(5) = " + std::to_string(Q5) +
             " (want 234); observed run on [2;1]: " + std::to_string(r.trace.computation()) + " computation / " +
             std::to_string(r.trace.total()) + " total steps");
}

void criterion4(Fixture& F) {
  const ThreeCell* rule = nullptr;
  for (const auto& r : F.prog.three_cells)
    if (r.name == "sort(cons(x, cons(y, l)))") rule = &r;
  Differential dd = base_differential(F.interp);
  Differential dphi = derived_max(F.interp);
  bool phi_ok = true, heat_ok = true, dphi_as_stated = true;
  long long dphi_measured = 0;
  for (long long x = 0; x <= 30; ++x) {
    std::vector<long long> pt{1, 1, 2 * x + 1};
    auto l = eval_current(F.interp, rule->lhs, pt);
    auto rr = eval_current(F.interp, rule->rhs, pt);
    phi_ok = phi_ok && l == std::vector<long long>{2 * x + 5} && rr == std::vector<long long>{2 * x + 5};
    long long hl = eval_heat(F.interp, dd, rule->lhs, pt);
    long long hr = eval_heat(F.interp, dd, rule->rhs, pt);
    heat_ok = heat_ok && hl == 2 * x * x + 8 * x + 9 && hl >= hr;
    long long ml = eval_heat(F.interp, dphi, rule->lhs, pt);
    long long mr = eval_heat(F.interp, dphi, rule->rhs, pt);
    if (x == 0) dphi_measured = ml;
    dphi_as_stated = dphi_as_stated && ml == 2 * x + 3 && mr == 2 * x + 3;
  }
  report(4, phi_ok && heat_ok && dphi_as_stated,
         std::string("phi = 2x+5 on both sides: ") + (phi_ok ? "yes" : "NO") +
             "; heat lhs = 2x^2+8x+9 >= rhs: " + (heat_ok ? "yes" : "NO") +
             "; d_phi = 2x+3 on both sides: " + (dphi_as_stated ? "yes" : "NO") +
             (dphi_as_stated ? ""
                             : " (measured 2x+5 both sides, e.g. " + std::to_string(dphi_measured) +
                                   " at x = 0; 2x+3 would need phi(cons) = x+y, contradicting the 2x+5 equality)"),
         /*expected_fail=*/phi_ok && heat_ok && !dphi_as_stated);
}

void criterion5(Fixture& D, Fixture& F, Fixture& N) {
  Certificate cd = certify(D.prog, D.interp, 64, 4);
  Certificate cf = certify(F.prog, F.interp, 64, 4);
  Certificate cn = certify(N.prog, N.interp, 64, 4);
  bool base = cd.member() && cd.additive.gamma == 1 && cf.member() && cf.additive.gamma == 1 && cn.member() &&
              cn.additive.gamma == 1;

  int caught = 0;
  auto sabotage = [&](const std::string& what, auto mutate) {
    Interp bad = F.interp;
    mutate(bad);
    Certificate c = certify(F.prog, bad, 64, 4);
    bool has_point = !c.additive.verdict.ok() || !c.cartesian.ok() || !c.monotone.ok();
    for (const auto& r : c.rules)
      has_point = has_point || r.phi_compatible.status == Verdict::Status::Counterexample ||
                  r.heat_strict.status == Verdict::Status::Counterexample ||
                  r.conservative.status == Verdict::Status::Counterexample;
    if (!c.member() && has_point)
      ++caught;
    else
      std::printf("  sabotage not caught: %s\n", what.c_str());
  };
  sabotage("heat sort := 0", [&](Interp& it) { it.heats[F.prog.two_id("sort")] = Expr::constant(0); });
  sabotage("heat merge := 0", [&](Interp& it) { it.heats[F.prog.two_id("merge")] = Expr::constant(0); });
  sabotage("current merge := x+y",
           [&](Interp& it) { it.currents[F.prog.two_id("merge")] = parse_cell_map("x+y", {"x", "y"}); });
  sabotage("current cons := x*y+1",
           [&](Interp& it) { it.currents[F.prog.two_id("cons")] = parse_cell_map("x*y+1", {"x", "y"}); });
  sabotage("heat delta(l) := 1",
           [&](Interp& it) { it.heats[static_cast<size_t>(F.prog.delta(F.prog.one_id("l")))] = Expr::constant(1); });

  report(5, base && caught == 5,
         std::string("division/sort/arith certify at B = 64 (additive gamma = 1, cartesian, polynomial, strictly "
                     "compatible, conservative, complete at depth 4, orthogonal): ") +
             (base ? "yes" : "NO") + "; sabotages caught: " + std::to_string(caught) + "/5");
}

void criterion6(Fixture& D, Fixture& F, Fixture& N) {
  std::mt19937_64 rng(4242);
  std::uniform_int_distribution<long long> small(0, 9);
  size_t runs = 0, violations = 0;
  std::string first;

  auto run_batch = [&](Fixture& fx, CellId f, auto gen, int count) {
    BoundSet bs = compute_bounds(fx.prog, fx.interp);
    TraceSampler s = make_sampler(fx.interp);
    for (int i = 0; i < count; ++i) {
      std::vector<TermP> args = gen();
      auto r = evaluate(fx.prog, f, args, Strategy::LeftmostTopmost, 10'000'000, &s);
      ++runs;
      if (r.status != EvalStatus::Value) {
        ++violations;
        continue;
      }
      MonitorReport rep = monitor_trace(fx.prog, fx.interp, r.trace, f, args, bs);
      if (!rep.ok()) {
        ++violations;
        if (first.empty()) first = fx.prog.cell(f).name + ": " + rep.violations.front();
      }
    }
  };

  run_batch(D, D.prog.two_id("minus"), [&] { return std::vector<TermP>{nat(small(rng)), nat(small(rng))}; }, 150);
  run_batch(D, D.prog.two_id("div"), [&] { return std::vector<TermP>{nat(small(rng)), nat(small(rng))}; }, 150);
  run_batch(F, F.prog.two_id("sort"), [&] { return std::vector<TermP>{nlist(random_list(rng, 8, 2))}; }, 250);
  run_batch(
      F, F.prog.two_id("merge"),
      [&] {
        auto a = random_list(rng, 6, 2), b = random_list(rng, 6, 2);
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        return std::vector<TermP>{nlist(a), nlist(b)};
      },
      150);
  run_batch(N, N.prog.two_id("add"), [&] { return std::vector<TermP>{nat(small(rng)), nat(small(rng))}; }, 150);
  run_batch(N, N.prog.two_id("mult"), [&] { return std::vector<TermP>{nat(small(rng)), nat(small(rng))}; }, 150);

  // structure-only normalization strictly decreases the structure heat
  Differential ds = structure_heat(F.interp);
  std::span<const long long> empty;
  for (int i = 0; i < 100; ++i) {
    Diagram d = encode_value(F.prog, nlist(random_list(rng, 5, 2)));
    append_slice(F.prog, d, 0, F.prog.delta(F.prog.one_id("l")));
    if (i % 2) append_slice(F.prog, d, 0, F.prog.eps(F.prog.one_id("l")));
    TraceSampler s = make_sampler(F.interp);
    auto res = normalize(F.prog, d, Strategy::StructureOnly, 100000, &s);
    ++runs;
    long long prev = eval_heat(F.interp, ds, res.trace.initial, empty);
    for (const auto& ev : res.trace.events) {
      if (!ev.structure_heat || *ev.structure_heat >= prev) {
        ++violations;
        if (first.empty()) first = "structure-only step did not decrease the structure heat";
        break;
      }
      prev = *ev.structure_heat;
    }
  }

  report(6, violations == 0,
         std::to_string(runs) +
             " monitored runs (heat strictly drops at computation steps, d_phi non-increasing, max current <= "
             "M(nu), structure-heat increase <= S(nu), computation steps <= initial heat, structure-only "
             "normalization strictly decreasing); violations: " +
             std::to_string(violations) + (first.empty() ? "" : " [" + first + "]"));
}

void criterion7(Fixture& D, Fixture& F, Fixture& N) {
  std::mt19937_64 rng(777);
  std::uniform_int_distribution<long long> small(0, 30);
  size_t checked = 0, bad = 0;

  auto check_value = [&](Fixture& fx, const TermP& t) {
    Diagram d = encode_value(fx.prog, t);
    std::span<const long long> empty;
    long long phi = eval_current(fx.interp, d, empty).at(0);
    long long size = static_cast<long long>(d.size());
    long long gamma = check_additive(fx.interp).gamma;
    Differential dphi = derived_max(fx.interp);
    long long m = eval_heat(fx.interp, dphi, d, empty);
    Interp nu = nu_interp(fx.prog);
    long long nu_v = eval_current(nu, d, empty).at(0);
    ++checked;
    if (!(size <= phi && phi <= gamma * size && m == phi && nu_v == size)) ++bad;
  };

  for (int i = 0; i < 500; ++i) check_value(D, nat(small(rng)));
  for (int i = 0; i < 500; ++i) check_value(F, nlist(random_list(rng, 12, 2)));
  for (int i = 0; i < 500; ++i) check_value(N, nat(small(rng)));

  report(7, bad == 0,
         std::to_string(checked) +
             " random values: ||t|| <= phi(t) <= gamma*||t||, d_phi(t) = phi(t), nu(t) = ||t||; failures: " +
             std::to_string(bad));
}

void criterion8(Fixture& F) {
  std::mt19937_64 rng(888);
  size_t bad = 0;
  Differential dd = base_differential(F.interp);
  Differential dphi = derived_max(F.interp);
  std::vector<CellId> functions;
  for (CellId c = 0; c < static_cast<CellId>(F.prog.two_cells.size()); ++c)
    if (F.prog.cell(c).kind == CellKind::Function) functions.push_back(c);
  for (int i = 0; i < 500; ++i) {
    Diagram d = random_diagram(F.prog, rng, 4, 14, true);
    auto x = random_point(F.interp, d.src, rng, 8);
    size_t sz = size_wrt(d, functions);
    auto cur = eval_current(F.interp, d, x);
    long long heat = eval_heat(F.interp, dd, d, x);
    long long mx = eval_heat(F.interp, dphi, d, x);
    Diagram e = d;
    random_swaps(F.prog, e, rng, 50);
    Diagram nf = exchange_normal_form(F.prog, e);
    bool ok = size_wrt(nf, functions) == sz && eval_current(F.interp, e, x) == cur &&
              eval_current(F.interp, nf, x) == cur && eval_heat(F.interp, dd, nf, x) == heat &&
              eval_heat(F.interp, dphi, nf, x) == mx;
    if (!ok) ++bad;
  }
  report(8, bad == 0,
         "500 random diagrams, 50 random legal swaps each, then normalization: size(.,X), currents and heats "
         "unchanged; failures: " +
             std::to_string(bad));
}

void criterion9() {
  TuringMachine M = parse_tm_file(fixture("ident.tm"));
  std::vector<std::vector<int>> words{{}};
  {
    std::vector<std::vector<int>> prev{{}};
    for (int len = 1; len <= 6; ++len) {
      std::vector<std::vector<int>> next;
      for (const auto& w : prev)
        for (int a = 0; a < 2; ++a) {
          auto v = w;
          v.push_back(a);
          next.push_back(v);
          words.push_back(v);
        }
      prev = std::move(next);
    }
  }

  Polygraph P = compile_tm(M);
  CellId f = P.two_id("main");
  size_t plain_bad = 0;
  for (const auto& w : words) {
    TMConfig fin = simulate_tm(M, w, 10000);
    auto r = evaluate(P, f, {word_to_term(M, w)});
    if (r.status != EvalStatus::Value || term_to_word(M, r.outputs[0]) != fin.right) ++plain_bad;
  }

  ClockedCompile cc = compile_clocked_tm(M, parse_poly("x+2"));
  Interp it = parse_interp(cc.program, cc.interp_text);
  Certificate cert = certify(cc.program, it, 64, 4);
  CellId cf = cc.program.two_id("main");
  size_t clocked_bad = 0;
  for (const auto& w : words) {
    TMConfig fin = simulate_tm(M, w, 10000);
    auto r = evaluate(cc.program, cf, {word_to_term(M, w)});
    if (r.status != EvalStatus::Value || term_to_word(M, r.outputs[0]) != fin.right) ++clocked_bad;
  }

  ClockedCompile uc = compile_clocked_tm(M, parse_poly("1"));
  CellId uf = uc.program.two_id("main");
  auto r = evaluate(uc.program, uf, {word_to_term(M, {0, 1})});
  bool under_detected = r.status == EvalStatus::Value && term_to_word(M, r.outputs[0]) != std::vector<int>{0, 1};

  report(9, plain_bad == 0 && cert.member() && clocked_bad == 0 && under_detected,
         "plain compile agrees with the simulator on all " + std::to_string(words.size()) +
             " words up to length 6 (" + std::to_string(plain_bad) + " mismatches); clocked compile certifies (" +
             (cert.member() ? "member of P" : "NOT a member") + ") and agrees (" + std::to_string(clocked_bad) +
             " mismatches); under-clocked compile detected by oracle mismatch: " + (under_detected ? "yes" : "NO"));
}

}  // namespace

int main() {
  Fixture D("division.poly", "division.interp");
  Fixture F("sort.poly", "sort.interp");
  Fixture N("arith.poly", "arith.interp");

  criterion1(D, F);
  criterion2(D, F, N);
  criterion3(F);
  criterion4(F);
  criterion5(D, F, N);
  criterion6(D, F, N);
  criterion7(D, F, N);
  criterion8(F);
  criterion9();

  if (expected_failures)
    std::printf("%d expected failure(s), documented in the decisions ledger.\n", expected_failures);
  if (failures) {
    std::printf("%d criterion(s) failed.\n", failures);
    return 1;
  }
  std::printf("all other criteria passed.\n");
  return 0;
}
