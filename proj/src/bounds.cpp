#include "poly/bounds.hpp"

#include <sstream>

namespace poly {

BoundSet compute_bounds(const Polygraph& P, const Interp& it) {
  AdditiveResult add = check_additive(it);
  if (!add.verdict.ok()) throw NotAdditive("compute_bounds: " + add.verdict.note);
  BoundSet bs;
  bs.gamma = add.gamma;
  for (const auto& rule : P.three_cells)
    if (rule.kind == RuleKind::Computation)
      bs.bigK = std::max<long long>(bs.bigK, static_cast<long long>(structure_size(P, rule.rhs)));

  Differential dphi = derived_max(it);
  for (CellId c = 0; c < static_cast<CellId>(P.two_cells.size()); ++c) {
    const TwoCell& tc = P.cell(c);
    if (tc.kind != CellKind::Function) continue;
    std::vector<ExprP> scaled;
    for (int i = 0; i < tc.arity(); ++i)
      scaled.push_back(Expr::make(Expr::Op::Mul, {Expr::constant(bs.gamma), Expr::var(i)}));
    FunctionBounds fb;
    fb.cell = c;
    fb.M = subst_expr(dphi.heats[static_cast<size_t>(c)], scaled);
    fb.S = Expr::make(Expr::Op::Mul, {Expr::constant(bs.bigK), Expr::make(Expr::Op::Mul, {fb.M, fb.M})});
    fb.P = subst_expr(it.heats[static_cast<size_t>(c)], scaled);
    fb.Q = Expr::make(Expr::Op::Mul, {fb.P, Expr::make(Expr::Op::Add, {Expr::constant(1), fb.S})});
    bs.per_function[c] = std::move(fb);
  }
  return bs;
}

std::vector<long long> nu_of(const Polygraph& P, const std::vector<TermP>& args) {
  std::vector<long long> out;
  for (const auto& a : args) out.push_back(static_cast<long long>(encode_value(P, a).size()));
  return out;
}

long long eval_bound(const Interp& it, const ExprP& e, const Word& src, std::span<const long long> sizes) {
  // The bound maps already scale by gamma internally, so clamp the raw sizes
  // into the domains only when evaluating: sizes live in plain N, domains may
  // be sparser (e.g. odd list currents).
  std::vector<long long> x(sizes.begin(), sizes.end());
  std::vector<ExprP> outs{e};
  return eval_clamped(it, outs, src, x)[0];
}

TraceSampler make_sampler(const Interp& it) {
  auto base = std::make_shared<Differential>(base_differential(it));
  auto dphi = std::make_shared<Differential>(derived_max(it));
  auto dstr = std::make_shared<Differential>(structure_heat(it));
  const Interp* ip = &it;
  return [ip, base, dphi, dstr](const Diagram& d, RewriteEvent& ev) {
    std::span<const long long> empty;
    ev.heat = eval_heat(*ip, *base, d, empty);
    ev.current_max = eval_heat(*ip, *dphi, d, empty);
    ev.structure_heat = eval_heat(*ip, *dstr, d, empty);
  };
}

std::string MonitorReport::to_string() const {
  std::ostringstream os;
  for (const auto& r : rows)
    os << (r.ok ? "  ok  " : "  FAIL") << "  " << r.check << ": observed " << r.observed << " <= bound " << r.bound
       << "\n";
  for (const auto& v : violations) os << "  violation: " << v << "\n";
  return os.str();
}

MonitorReport monitor_trace(const Polygraph& P, const Interp& it, const Trace& trace, CellId f,
                            const std::vector<TermP>& args, const BoundSet& bounds) {
  MonitorReport rep;
  auto fbit = bounds.per_function.find(f);
  if (fbit == bounds.per_function.end()) throw PolyError("monitor_trace: no bounds for " + P.cell(f).name);
  const FunctionBounds& fb = fbit->second;
  const Word& src = P.cell(f).src;
  std::vector<long long> sizes = nu_of(P, args);

  long long p_bound = eval_bound(it, fb.P, src, sizes);
  long long q_bound = eval_bound(it, fb.Q, src, sizes);
  long long m_bound = eval_bound(it, fb.M, src, sizes);
  long long s_bound = eval_bound(it, fb.S, src, sizes);

  long long comp = static_cast<long long>(trace.computation());
  long long total = static_cast<long long>(trace.total());

  Differential base = base_differential(it);
  Differential dphi = derived_max(it);
  Differential dstr = structure_heat(it);
  std::span<const long long> empty;
  long long heat0 = eval_heat(it, base, trace.initial, empty);
  long long dphi0 = eval_heat(it, dphi, trace.initial, empty);
  long long dstr0 = eval_heat(it, dstr, trace.initial, empty);

  long long max_dphi = dphi0;
  long long prev_heat = heat0, prev_dphi = dphi0, prev_dstr = dstr0;
  long long max_sheat_increase = 0;
  for (const auto& ev : trace.events) {
    if (!ev.heat || !ev.current_max || !ev.structure_heat) {
      rep.violations.push_back("trace lacks interpretation samples; rerun with a sampler");
      return rep;
    }
    if (*ev.heat > prev_heat)
      rep.violations.push_back("heat increased at step " + std::to_string(ev.step) + " (" + ev.rule + ")");
    if (ev.kind == RuleKind::Computation && *ev.heat >= prev_heat)
      rep.violations.push_back("heat not strictly decreased at computation step " + std::to_string(ev.step));
    if (*ev.current_max > prev_dphi)
      rep.violations.push_back("max current increased at step " + std::to_string(ev.step) + " (" + ev.rule + ")");
    if (ev.kind == RuleKind::Computation) max_sheat_increase = std::max(max_sheat_increase, *ev.structure_heat - prev_dstr);
    if (ev.kind == RuleKind::Structure && *ev.structure_heat >= prev_dstr)
      rep.violations.push_back("structure heat not strictly decreased at structure step " + std::to_string(ev.step));
    max_dphi = std::max(max_dphi, *ev.current_max);
    prev_heat = *ev.heat;
    prev_dphi = *ev.current_max;
    prev_dstr = *ev.structure_heat;
  }

  auto row = [&](const std::string& name, long long obs, long long bnd) {
    rep.rows.push_back({name, obs, bnd, obs <= bnd});
    if (obs > bnd) rep.violations.push_back(name + ": " + std::to_string(obs) + " > " + std::to_string(bnd));
  };
  row("computation steps <= P" + std::string("(nu)"), comp, p_bound);
  row("total steps <= Q(nu)", total, q_bound);
  row("max current <= M(nu)", max_dphi, m_bound);
  row("structure-heat increase per computation step <= S(nu)", max_sheat_increase, s_bound);
  row("computation steps <= initial heat", comp, heat0);
  return rep;
}

}  // namespace poly
