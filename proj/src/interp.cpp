#include "poly/interp.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace poly {

// -- domains -------------------------------------------------------------------

bool Domain::contains(long long v) const {
  if (kind == Kind::Finite) return std::binary_search(elems.begin(), elems.end(), v);
  if (v < b) return false;
  if (a == 0) return v == b;
  return (v - b) % a == 0;
}
long long Domain::nth(long long k) const {
  if (kind == Kind::Finite) return elems.at(static_cast<size_t>(k));
  if (a == 0) {
    if (k != 0) throw DomainError("singleton domain has one point");
    return b;
  }
  return b + a * k;
}
long long Domain::count_up_to(long long B) const {
  if (kind == Kind::Finite) return std::min<long long>(B, static_cast<long long>(elems.size()));
  return a == 0 ? 1 : B;
}
long long Domain::clamp_below(long long x) const {
  if (kind == Kind::Finite) {
    long long best = elems.front();
    for (long long e : elems)
      if (e <= x) best = e;
    return best;
  }
  if (x < b) return b;
  if (a == 0) return b;
  return b + ((x - b) / a) * a;
}
std::string Domain::to_string() const {
  if (kind == Kind::Finite) {
    std::string s = "{";
    for (size_t i = 0; i < elems.size(); ++i) s += (i ? "," : "") + std::to_string(elems[i]);
    return s + "}";
  }
  if (a == 0) return "{" + std::to_string(b) + "}";
  return (a == 1 ? "" : std::to_string(a) + "*") + std::string("N+") + std::to_string(b);
}

Domain parse_domain(const std::string& text) {
  std::string s = text;
  s.erase(std::remove_if(s.begin(), s.end(), ::isspace), s.end());
  Domain d;
  if (s.empty()) throw PolyError("empty domain");
  if (s[0] == '{') {
    if (s.back() != '}') throw PolyError("unterminated domain set");
    d.kind = Domain::Kind::Finite;
    std::stringstream ss(s.substr(1, s.size() - 2));
    std::string item;
    while (std::getline(ss, item, ',')) d.elems.push_back(std::stoll(item));
    std::sort(d.elems.begin(), d.elems.end());
    if (d.elems.empty() || d.elems.front() < 1) throw PolyError("domain members must be >= 1");
    return d;
  }
  auto npos = s.find('N');
  if (npos == std::string::npos) {
    d.a = 0;
    d.b = std::stoll(s);
  } else {
    std::string coeff = s.substr(0, npos);
    if (!coeff.empty() && coeff.back() == '*') coeff.pop_back();
    d.a = coeff.empty() ? 1 : std::stoll(coeff);
    std::string rest = s.substr(npos + 1);
    if (rest.empty())
      d.b = 0;
    else if (rest[0] == '+')
      d.b = std::stoll(rest.substr(1));
    else
      throw PolyError("bad domain `" + text + "`");
  }
  if (d.b < 1) throw PolyError("domain offset must be >= 1 (non-empty part of N-{0})");
  if (d.a < 0) throw PolyError("domain step must be >= 0");
  return d;
}

// -- interp construction ----------------------------------------------------------


Interp make_interp(const Polygraph& P) {
  Interp it;
  it.P = &P;
  it.domains.assign(P.one_cells.size(), Domain{});
  it.currents.resize(P.two_cells.size());
  it.heats.assign(P.two_cells.size(), Expr::constant(0));
  for (CellId c = 0; c < static_cast<CellId>(P.two_cells.size()); ++c) {
    const TwoCell& tc = P.cell(c);
    CellMap m;
    m.arity = tc.arity();
    switch (tc.tag) {
      case StructureTag::Tau: m.outs = {Expr::var(1), Expr::var(0)}; break;
      case StructureTag::Delta: m.outs = {Expr::var(0), Expr::var(0)}; break;
      case StructureTag::Eps: m.outs = {}; break;
      case StructureTag::None:
        break;  // filled by the interp file
    }
    it.currents[static_cast<size_t>(c)] = std::move(m);
  }
  return it;
}

Interp nu_interp(const Polygraph& P) {
  Interp it = make_interp(P);
  for (CellId c = 0; c < static_cast<CellId>(P.two_cells.size()); ++c) {
    const TwoCell& tc = P.cell(c);
    if (tc.kind != CellKind::Constructor) continue;
    ExprP e = Expr::constant(1);
    for (int i = 0; i < tc.arity(); ++i) e = Expr::make(Expr::Op::Add, {e, Expr::var(i)});
    it.currents[static_cast<size_t>(c)] = {tc.arity(), {e}};
  }
  return it;
}

Interp parse_interp(const Polygraph& P, const std::string& text) {
  Interp it = make_interp(P);
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (auto h = raw.find('#'); h != std::string::npos) raw = raw.substr(0, h);
    size_t a = raw.find_first_not_of(" \t\r");
    if (a == std::string::npos) continue;
    size_t b = raw.find_last_not_of(" \t\r");
    std::string e = raw.substr(a, b - a + 1);
    std::istringstream ls(e);
    std::string kw;
    ls >> kw;
    auto eqpos = e.find('=');
    if (eqpos == std::string::npos) throw PolyError("interp line " + std::to_string(line) + ": expected `=`");
    std::string rhs = e.substr(eqpos + 1);
    if (kw == "domain") {
      std::string sort;
      ls >> sort;
      it.domains[static_cast<size_t>(P.one_id(sort))] = parse_domain(rhs);
      continue;
    }
    if (kw != "current" && kw != "heat")
      throw PolyError("interp line " + std::to_string(line) + ": expected domain/current/heat");
    std::string head = e.substr(kw.size(), eqpos - kw.size());
    head.erase(std::remove_if(head.begin(), head.end(), ::isspace), head.end());
    std::string cell_name = head;
    std::vector<std::string> vars;
    if (auto par = head.find('('); par != std::string::npos) {
      if (head.back() != ')') throw PolyError("interp line " + std::to_string(line) + ": bad cell header");
      cell_name = head.substr(0, par);
      std::stringstream vs(head.substr(par + 1, head.size() - par - 2));
      std::string v;
      while (std::getline(vs, v, ','))
        if (!v.empty()) vars.push_back(v);
    }
    CellId c = P.two_id(cell_name);
    const TwoCell& tc = P.cell(c);
    if (static_cast<int>(vars.size()) != tc.arity())
      throw PolyError("interp line " + std::to_string(line) + ": `" + cell_name + "` has arity " +
                      std::to_string(tc.arity()));
    CellMap m = parse_cell_map(rhs, vars);
    if (kw == "current") {
      if (static_cast<int>(m.outs.size()) != tc.coarity())
        throw PolyError("interp line " + std::to_string(line) + ": `" + cell_name + "` has coarity " +
                        std::to_string(tc.coarity()));
      it.currents[static_cast<size_t>(c)] = std::move(m);
    } else {
      if (m.outs.size() != 1) throw PolyError("interp line " + std::to_string(line) + ": heat must be scalar");
      it.heats[static_cast<size_t>(c)] = m.outs[0];
    }
  }
  for (CellId c = 0; c < static_cast<CellId>(P.two_cells.size()); ++c) {
    const TwoCell& tc = P.cell(c);
    if (tc.kind != CellKind::Structure && it.currents[static_cast<size_t>(c)].outs.empty() && tc.coarity() > 0)
      throw PolyError("interp misses current for cell `" + tc.name + "`");
  }
  return it;
}

Interp parse_interp_file(const Polygraph& P, const std::string& path) {
  std::ifstream f(path);
  if (!f) throw PolyError("cannot open " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_interp(P, ss.str());
}

// -- differentials ------------------------------------------------------------------

Differential base_differential(const Interp& it) { return {it.heats, HeatMonoid::Sum}; }

Differential derived_max(const Interp& it) {
  const Polygraph& P = *it.P;
  Differential dd;
  dd.monoid = HeatMonoid::Max;
  for (CellId c = 0; c < static_cast<CellId>(P.two_cells.size()); ++c) {
    const TwoCell& tc = P.cell(c);
    ExprP e;
    for (int i = 0; i < tc.arity(); ++i) {
      ExprP v = Expr::var(i);
      e = e ? Expr::make(Expr::Op::Max, {e, v}) : v;
    }
    for (const auto& out : it.currents[static_cast<size_t>(c)].outs)
      e = e ? Expr::make(Expr::Op::Max, {e, out}) : out;
    dd.heats.push_back(e ? e : Expr::constant(0));
  }
  return dd;
}

Differential structure_heat(const Interp& it) {
  const Polygraph& P = *it.P;
  Differential dd;
  dd.monoid = HeatMonoid::Sum;
  for (CellId c = 0; c < static_cast<CellId>(P.two_cells.size()); ++c) {
    switch (P.cell(c).tag) {
      case StructureTag::Tau: dd.heats.push_back(Expr::make(Expr::Op::Mul, {Expr::var(0), Expr::var(1)})); break;
      case StructureTag::Delta: dd.heats.push_back(Expr::make(Expr::Op::Mul, {Expr::var(0), Expr::var(0)})); break;
      case StructureTag::Eps: dd.heats.push_back(Expr::var(0)); break;
      default: dd.heats.push_back(Expr::constant(0));
    }
  }
  return dd;
}

// -- evaluation ----------------------------------------------------------------------

std::vector<long long> eval_current(const Interp& it, const Diagram& d, std::span<const long long> x) {
  const Polygraph& P = *it.P;
  if (x.size() != d.src.size()) throw DomainError("current input arity mismatch");
  std::vector<long long> wires(x.begin(), x.end());
  Word types = d.src;
  for (size_t i = 0; i < wires.size(); ++i)
    if (!it.domain_of(types[i]).contains(wires[i]))
      throw DomainError("input current " + std::to_string(wires[i]) + " outside domain of " +
                        P.one_cells[static_cast<size_t>(types[i])]);
  for (const Slice& s : d.slices) {
    const TwoCell& tc = P.cell(s.cell);
    const CellMap& m = it.currents[static_cast<size_t>(s.cell)];
    if (static_cast<int>(m.outs.size()) != tc.coarity())
      throw DomainError("no current assigned to cell `" + tc.name + "`");
    std::span<const long long> args(wires.data() + s.left, static_cast<size_t>(tc.arity()));
    std::vector<long long> outs;
    outs.reserve(m.outs.size());
    for (const auto& o : m.outs) outs.push_back(eval_expr(o, args));
    for (size_t k = 0; k < outs.size(); ++k)
      if (!it.domain_of(tc.tgt[k]).contains(outs[k]))
        throw DomainError("cell `" + tc.name + "` emits current " + std::to_string(outs[k]) +
                          " outside domain of " + P.one_cells[static_cast<size_t>(tc.tgt[k])]);
    wires.erase(wires.begin() + s.left, wires.begin() + s.left + tc.arity());
    wires.insert(wires.begin() + s.left, outs.begin(), outs.end());
    types.erase(types.begin() + s.left, types.begin() + s.left + tc.arity());
    types.insert(types.begin() + s.left, tc.tgt.begin(), tc.tgt.end());
  }
  return wires;
}

long long eval_heat(const Interp& it, const Differential& dd, const Diagram& d, std::span<const long long> x) {
  const Polygraph& P = *it.P;
  if (x.size() != d.src.size()) throw DomainError("heat input arity mismatch");
  std::vector<long long> wires(x.begin(), x.end());
  long long acc = 0;
  for (const Slice& s : d.slices) {
    const TwoCell& tc = P.cell(s.cell);
    std::span<const long long> args(wires.data() + s.left, static_cast<size_t>(tc.arity()));
    long long h = eval_expr(dd.heats[static_cast<size_t>(s.cell)], args);
    acc = dd.monoid == HeatMonoid::Sum ? acc + h : std::max(acc, h);
    const CellMap& m = it.currents[static_cast<size_t>(s.cell)];
    std::vector<long long> outs;
    outs.reserve(m.outs.size());
    for (const auto& o : m.outs) outs.push_back(eval_expr(o, args));
    wires.erase(wires.begin() + s.left, wires.begin() + s.left + tc.arity());
    wires.insert(wires.begin() + s.left, outs.begin(), outs.end());
  }
  return acc;
}

std::vector<ExprP> eval_current_sym(const Interp& it, const Diagram& d) {
  const Polygraph& P = *it.P;
  std::vector<ExprP> wires;
  for (size_t i = 0; i < d.src.size(); ++i) wires.push_back(Expr::var(static_cast<int>(i)));
  for (const Slice& s : d.slices) {
    const TwoCell& tc = P.cell(s.cell);
    const CellMap& m = it.currents[static_cast<size_t>(s.cell)];
    std::vector<ExprP> args(wires.begin() + s.left, wires.begin() + s.left + tc.arity());
    std::vector<ExprP> outs;
    for (const auto& o : m.outs) outs.push_back(subst_expr(o, args));
    wires.erase(wires.begin() + s.left, wires.begin() + s.left + tc.arity());
    wires.insert(wires.begin() + s.left, outs.begin(), outs.end());
  }
  return wires;
}

ExprP eval_heat_sym(const Interp& it, const Differential& dd, const Diagram& d) {
  const Polygraph& P = *it.P;
  std::vector<ExprP> wires;
  for (size_t i = 0; i < d.src.size(); ++i) wires.push_back(Expr::var(static_cast<int>(i)));
  ExprP acc = Expr::constant(0);
  bool first = true;
  for (const Slice& s : d.slices) {
    const TwoCell& tc = P.cell(s.cell);
    std::vector<ExprP> args(wires.begin() + s.left, wires.begin() + s.left + tc.arity());
    ExprP h = subst_expr(dd.heats[static_cast<size_t>(s.cell)], args);
    if (dd.monoid == HeatMonoid::Sum)
      acc = Expr::make(Expr::Op::Add, {acc, h});
    else
      acc = first ? h : Expr::make(Expr::Op::Max, {acc, h});
    first = false;
    const CellMap& m = it.currents[static_cast<size_t>(s.cell)];
    std::vector<ExprP> outs;
    for (const auto& o : m.outs) outs.push_back(subst_expr(o, args));
    wires.erase(wires.begin() + s.left, wires.begin() + s.left + tc.arity());
    wires.insert(wires.begin() + s.left, outs.begin(), outs.end());
  }
  return acc;
}

std::vector<long long> eval_clamped(const Interp& it, const std::vector<ExprP>& outs, const Word& src,
                                    std::span<const long long> x) {
  std::vector<long long> clamped(x.begin(), x.end());
  for (size_t i = 0; i < clamped.size(); ++i) clamped[i] = it.domain_of(src[i]).clamp_below(clamped[i]);
  std::vector<long long> res;
  for (const auto& o : outs) res.push_back(eval_expr(o, clamped));
  return res;
}

// -- grid sweeps ---------------------------------------------------------------------

namespace {

struct Grid {
  std::vector<const Domain*> dims;
  long long B = 64;
  long long total = 1;

  Grid(const Interp& it, const Word& src, long long bound) : B(bound) {
    for (CellId s : src) dims.push_back(&it.domain_of(s));
    for (const Domain* d : dims) total *= d->count_up_to(B);
  }
  std::vector<long long> point(long long flat) const {
    std::vector<long long> pt(dims.size());
    for (size_t i = 0; i < dims.size(); ++i) {
      long long n = dims[i]->count_up_to(B);
      pt[i] = dims[i]->nth(flat % n);
      flat /= n;
    }
    return pt;
  }
};

std::string vec_str(const std::vector<long long>& v) {
  std::string s = "(";
  for (size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + ")";
}

// Returns the lowest violating flat index, or -1. `test` must be pure.
template <typename Test>
long long sweep_serial(const Grid& g, const Test& test) {
  for (long long i = 0; i < g.total; ++i)
    if (!test(g.point(i))) return i;
  return -1;
}

template <typename Test>
long long sweep_parallel(const Grid& g, const Test& test) {
  long long bad = -1;
#pragma omp parallel
  {
    long long local = -1;
#pragma omp for schedule(static) nowait
    for (long long i = 0; i < g.total; ++i) {
      if (local >= 0) continue;
      if (!test(g.point(i))) local = i;
    }
    if (local >= 0) {
#pragma omp critical
      {
        if (bad < 0 || local < bad) bad = local;
      }
    }
  }
  return bad;
}

template <typename Test>
long long sweep(const Grid& g, const Test& test, bool parallel) {
  return parallel && g.total > 512 ? sweep_parallel(g, test) : sweep_serial(g, test);
}

}  // namespace

std::string Verdict::to_string() const {
  switch (status) {
    case Status::ProvedSymbolic: return "proved symbolically" + (note.empty() ? "" : " (" + note + ")");
    case Status::VerifiedUpTo: return "verified up to B=" + std::to_string(bound);
    case Status::Counterexample:
      return "counterexample at " + vec_str(point) + ": lhs=" + lhs_val + " rhs=" + rhs_val +
             (note.empty() ? "" : " (" + note + ")");
  }
  return "?";
}

Verdict check_compatible(const Interp& it, CheckKind kind, const ThreeCell& rule, bool strict, long long B,
                         bool parallel) {
  const Diagram& lhs = rule.lhs;
  const Diagram& rhs = rule.rhs;
  Differential dd;
  bool currents = kind == CheckKind::Current;
  switch (kind) {
    case CheckKind::Current: break;
    case CheckKind::Heat: dd = base_differential(it); break;
    case CheckKind::DerivedMax: dd = derived_max(it); break;
    case CheckKind::StructureHeat: dd = structure_heat(it); break;
  }

  // Symbolic route: guard-free polynomial sides of a sum-monoid comparison.
  if (!currents && dd.monoid == HeatMonoid::Sum) {
    int nv = static_cast<int>(lhs.src.size());
    auto ls = expr_to_poly(eval_heat_sym(it, dd, lhs), nv);
    auto rs = expr_to_poly(eval_heat_sym(it, dd, rhs), nv);
    if (ls && rs) {
      Polynomial diff = *ls - *rs;
      if (strict) diff = diff - Polynomial::constant(1, nv);
      if (diff.nonneg_coeffs()) {
        Verdict v;
        v.status = Verdict::Status::ProvedSymbolic;
        v.note = "nonnegative-coefficient difference";
        return v;
      }
      // inconclusive: a negative coefficient does not refute; fall through
    }
  }

  Grid g(it, lhs.src, B);
  auto test = [&](const std::vector<long long>& pt) {
    try {
      if (currents) {
        auto l = eval_current(it, lhs, pt);
        auto r = eval_current(it, rhs, pt);
        for (size_t k = 0; k < l.size(); ++k)
          if (l[k] < r[k]) return false;
        return true;
      }
      long long l = eval_heat(it, dd, lhs, pt);
      long long r = eval_heat(it, dd, rhs, pt);
      return strict ? l > r : l >= r;
    } catch (const DomainError&) {
      return false;
    }
  };
  long long bad = sweep(g, test, parallel);
  Verdict v;
  v.bound = B;
  if (bad < 0) {
    v.status = Verdict::Status::VerifiedUpTo;
    return v;
  }
  v.status = Verdict::Status::Counterexample;
  v.point = g.point(bad);
  try {
    if (currents) {
      v.lhs_val = vec_str(eval_current(it, lhs, v.point));
      v.rhs_val = vec_str(eval_current(it, rhs, v.point));
    } else {
      v.lhs_val = std::to_string(eval_heat(it, dd, lhs, v.point));
      v.rhs_val = std::to_string(eval_heat(it, dd, rhs, v.point));
    }
  } catch (const DomainError& e) {
    v.note = e.what();
  }
  return v;
}

Verdict check_monotone_map(const Interp& it, const std::vector<ExprP>& outs, const Word& src, long long B,
                           bool parallel) {
  Grid g(it, src, B);
  auto test = [&](const std::vector<long long>& pt) {
    std::vector<long long> base;
    for (const auto& o : outs) base.push_back(eval_expr(o, pt));
    for (size_t i = 0; i < pt.size(); ++i) {
      const Domain& dom = it.domain_of(src[i]);
      long long next = dom.kind == Domain::Kind::Progression
                           ? (dom.a == 0 ? pt[i] : pt[i] + dom.a)
                           : [&] {
                               auto itp = std::upper_bound(dom.elems.begin(), dom.elems.end(), pt[i]);
                               return itp == dom.elems.end() ? pt[i] : *itp;
                             }();
      if (next == pt[i]) continue;
      std::vector<long long> q = pt;
      q[i] = next;
      for (size_t k = 0; k < outs.size(); ++k)
        if (eval_expr(outs[k], q) < base[k]) return false;
    }
    return true;
  };
  long long bad = sweep(g, test, parallel);
  Verdict v;
  v.bound = B;
  if (bad < 0) {
    v.status = Verdict::Status::VerifiedUpTo;
  } else {
    v.status = Verdict::Status::Counterexample;
    v.point = g.point(bad);
    v.note = "monotonicity fails at a successor pair";
  }
  return v;
}

// -- structural checks ------------------------------------------------------------------

AdditiveResult check_additive(const Interp& it) {
  const Polygraph& P = *it.P;
  AdditiveResult res;
  res.verdict.status = Verdict::Status::ProvedSymbolic;
  res.verdict.note = "syntactic";
  for (CellId c = 0; c < static_cast<CellId>(P.two_cells.size()); ++c) {
    const TwoCell& tc = P.cell(c);
    if (tc.kind != CellKind::Constructor) continue;
    int n = tc.arity();
    auto poly = expr_to_poly(it.currents[static_cast<size_t>(c)].outs.at(0), n);
    bool ok = poly.has_value();
    long long cst = 0;
    if (ok) {
      Polynomial want;
      for (int i = 0; i < n; ++i) want = want + Polynomial::var(i, n);
      Polynomial diff = *poly - want;
      // remainder must be a single positive constant
      if (diff.coeffs.size() == 1) {
        auto& [mono, coeff] = *diff.coeffs.begin();
        bool constant = std::all_of(mono.begin(), mono.end(), [](int e) { return e == 0; });
        ok = constant && coeff >= 1;
        cst = coeff;
      } else {
        ok = false;
      }
    }
    if (!ok) {
      res.verdict.status = Verdict::Status::Counterexample;
      res.verdict.note = "constructor `" + tc.name + "` is not x1+...+xn+c with c >= 1";
      return res;
    }
    res.gamma = std::max(res.gamma, cst);
  }
  return res;
}

namespace {
bool expr_eq(const ExprP& a, const ExprP& b) {
  if (a->op != b->op || a->k != b->k || a->args.size() != b->args.size()) return false;
  for (size_t i = 0; i < a->args.size(); ++i)
    if (!expr_eq(a->args[i], b->args[i])) return false;
  return true;
}
bool is_zero(const ExprP& e) { return e->op == Expr::Op::Const && e->k == 0; }
}  // namespace

Verdict check_cartesian(const Interp& it) {
  const Polygraph& P = *it.P;
  Verdict v;
  v.status = Verdict::Status::ProvedSymbolic;
  v.note = "structural";
  for (CellId c = 0; c < static_cast<CellId>(P.two_cells.size()); ++c) {
    const TwoCell& tc = P.cell(c);
    const CellMap& m = it.currents[static_cast<size_t>(c)];
    auto fail = [&](const std::string& why) {
      v.status = Verdict::Status::Counterexample;
      v.note = "cell `" + tc.name + "`: " + why;
    };
    switch (tc.tag) {
      case StructureTag::Tau:
        if (m.outs.size() != 2 || !expr_eq(m.outs[0], Expr::var(1)) || !expr_eq(m.outs[1], Expr::var(0)))
          fail("tau must swap currents");
        break;
      case StructureTag::Delta:
        if (m.outs.size() != 2 || !expr_eq(m.outs[0], Expr::var(0)) || !expr_eq(m.outs[1], Expr::var(0)))
          fail("delta must copy its current");
        break;
      case StructureTag::Eps:
        if (!m.outs.empty()) fail("eps must drop its current");
        break;
      case StructureTag::None: break;
    }
    if (v.status == Verdict::Status::Counterexample) return v;
    if ((tc.kind == CellKind::Constructor || tc.kind == CellKind::Structure) &&
        !is_zero(it.heats[static_cast<size_t>(c)])) {
      fail("constructor/structure heat must be zero");
      return v;
    }
  }
  return v;
}

// -- certificate -------------------------------------------------------------------------

bool Certificate::member() const {
  if (!additive.verdict.ok() || !cartesian.ok() || !polynomial || !monotone.ok()) return false;
  for (const auto& r : rules)
    if (!r.phi_compatible.ok() || !r.heat_strict.ok() || !r.conservative.ok()) return false;
  return completeness.complete() && orthogonality.orthogonal();
}

Certificate certify(const Polygraph& P, const Interp& it, long long B, int depth, bool parallel) {
  Certificate cert;
  cert.bound = B;
  cert.additive = check_additive(it);
  cert.cartesian = check_cartesian(it);
  for (CellId c = 0; c < static_cast<CellId>(P.two_cells.size()); ++c) {
    const TwoCell& tc = P.cell(c);
    if (tc.kind != CellKind::Function) continue;
    int deg = expr_degree(it.heats[static_cast<size_t>(c)]);
    for (const auto& o : it.currents[static_cast<size_t>(c)].outs) deg = std::max(deg, expr_degree(o));
    cert.degrees.emplace_back(tc.name, deg);
  }
  cert.polynomial = true;  // the DSL has no exponential constructs

  cert.monotone.status = Verdict::Status::VerifiedUpTo;
  cert.monotone.bound = B;
  for (CellId c = 0; c < static_cast<CellId>(P.two_cells.size()) && cert.monotone.ok(); ++c) {
    const TwoCell& tc = P.cell(c);
    if (tc.arity() == 0) continue;
    std::vector<ExprP> maps = it.currents[static_cast<size_t>(c)].outs;
    maps.push_back(it.heats[static_cast<size_t>(c)]);
    Verdict v = check_monotone_map(it, maps, tc.src, std::min<long long>(B, 16), parallel);
    if (!v.ok()) {
      cert.monotone = v;
      cert.monotone.note = "cell `" + tc.name + "`: " + v.note;
    }
  }

  for (size_t r = 0; r < P.three_cells.size(); ++r) {
    const ThreeCell& rule = P.three_cells[r];
    Certificate::RuleCheck rc;
    rc.rule = rule.name;
    rc.kind = rule.kind;
    rc.phi_compatible = check_compatible(it, CheckKind::Current, rule, false, B, parallel);
    if (rule.kind == RuleKind::Computation) {
      rc.heat_strict = check_compatible(it, CheckKind::Heat, rule, true, B, parallel);
      rc.conservative = check_compatible(it, CheckKind::DerivedMax, rule, false, B, parallel);
    } else {
      // cartesian heats vanish on structure rules; nothing to sweep
      rc.heat_strict.status = Verdict::Status::ProvedSymbolic;
      rc.heat_strict.note = "structure rule: both heats are zero";
      rc.conservative.status = Verdict::Status::ProvedSymbolic;
      rc.conservative.note = "cartesian interpretation";
    }
    cert.rules.push_back(std::move(rc));
  }

  cert.completeness = check_completeness(P, depth);
  cert.orthogonality = check_orthogonal(P);
  return cert;
}

std::string Certificate::to_text() const {
  std::ostringstream os;
  os << "additive: " << (additive.verdict.ok() ? "yes" : "NO") << " (gamma=" << additive.gamma << ")\n";
  os << "cartesian: " << (cartesian.ok() ? "yes" : "NO") << (cartesian.ok() ? "" : " " + cartesian.note) << "\n";
  os << "polynomial: " << (polynomial ? "yes" : "NO");
  for (const auto& [f, d] : degrees) os << " " << f << ":deg<=" << d;
  os << "\nmonotone: " << (monotone.ok() ? "yes" : "NO " + monotone.note) << "\n";
  size_t bad = 0;
  for (const auto& r : rules) {
    bool ok = r.phi_compatible.ok() && r.heat_strict.ok() && r.conservative.ok();
    if (!ok) {
      ++bad;
      os << "rule " << r.rule << ":\n";
      if (!r.phi_compatible.ok()) os << "  phi: " << r.phi_compatible.to_string() << "\n";
      if (!r.heat_strict.ok()) os << "  heat(strict): " << r.heat_strict.to_string() << "\n";
      if (!r.conservative.ok()) os << "  conservative: " << r.conservative.to_string() << "\n";
    }
  }
  os << "rules: " << rules.size() - bad << "/" << rules.size() << " compatible (strict on computation)\n";
  os << "complete: " << (completeness.complete() ? "yes" : "NO") << " (" << completeness.checked << " value tuples)\n";
  if (!completeness.complete()) {
    const auto& g = completeness.gaps.front();
    os << "  first gap: " << g.function << " on";
    for (const auto& a : g.args) os << " " << term_str(a);
    os << "\n";
  }
  os << "orthogonal: " << (orthogonality.orthogonal() ? "yes" : "NO") << " (" << orthogonality.overlaps.size()
     << " overlaps";
  size_t weak = 0;
  for (const auto& o : orthogonality.overlaps) weak += o.weak;
  os << ", " << weak << " weak)\n";
  os << "member of P up to B=" << bound << ": " << (member() ? "YES" : "NO") << "\n";
  return os.str();
}

std::string Certificate::to_json() const {
  nlohmann::json j;
  j["bound"] = bound;
  j["additive"] = additive.verdict.ok();
  j["gamma"] = additive.gamma;
  j["cartesian"] = cartesian.ok();
  j["polynomial"] = polynomial;
  nlohmann::json degs = nlohmann::json::object();
  for (const auto& [f, d] : degrees) degs[f] = d;
  j["degrees"] = degs;
  j["monotone"] = monotone.ok();
  nlohmann::json rs = nlohmann::json::array();
  for (const auto& r : rules) {
    nlohmann::json o;
    o["rule"] = r.rule;
    o["kind"] = r.kind == RuleKind::Computation ? "computation" : "structure";
    o["phi_compatible"] = r.phi_compatible.ok();
    o["strictly_compatible"] = r.heat_strict.ok();
    o["conservative"] = r.conservative.ok();
    if (!r.phi_compatible.ok()) o["phi_counterexample"] = r.phi_compatible.to_string();
    if (!r.heat_strict.ok()) o["heat_counterexample"] = r.heat_strict.to_string();
    if (!r.conservative.ok()) o["conservative_counterexample"] = r.conservative.to_string();
    rs.push_back(o);
  }
  j["rules"] = rs;
  j["complete"] = completeness.complete();
  j["orthogonal"] = orthogonality.orthogonal();
  j["member_of_P"] = member();
  return j.dump(2);
}

}  // namespace poly
