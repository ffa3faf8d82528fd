#include "poly/engine.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "json.hpp"

namespace poly {

size_t Trace::computation() const {
  size_t n = 0;
  for (const auto& e : events)
    if (e.kind == RuleKind::Computation) ++n;
  return n;
}
size_t Trace::structure() const { return events.size() - computation(); }

// -- patterns -------------------------------------------------------------------

namespace {

// Walks one wire upward from the boundary below slice `from` (exclusive) and
// returns the producing slice, or -1 when the wire is a diagram input.
int producer_of(const Polygraph& P, const Diagram& d, int from, int& position) {
  int p = position;
  for (int j = from - 1; j >= 0; --j) {
    const Slice& s = d.slices[j];
    const TwoCell& c = P.cell(s.cell);
    if (p < s.left) continue;
    if (p >= s.left + c.coarity()) {
      p += c.arity() - c.coarity();
      continue;
    }
    position = p;
    return j;
  }
  position = p;
  return -1;
}

PatNode pattern_node(const Polygraph& P, const Diagram& lhs, int from, int position, CellId sort, int& nvars) {
  int pos = position;
  int j = producer_of(P, lhs, from, pos);
  if (j < 0) {
    PatNode n;
    n.sort = sort;
    n.var = nvars++;
    return n;
  }
  const Slice& s = lhs.slices[j];
  const TwoCell& c = P.cell(s.cell);
  PatNode n;
  n.cell = s.cell;
  n.sort = sort;
  for (int k = 0; k < c.arity(); ++k) n.kids.push_back(pattern_node(P, lhs, j, s.left + k, c.src[k], nvars));
  return n;
}

}  // namespace

RulePattern extract_pattern(const Polygraph& P, int rule_index) {
  const ThreeCell& r = P.three_cells.at(static_cast<size_t>(rule_index));
  const Diagram& lhs = r.lhs;  // stored in exchange normal form
  if (lhs.slices.empty()) throw PolyError("rule " + r.name + " has a degenerate lhs");
  const Slice& head = lhs.slices.back();
  RulePattern pat;
  pat.rule = rule_index;
  pat.head = head.cell;
  int from = static_cast<int>(lhs.slices.size()) - 1;
  const TwoCell& hc = P.cell(head.cell);
  for (int k = 0; k < hc.arity(); ++k)
    pat.inputs.push_back(pattern_node(P, lhs, from, head.left + k, hc.src[k], pat.nvars));
  return pat;
}

// -- matching -------------------------------------------------------------------

namespace {

bool match_node(const Polygraph& P, const Diagram& d, const PatNode& n, int from, int position,
                std::vector<int>& covered) {
  if (n.var >= 0) return true;
  int pos = position;
  int j = producer_of(P, d, from, pos);
  if (j < 0) return false;
  const Slice& s = d.slices[j];
  if (s.cell != n.cell) return false;
  covered.push_back(j);
  const TwoCell& c = P.cell(s.cell);
  for (int k = 0; k < c.arity(); ++k)
    if (!match_node(P, d, n.kids[static_cast<size_t>(k)], j, s.left + k, covered)) return false;
  return true;
}

}  // namespace

RuleIndex::RuleIndex(const Polygraph& P) {
  for (size_t r = 0; r < P.three_cells.size(); ++r) {
    RulePattern pat = extract_pattern(P, static_cast<int>(r));
    by_head[pat.head].push_back(std::move(pat));
  }
}

std::vector<Match> find_redexes(const Polygraph& P, const RuleIndex& idx, const Diagram& d) {
  std::vector<Match> out;
  for (size_t i = 0; i < d.slices.size(); ++i) {
    const Slice& s = d.slices[i];
    auto it = idx.by_head.find(s.cell);
    if (it == idx.by_head.end()) continue;
    for (const RulePattern& pat : it->second) {
      std::vector<int> covered;
      bool ok = true;
      for (size_t k = 0; k < pat.inputs.size() && ok; ++k)
        ok = match_node(P, d, pat.inputs[k], static_cast<int>(i), s.left + static_cast<int>(k), covered);
      if (!ok) continue;
      std::sort(covered.begin(), covered.end());
      Match m;
      m.rule = pat.rule;
      m.anchor = static_cast<int>(i);
      m.anchor_left = s.left;
      m.covered = std::move(covered);
      out.push_back(std::move(m));
    }
  }
  return out;  // ordered by (anchor, left) since slices are scanned in order
}

std::vector<Match> find_redexes(const Polygraph& P, const Diagram& d) {
  return find_redexes(P, RuleIndex(P), d);
}

// -- application ----------------------------------------------------------------

Diagram apply_match(const Polygraph& P, const Diagram& d, const Match& m) {
  const ThreeCell& rule = P.three_cells.at(static_cast<size_t>(m.rule));
  if (m.anchor >= static_cast<int>(d.slices.size()) || d.slices[m.anchor].cell != extract_pattern(P, m.rule).head)
    throw StaleMatch("match no longer applies");

  Diagram w = d;
  std::vector<bool> matched(w.slices.size(), false);
  matched[static_cast<size_t>(m.anchor)] = true;
  for (int j : m.covered) matched[static_cast<size_t>(j)] = true;

  // Gather: expel non-matched slices from the matched span, upward when the
  // exchange relation allows it, downward otherwise.
  for (;;) {
    int lo = -1, hi = -1;
    for (size_t i = 0; i < matched.size(); ++i)
      if (matched[i]) {
        if (lo < 0) lo = static_cast<int>(i);
        hi = static_cast<int>(i);
      }
    int blocker = -1;
    for (int i = lo; i <= hi; ++i)
      if (!matched[static_cast<size_t>(i)]) {
        blocker = i;
        break;
      }
    if (blocker < 0) break;

    bool moved = false;
    {  // try up
      Diagram trial = w;
      std::vector<bool> tm = matched;
      int k = blocker;
      bool ok = true;
      while (k > lo) {
        if (!swappable_up(P, trial, static_cast<size_t>(k - 1)) &&
            !swappable_down(P, trial, static_cast<size_t>(k - 1))) {
          ok = false;
          break;
        }
        exchange_swap(P, trial, static_cast<size_t>(k - 1));
        std::swap(tm[static_cast<size_t>(k - 1)], tm[static_cast<size_t>(k)]);
        --k;
      }
      if (ok) {
        w = std::move(trial);
        matched = std::move(tm);
        moved = true;
      }
    }
    if (!moved) {  // try down
      int k = blocker;
      bool ok = true;
      while (k < hi) {
        if (!swappable_up(P, w, static_cast<size_t>(k)) && !swappable_down(P, w, static_cast<size_t>(k))) {
          ok = false;
          break;
        }
        exchange_swap(P, w, static_cast<size_t>(k));
        std::swap(matched[static_cast<size_t>(k)], matched[static_cast<size_t>(k + 1)]);
        ++k;
      }
      if (!ok) throw StaleMatch("matched region is not gatherable");
    }
  }

  int lo = -1, hi = -1;
  for (size_t i = 0; i < matched.size(); ++i)
    if (matched[i]) {
      if (lo < 0) lo = static_cast<int>(i);
      hi = static_cast<int>(i);
    }
  // The head consumes the full lhs width, so its offset is the context width.
  int L = w.slices[static_cast<size_t>(hi)].left;
  Word before = boundary_at(P, w, static_cast<size_t>(lo));
  int B = static_cast<int>(before.size()) - L - static_cast<int>(rule.lhs.src.size());
  if (B < 0) throw StaleMatch("block narrower than the rule source");
  for (size_t k = 0; k < rule.lhs.src.size(); ++k)
    if (before[static_cast<size_t>(L) + k] != rule.lhs.src[k]) throw StaleMatch("block source mismatch");

  Diagram out;
  out.src = w.src;
  out.tgt = w.tgt;
  out.slices.assign(w.slices.begin(), w.slices.begin() + lo);
  for (const Slice& s : rule.rhs.slices) out.slices.push_back({s.left + L, s.cell, s.right + B});
  out.slices.insert(out.slices.end(), w.slices.begin() + hi + 1, w.slices.end());
  return exchange_insertion_form(P, out);
}

// -- normalization ----------------------------------------------------------------

NormalizeResult normalize(const Polygraph& P, const Diagram& d, Strategy strategy, size_t fuel,
                          const TraceSampler* sampler) {
  NormalizeResult res;
  res.result = exchange_insertion_form(P, d);
  res.trace.initial = res.result;
  RuleIndex idx(P);
  int step = 0;
  for (;;) {
    auto matches = find_redexes(P, idx, res.result);
    const Match* pick = nullptr;
    if (strategy == Strategy::LeftmostTopmost) {
      if (!matches.empty()) pick = &matches.front();
    } else {
      for (const auto& m : matches)
        if (P.three_cells[static_cast<size_t>(m.rule)].kind == RuleKind::Structure) {
          pick = &m;
          break;
        }
      if (!pick && strategy == Strategy::StructureEager && !matches.empty()) pick = &matches.front();
    }
    if (!pick) break;
    if (res.trace.events.size() >= fuel) {
      res.fuel_exhausted = true;
      break;
    }
    const ThreeCell& rule = P.three_cells[static_cast<size_t>(pick->rule)];
    RewriteEvent ev;
    ev.step = step++;
    ev.rule = rule.name;
    ev.kind = rule.kind;
    ev.anchor = pick->anchor;
    ev.anchor_left = pick->anchor_left;
    ev.size_before = res.result.size();
    res.result = apply_match(P, res.result, *pick);
    ev.size_after = res.result.size();
    if (ev.size_after != ev.size_before - rule.lhs.size() + rule.rhs.size())
      throw PolyError("size bookkeeping violated by rule " + rule.name);
    if (sampler) (*sampler)(res.result, ev);
    res.trace.events.push_back(std::move(ev));
  }
  return res;
}

EvalResult evaluate(const Polygraph& P, CellId f, const std::vector<TermP>& args, Strategy strategy, size_t fuel,
                    const TraceSampler* sampler) {
  const TwoCell& fc = P.cell(f);
  if (static_cast<int>(args.size()) != fc.arity())
    throw ArityError("evaluate: `" + fc.name + "` expects " + std::to_string(fc.arity()) + " arguments");
  Diagram d = identity({});
  for (const auto& a : args) d = compose0(P, d, encode_value(P, a));
  if (d.tgt != fc.src) throw ArityError("evaluate: argument sorts do not match `" + fc.name + "`");
  append_slice(P, d, 0, f);

  EvalResult r;
  auto n = normalize(P, d, strategy, fuel, sampler);
  r.trace = std::move(n.trace);
  r.normal_form = std::move(n.result);
  if (n.fuel_exhausted) {
    r.status = EvalStatus::FuelExhausted;
    return r;
  }
  try {
    r.outputs = decode_value(P, r.normal_form);
    r.status = EvalStatus::Value;
  } catch (const NotAValue&) {
    r.status = EvalStatus::Undefined;
  }
  return r;
}

// -- completeness ------------------------------------------------------------------

namespace {

using ValueMemo = std::map<std::pair<CellId, int>, std::vector<TermP>>;

std::vector<TermP> enum_values_rec(const Polygraph& P, CellId sort, int depth, ValueMemo& memo) {
  if (depth <= 0) return {};
  auto key = std::make_pair(sort, depth);
  auto mit = memo.find(key);
  if (mit != memo.end()) return mit->second;
  std::vector<TermP> out;
  for (CellId c = 0; c < static_cast<CellId>(P.two_cells.size()); ++c) {
    const TwoCell& tc = P.cell(c);
    if (tc.kind != CellKind::Constructor || tc.tgt[0] != sort) continue;
    std::vector<std::vector<TermP>> per_arg;
    bool feasible = true;
    for (CellId a : tc.src) {
      per_arg.push_back(enum_values_rec(P, a, depth - 1, memo));
      if (per_arg.back().empty()) feasible = false;
    }
    if (!feasible) continue;
    std::vector<size_t> idx(per_arg.size(), 0);
    for (;;) {
      std::vector<TermP> args;
      for (size_t i = 0; i < per_arg.size(); ++i) args.push_back(per_arg[i][idx[i]]);
      out.push_back(Term::app(tc.name, std::move(args)));
      size_t i = 0;
      for (; i < idx.size(); ++i) {
        if (++idx[i] < per_arg[i].size()) break;
        idx[i] = 0;
      }
      if (i == idx.size()) break;
    }
  }
  memo[key] = out;
  return out;
}

}  // namespace

std::vector<TermP> enumerate_values(const Polygraph& P, CellId sort, int depth) {
  ValueMemo memo;
  return enum_values_rec(P, sort, depth, memo);
}

CompletenessReport check_completeness(const Polygraph& P, int depth) {
  CompletenessReport rep;
  ValueMemo memo;
  RuleIndex ridx(P);
  for (CellId f = 0; f < static_cast<CellId>(P.two_cells.size()); ++f) {
    const TwoCell& fc = P.cell(f);
    if (fc.kind != CellKind::Function) continue;
    std::vector<std::vector<TermP>> per_arg;
    bool any_empty = false;
    for (CellId a : fc.src) {
      per_arg.push_back(enum_values_rec(P, a, depth, memo));
      if (per_arg.back().empty()) any_empty = true;
    }
    if (any_empty) continue;
    std::vector<size_t> idx(per_arg.size(), 0);
    for (;;) {
      std::vector<TermP> args;
      for (size_t i = 0; i < per_arg.size(); ++i) args.push_back(per_arg[i][idx[i]]);
      Diagram d = identity({});
      for (const auto& a : args) d = compose0(P, d, encode_value(P, a));
      append_slice(P, d, 0, f);
      ++rep.checked;
      if (find_redexes(P, ridx, d).empty()) rep.gaps.push_back({fc.name, args});
      size_t i = 0;
      for (; i < idx.size(); ++i) {
        if (++idx[i] < per_arg[i].size()) break;
        idx[i] = 0;
      }
      if (i == idx.size()) break;
    }
  }
  return rep;
}

// -- orthogonality ------------------------------------------------------------------

namespace {

struct Unifier {
  std::map<int, PatNode> sub;  // var -> pattern over the union namespace

  const PatNode* lookup(int v) const {
    auto it = sub.find(v);
    return it == sub.end() ? nullptr : &it->second;
  }

  PatNode resolve(const PatNode& n) {
    if (n.var >= 0) {
      if (const PatNode* b = lookup(n.var)) return resolve(*b);
      return n;
    }
    PatNode r = n;
    for (auto& k : r.kids) k = resolve(k);
    return r;
  }

  bool unify(const PatNode& a, const PatNode& b) {
    PatNode x = resolve(a), y = resolve(b);
    if (x.var >= 0) {
      if (y.var == x.var) return true;
      sub[x.var] = y;
      return true;
    }
    if (y.var >= 0) {
      sub[y.var] = x;
      return true;
    }
    if (x.cell != y.cell) return false;
    for (size_t i = 0; i < x.kids.size(); ++i)
      if (!unify(x.kids[i], y.kids[i])) return false;
    return true;
  }
};

// Builds a diagram for a pattern over fresh variables; open leaves become
// input wires, appended left-to-right.
Diagram pattern_to_diagram(const Polygraph& P, const PatNode& n) {
  if (n.var >= 0) return identity({n.sort});
  Diagram d = identity({});
  for (const auto& k : n.kids) d = compose0(P, d, pattern_to_diagram(P, k));
  append_slice(P, d, 0, n.cell);
  return d;
}

PatNode offset_vars(const PatNode& n, int off) {
  PatNode r = n;
  if (r.var >= 0) r.var += off;
  for (auto& k : r.kids) k = offset_vars(k, off);
  return r;
}

}  // namespace

bool OrthogonalityReport::orthogonal() const {
  for (const auto& o : overlaps)
    if (!o.weak) return false;
  return true;
}

OrthogonalityReport check_orthogonal(const Polygraph& P) {
  OrthogonalityReport rep;
  std::vector<RulePattern> pats;
  std::vector<int> rules;
  for (size_t r = 0; r < P.three_cells.size(); ++r) {
    if (P.three_cells[r].kind != RuleKind::Computation) continue;
    pats.push_back(extract_pattern(P, static_cast<int>(r)));
    rules.push_back(static_cast<int>(r));
  }
  for (size_t i = 0; i < pats.size(); ++i) {
    for (size_t j = i + 1; j < pats.size(); ++j) {
      if (pats[i].head != pats[j].head) continue;
      Unifier u;
      bool ok = true;
      for (size_t k = 0; k < pats[i].inputs.size() && ok; ++k)
        ok = u.unify(pats[i].inputs[k], offset_vars(pats[j].inputs[k], pats[i].nvars));
      if (!ok) continue;
      // Overlapping pair: compare the two instantiated right sides. Rule
      // variables are numbered in depth-first left-to-right order, matching
      // the lhs source wires, so each instance plugs the resolved binding of
      // every variable into the rule's rhs.
      auto inst_for = [&](size_t which) {
        const RulePattern& pat = pats[which];
        int off = (which == i) ? 0 : pats[i].nvars;
        const ThreeCell& rule = P.three_cells[static_cast<size_t>(rules[which])];
        Diagram plug = identity({});
        for (int v = 0; v < pat.nvars; ++v) {
          PatNode leaf;
          leaf.var = v + off;
          leaf.sort = rule.lhs.src[static_cast<size_t>(v)];
          PatNode n = u.resolve(leaf);
          if (n.var >= 0 && n.sort < 0) n.sort = leaf.sort;
          plug = compose0(P, plug, pattern_to_diagram(P, n));
        }
        return compose1(P, plug, rule.rhs);
      };
      Diagram a = inst_for(i), b = inst_for(j);
      bool weak = diagram_equal(P, a, b);
      rep.overlaps.push_back(
          {P.three_cells[static_cast<size_t>(rules[i])].name, P.three_cells[static_cast<size_t>(rules[j])].name, weak});
    }
  }
  return rep;
}

std::string trace_to_jsonl(const Trace& t) {
  std::ostringstream os;
  for (const auto& e : t.events) {
    nlohmann::json j;
    j["step"] = e.step;
    j["rule"] = e.rule;
    j["kind"] = e.kind == RuleKind::Computation ? "computation" : "structure";
    j["anchor"] = e.anchor;
    j["size_before"] = e.size_before;
    j["size_after"] = e.size_after;
    if (e.heat) j["heat"] = *e.heat;
    if (e.current_max) j["current_max"] = *e.current_max;
    os << j.dump() << "\n";
  }
  return os.str();
}

}  // namespace poly
