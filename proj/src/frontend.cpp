#include "poly/frontend.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "poly/structure.hpp"

namespace poly {

TermP Term::var(std::string n) {
  auto t = std::make_shared<Term>();
  t->k = K::Var;
  t->head = std::move(n);
  return t;
}
TermP Term::app(std::string n, std::vector<TermP> a) {
  auto t = std::make_shared<Term>();
  t->k = K::App;
  t->head = std::move(n);
  t->args = std::move(a);
  return t;
}
TermP Term::tuple(std::vector<TermP> items) {
  auto t = std::make_shared<Term>();
  t->k = K::Tuple;
  t->args = std::move(items);
  return t;
}
TermP Term::let_in(std::vector<std::string> bs, TermP bound, TermP body) {
  auto t = std::make_shared<Term>();
  t->k = K::Let;
  t->binders = std::move(bs);
  t->bound = std::move(bound);
  t->body = std::move(body);
  return t;
}

std::string term_str(const TermP& t) {
  switch (t->k) {
    case Term::K::Var: return t->head;
    case Term::K::App: {
      if (t->args.empty()) return t->head;
      std::string s = t->head + "(";
      for (size_t i = 0; i < t->args.size(); ++i) s += (i ? ", " : "") + term_str(t->args[i]);
      return s + ")";
    }
    case Term::K::Tuple: {
      std::string s = "(";
      for (size_t i = 0; i < t->args.size(); ++i) s += (i ? ", " : "") + term_str(t->args[i]);
      return s + ")";
    }
    case Term::K::Let: {
      std::string s = "let (";
      for (size_t i = 0; i < t->binders.size(); ++i) s += (i ? ", " : "") + t->binders[i];
      return s + ") = " + term_str(t->bound) + " in " + term_str(t->body);
    }
  }
  return "?";
}

bool term_eq(const TermP& a, const TermP& b) {
  if (a->k != b->k || a->head != b->head || a->args.size() != b->args.size()) return false;
  for (size_t i = 0; i < a->args.size(); ++i)
    if (!term_eq(a->args[i], b->args[i])) return false;
  if (a->k == Term::K::Let)
    return a->binders == b->binders && term_eq(a->bound, b->bound) && term_eq(a->body, b->body);
  return true;
}

// -- term parser ----------------------------------------------------------------

namespace {

struct TermParser {
  const std::string& s;
  size_t pos = 0;
  int line;

  TermParser(const std::string& text, int ln) : s(text), line(ln) {}

  void skip() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  [[noreturn]] void fail(const std::string& msg) {
    throw SyntaxError("line " + std::to_string(line) + ", col " + std::to_string(pos + 1) + ": " + msg);
  }
  bool eat(char c) {
    skip();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  std::string ident() {
    skip();
    size_t start = pos;
    while (pos < s.size() && (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_' || s[pos] == '\''))
      ++pos;
    if (start == pos) fail("expected identifier");
    return s.substr(start, pos - start);
  }
  bool peek_word(const std::string& w) {
    skip();
    if (s.compare(pos, w.size(), w) != 0) return false;
    size_t end = pos + w.size();
    return end >= s.size() || !(std::isalnum(static_cast<unsigned char>(s[end])) || s[end] == '_');
  }

  TermP parse() {
    skip();
    if (peek_word("let")) {
      pos += 3;
      if (!eat('(')) fail("expected `(` after let");
      std::vector<std::string> binders;
      for (;;) {
        binders.push_back(ident());
        if (eat(',')) continue;
        if (eat(')')) break;
        fail("expected `,` or `)` in let binders");
      }
      if (!eat('=')) fail("expected `=` in let");
      TermP bound = parse();
      skip();
      if (!peek_word("in")) fail("expected `in`");
      pos += 2;
      TermP body = parse();
      return Term::let_in(std::move(binders), bound, body);
    }
    if (eat('(')) {
      std::vector<TermP> items{parse()};
      while (eat(',')) items.push_back(parse());
      if (!eat(')')) fail("expected `)`");
      if (items.size() == 1) return items[0];
      return Term::tuple(std::move(items));
    }
    std::string id = ident();
    if (eat('(')) {
      std::vector<TermP> args;
      skip();
      if (!eat(')')) {
        for (;;) {
          args.push_back(parse());
          if (eat(',')) continue;
          if (eat(')')) break;
          fail("expected `,` or `)` in arguments");
        }
      }
      return Term::app(id, std::move(args));
    }
    return Term::var(id);  // resolved against the signature later
  }
};

}  // namespace

TermP parse_term(const std::string& text) {
  TermParser p(text, 0);
  TermP t = p.parse();
  p.skip();
  if (p.pos != text.size()) p.fail("trailing input after term");
  return t;
}

// -- program parser ---------------------------------------------------------------

static std::vector<std::string> split_sorts(const std::string& s, int line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s + " ") {
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
      cur += c;
    } else if (c == ',' || c == '*' || std::isspace(static_cast<unsigned char>(c))) {
      if (!cur.empty()) out.push_back(cur), cur.clear();
    } else {
      throw SyntaxError("line " + std::to_string(line) + ": bad character in sort list");
    }
  }
  return out;
}

ProgramAST parse_program(const std::string& text) {
  ProgramAST ast;
  enum class Sec { None, Sorts, Ctors, Funs, Rules } sec = Sec::None;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  bool any = false;
  while (std::getline(in, raw)) {
    ++line;
    if (auto h = raw.find('#'); h != std::string::npos) raw = raw.substr(0, h);
    std::stringstream splitter(raw);
    std::string entry;
    while (std::getline(splitter, entry, ';')) {
      size_t a = entry.find_first_not_of(" \t\r");
      if (a == std::string::npos) continue;
      size_t b = entry.find_last_not_of(" \t\r");
      std::string e = entry.substr(a, b - a + 1);
      any = true;
      if (e == "sorts:") { sec = Sec::Sorts; continue; }
      if (e == "constructors:") { sec = Sec::Ctors; continue; }
      if (e == "functions:") { sec = Sec::Funs; continue; }
      if (e == "rules:") { sec = Sec::Rules; continue; }
      if (e.rfind("sorts:", 0) == 0) {
        for (auto& s : split_sorts(e.substr(6), line)) ast.sorts.push_back(s);
        sec = Sec::Sorts;
        continue;
      }
      switch (sec) {
        case Sec::Sorts:
          for (auto& s : split_sorts(e, line)) ast.sorts.push_back(s);
          break;
        case Sec::Ctors:
        case Sec::Funs: {
          auto colon = e.find(':');
          if (colon == std::string::npos) throw SyntaxError("line " + std::to_string(line) + ": expected `name : sig`");
          ProgramAST::CellDecl d;
          d.line = line;
          d.name = e.substr(0, colon);
          d.name.erase(std::remove_if(d.name.begin(), d.name.end(), ::isspace), d.name.end());
          std::string sig = e.substr(colon + 1);
          auto arrow = sig.find("->");
          if (arrow == std::string::npos) {
            d.tgt = split_sorts(sig, line);
          } else {
            d.src = split_sorts(sig.substr(0, arrow), line);
            d.tgt = split_sorts(sig.substr(arrow + 2), line);
          }
          if (d.name.empty() || d.tgt.empty())
            throw SyntaxError("line " + std::to_string(line) + ": bad cell declaration");
          (sec == Sec::Ctors ? ast.constructors : ast.functions).push_back(std::move(d));
          break;
        }
        case Sec::Rules: {
          auto arr = e.find("=>");
          if (arr == std::string::npos) throw SyntaxError("line " + std::to_string(line) + ": expected `lhs => rhs`");
          std::string lhs_text = e.substr(0, arr);
          TermParser lp(lhs_text, line);
          TermP lhs = lp.parse();
          std::string rhs_text = e.substr(arr + 2);
          TermParser rp(rhs_text, line);
          TermP rhs = rp.parse();
          rp.skip();
          if (rp.pos != rhs_text.size()) rp.fail("trailing input after rule");
          ast.rules.push_back({lhs, rhs, line});
          break;
        }
        case Sec::None:
          throw SyntaxError("line " + std::to_string(line) + ": content before any section header");
      }
    }
  }
  if (!any) throw SyntaxError("empty program");
  return ast;
}

ProgramAST parse_program_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw PolyError("cannot open " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_program(ss.str());
}

// -- elaboration -----------------------------------------------------------------

namespace {

// Pattern diagram: a constructor tree with open variable leaves.
// Collects variables in left-to-right order.
Diagram pattern_diagram(const Polygraph& P, const TermP& t, CellId expect,
                        std::vector<std::pair<std::string, CellId>>& vars, int line) {
  if (t->k == Term::K::Var) {
    auto it = P.two_index.find(t->head);
    if (it != P.two_index.end() && P.cell(it->second).kind != CellKind::Function) {
      const TwoCell& c = P.cell(it->second);
      if (c.arity() != 0)
        throw ArityError("line " + std::to_string(line) + ": `" + t->head + "` needs arguments");
      if (c.kind != CellKind::Constructor)
        throw PolyError("line " + std::to_string(line) + ": non-constructor in pattern");
      if (c.tgt[0] != expect) throw PolyError("line " + std::to_string(line) + ": sort mismatch in pattern");
      return whisker_cell(P, {}, it->second, {});
    }
    if (it != P.two_index.end())
      throw PolyError("line " + std::to_string(line) + ": function cell `" + t->head + "` in pattern");
    vars.emplace_back(t->head, expect);
    return identity({expect});
  }
  if (t->k != Term::K::App)
    throw SyntaxError("line " + std::to_string(line) + ": illegal pattern");
  auto it = P.two_index.find(t->head);
  if (it == P.two_index.end())
    throw UnknownSymbol("line " + std::to_string(line) + ": unknown cell `" + t->head + "`");
  const TwoCell& c = P.cell(it->second);
  if (c.kind != CellKind::Constructor)
    throw PolyError("line " + std::to_string(line) + ": pattern head `" + t->head + "` is not a constructor");
  if (static_cast<int>(t->args.size()) != c.arity())
    throw ArityError("line " + std::to_string(line) + ": `" + t->head + "` expects " + std::to_string(c.arity()) +
                     " arguments");
  if (c.tgt[0] != expect) throw PolyError("line " + std::to_string(line) + ": sort mismatch in pattern");
  Diagram d = identity({});
  for (size_t i = 0; i < t->args.size(); ++i)
    d = compose0(P, d, pattern_diagram(P, t->args[i], c.src[i], vars, line));
  append_slice(P, d, 0, it->second);
  return d;
}

struct RhsBuilder {
  const Polygraph& P;
  int line;
  Diagram d;                                    // d.tgt = current boundary
  std::vector<int> handles;                     // wire handle per position
  std::map<int, int> occ;                       // handle -> occurrence index
  int next_handle = 0;
  std::map<std::string, std::deque<int>> avail;  // var -> wire handles, occurrence order
  std::map<const Term*, int> leaf_occ;           // occurrence index per leaf node
  std::map<std::string, std::vector<int>> var_occs;

  RhsBuilder(const Polygraph& p, int ln) : P(p), line(ln) {}

  [[noreturn]] void fail(const std::string& msg) { throw PolyError("line " + std::to_string(line) + ": " + msg); }

  int fresh(int position, int o) {
    int h = next_handle++;
    handles.insert(handles.begin() + position, h);
    occ[h] = o;
    return h;
  }
  int pos_of(int h) const {
    for (size_t i = 0; i < handles.size(); ++i)
      if (handles[i] == h) return static_cast<int>(i);
    throw PolyError("internal: lost wire");
  }

  void number_leaves(const TermP& t, int& counter) {
    switch (t->k) {
      case Term::K::Var:
        var_occs[t->head].push_back(counter);
        leaf_occ[t.get()] = counter++;
        break;
      case Term::K::App:
        if (t->args.empty()) {
          leaf_occ[t.get()] = counter++;
        } else {
          for (const auto& a : t->args) number_leaves(a, counter);
        }
        break;
      case Term::K::Tuple:
        for (const auto& a : t->args) number_leaves(a, counter);
        break;
      case Term::K::Let:
        number_leaves(t->bound, counter);
        number_leaves(t->body, counter);
        break;
    }
  }

  // Balanced duplication tree producing n copies of the wire at `position`.
  void dup_tree(int position, int n, CellId sort) {
    if (n <= 1) return;
    CellId dl = P.delta(sort);
    append_slice(P, d, position, dl);
    int h = handles[position];
    handles.insert(handles.begin() + position, next_handle++);
    // reuse: left copy gets a fresh handle, right copy keeps h's slot
    occ[handles[position]] = occ[h];
    int left = (n + 1) / 2;
    dup_tree(position, left, sort);
    dup_tree(position + left, n - left, sort);
  }

  // Introduces the wires for a bound name (lhs variable or let binder) whose
  // single wire currently sits at `position`: erased when unused, duplicated
  // into occurrence-ordered copies when used more than once.
  int bind_name(const std::string& name, int position, CellId sort) {
    auto& occs = var_occs[name];
    if (occs.empty()) {
      append_slice(P, d, position, P.eps(sort));
      occ.erase(handles[position]);
      handles.erase(handles.begin() + position);
      return position;
    }
    dup_tree(position, static_cast<int>(occs.size()), sort);
    for (size_t i = 0; i < occs.size(); ++i) {
      int h = handles[position + static_cast<int>(i)];
      occ[h] = occs[i];
      avail[name].push_back(h);
    }
    return position + static_cast<int>(occs.size());
  }

  // Makes the operand wires adjacent, in order, expelling blockers toward the
  // side their next use lies on. Returns the position of the first operand.
  int route(const std::vector<int>& ops) {
    if (ops.empty()) fail("internal: routing without operands");
    std::vector<int> pos;
    for (int h : ops) pos.push_back(pos_of(h));
    int lo = *std::min_element(pos.begin(), pos.end());
    int hi = *std::max_element(pos.begin(), pos.end());
    int min_occ = occ.at(ops[0]), max_occ = occ.at(ops[0]);
    for (int h : ops) {
      min_occ = std::min(min_occ, occ.at(h));
      max_occ = std::max(max_occ, occ.at(h));
    }
    std::vector<int> left_blockers, right_blockers;
    for (int p = lo; p <= hi; ++p) {
      int h = handles[p];
      if (std::find(ops.begin(), ops.end(), h) != ops.end()) continue;
      int o = occ.at(h);
      if (o < min_occ)
        left_blockers.push_back(h);
      else if (o > max_occ)
        right_blockers.push_back(h);
      else if (p - lo <= hi - p)
        left_blockers.push_back(h);
      else
        right_blockers.push_back(h);
    }
    std::vector<int> target(handles.begin(), handles.begin() + lo);
    target.insert(target.end(), left_blockers.begin(), left_blockers.end());
    target.insert(target.end(), ops.begin(), ops.end());
    target.insert(target.end(), right_blockers.begin(), right_blockers.end());
    for (size_t p = hi + 1; p < handles.size(); ++p) target.push_back(handles[p]);

    // insertion sort toward `target`, one adjacent crossing per swap
    for (size_t i = lo; i < target.size(); ++i) {
      size_t j = i;
      while (j < handles.size() && handles[j] != target[i]) ++j;
      if (j >= handles.size()) fail("internal: routing lost a wire");
      for (; j > i; --j) {
        CellId ta = d.tgt[j - 1], tb = d.tgt[j];
        append_slice(P, d, static_cast<int>(j - 1), P.tau(ta, tb));
        std::swap(handles[j - 1], handles[j]);
      }
    }
    return lo + static_cast<int>(left_blockers.size());
  }

  // Emits `cell` over the routed operands; returns output handles.
  std::vector<int> emit(CellId cell, const std::vector<int>& ops, int leaf) {
    const TwoCell& c = P.cell(cell);
    int at;
    int o;
    if (ops.empty()) {
      o = leaf;
      at = 0;
      while (at < static_cast<int>(handles.size()) && occ.at(handles[at]) < o) ++at;
    } else {
      at = route(ops);
      o = occ.at(ops[0]);
      for (int h : ops) o = std::min(o, occ.at(h));
    }
    append_slice(P, d, at, cell);
    for (int k = 0; k < c.arity(); ++k) {
      occ.erase(handles[at]);
      handles.erase(handles.begin() + at);
    }
    std::vector<int> outs;
    for (int k = 0; k < c.coarity(); ++k) {
      int h = next_handle++;
      handles.insert(handles.begin() + at + k, h);
      occ[h] = o;
      outs.push_back(h);
    }
    return outs;
  }

  std::vector<int> build(const TermP& t) {
    switch (t->k) {
      case Term::K::Var: {
        auto it = avail.find(t->head);
        if (it == avail.end() || it->second.empty()) {
          // could still be a nullary constructor written without parens
          auto ci = P.two_index.find(t->head);
          if (ci != P.two_index.end() && P.cell(ci->second).arity() == 0)
            return emit(ci->second, {}, leaf_occ.at(t.get()));
          throw UnknownSymbol("line " + std::to_string(line) + ": unbound variable `" + t->head + "`");
        }
        int h = it->second.front();
        it->second.pop_front();
        return {h};
      }
      case Term::K::App: {
        auto ci = P.two_index.find(t->head);
        if (ci == P.two_index.end())
          throw UnknownSymbol("line " + std::to_string(line) + ": unknown cell `" + t->head + "`");
        const TwoCell& c = P.cell(ci->second);
        if (static_cast<int>(t->args.size()) != c.arity())
          throw ArityError("line " + std::to_string(line) + ": `" + t->head + "` expects " +
                           std::to_string(c.arity()) + " arguments");
        std::vector<int> ops;
        for (const auto& a : t->args) {
          auto outs = build(a);
          if (outs.size() != 1) fail("tuple used as a single argument");
          ops.push_back(outs[0]);
        }
        return emit(ci->second, ops, t->args.empty() ? leaf_occ.at(t.get()) : 0);
      }
      case Term::K::Tuple: {
        std::vector<int> outs;
        for (const auto& a : t->args) {
          auto o = build(a);
          outs.insert(outs.end(), o.begin(), o.end());
        }
        route(outs);
        return outs;
      }
      case Term::K::Let: {
        auto outs = build(t->bound);
        if (outs.size() != t->binders.size())
          throw ArityError("line " + std::to_string(line) + ": let binds " + std::to_string(t->binders.size()) +
                           " names but the bound term has " + std::to_string(outs.size()) + " outputs");
        // count binder occurrences in the body only
        for (size_t i = 0; i < t->binders.size(); ++i) {
          int p = pos_of(outs[i]);
          CellId sort = d.tgt[p];
          bind_name(t->binders[i], p, sort);
        }
        return build(t->body);
      }
    }
    fail("internal: bad term");
  }
};

}  // namespace

Polygraph elaborate(const ProgramAST& ast) {
  Polygraph P;
  for (const auto& s : ast.sorts) P.add_one_cell(s);
  auto declare = [&](const ProgramAST::CellDecl& d, CellKind kind) {
    TwoCell c;
    c.name = d.name;
    c.kind = kind;
    for (const auto& s : d.src) c.src.push_back(P.one_id(s));
    for (const auto& s : d.tgt) c.tgt.push_back(P.one_id(s));
    if (kind == CellKind::Constructor && c.coarity() != 1)
      throw PolyError("line " + std::to_string(d.line) + ": constructor `" + d.name + "` must have one output");
    P.add_two_cell(std::move(c));
  };
  for (const auto& d : ast.constructors) declare(d, CellKind::Constructor);
  for (const auto& d : ast.functions) declare(d, CellKind::Function);
  generate_structure_cells(P);

  for (const auto& r : ast.rules) {
    if (r.lhs->k != Term::K::App)
      throw SyntaxError("line " + std::to_string(r.line) + ": rule lhs must be a function application");
    auto fi = P.two_index.find(r.lhs->head);
    if (fi == P.two_index.end())
      throw UnknownSymbol("line " + std::to_string(r.line) + ": unknown function `" + r.lhs->head + "`");
    const TwoCell& f = P.cell(fi->second);
    if (f.kind != CellKind::Function)
      throw PolyError("line " + std::to_string(r.line) + ": rule head `" + f.name + "` is not a function cell");
    if (static_cast<int>(r.lhs->args.size()) != f.arity())
      throw ArityError("line " + std::to_string(r.line) + ": `" + f.name + "` expects " +
                       std::to_string(f.arity()) + " arguments");

    std::vector<std::pair<std::string, CellId>> vars;
    Diagram pat = identity({});
    for (size_t i = 0; i < r.lhs->args.size(); ++i)
      pat = compose0(P, pat, pattern_diagram(P, r.lhs->args[i], f.src[i], vars, r.line));
    for (size_t i = 0; i < vars.size(); ++i)
      for (size_t j = i + 1; j < vars.size(); ++j)
        if (vars[i].first == vars[j].first)
          throw NonLinearPattern("line " + std::to_string(r.line) + ": variable `" + vars[i].first +
                                 "` repeated in pattern");
    Diagram lhs = pat;
    append_slice(P, lhs, 0, fi->second);

    RhsBuilder b(P, r.line);
    int counter = 0;
    b.number_leaves(r.rhs, counter);
    Word src;
    for (const auto& [n, ty] : vars) src.push_back(ty);
    b.d = identity(src);
    for (size_t i = 0; i < src.size(); ++i) b.handles.push_back(b.next_handle++);
    int p = 0;
    for (const auto& [n, ty] : vars) p = b.bind_name(n, p, ty);
    auto outs = b.build(r.rhs);
    if (b.handles.size() != outs.size())
      throw PolyError("line " + std::to_string(r.line) + ": rhs leaves unused wires");
    if (outs.size() > 1) b.route(outs);
    if (b.d.tgt != f.tgt)
      throw PolyError("line " + std::to_string(r.line) + ": rhs output sorts do not match `" + f.name + "`");

    ThreeCell cell;
    cell.name = term_str(r.lhs);
    cell.kind = RuleKind::Computation;
    cell.lhs = exchange_normal_form(P, lhs);
    cell.rhs = exchange_normal_form(P, b.d);
    check_diagram(P, cell.lhs);
    check_diagram(P, cell.rhs);
    P.three_cells.push_back(std::move(cell));
  }

  generate_structure_rules(P);
  return P;
}

// -- values --------------------------------------------------------------------

Diagram encode_value(const Polygraph& P, const TermP& t) {
  if (t->k == Term::K::Tuple) {
    Diagram d = identity({});
    for (const auto& a : t->args) d = compose0(P, d, encode_value(P, a));
    return d;
  }
  if (t->k != Term::K::App && t->k != Term::K::Var) throw NotAValue("values contain no let bindings");
  auto it = P.two_index.find(t->head);
  if (it == P.two_index.end()) throw NotAValue("unknown or free symbol `" + t->head + "` in value");
  const TwoCell& c = P.cell(it->second);
  if (c.kind != CellKind::Constructor) throw NotAValue("`" + c.name + "` is not a constructor");
  if (static_cast<int>(t->args.size()) != c.arity()) throw NotAValue("arity mismatch at `" + c.name + "`");
  Diagram d = identity({});
  for (const auto& a : t->args) d = compose0(P, d, encode_value(P, a));
  append_slice(P, d, 0, it->second);
  return d;
}

std::vector<TermP> decode_value(const Polygraph& P, const Diagram& d) {
  if (!d.src.empty()) throw NotAValue("value diagrams start at the 0-cell");
  std::vector<TermP> wires;
  for (const auto& s : d.slices) {
    const TwoCell& c = P.cell(s.cell);
    if (c.kind != CellKind::Constructor) throw NotAValue("diagram contains non-constructor cell " + c.name);
    std::vector<TermP> args(wires.begin() + s.left, wires.begin() + s.left + c.arity());
    wires.erase(wires.begin() + s.left, wires.begin() + s.left + c.arity());
    wires.insert(wires.begin() + s.left, Term::app(c.name, std::move(args)));
  }
  if (wires.size() != d.tgt.size()) throw NotAValue("malformed value diagram");
  return wires;
}

// -- sugar -----------------------------------------------------------------------

static TermP int_value(const Polygraph& P, long long n, CellId sort) {
  // zero/succ chain when available, else a nullary `n<k>` constructor
  CellId zero = -1, succ = -1;
  for (CellId c = 0; c < static_cast<CellId>(P.two_cells.size()); ++c) {
    const TwoCell& tc = P.cell(c);
    if (tc.kind != CellKind::Constructor || tc.tgt[0] != sort) continue;
    if (tc.arity() == 0 && (tc.name == "zero" || tc.name == "nil0")) zero = c;
    if (tc.arity() == 1 && tc.src[0] == sort && tc.name == "succ") succ = c;
  }
  if (zero >= 0 && succ >= 0) {
    TermP t = Term::app(P.cell(zero).name);
    for (long long i = 0; i < n; ++i) t = Term::app(P.cell(succ).name, {t});
    return t;
  }
  std::string name = "n" + std::to_string(n);
  auto it = P.two_index.find(name);
  if (it != P.two_index.end() && P.cell(it->second).arity() == 0) return Term::app(name);
  throw PolyError("no numeral constructors for sort " + P.one_cells[sort]);
}

TermP parse_value_literal(const Polygraph& P, const std::string& text, CellId sort) {
  std::string s = text;
  s.erase(std::remove_if(s.begin(), s.end(), ::isspace), s.end());
  if (!s.empty() && (std::isdigit(static_cast<unsigned char>(s[0])))) return int_value(P, std::stoll(s), sort);
  if (!s.empty() && s[0] == '[') {
    if (s.back() != ']') throw SyntaxError("unterminated list literal");
    CellId cons = -1, nil = -1;
    for (CellId c = 0; c < static_cast<CellId>(P.two_cells.size()); ++c) {
      const TwoCell& tc = P.cell(c);
      if (tc.kind != CellKind::Constructor || tc.tgt[0] != sort) continue;
      if (tc.arity() == 0) nil = c;
      if (tc.arity() == 2 && tc.src[1] == sort) cons = c;
    }
    if (cons < 0 || nil < 0) throw PolyError("no list constructors for sort " + P.one_cells[sort]);
    CellId elem_sort = P.cell(cons).src[0];
    std::vector<TermP> elems;
    std::string body = s.substr(1, s.size() - 2);
    if (!body.empty()) {
      std::stringstream ss(body);
      std::string item;
      while (std::getline(ss, item, ',')) elems.push_back(parse_value_literal(P, item, elem_sort));
    }
    TermP t = Term::app(P.cell(nil).name);
    for (auto it = elems.rbegin(); it != elems.rend(); ++it) t = Term::app(P.cell(cons).name, {*it, t});
    return t;
  }
  return parse_term(text);
}

static bool as_int(const Polygraph& P, const TermP& t, long long& out) {
  if (t->k != Term::K::App) return false;
  if (t->head == "zero" && t->args.empty()) {
    out = 0;
    return true;
  }
  if (t->head == "succ" && t->args.size() == 1) {
    long long n;
    if (!as_int(P, t->args[0], n)) return false;
    out = n + 1;
    return true;
  }
  if (t->args.empty() && t->head.size() > 1 && t->head[0] == 'n' &&
      std::all_of(t->head.begin() + 1, t->head.end(), [](char c) { return std::isdigit((unsigned char)c); })) {
    out = std::stoll(t->head.substr(1));
    return true;
  }
  return false;
}

std::string pretty_term(const Polygraph& P, const TermP& t) {
  long long n;
  if (as_int(P, t, n)) return std::to_string(n);
  if (t->k == Term::K::App && (t->head == "nil" || t->head == "cons") && P.two_index.count("cons")) {
    std::vector<std::string> elems;
    TermP cur = t;
    bool list = true;
    while (true) {
      if (cur->head == "nil" && cur->args.empty()) break;
      if (cur->head == "cons" && cur->args.size() == 2) {
        elems.push_back(pretty_term(P, cur->args[0]));
        cur = cur->args[1];
      } else {
        list = false;
        break;
      }
    }
    if (list) {
      std::string s = "[";
      for (size_t i = 0; i < elems.size(); ++i) s += (i ? "," : "") + elems[i];
      return s + "]";
    }
  }
  if (t->k == Term::K::Tuple) {
    std::string s = "(";
    for (size_t i = 0; i < t->args.size(); ++i) s += (i ? ", " : "") + pretty_term(P, t->args[i]);
    return s + ")";
  }
  if (t->k == Term::K::App && !t->args.empty()) {
    std::string s = t->head + "(";
    for (size_t i = 0; i < t->args.size(); ++i) s += (i ? ", " : "") + pretty_term(P, t->args[i]);
    return s + ")";
  }
  return t->head;
}

}  // namespace poly
