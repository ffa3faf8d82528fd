#include "poly/tmc.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace poly {

void TuringMachine::check_total() const {
  for (int q = 0; q < static_cast<int>(states.size()); ++q) {
    if (q == qf) continue;
    for (int a = 0; a < nsymbols(); ++a)
      if (!delta.count({q, a}))
        throw PolyError("transition table misses delta(" + states[static_cast<size_t>(q)] + ", " + symbol_name(a) +
                        ")");
  }
  for (const auto& [qa, act] : delta) {
    if (qa.first == qf) throw PolyError("final state has outgoing transitions");
    (void)act;
  }
}

TuringMachine parse_tm(const std::string& text) {
  TuringMachine M;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  auto sym_index = [&](const std::string& s) -> int {
    if (s == "#") return M.blank();
    auto it = std::find(M.alphabet.begin(), M.alphabet.end(), s);
    if (it == M.alphabet.end()) throw SyntaxError("line " + std::to_string(line) + ": unknown symbol " + s);
    return static_cast<int>(it - M.alphabet.begin());
  };
  auto state_index = [&](const std::string& s) -> int {
    auto it = std::find(M.states.begin(), M.states.end(), s);
    if (it == M.states.end()) throw SyntaxError("line " + std::to_string(line) + ": unknown state " + s);
    return static_cast<int>(it - M.states.begin());
  };
  while (std::getline(in, raw)) {
    ++line;
    // '#' is the blank symbol inside delta lines; only whole-line comments
    auto first = raw.find_first_not_of(" \t\r");
    if (first == std::string::npos || raw[first] == '#') continue;
    std::istringstream ls(raw);
    std::string kw;
    if (!(ls >> kw)) continue;
    if (kw == "alphabet:") {
      std::string s;
      while (ls >> s) M.alphabet.push_back(s);
    } else if (kw == "states:") {
      std::string s;
      while (ls >> s) M.states.push_back(s);
    } else if (kw == "start:") {
      std::string s;
      ls >> s;
      M.q0 = state_index(s);
    } else if (kw == "final:") {
      std::string s;
      ls >> s;
      M.qf = state_index(s);
    } else if (kw == "delta") {
      std::string q, a, arrow, q2, c, d;
      if (!(ls >> q >> a >> arrow >> q2 >> c >> d) || arrow != "->")
        throw SyntaxError("line " + std::to_string(line) + ": expected `delta q a -> q' c L|R`");
      TuringMachine::Action act;
      act.state = state_index(q2);
      act.write = sym_index(c);
      if (d != "L" && d != "R") throw SyntaxError("line " + std::to_string(line) + ": direction must be L or R");
      act.dir = d[0];
      M.delta[{state_index(q), sym_index(a)}] = act;
    } else {
      throw SyntaxError("line " + std::to_string(line) + ": unknown directive `" + kw + "`");
    }
  }
  if (M.q0 < 0 || M.qf < 0) throw SyntaxError("machine needs start: and final: states");
  M.check_total();
  return M;
}

TuringMachine parse_tm_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw PolyError("cannot open " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_tm(ss.str());
}

TMConfig tm_start(const TuringMachine& M, const std::vector<int>& word) {
  TMConfig c;
  c.state = M.q0;
  c.head = M.blank();
  c.right = word;
  return c;
}

bool tm_step(const TuringMachine& M, TMConfig& c) {
  if (c.state == M.qf) return false;
  const auto& act = M.delta.at({c.state, c.head});
  if (act.dir == 'L') {
    if (c.left.empty()) {
      c.right.insert(c.right.begin(), act.write);
      c.head = M.blank();
    } else {
      c.right.insert(c.right.begin(), act.write);
      c.head = c.left.front();
      c.left.erase(c.left.begin());
    }
  } else {
    if (c.right.empty()) {
      c.left.insert(c.left.begin(), act.write);
      c.head = M.blank();
    } else {
      c.left.insert(c.left.begin(), act.write);
      c.head = c.right.front();
      c.right.erase(c.right.begin());
    }
  }
  c.state = act.state;
  return true;
}

TMConfig simulate_tm(const TuringMachine& M, const std::vector<int>& word, size_t max_steps, size_t* steps_taken) {
  TMConfig c = tm_start(M, word);
  size_t n = 0;
  while (c.state != M.qf) {
    if (n >= max_steps) throw StepLimit("simulation exceeded " + std::to_string(max_steps) + " steps");
    tm_step(M, c);
    ++n;
  }
  if (steps_taken) *steps_taken = n;
  return c;
}

TermP word_to_term(const TuringMachine& M, const std::vector<int>& w) {
  TermP t = Term::app("nil");
  for (auto it = w.rbegin(); it != w.rend(); ++it) t = Term::app(M.symbol_name(*it), {t});
  return t;
}

std::vector<int> term_to_word(const TuringMachine& M, const TermP& t) {
  std::vector<int> out;
  TermP cur = t;
  while (true) {
    if (cur->head == "nil") return out;
    if (cur->args.size() != 1) throw NotAValue("not a word value: " + term_str(t));
    bool found = false;
    for (int s = 0; s < M.nsymbols(); ++s)
      if (M.symbol_name(s) == cur->head) {
        out.push_back(s);
        found = true;
        break;
      }
    if (!found) throw NotAValue("unknown letter " + cur->head);
    cur = cur->args[0];
  }
}

std::string step_cell_name(const TuringMachine& M, int q, int a) {
  return "st_" + M.states[static_cast<size_t>(q)] + "_" + M.symbol_name(a);
}

// -- plain compilation ---------------------------------------------------------

ProgramAST compile_tm_ast(const TuringMachine& M) {
  M.check_total();
  ProgramAST ast;
  ast.sorts = {"w"};
  ast.constructors.push_back({"nil", {}, {"w"}, 0});
  for (int s = 0; s < M.nsymbols(); ++s) ast.constructors.push_back({M.symbol_name(s), {"w"}, {"w"}, 0});
  ast.functions.push_back({"main", {"w"}, {"w"}, 0});
  for (int q = 0; q < static_cast<int>(M.states.size()); ++q)
    for (int a = 0; a < M.nsymbols(); ++a) ast.functions.push_back({step_cell_name(M, q, a), {"w", "w"}, {"w"}, 0});

  auto app = [](const std::string& n, std::vector<TermP> args = {}) { return Term::app(n, std::move(args)); };
  auto var = [](const std::string& n) { return Term::var(n); };

  // initializer: main(x) => st_q0_blank(nil, x)
  ast.rules.push_back(
      {app("main", {var("x")}), app(step_cell_name(M, M.q0, M.blank()), {app("nil"), var("x")}), 0});

  for (const auto& [qa, act] : M.delta) {
    auto [q, a] = qa;
    std::string src = step_cell_name(M, q, a);
    std::string wr = M.symbol_name(act.write);
    if (act.dir == 'L') {
      // (q,a,e,w_r) -> (q2, blank, e, c w_r)
      ast.rules.push_back({app(src, {app("nil"), var("y")}),
                           app(step_cell_name(M, act.state, M.blank()), {app("nil"), app(wr, {var("y")})}), 0});
      // (q,a,b w_l,w_r) -> (q2, b, w_l, c w_r)
      for (int b = 0; b < M.nsymbols(); ++b)
        ast.rules.push_back({app(src, {app(M.symbol_name(b), {var("x")}), var("y")}),
                             app(step_cell_name(M, act.state, b), {var("x"), app(wr, {var("y")})}), 0});
    } else {
      ast.rules.push_back({app(src, {var("x"), app("nil")}),
                           app(step_cell_name(M, act.state, M.blank()), {app(wr, {var("x")}), app("nil")}), 0});
      for (int b = 0; b < M.nsymbols(); ++b)
        ast.rules.push_back({app(src, {var("x"), app(M.symbol_name(b), {var("y")})}),
                             app(step_cell_name(M, act.state, b), {app(wr, {var("x")}), var("y")}), 0});
    }
  }
  // finalizers: st_qf_a(x, y) => y
  for (int a = 0; a < M.nsymbols(); ++a)
    ast.rules.push_back({app(step_cell_name(M, M.qf, a), {var("x"), var("y")}), var("y"), 0});
  return ast;
}

Polygraph compile_tm(const TuringMachine& M) { return elaborate(compile_tm_ast(M)); }

// -- polynomials -----------------------------------------------------------------

std::vector<long long> parse_poly(const std::string& text) {
  std::string s = text;
  s.erase(std::remove_if(s.begin(), s.end(), ::isspace), s.end());
  if (s.empty()) throw PolyError("empty polynomial");
  std::vector<long long> coeffs;
  size_t pos = 0;
  auto bump = [&](size_t e, long long c) {
    if (coeffs.size() <= e) coeffs.resize(e + 1, 0);
    coeffs[e] += c;
  };
  while (pos < s.size()) {
    if (s[pos] == '+') ++pos;
    long long c = 1;
    bool has_c = false;
    size_t start = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos > start) {
      c = std::stoll(s.substr(start, pos - start));
      has_c = true;
    }
    if (pos < s.size() && s[pos] == '*') ++pos;
    if (pos < s.size() && s[pos] == 'x') {
      ++pos;
      size_t e = 1;
      if (pos < s.size() && s[pos] == '^') {
        ++pos;
        size_t es = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (es == pos) throw PolyError("bad exponent in polynomial `" + text + "`");
        e = std::stoull(s.substr(es, pos - es));
      }
      bump(e, c);
    } else if (has_c) {
      bump(0, c);
    } else {
      throw PolyError("cannot parse polynomial `" + text + "`");
    }
  }
  while (coeffs.size() > 1 && coeffs.back() == 0) coeffs.pop_back();
  return coeffs;
}

std::string poly_to_string(const std::vector<long long>& coeffs) {
  std::string s;
  for (size_t e = coeffs.size(); e-- > 0;) {
    if (coeffs[e] == 0) continue;
    if (!s.empty()) s += "+";
    if (e == 0 || coeffs[e] != 1) s += std::to_string(coeffs[e]);
    if (e > 0 && coeffs[e] != 1) s += "*";
    if (e >= 1) s += "x";
    if (e >= 2) s += "^" + std::to_string(e);
  }
  return s.empty() ? "0" : s;
}

TermP horner_term(const std::vector<long long>& coeffs, const TermP& arg) {
  auto nat = [](long long k) {
    TermP t = Term::app("zero");
    for (long long i = 0; i < k; ++i) t = Term::app("succ", {t});
    return t;
  };
  size_t d = coeffs.size();
  while (d > 1 && coeffs[d - 1] == 0) --d;
  if (d == 1) return nat(coeffs[0]);                      // constant: argument erased
  if (d == 2 && coeffs[0] == 0 && coeffs[1] == 1) return arg;  // identity wire
  TermP acc = nat(coeffs[d - 1]);
  for (size_t i = d - 1; i-- > 0;) {
    acc = Term::app("mult", {arg, acc});
    for (long long k = 0; k < coeffs[i]; ++k) acc = Term::app("succ", {acc});
  }
  return acc;
}

ProgramAST arith_ast() {
  ProgramAST ast;
  ast.sorts = {"n"};
  ast.constructors.push_back({"zero", {}, {"n"}, 0});
  ast.constructors.push_back({"succ", {"n"}, {"n"}, 0});
  ast.functions.push_back({"add", {"n", "n"}, {"n"}, 0});
  ast.functions.push_back({"mult", {"n", "n"}, {"n"}, 0});
  auto app = [](const std::string& n, std::vector<TermP> args = {}) { return Term::app(n, std::move(args)); };
  auto var = [](const std::string& n) { return Term::var(n); };
  ast.rules.push_back({app("add", {app("zero"), var("y")}), var("y"), 0});
  ast.rules.push_back({app("add", {app("succ", {var("x")}), var("y")}), app("succ", {app("add", {var("x"), var("y")})}), 0});
  ast.rules.push_back({app("mult", {var("x"), app("zero")}), app("zero"), 0});
  ast.rules.push_back(
      {app("mult", {var("x"), app("succ", {var("y")})}), app("add", {var("x"), app("mult", {var("x"), var("y")})}), 0});
  return ast;
}


PolyDiagramResult poly_diagram(const std::vector<long long>& coeffs) {
  ProgramAST ast = arith_ast();
  ast.functions.push_back({"clockpoly", {"n"}, {"n"}, 0});
  ast.rules.push_back({Term::app("clockpoly", {Term::var("x")}), horner_term(coeffs, Term::var("x")), 0});
  PolyDiagramResult res;
  res.prog = elaborate(ast);
  res.fn = res.prog.two_id("clockpoly");
  for (const auto& r : res.prog.three_cells)
    if (r.kind == RuleKind::Computation && r.name.rfind("clockpoly", 0) == 0) res.diagram = r.rhs;
  return res;
}

// -- clocked compilation -------------------------------------------------------------

ClockedCompile compile_clocked_tm(const TuringMachine& M, const std::vector<long long>& clock) {
  M.check_total();
  ProgramAST ast = arith_ast();
  ast.sorts.push_back("w");
  ast.constructors.push_back({"nil", {}, {"w"}, 0});
  for (int s = 0; s < M.nsymbols(); ++s) ast.constructors.push_back({M.symbol_name(s), {"w"}, {"w"}, 0});
  ast.functions.push_back({"main", {"w"}, {"w"}, 0});
  ast.functions.push_back({"size", {"w"}, {"n"}, 0});
  for (int q = 0; q < static_cast<int>(M.states.size()); ++q)
    for (int a = 0; a < M.nsymbols(); ++a)
      ast.functions.push_back({step_cell_name(M, q, a), {"n", "w", "w"}, {"w"}, 0});

  auto app = [](const std::string& n, std::vector<TermP> args = {}) { return Term::app(n, std::move(args)); };
  auto var = [](const std::string& n) { return Term::var(n); };

  // size
  ast.rules.push_back({app("size", {app("nil")}), app("zero"), 0});
  for (int s = 0; s < M.nsymbols(); ++s)
    ast.rules.push_back(
        {app("size", {app(M.symbol_name(s), {var("x")})}), app("succ", {app("size", {var("x")})}), 0});

  // initializer: main(x) => let (s) = size(x) in st_q0_blank(H(s), nil, x)
  ast.rules.push_back({app("main", {var("x")}),
                       Term::let_in({"s"}, app("size", {var("x")}),
                                    app(step_cell_name(M, M.q0, M.blank()),
                                        {horner_term(clock, var("s")), app("nil"), var("x")})),
                       0});

  for (const auto& [qa, act] : M.delta) {
    auto [q, a] = qa;
    std::string src = step_cell_name(M, q, a);
    std::string wr = M.symbol_name(act.write);
    auto tick = app("succ", {var("t")});
    if (act.dir == 'L') {
      ast.rules.push_back({app(src, {tick, app("nil"), var("y")}),
                           app(step_cell_name(M, act.state, M.blank()), {var("t"), app("nil"), app(wr, {var("y")})}),
                           0});
      for (int b = 0; b < M.nsymbols(); ++b)
        ast.rules.push_back(
            {app(src, {tick, app(M.symbol_name(b), {var("x")}), var("y")}),
             app(step_cell_name(M, act.state, b), {var("t"), var("x"), app(wr, {var("y")})}), 0});
    } else {
      ast.rules.push_back({app(src, {tick, var("x"), app("nil")}),
                           app(step_cell_name(M, act.state, M.blank()), {var("t"), app(wr, {var("x")}), app("nil")}),
                           0});
      for (int b = 0; b < M.nsymbols(); ++b)
        ast.rules.push_back(
            {app(src, {tick, var("x"), app(M.symbol_name(b), {var("y")})}),
             app(step_cell_name(M, act.state, b), {var("t"), app(wr, {var("x")}), var("y")}), 0});
    }
    // out-of-fuel guard keeps the program complete
    ast.rules.push_back({app(src, {app("zero"), var("x"), var("y")}), app("nil"), 0});
  }
  for (int a = 0; a < M.nsymbols(); ++a)
    ast.rules.push_back({app(step_cell_name(M, M.qf, a), {var("t"), var("x"), var("y")}), var("y"), 0});

  ClockedCompile out;
  out.ast = ast;
  out.program = elaborate(ast);

  // Interpretation: the Theorem 3.16 construction, with main's current and
  // heat computed from the initializer's right side so strictness holds for
  // the actual clock diagram.
  std::ostringstream it;
  it << "domain n = N+1\ndomain w = N+1\n";
  it << "current zero = 1\ncurrent succ(x) = x+1\ncurrent nil = 1\n";
  for (int s = 0; s < M.nsymbols(); ++s) it << "current " << M.symbol_name(s) << "(x) = x+1\n";
  it << "current add(x,y) = x+y\ncurrent mult(x,y) = x*y\n";
  it << "heat add(x,y) = x\nheat mult(x,y) = (x+1)*y\n";
  it << "current size(x) = x\nheat size(x) = x\n";
  for (int q = 0; q < static_cast<int>(M.states.size()); ++q)
    for (int a = 0; a < M.nsymbols(); ++a) {
      it << "current " << step_cell_name(M, q, a) << "(x,y,z) = x+y+z\n";
      it << "heat " << step_cell_name(M, q, a) << "(x,y,z) = x\n";
    }
  it << "current main(x) = 1\nheat main(x) = 0\n";  // placeholders, replaced below
  Interp tmp = parse_interp(out.program, it.str());

  const ThreeCell* init = nullptr;
  for (const auto& r : out.program.three_cells)
    if (r.kind == RuleKind::Computation && r.name.rfind("main", 0) == 0) init = &r;
  if (!init) throw PolyError("internal: initializer rule not found");
  ExprP phi_rhs = eval_current_sym(tmp, init->rhs).at(0);
  ExprP heat_rhs = eval_heat_sym(tmp, base_differential(tmp), init->rhs);
  auto phi_poly = expr_to_poly(phi_rhs, 1);
  auto heat_poly = expr_to_poly(heat_rhs, 1);
  if (!phi_poly || !heat_poly) throw PolyError("internal: clock interpretation is not polynomial");
  auto poly1_str = [](const Polynomial& p) {
    std::vector<long long> cs;
    for (const auto& [mono, c] : p.coeffs) {
      size_t e = mono.empty() ? 0 : static_cast<size_t>(mono[0]);
      if (cs.size() <= e) cs.resize(e + 1, 0);
      cs[e] = c;
    }
    if (cs.empty()) cs.push_back(0);
    return poly_to_string(cs);
  };
  std::string main_current = poly1_str(*phi_poly);
  std::string main_heat = poly1_str(*heat_poly + Polynomial::constant(1, 1));

  std::string text = it.str();
  auto replace_line = [&](const std::string& from, const std::string& to) {
    auto p = text.find(from);
    text.replace(p, from.size(), to);
  };
  replace_line("current main(x) = 1", "current main(x) = " + main_current);
  replace_line("heat main(x) = 0", "heat main(x) = " + main_heat);
  out.interp_text = text;
  return out;
}

// -- program printing ------------------------------------------------------------------

std::string program_to_text(const ProgramAST& ast) {
  std::ostringstream os;
  os << "sorts:";
  for (const auto& s : ast.sorts) os << " " << s;
  os << "\n\nconstructors:\n";
  auto sig = [&](const ProgramAST::CellDecl& d) {
    os << "  " << d.name << " :";
    for (size_t i = 0; i < d.src.size(); ++i) os << (i ? ", " : " ") << d.src[i];
    os << (d.src.empty() ? " ->" : " ->");
    for (size_t i = 0; i < d.tgt.size(); ++i) os << (i ? " *" : "") << " " << d.tgt[i];
    os << "\n";
  };
  for (const auto& d : ast.constructors) sig(d);
  os << "\nfunctions:\n";
  for (const auto& d : ast.functions) sig(d);
  os << "\nrules:\n";
  for (const auto& r : ast.rules) os << "  " << term_str(r.lhs) << " => " << term_str(r.rhs) << "\n";
  return os.str();
}

}  // namespace poly
