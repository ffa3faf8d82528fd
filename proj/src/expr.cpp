#include "poly/expr.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <stdexcept>

#include "poly/core.hpp"

namespace poly {

ExprP Expr::constant(long long v) {
  auto e = std::make_shared<Expr>();
  e->op = Op::Const;
  e->k = v;
  return e;
}
ExprP Expr::var(int i) {
  auto e = std::make_shared<Expr>();
  e->op = Op::Var;
  e->k = i;
  return e;
}
ExprP Expr::make(Op op, std::vector<ExprP> args) {
  auto e = std::make_shared<Expr>();
  e->op = op;
  e->args = std::move(args);
  return e;
}

long long eval_expr(const ExprP& e, std::span<const long long> x) {
  switch (e->op) {
    case Expr::Op::Const: return e->k;
    case Expr::Op::Var:
      if (e->k < 0 || e->k >= static_cast<long long>(x.size()))
        throw PolyError("expression references missing variable x" + std::to_string(e->k));
      return x[static_cast<size_t>(e->k)];
    case Expr::Op::Add: return eval_expr(e->args[0], x) + eval_expr(e->args[1], x);
    case Expr::Op::Monus: {
      long long a = eval_expr(e->args[0], x), b = eval_expr(e->args[1], x);
      return a > b ? a - b : 0;
    }
    case Expr::Op::Mul: return eval_expr(e->args[0], x) * eval_expr(e->args[1], x);
    case Expr::Op::Max: return std::max(eval_expr(e->args[0], x), eval_expr(e->args[1], x));
    case Expr::Op::Min: return std::min(eval_expr(e->args[0], x), eval_expr(e->args[1], x));
    case Expr::Op::FDiv: {
      long long a = eval_expr(e->args[0], x), b = eval_expr(e->args[1], x);
      if (b <= 0) throw PolyError("division by non-positive constant");
      return a / b;
    }
    case Expr::Op::CDiv: {
      long long a = eval_expr(e->args[0], x), b = eval_expr(e->args[1], x);
      if (b <= 0) throw PolyError("division by non-positive constant");
      return (a + b - 1) / b;
    }
    case Expr::Op::If:
      return eval_expr(e->args[0], x) == eval_expr(e->args[1], x) ? eval_expr(e->args[2], x)
                                                                  : eval_expr(e->args[3], x);
  }
  throw PolyError("bad expression");
}

ExprP subst_expr(const ExprP& e, const std::vector<ExprP>& repl) {
  switch (e->op) {
    case Expr::Op::Const: return e;
    case Expr::Op::Var:
      if (e->k < 0 || e->k >= static_cast<long long>(repl.size()))
        throw PolyError("substitution misses variable x" + std::to_string(e->k));
      return repl[static_cast<size_t>(e->k)];
    default: {
      std::vector<ExprP> args;
      args.reserve(e->args.size());
      for (const auto& a : e->args) args.push_back(subst_expr(a, repl));
      return Expr::make(e->op, std::move(args));
    }
  }
}

std::string expr_str(const ExprP& e, const std::vector<std::string>& vars) {
  auto name = [&](long long i) -> std::string {
    if (i >= 0 && i < static_cast<long long>(vars.size())) return vars[static_cast<size_t>(i)];
    return "x" + std::to_string(i);
  };
  switch (e->op) {
    case Expr::Op::Const: return std::to_string(e->k);
    case Expr::Op::Var: return name(e->k);
    case Expr::Op::Add: return "(" + expr_str(e->args[0], vars) + " + " + expr_str(e->args[1], vars) + ")";
    case Expr::Op::Monus: return "(" + expr_str(e->args[0], vars) + " - " + expr_str(e->args[1], vars) + ")";
    case Expr::Op::Mul: return "(" + expr_str(e->args[0], vars) + "*" + expr_str(e->args[1], vars) + ")";
    case Expr::Op::Max: return "max(" + expr_str(e->args[0], vars) + ", " + expr_str(e->args[1], vars) + ")";
    case Expr::Op::Min: return "min(" + expr_str(e->args[0], vars) + ", " + expr_str(e->args[1], vars) + ")";
    case Expr::Op::FDiv: return "fdiv(" + expr_str(e->args[0], vars) + ", " + expr_str(e->args[1], vars) + ")";
    case Expr::Op::CDiv: return "cdiv(" + expr_str(e->args[0], vars) + ", " + expr_str(e->args[1], vars) + ")";
    case Expr::Op::If:
      return "if " + expr_str(e->args[0], vars) + " == " + expr_str(e->args[1], vars) + " then " +
             expr_str(e->args[2], vars) + " else " + expr_str(e->args[3], vars);
  }
  return "?";
}

int expr_degree(const ExprP& e) {
  switch (e->op) {
    case Expr::Op::Const: return 0;
    case Expr::Op::Var: return 1;
    case Expr::Op::Add:
    case Expr::Op::Monus:
    case Expr::Op::Max:
    case Expr::Op::Min: return std::max(expr_degree(e->args[0]), expr_degree(e->args[1]));
    case Expr::Op::Mul: return expr_degree(e->args[0]) + expr_degree(e->args[1]);
    case Expr::Op::FDiv:
    case Expr::Op::CDiv: return expr_degree(e->args[0]);
    case Expr::Op::If: return std::max(expr_degree(e->args[2]), expr_degree(e->args[3]));
  }
  return 0;
}

// -- polynomials ---------------------------------------------------------------

Polynomial Polynomial::constant(long long v, int nvars) {
  Polynomial p;
  if (v != 0) p.coeffs[std::vector<int>(static_cast<size_t>(nvars), 0)] = v;
  return p;
}
Polynomial Polynomial::var(int i, int nvars) {
  Polynomial p;
  std::vector<int> m(static_cast<size_t>(nvars), 0);
  m[static_cast<size_t>(i)] = 1;
  p.coeffs[m] = 1;
  return p;
}
Polynomial Polynomial::operator+(const Polynomial& o) const {
  Polynomial r = *this;
  for (const auto& [m, c] : o.coeffs) {
    r.coeffs[m] += c;
    if (r.coeffs[m] == 0) r.coeffs.erase(m);
  }
  return r;
}
Polynomial Polynomial::operator-(const Polynomial& o) const {
  Polynomial r = *this;
  for (const auto& [m, c] : o.coeffs) {
    r.coeffs[m] -= c;
    if (r.coeffs[m] == 0) r.coeffs.erase(m);
  }
  return r;
}
Polynomial Polynomial::operator*(const Polynomial& o) const {
  Polynomial r;
  for (const auto& [m1, c1] : coeffs) {
    for (const auto& [m2, c2] : o.coeffs) {
      std::vector<int> m = m1;
      for (size_t i = 0; i < m.size(); ++i) m[i] += m2[i];
      r.coeffs[m] += c1 * c2;
      if (r.coeffs[m] == 0) r.coeffs.erase(m);
    }
  }
  return r;
}
bool Polynomial::nonneg_coeffs() const {
  for (const auto& [m, c] : coeffs)
    if (c < 0) return false;
  return true;
}
bool Polynomial::is_zero() const { return coeffs.empty(); }

std::optional<Polynomial> expr_to_poly(const ExprP& e, int nvars) {
  switch (e->op) {
    case Expr::Op::Const: return Polynomial::constant(e->k, nvars);
    case Expr::Op::Var:
      if (e->k >= nvars) return std::nullopt;
      return Polynomial::var(static_cast<int>(e->k), nvars);
    case Expr::Op::Add: {
      auto a = expr_to_poly(e->args[0], nvars), b = expr_to_poly(e->args[1], nvars);
      if (!a || !b) return std::nullopt;
      return *a + *b;
    }
    case Expr::Op::Mul: {
      auto a = expr_to_poly(e->args[0], nvars), b = expr_to_poly(e->args[1], nvars);
      if (!a || !b) return std::nullopt;
      return *a * *b;
    }
    default: return std::nullopt;
  }
}

// -- parser --------------------------------------------------------------------

namespace {

struct ExprParser {
  const std::string& s;
  size_t pos = 0;
  const std::vector<std::string>& vars;

  ExprParser(const std::string& text, const std::vector<std::string>& v) : s(text), vars(v) {}

  void skip() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool eat(const std::string& tok) {
    skip();
    if (s.compare(pos, tok.size(), tok) == 0) {
      pos += tok.size();
      return true;
    }
    return false;
  }
  bool peek_word(const std::string& w) {
    skip();
    if (s.compare(pos, w.size(), w) != 0) return false;
    size_t end = pos + w.size();
    return end >= s.size() || !(std::isalnum(static_cast<unsigned char>(s[end])) || s[end] == '_');
  }
  bool eat_word(const std::string& w) {
    if (!peek_word(w)) return false;
    pos += w.size();
    return true;
  }
  [[noreturn]] void fail(const std::string& msg) {
    throw PolyError("expression parse error at offset " + std::to_string(pos) + ": " + msg + " in `" + s + "`");
  }

  ExprP parse_expr() {
    if (eat_word("if")) {
      ExprP gl = parse_sum();
      if (!eat("==")) fail("expected `==` in guard");
      ExprP gr = parse_sum();
      if (!eat_word("then")) fail("expected `then`");
      ExprP t = parse_expr();
      if (!eat_word("else")) fail("expected `else`");
      ExprP f = parse_expr();
      return Expr::make(Expr::Op::If, {gl, gr, t, f});
    }
    return parse_sum();
  }

  ExprP parse_sum() {
    ExprP e = parse_product();
    for (;;) {
      skip();
      if (eat("+"))
        e = Expr::make(Expr::Op::Add, {e, parse_product()});
      else if (pos < s.size() && s[pos] == '-' && s.compare(pos, 2, "->") != 0) {
        ++pos;
        e = Expr::make(Expr::Op::Monus, {e, parse_product()});
      } else
        break;
    }
    return e;
  }

  ExprP parse_product() {
    ExprP e = parse_power();
    for (;;) {
      skip();
      if (eat("*"))
        e = Expr::make(Expr::Op::Mul, {e, parse_power()});
      else if (pos < s.size() && s[pos] == '/') {
        ++pos;
        e = Expr::make(Expr::Op::FDiv, {e, parse_power()});
      } else
        break;
    }
    return e;
  }

  ExprP parse_power() {
    ExprP e = parse_atom();
    skip();
    if (pos < s.size() && s[pos] == '^') {
      ++pos;
      skip();
      size_t start = pos;
      while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
      if (start == pos) fail("expected integer exponent");
      long long n = std::stoll(s.substr(start, pos - start));
      if (n == 0) return Expr::constant(1);
      ExprP r = e;
      for (long long i = 1; i < n; ++i) r = Expr::make(Expr::Op::Mul, {r, e});
      return r;
    }
    return e;
  }

  ExprP parse_atom() {
    skip();
    if (pos >= s.size()) fail("unexpected end of expression");
    char c = s[pos];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t start = pos;
      while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
      return Expr::constant(std::stoll(s.substr(start, pos - start)));
    }
    if (c == '(') {
      ++pos;
      ExprP e = parse_expr();
      if (!eat(")")) fail("expected `)`");
      return e;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = pos;
      while (pos < s.size() && (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_')) ++pos;
      std::string id = s.substr(start, pos - start);
      if (id == "max" || id == "min" || id == "fdiv" || id == "cdiv") {
        if (!eat("(")) fail("expected `(` after " + id);
        ExprP a = parse_expr();
        if (!eat(",")) fail("expected `,` in " + id);
        ExprP b = parse_expr();
        if (!eat(")")) fail("expected `)` closing " + id);
        Expr::Op op = id == "max"   ? Expr::Op::Max
                      : id == "min" ? Expr::Op::Min
                      : id == "fdiv" ? Expr::Op::FDiv
                                     : Expr::Op::CDiv;
        return Expr::make(op, {a, b});
      }
      auto it = std::find(vars.begin(), vars.end(), id);
      if (it == vars.end()) fail("unknown variable `" + id + "`");
      return Expr::var(static_cast<int>(it - vars.begin()));
    }
    fail(std::string("unexpected character `") + c + "`");
  }
};

}  // namespace

CellMap parse_cell_map(const std::string& text, const std::vector<std::string>& var_names) {
  CellMap m;
  m.arity = static_cast<int>(var_names.size());
  ExprParser p(text, var_names);
  p.skip();
  // A tuple at top level is a multi-output map; disambiguate from a
  // parenthesized expression by looking for a comma at depth 1.
  bool tuple = false;
  if (p.pos < text.size() && text[p.pos] == '(') {
    int depth = 0;
    for (size_t i = p.pos; i < text.size(); ++i) {
      if (text[i] == '(') ++depth;
      else if (text[i] == ')') {
        --depth;
        if (depth == 0) {
          std::string rest = text.substr(i + 1);
          if (rest.find_first_not_of(" \t") == std::string::npos) {
            // covers the full text; tuple iff a top-level comma exists
          } else
            break;
        }
      } else if (text[i] == ',' && depth == 1)
        tuple = true;
    }
    if (tuple) {
      // re-check: comma at depth 1 only counts if the paren spans everything
      int d = 0;
      size_t close = std::string::npos;
      for (size_t i = p.pos; i < text.size(); ++i) {
        if (text[i] == '(') ++d;
        else if (text[i] == ')') {
          --d;
          if (d == 0) {
            close = i;
            break;
          }
        }
      }
      if (close == std::string::npos || text.find_first_not_of(" \t", close + 1) != std::string::npos)
        tuple = false;
    }
  }
  if (tuple) {
    p.eat("(");
    for (;;) {
      m.outs.push_back(p.parse_expr());
      if (p.eat(",")) continue;
      if (p.eat(")")) break;
      p.fail("expected `,` or `)` in tuple");
    }
    p.skip();
    if (p.pos != text.size()) p.fail("trailing input after tuple");
  } else {
    m.outs.push_back(p.parse_expr());
    p.skip();
    if (p.pos != text.size()) p.fail("trailing input after expression");
  }
  return m;
}

}  // namespace poly
