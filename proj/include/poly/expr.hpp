#pragma once

#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace poly {

// Monotone map expressions over natural-number tuples: constants, variables,
// +, monus, *, max, min, floor/ceil division by positive constants, and
// piecewise-by-equality guards. Subtraction is truncated at zero.
struct Expr;
using ExprP = std::shared_ptr<const Expr>;

struct Expr {
  enum class Op { Const, Var, Add, Monus, Mul, Max, Min, FDiv, CDiv, If };
  Op op = Op::Const;
  long long k = 0;            // Const value / Var index
  std::vector<ExprP> args;    // If: {guard_l, guard_r, then, else}

  static ExprP constant(long long v);
  static ExprP var(int i);
  static ExprP make(Op op, std::vector<ExprP> args);
};

long long eval_expr(const ExprP& e, std::span<const long long> x);
ExprP subst_expr(const ExprP& e, const std::vector<ExprP>& repl);
std::string expr_str(const ExprP& e, const std::vector<std::string>& var_names = {});
// Structural degree bound: every DSL expression has polynomial growth.
int expr_degree(const ExprP& e);

// Multivariate polynomials with integer coefficients, exponent-vector keyed.
struct Polynomial {
  std::map<std::vector<int>, long long> coeffs;

  static Polynomial constant(long long v, int nvars);
  static Polynomial var(int i, int nvars);
  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  bool nonneg_coeffs() const;
  bool is_zero() const;
};

// Expansion succeeds only for guard-free {Const,Var,Add,Mul} expressions.
std::optional<Polynomial> expr_to_poly(const ExprP& e, int nvars);

// A cell map: one expression per output coordinate, over m input variables.
struct CellMap {
  int arity = 0;
  std::vector<ExprP> outs;
};

// Parses an expression (or tuple of expressions) in the .interp syntax.
CellMap parse_cell_map(const std::string& text, const std::vector<std::string>& var_names);

}  // namespace poly
