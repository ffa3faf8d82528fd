#pragma once

#include <deque>
#include <memory>

#include "poly/core.hpp"

namespace poly {

struct SyntaxError : PolyError {
  using PolyError::PolyError;
};
struct UnknownSymbol : PolyError {
  using PolyError::PolyError;
};
struct ArityError : PolyError {
  using PolyError::PolyError;
};
struct NonLinearPattern : PolyError {
  using PolyError::PolyError;
};
struct NotAValue : PolyError {
  using PolyError::PolyError;
};

struct Term;
using TermP = std::shared_ptr<const Term>;

struct Term {
  enum class K { Var, App, Tuple, Let };
  K k = K::Var;
  std::string head;                  // Var name / App cell name
  std::vector<TermP> args;           // App arguments / Tuple items
  std::vector<std::string> binders;  // Let
  TermP bound, body;

  static TermP var(std::string n);
  static TermP app(std::string n, std::vector<TermP> a = {});
  static TermP tuple(std::vector<TermP> items);
  static TermP let_in(std::vector<std::string> bs, TermP bound, TermP body);
};

std::string term_str(const TermP& t);
bool term_eq(const TermP& a, const TermP& b);

struct RuleDecl {
  TermP lhs, rhs;
  int line = 0;
};

struct ProgramAST {
  struct CellDecl {
    std::string name;
    std::vector<std::string> src, tgt;
    int line = 0;
  };
  std::vector<std::string> sorts;
  std::vector<CellDecl> constructors;
  std::vector<CellDecl> functions;
  std::vector<RuleDecl> rules;
};

ProgramAST parse_program(const std::string& text);
ProgramAST parse_program_file(const std::string& path);
TermP parse_term(const std::string& text);

// Declares the signature, generates structure cells, elaborates every rule to
// a computation 3-cell (duplication as a balanced delta tree at the binding
// wire, erasure at the binding wire, block-level routing with adjacent tau
// crossings), then attaches the structure 3-cells.
Polygraph elaborate(const ProgramAST& ast);

Diagram encode_value(const Polygraph& P, const TermP& t);
std::vector<TermP> decode_value(const Polygraph& P, const Diagram& d);

// Command-line value sugar: integers become zero/succ chains (or nullary
// `n<k>` constructors), `[a,b,c]` becomes a cons/nil chain.
TermP parse_value_literal(const Polygraph& P, const std::string& text, CellId sort);
std::string pretty_term(const Polygraph& P, const TermP& t);

}  // namespace poly
