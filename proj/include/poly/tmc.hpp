#pragma once

#include "poly/frontend.hpp"
#include "poly/interp.hpp"

namespace poly {

struct StepLimit : PolyError {
  using PolyError::PolyError;
};

// Symbols 0..n-1 are the alphabet letters, symbol n is the blank.
struct TuringMachine {
  std::vector<std::string> alphabet;
  std::vector<std::string> states;
  int q0 = -1, qf = -1;
  struct Action {
    int state = -1;
    int write = -1;
    char dir = 'R';
  };
  std::map<std::pair<int, int>, Action> delta;

  int blank() const { return static_cast<int>(alphabet.size()); }
  int nsymbols() const { return static_cast<int>(alphabet.size()) + 1; }
  std::string symbol_name(int s) const { return s == blank() ? "blank" : alphabet.at(static_cast<size_t>(s)); }
  void check_total() const;
};

TuringMachine parse_tm(const std::string& text);
TuringMachine parse_tm_file(const std::string& path);

// Left word stored reversed: front() is the symbol immediately left of the head.
struct TMConfig {
  int state = 0;
  int head = 0;  // current symbol
  std::vector<int> left, right;
  bool operator==(const TMConfig&) const = default;
};

TMConfig tm_start(const TuringMachine& M, const std::vector<int>& word);
// One transition; returns false in the final state.
bool tm_step(const TuringMachine& M, TMConfig& c);
TMConfig simulate_tm(const TuringMachine& M, const std::vector<int>& word, size_t max_steps,
                     size_t* steps_taken = nullptr);

// Word/term conversions against a compiled polygraph.
TermP word_to_term(const TuringMachine& M, const std::vector<int>& w);
std::vector<int> term_to_word(const TuringMachine& M, const TermP& t);

// Plain compilation (Turing completeness construction).
ProgramAST compile_tm_ast(const TuringMachine& M);
Polygraph compile_tm(const TuringMachine& M);
std::string step_cell_name(const TuringMachine& M, int q, int a);

// Clock polynomials: coefficient vector c0 + c1 x + ...
std::vector<long long> parse_poly(const std::string& text);
std::string poly_to_string(const std::vector<long long>& coeffs);
TermP horner_term(const std::vector<long long>& coeffs, const TermP& arg);

struct PolyDiagramResult {
  Polygraph prog;   // the arithmetic program extended with a helper cell
  CellId fn = -1;   // helper function cell evaluating the polynomial
  Diagram diagram;  // the polynomial 2-path itself
};
PolyDiagramResult poly_diagram(const std::vector<long long>& coeffs);

ProgramAST arith_ast();  // addition/multiplication program

struct ClockedCompile {
  ProgramAST ast;
  Polygraph program;
  std::string interp_text;
};
ClockedCompile compile_clocked_tm(const TuringMachine& M, const std::vector<long long>& clock);

std::string program_to_text(const ProgramAST& ast);

}  // namespace poly
