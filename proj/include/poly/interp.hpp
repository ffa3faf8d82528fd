#pragma once

#include "poly/core.hpp"
#include "poly/engine.hpp"
#include "poly/expr.hpp"

namespace poly {

struct DomainError : PolyError {
  using PolyError::PolyError;
};

// Per-wire current domain: an arithmetic progression a*N+b (a >= 0, b >= 1)
// or an explicit finite set of positive naturals.
struct Domain {
  enum class Kind { Progression, Finite };
  Kind kind = Kind::Progression;
  long long a = 1, b = 1;
  std::vector<long long> elems;  // finite, ascending

  bool contains(long long v) const;
  long long nth(long long k) const;
  long long count_up_to(long long B) const;  // number of sample points
  long long clamp_below(long long x) const;  // largest element <= x, else min
  std::string to_string() const;
};

Domain parse_domain(const std::string& text);

// Functorial interpretation: per-wire domains plus a monotone map expression
// per 2-cell. Structure cells always carry the cartesian defaults; heats
// default to zero.
struct Interp {
  const Polygraph* P = nullptr;
  std::vector<Domain> domains;    // per 1-cell
  std::vector<CellMap> currents;  // per 2-cell
  std::vector<ExprP> heats;       // per 2-cell (the differential part)

  const Domain& domain_of(CellId one_cell) const { return domains.at(static_cast<size_t>(one_cell)); }
};

Interp make_interp(const Polygraph& P);  // cartesian skeleton, currents unset for ctor/fn
Interp parse_interp(const Polygraph& P, const std::string& text);
Interp parse_interp_file(const Polygraph& P, const std::string& path);
// nu: the size interpretation (every constructor maps to x1+...+xn+1).
Interp nu_interp(const Polygraph& P);

enum class HeatMonoid { Sum, Max };

struct Differential {
  std::vector<ExprP> heats;  // per 2-cell
  HeatMonoid monoid = HeatMonoid::Sum;
};

Differential base_differential(const Interp& it);   // the interp's own heats, (N,+,0)
Differential derived_max(const Interp& it);         // d_phi into (N,max,0)
Differential structure_heat(const Interp& it);      // d_phi^S: tau->xy, delta->x^2, eps->x

// Numeric evaluation by folding slices; throws DomainError when an
// intermediate wire leaves its declared domain.
std::vector<long long> eval_current(const Interp& it, const Diagram& d, std::span<const long long> x);
long long eval_heat(const Interp& it, const Differential& dd, const Diagram& d, std::span<const long long> x);

// Symbolic evaluation by substitution; expressions over the source wires.
std::vector<ExprP> eval_current_sym(const Interp& it, const Diagram& d);
ExprP eval_heat_sym(const Interp& it, const Differential& dd, const Diagram& d);

// Evaluates a cell map with arguments clamped into the cell's source domains.
std::vector<long long> eval_clamped(const Interp& it, const std::vector<ExprP>& outs, const Word& src,
                                    std::span<const long long> x);

struct Verdict {
  enum class Status { ProvedSymbolic, VerifiedUpTo, Counterexample };
  Status status = Status::VerifiedUpTo;
  long long bound = 0;
  std::vector<long long> point;
  std::string lhs_val, rhs_val;
  std::string note;
  bool ok() const { return status != Status::Counterexample; }
  std::string to_string() const;
};

// Which map is compared across a rule.
enum class CheckKind { Current, Heat, DerivedMax, StructureHeat };

// Bounded-exhaustive comparison of lhs vs rhs over the rule-source domain
// grid (B points per coordinate), with a symbolic nonneg-coefficient proof
// attempted first for guard-free polynomial sides of sum-monoid checks.
Verdict check_compatible(const Interp& it, CheckKind kind, const ThreeCell& rule, bool strict, long long B,
                         bool parallel = true);

Verdict check_monotone_map(const Interp& it, const std::vector<ExprP>& outs, const Word& src, long long B,
                           bool parallel = true);

struct AdditiveResult {
  Verdict verdict;
  long long gamma = 0;
};
AdditiveResult check_additive(const Interp& it);
Verdict check_cartesian(const Interp& it);

struct Certificate {
  struct RuleCheck {
    std::string rule;
    RuleKind kind = RuleKind::Computation;
    Verdict phi_compatible;
    Verdict heat_strict;    // computation rules only
    Verdict conservative;   // computation rules only
  };
  long long bound = 0;
  AdditiveResult additive;
  Verdict cartesian;
  bool polynomial = true;
  std::vector<std::pair<std::string, int>> degrees;  // per function cell
  Verdict monotone;
  std::vector<RuleCheck> rules;
  CompletenessReport completeness;
  OrthogonalityReport orthogonality;

  bool member() const;
  std::string to_text() const;
  std::string to_json() const;
};

Certificate certify(const Polygraph& P, const Interp& it, long long B = 64, int depth = 4, bool parallel = true);

}  // namespace poly
