#pragma once

#include "poly/engine.hpp"
#include "poly/interp.hpp"

namespace poly {

struct NotAdditive : PolyError {
  using PolyError::PolyError;
};
struct BoundViolation : PolyError {
  using PolyError::PolyError;
};

// Per-function bound maps over the input-size tuple nu(t):
//   M = d_phi f (gamma x), S = K*M^2, P = d f (gamma x), Q = P*(1+S).
struct FunctionBounds {
  CellId cell = -1;
  ExprP M, S, P, Q;
};

struct BoundSet {
  long long gamma = 1;
  long long bigK = 0;
  std::map<CellId, FunctionBounds> per_function;
};

BoundSet compute_bounds(const Polygraph& P, const Interp& it);

// nu: per-argument diagram sizes.
std::vector<long long> nu_of(const Polygraph& P, const std::vector<TermP>& args);

// Bound-map evaluation clamps the scaled sizes into the declared domains
// (the extension of a map below its domain minimum).
long long eval_bound(const Interp& it, const ExprP& e, const Word& src, std::span<const long long> sizes);

// Attachable trace sampler recording heat, max current and structure heat of
// every intermediate diagram (diagrams along evaluate() are closed).
TraceSampler make_sampler(const Interp& it);

struct MonitorReport {
  struct Row {
    std::string check;
    long long observed = 0, bound = 0;
    bool ok = true;
  };
  std::vector<Row> rows;
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
  std::string to_string() const;
};

// Checks the trace of evaluate(P, f, args) against the bound set:
// computation steps vs P, total steps vs Q, running max of d_phi vs M, the
// per-computation-event structure-heat increase vs S, and the monotonicity
// laws (heat non-increasing, strictly at computation events; d_phi
// non-increasing). The trace must carry sampler data.
MonitorReport monitor_trace(const Polygraph& P, const Interp& it, const Trace& trace, CellId f,
                            const std::vector<TermP>& args, const BoundSet& bounds);

}  // namespace poly
