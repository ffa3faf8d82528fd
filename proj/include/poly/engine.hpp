#pragma once

#include <functional>

#include "poly/core.hpp"
#include "poly/frontend.hpp"

namespace poly {

struct StaleMatch : PolyError {
  using PolyError::PolyError;
};
struct FuelExhausted : PolyError {
  using PolyError::PolyError;
};
struct Undefined : PolyError {
  using PolyError::PolyError;
};

// A constructor pattern tree; var < 0 marks a leaf bound to an open wire.
struct PatNode {
  CellId cell = -1;  // -1: variable leaf
  CellId sort = -1;
  int var = -1;
  std::vector<PatNode> kids;
};

struct RulePattern {
  int rule = -1;
  CellId head = -1;
  std::vector<PatNode> inputs;
  int nvars = 0;
};

RulePattern extract_pattern(const Polygraph& P, int rule_index);

struct Match {
  int rule = -1;
  int anchor = -1;       // slice index of the head occurrence
  int anchor_left = 0;   // left offset of the head slice
  std::vector<int> covered;  // pattern constructor slices, ascending
};

// Rules grouped by head cell; build once per polygraph and reuse.
struct RuleIndex {
  std::map<CellId, std::vector<RulePattern>> by_head;
  explicit RuleIndex(const Polygraph& P);
};

std::vector<Match> find_redexes(const Polygraph& P, const RuleIndex& idx, const Diagram& d);
std::vector<Match> find_redexes(const Polygraph& P, const Diagram& d);

// Applies a match: gathers the covered slices into a contiguous block by
// legal exchange swaps, splices in the instantiated right side, and returns
// the exchange normal form.
Diagram apply_match(const Polygraph& P, const Diagram& d, const Match& m);

enum class Strategy { LeftmostTopmost, StructureEager, StructureOnly };

struct RewriteEvent {
  int step = 0;
  std::string rule;
  RuleKind kind = RuleKind::Computation;
  int anchor = 0;
  int anchor_left = 0;
  size_t size_before = 0, size_after = 0;
  // interpretation samples, present when a sampler is attached
  std::optional<long long> heat, current_max, structure_heat;
};

struct Trace {
  Diagram initial;
  std::vector<RewriteEvent> events;
  size_t total() const { return events.size(); }
  size_t computation() const;
  size_t structure() const;
};

using TraceSampler = std::function<void(const Diagram&, RewriteEvent&)>;

struct NormalizeResult {
  Diagram result;
  Trace trace;
  bool fuel_exhausted = false;
};

NormalizeResult normalize(const Polygraph& P, const Diagram& d, Strategy strategy = Strategy::LeftmostTopmost,
                          size_t fuel = 10'000'000, const TraceSampler* sampler = nullptr);

enum class EvalStatus { Value, Undefined, FuelExhausted };

struct EvalResult {
  EvalStatus status = EvalStatus::Value;
  std::vector<TermP> outputs;
  Trace trace;
  Diagram normal_form;
};

// Realizes the semantics: encode, plug into f, normalize, decode.
EvalResult evaluate(const Polygraph& P, CellId f, const std::vector<TermP>& args,
                    Strategy strategy = Strategy::LeftmostTopmost, size_t fuel = 10'000'000,
                    const TraceSampler* sampler = nullptr);

// All closed constructor terms of a sort with nesting depth <= depth.
std::vector<TermP> enumerate_values(const Polygraph& P, CellId sort, int depth);

struct CompletenessReport {
  struct Gap {
    std::string function;
    std::vector<TermP> args;
  };
  std::vector<Gap> gaps;
  size_t checked = 0;
  bool complete() const { return gaps.empty(); }
};

CompletenessReport check_completeness(const Polygraph& P, int depth);

struct OrthogonalityReport {
  struct Overlap {
    std::string rule1, rule2;
    bool weak = false;  // equal right sides; allowed
  };
  std::vector<Overlap> overlaps;
  bool orthogonal() const;
};

OrthogonalityReport check_orthogonal(const Polygraph& P);

std::string trace_to_jsonl(const Trace& t);

}  // namespace poly
