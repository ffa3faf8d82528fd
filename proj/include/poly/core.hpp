#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace poly {

// A 1-path is a word of 1-cell ids; the empty word is the (implicit) 0-cell.
using CellId = int32_t;
using Word = std::vector<CellId>;

struct PolyError : std::runtime_error {
  explicit PolyError(const std::string& msg) : std::runtime_error(msg) {}
};
struct BoundaryMismatch : PolyError {
  using PolyError::PolyError;
};
struct MalformedDiagram : PolyError {
  using PolyError::PolyError;
};

enum class CellKind { Constructor, Function, Structure };
enum class StructureTag { None, Tau, Delta, Eps };
enum class RuleKind { Structure, Computation };

struct TwoCell {
  std::string name;
  Word src, tgt;
  CellKind kind = CellKind::Constructor;
  StructureTag tag = StructureTag::None;
  CellId p0 = -1, p1 = -1;  // tau(p0,p1) / delta(p0) / eps(p0)

  int arity() const { return static_cast<int>(src.size()); }
  int coarity() const { return static_cast<int>(tgt.size()); }
};

// One whiskered 2-cell: `left` untouched wires, the cell, `right` untouched
// wires. Boundary words are recovered by folding from the diagram source.
struct Slice {
  int left = 0;
  CellId cell = -1;
  int right = 0;
};

struct Diagram {
  Word src, tgt;
  std::vector<Slice> slices;

  bool degenerate() const { return slices.empty(); }
  size_t size() const { return slices.size(); }
};

struct ThreeCell {
  std::string name;
  Diagram lhs, rhs;
  RuleKind kind = RuleKind::Computation;
};

struct Polygraph {
  std::vector<std::string> one_cells;
  std::vector<TwoCell> two_cells;
  std::vector<ThreeCell> three_cells;

  std::map<std::string, CellId> one_index;
  std::map<std::string, CellId> two_index;

  CellId add_one_cell(const std::string& name);
  CellId add_two_cell(TwoCell c);

  CellId one_id(const std::string& name) const;
  CellId two_id(const std::string& name) const;
  const TwoCell& cell(CellId id) const { return two_cells.at(id); }

  // Structure-cell lookup; -1 when not generated yet.
  CellId tau(CellId a, CellId b) const;
  CellId delta(CellId a) const;
  CellId eps(CellId a) const;

  std::string word_str(const Word& w) const;
};

// -- diagram construction ----------------------------------------------------

Diagram identity(const Word& w);
Diagram whisker_cell(const Polygraph& P, const Word& left, CellId c, const Word& right);

// Parallel composition: always defined; sizes add.
Diagram compose0(const Polygraph& P, const Diagram& a, const Diagram& b);
// Sequential composition: requires tgt(a) == src(b).
Diagram compose1(const Polygraph& P, const Diagram& a, const Diagram& b);

// Appends one cell at `left` to the bottom of d (in place).
void append_slice(const Polygraph& P, Diagram& d, int left, CellId c);

// Boundary word between slice i-1 and slice i (i in [0, size]).
Word boundary_at(const Polygraph& P, const Diagram& d, size_t i);

void check_diagram(const Polygraph& P, const Diagram& d);

// -- size --------------------------------------------------------------------

template <typename Pred>
size_t size_wrt(const Diagram& d, Pred in_family) {
  size_t n = 0;
  for (const auto& s : d.slices)
    if (in_family(s.cell)) ++n;
  return n;
}
size_t size_wrt(const Diagram& d, const std::vector<CellId>& family);
size_t structure_size(const Polygraph& P, const Diagram& d);

// -- exchange ----------------------------------------------------------------

// Slices i and i+1 commute when their cells act on disjoint wire spans.
// `swappable_up` is the left-greedy direction used for normalization:
// slice i+1 lies strictly left of slice i and may move above it.
bool swappable_up(const Polygraph& P, const Diagram& d, size_t i);
bool swappable_down(const Polygraph& P, const Diagram& d, size_t i);
// Exchanges slices i and i+1 (either legal direction); throws otherwise.
void exchange_swap(const Polygraph& P, Diagram& d, size_t i);

// Unique canonical representative modulo the exchange relation (greedy
// minimal linearization). Used wherever diagram equality matters.
Diagram exchange_normal_form(const Polygraph& P, const Diagram& d);
// Fast deterministic exchange representative (left-greedy insertion pass);
// the engine's working form.
Diagram exchange_insertion_form(const Polygraph& P, const Diagram& d);
bool diagram_equal(const Polygraph& P, const Diagram& a, const Diagram& b);

// -- validation ---------------------------------------------------------------

struct ValidationIssue {
  std::string code;  // GlobularViolation | PatternShapeViolation | ...
  std::string where;
  std::string detail;
};
struct ValidationReport {
  std::vector<ValidationIssue> issues;
  bool ok() const { return issues.empty(); }
  std::string to_string() const;
};

ValidationReport validate_polygraph(const Polygraph& P);

}  // namespace poly
