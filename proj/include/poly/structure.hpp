#pragma once

#include "poly/core.hpp"

namespace poly {

// Declares tau(a,b) for every ordered pair of 1-cells, delta(a) and eps(a)
// for every 1-cell. Returns the ids of the cells added (skips existing ones).
std::vector<CellId> generate_structure_cells(Polygraph& P);

// Generalized structure 2-paths, by structural induction on the word.
Diagram crossing_word_cell(const Polygraph& P, const Word& u, CellId xi);  // u.xi => xi.u
Diagram crossing_cell_word(const Polygraph& P, CellId xi, const Word& u);  // xi.u => u.xi
Diagram crossing_word_word(const Polygraph& P, const Word& u, const Word& v);  // u.v => v.u
Diagram dup_word(const Polygraph& P, const Word& u);    // u => u.u
Diagram erase_word(const Polygraph& P, const Word& u);  // u => *

// The structure 3-cells attached to every constructor: two crossing rules per
// 1-cell, one duplication rule and one erasure rule. Appended to P.
size_t generate_structure_rules(Polygraph& P);

}  // namespace poly
