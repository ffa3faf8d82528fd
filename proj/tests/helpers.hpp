#pragma once

#include <random>
#include <string>

#include "poly/bounds.hpp"
#include "poly/engine.hpp"
#include "poly/frontend.hpp"
#include "poly/interp.hpp"
#include "poly/structure.hpp"

namespace helpers {

using namespace poly;

inline std::string fixture(const std::string& name) { return std::string(FIXTURES_DIR) + "/" + name; }

inline Polygraph load(const std::string& name) { return elaborate(parse_program_file(fixture(name))); }

inline TermP nat(long long n) {
  TermP t = Term::app("zero");
  for (long long i = 0; i < n; ++i) t = Term::app("succ", {t});
  return t;
}

inline long long nat_of(const TermP& t) {
  long long n = 0;
  TermP cur = t;
  while (cur->head == "succ") {
    ++n;
    cur = cur->args[0];
  }
  return n;
}

// list over fixtures/sort.poly (entries 0..2)
inline TermP nlist(const std::vector<int>& xs) {
  TermP t = Term::app("nil");
  for (auto it = xs.rbegin(); it != xs.rend(); ++it) t = Term::app("cons", {Term::app("n" + std::to_string(*it)), t});
  return t;
}

inline std::vector<int> list_of(const TermP& t) {
  std::vector<int> out;
  TermP cur = t;
  while (cur->head == "cons") {
    out.push_back(cur->args[0]->head[1] - '0');
    cur = cur->args[1];
  }
  return out;
}

inline std::vector<int> random_list(std::mt19937_64& rng, int max_len, int max_entry) {
  std::uniform_int_distribution<int> len(0, max_len);
  std::uniform_int_distribution<int> entry(0, max_entry);
  std::vector<int> out(static_cast<size_t>(len(rng)));
  for (auto& x : out) x = entry(rng);
  return out;
}

// A random well-formed diagram over a polygraph: random source word, then
// random legal slices appended at random offsets. `allow_eps` controls
// whether erasers appear; diagrams without erasers have a unique canonical
// form, diagrams with them are only compared through evaluation.
inline Diagram random_diagram(const Polygraph& P, std::mt19937_64& rng, int max_wires, int target_slices,
                              bool allow_eps = false) {
  std::uniform_int_distribution<int> wires(0, max_wires);
  std::uniform_int_distribution<CellId> sortd(0, static_cast<CellId>(P.one_cells.size()) - 1);
  Word src(static_cast<size_t>(wires(rng)));
  for (auto& w : src) w = sortd(rng);
  Diagram d = identity(src);
  for (int tries = 0; tries < target_slices * 20 && static_cast<int>(d.slices.size()) < target_slices; ++tries) {
    std::uniform_int_distribution<CellId> celld(0, static_cast<CellId>(P.two_cells.size()) - 1);
    CellId c = celld(rng);
    const TwoCell& tc = P.cell(c);
    if (!allow_eps && tc.tag == StructureTag::Eps) continue;
    int width = static_cast<int>(d.tgt.size());
    if (tc.arity() > width) continue;
    std::uniform_int_distribution<int> offd(0, width - tc.arity());
    int off = offd(rng);
    bool fits = true;
    for (int k = 0; k < tc.arity(); ++k) fits = fits && d.tgt[off + k] == tc.src[k];
    if (fits) append_slice(P, d, off, c);
  }
  return d;
}

// Applies up to n random legal exchange swaps in either direction.
inline void random_swaps(const Polygraph& P, Diagram& d, std::mt19937_64& rng, int n) {
  if (d.slices.size() < 2) return;
  std::uniform_int_distribution<size_t> pos(0, d.slices.size() - 2);
  for (int k = 0; k < n; ++k) {
    size_t i = pos(rng);
    if (swappable_up(P, d, i) || swappable_down(P, d, i)) exchange_swap(P, d, i);
  }
}

// Random domain point for a diagram source under an interpretation.
inline std::vector<long long> random_point(const Interp& it, const Word& src, std::mt19937_64& rng, long long span) {
  std::vector<long long> x;
  for (CellId s : src) {
    const Domain& dom = it.domain_of(s);
    std::uniform_int_distribution<long long> kd(0, dom.count_up_to(span) - 1);
    x.push_back(dom.nth(kd(rng)));
  }
  return x;
}

}  // namespace helpers
