#include "poly/core.hpp"

#include <algorithm>
#include <sstream>
#include <tuple>

namespace poly {

CellId Polygraph::add_one_cell(const std::string& name) {
  if (one_index.count(name)) throw PolyError("duplicate 1-cell: " + name);
  one_cells.push_back(name);
  CellId id = static_cast<CellId>(one_cells.size() - 1);
  one_index[name] = id;
  return id;
}

CellId Polygraph::add_two_cell(TwoCell c) {
  if (two_index.count(c.name)) throw PolyError("duplicate 2-cell: " + c.name);
  two_cells.push_back(std::move(c));
  CellId id = static_cast<CellId>(two_cells.size() - 1);
  two_index[two_cells.back().name] = id;
  return id;
}

CellId Polygraph::one_id(const std::string& name) const {
  auto it = one_index.find(name);
  if (it == one_index.end()) throw PolyError("unknown 1-cell: " + name);
  return it->second;
}

CellId Polygraph::two_id(const std::string& name) const {
  auto it = two_index.find(name);
  if (it == two_index.end()) throw PolyError("unknown 2-cell: " + name);
  return it->second;
}

CellId Polygraph::tau(CellId a, CellId b) const {
  for (size_t i = 0; i < two_cells.size(); ++i)
    if (two_cells[i].tag == StructureTag::Tau && two_cells[i].p0 == a && two_cells[i].p1 == b)
      return static_cast<CellId>(i);
  return -1;
}
CellId Polygraph::delta(CellId a) const {
  for (size_t i = 0; i < two_cells.size(); ++i)
    if (two_cells[i].tag == StructureTag::Delta && two_cells[i].p0 == a) return static_cast<CellId>(i);
  return -1;
}
CellId Polygraph::eps(CellId a) const {
  for (size_t i = 0; i < two_cells.size(); ++i)
    if (two_cells[i].tag == StructureTag::Eps && two_cells[i].p0 == a) return static_cast<CellId>(i);
  return -1;
}

std::string Polygraph::word_str(const Word& w) const {
  if (w.empty()) return "*";
  std::string out;
  for (size_t i = 0; i < w.size(); ++i) {
    if (i) out += ".";
    out += one_cells.at(w[i]);
  }
  return out;
}

// -- construction -------------------------------------------------------------

Diagram identity(const Word& w) {
  Diagram d;
  d.src = w;
  d.tgt = w;
  return d;
}

Diagram whisker_cell(const Polygraph& P, const Word& left, CellId c, const Word& right) {
  const TwoCell& tc = P.cell(c);
  Diagram d;
  d.src = left;
  d.src.insert(d.src.end(), tc.src.begin(), tc.src.end());
  d.src.insert(d.src.end(), right.begin(), right.end());
  d.tgt = left;
  d.tgt.insert(d.tgt.end(), tc.tgt.begin(), tc.tgt.end());
  d.tgt.insert(d.tgt.end(), right.begin(), right.end());
  d.slices.push_back({static_cast<int>(left.size()), c, static_cast<int>(right.size())});
  return d;
}

static Word concat(const Word& a, const Word& b) {
  Word w = a;
  w.insert(w.end(), b.begin(), b.end());
  return w;
}

Diagram compose0(const Polygraph& P, const Diagram& a, const Diagram& b) {
  (void)P;
  Diagram d;
  d.src = concat(a.src, b.src);
  d.tgt = concat(a.tgt, b.tgt);
  d.slices.reserve(a.slices.size() + b.slices.size());
  for (const auto& s : a.slices) d.slices.push_back({s.left, s.cell, s.right + static_cast<int>(b.src.size())});
  for (const auto& s : b.slices) d.slices.push_back({s.left + static_cast<int>(a.tgt.size()), s.cell, s.right});
  return d;
}

Diagram compose1(const Polygraph& P, const Diagram& a, const Diagram& b) {
  if (a.tgt != b.src)
    throw BoundaryMismatch("compose1: target " + P.word_str(a.tgt) + " != source " + P.word_str(b.src));
  Diagram d;
  d.src = a.src;
  d.tgt = b.tgt;
  d.slices = a.slices;
  d.slices.insert(d.slices.end(), b.slices.begin(), b.slices.end());
  return d;
}

void append_slice(const Polygraph& P, Diagram& d, int left, CellId c) {
  const TwoCell& tc = P.cell(c);
  int width = static_cast<int>(d.tgt.size());
  int right = width - left - tc.arity();
  if (left < 0 || right < 0) throw MalformedDiagram("append_slice: offset out of range");
  for (int k = 0; k < tc.arity(); ++k)
    if (d.tgt[left + k] != tc.src[k])
      throw MalformedDiagram("append_slice: wire type mismatch under " + tc.name);
  Word next(d.tgt.begin(), d.tgt.begin() + left);
  next.insert(next.end(), tc.tgt.begin(), tc.tgt.end());
  next.insert(next.end(), d.tgt.begin() + left + tc.arity(), d.tgt.end());
  d.tgt = std::move(next);
  d.slices.push_back({left, c, right});
}

Word boundary_at(const Polygraph& P, const Diagram& d, size_t i) {
  Word w = d.src;
  for (size_t j = 0; j < i; ++j) {
    const Slice& s = d.slices[j];
    const TwoCell& tc = P.cell(s.cell);
    Word next(w.begin(), w.begin() + s.left);
    next.insert(next.end(), tc.tgt.begin(), tc.tgt.end());
    next.insert(next.end(), w.begin() + s.left + tc.arity(), w.end());
    w = std::move(next);
  }
  return w;
}

void check_diagram(const Polygraph& P, const Diagram& d) {
  Word w = d.src;
  for (size_t j = 0; j < d.slices.size(); ++j) {
    const Slice& s = d.slices[j];
    if (s.cell < 0 || s.cell >= static_cast<CellId>(P.two_cells.size()))
      throw MalformedDiagram("slice " + std::to_string(j) + ": bad cell id");
    const TwoCell& tc = P.cell(s.cell);
    if (s.left < 0 || s.right < 0 || s.left + tc.arity() + s.right != static_cast<int>(w.size()))
      throw MalformedDiagram("slice " + std::to_string(j) + ": width mismatch under " + tc.name);
    for (int k = 0; k < tc.arity(); ++k)
      if (w[s.left + k] != tc.src[k])
        throw MalformedDiagram("slice " + std::to_string(j) + ": wire type mismatch under " + tc.name);
    Word next(w.begin(), w.begin() + s.left);
    next.insert(next.end(), tc.tgt.begin(), tc.tgt.end());
    next.insert(next.end(), w.begin() + s.left + tc.arity(), w.end());
    w = std::move(next);
  }
  if (w != d.tgt) throw MalformedDiagram("diagram target does not match slice chain");
}

// -- size ----------------------------------------------------------------------

size_t size_wrt(const Diagram& d, const std::vector<CellId>& family) {
  size_t n = 0;
  for (const auto& s : d.slices)
    if (std::find(family.begin(), family.end(), s.cell) != family.end()) ++n;
  return n;
}

size_t structure_size(const Polygraph& P, const Diagram& d) {
  return size_wrt(d, [&](CellId c) { return P.cell(c).kind == CellKind::Structure; });
}

// -- exchange ------------------------------------------------------------------

bool swappable_up(const Polygraph& P, const Diagram& d, size_t i) {
  if (i + 1 >= d.slices.size()) return false;
  const Slice& a = d.slices[i];
  const Slice& b = d.slices[i + 1];
  return b.left + P.cell(b.cell).arity() <= a.left;
}

bool swappable_down(const Polygraph& P, const Diagram& d, size_t i) {
  if (i + 1 >= d.slices.size()) return false;
  const Slice& a = d.slices[i];
  const Slice& b = d.slices[i + 1];
  return b.left >= a.left + P.cell(a.cell).coarity();
}

void exchange_swap(const Polygraph& P, Diagram& d, size_t i) {
  Slice a = d.slices[i];
  Slice b = d.slices[i + 1];
  const TwoCell& ca = P.cell(a.cell);
  const TwoCell& cb = P.cell(b.cell);
  int wa = ca.coarity() - ca.arity();
  int wb = cb.coarity() - cb.arity();
  if (swappable_up(P, d, i)) {
    // b acts left of a; b runs first, a shifts by b's width change.
    Slice nb{b.left, b.cell, b.right - wa};
    Slice na{a.left + wb, a.cell, a.right};
    d.slices[i] = nb;
    d.slices[i + 1] = na;
  } else if (swappable_down(P, d, i)) {
    // b acts right of a's output span; b runs first at shifted offset.
    Slice nb{b.left - wa, b.cell, b.right};
    Slice na{a.left, a.cell, a.right + wb};
    d.slices[i] = nb;
    d.slices[i + 1] = na;
  } else {
    throw MalformedDiagram("exchange_swap: slices " + std::to_string(i) + "," + std::to_string(i + 1) +
                           " do not commute");
  }
}

Diagram exchange_insertion_form(const Polygraph& P, const Diagram& d) {
  Diagram nf = identity(d.src);
  for (const Slice& s : d.slices) {
    append_slice(P, nf, s.left, s.cell);
    for (size_t i = nf.slices.size() - 1; i > 0 && swappable_up(P, nf, i - 1); --i) exchange_swap(P, nf, i - 1);
  }
  if (nf.tgt != d.tgt) throw MalformedDiagram("exchange normalization changed the boundary");
  return nf;
}

namespace {

struct NfKey {
  long long off = 0, flag = 0;
  CellId cell = 0;
  bool operator<(const NfKey& o) const { return std::tie(off, flag, cell) < std::tie(o.off, o.flag, o.cell); }
  bool operator==(const NfKey& o) const { return off == o.off && flag == o.flag && cell == o.cell; }
};

// Canonical linearization of `pending`: repeatedly extract the frontable
// slice with the smallest (offset, insertion-before-consumer, cell) key.
// Frontability and the key are wiring invariants, so the choice is unique
// except when several identical-looking slices race at one offset; those
// ties are resolved by comparing the candidates' full continuations, which
// also short-circuits the recursion (the chosen continuation is the rest of
// the answer).
std::vector<Slice> schedule(const Polygraph& P, std::vector<Slice> pending, int depth) {
  std::vector<Slice> out;
  out.reserve(pending.size());
  while (!pending.empty()) {
    NfKey best{};
    std::vector<size_t> ties;
    for (size_t idx = 0; idx < pending.size(); ++idx) {
      const TwoCell& sc = P.cell(pending[idx].cell);
      long long off = pending[idx].left;
      bool ok = true;
      for (size_t j = idx; j-- > 0;) {
        const Slice& t = pending[j];
        const TwoCell& tc = P.cell(t.cell);
        if (off + sc.arity() <= t.left) {
          // strictly left of t: offset unchanged
        } else if (off >= t.left + tc.coarity()) {
          off += tc.arity() - tc.coarity();
        } else {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      NfKey key{off, sc.arity() == 0 ? 0LL : 1LL, pending[idx].cell};
      if (ties.empty() || key < best) {
        best = key;
        ties.assign(1, idx);
      } else if (key == best) {
        ties.push_back(idx);
      }
    }
    if (ties.empty()) throw MalformedDiagram("exchange normalization found no extractable slice");

    // Bubbles candidate `idx` to the front of pending and returns the
    // adjusted remainder (exchange swaps keep every offset consistent).
    auto split_at = [&](size_t idx) {
      std::vector<Slice> work = pending;
      for (size_t k = idx; k > 0; --k) {
        // pairwise exchange on raw slices (mirrors exchange_swap)
        Slice a = work[k - 1], b = work[k];
        const TwoCell& ca = P.cell(a.cell);
        const TwoCell& cb = P.cell(b.cell);
        int wa = ca.coarity() - ca.arity();
        int wb = cb.coarity() - cb.arity();
        if (b.left + cb.arity() <= a.left) {
          work[k - 1] = {b.left, b.cell, b.right - wa};
          work[k] = {a.left + wb, a.cell, a.right};
        } else if (b.left >= a.left + ca.coarity()) {
          work[k - 1] = {b.left - wa, b.cell, b.right};
          work[k] = {a.left, a.cell, a.right + wb};
        } else {
          throw MalformedDiagram("schedule: chosen slice is blocked");
        }
      }
      Slice head = work.front();
      work.erase(work.begin());
      return std::pair(head, std::move(work));
    };

    if (ties.size() == 1 || depth > 24) {
      auto [head, rest] = split_at(ties[0]);
      out.push_back(head);
      pending = std::move(rest);
      continue;
    }
    // identical-key race: take the lexicographically smallest continuation
    std::vector<Slice> best_rest;
    bool have = false;
    Slice head{};
    for (size_t t : ties) {
      auto [h, r] = split_at(t);
      std::vector<Slice> cont = schedule(P, r, depth + 1);
      auto lex_less = [](const std::vector<Slice>& x, const std::vector<Slice>& y) {
        for (size_t i = 0; i < std::min(x.size(), y.size()); ++i) {
          if (x[i].left != y[i].left) return x[i].left < y[i].left;
          if (x[i].cell != y[i].cell) return x[i].cell < y[i].cell;
        }
        return x.size() < y.size();
      };
      if (!have || lex_less(cont, best_rest)) {
        best_rest = std::move(cont);
        head = h;
        have = true;
      }
    }
    out.push_back(head);
    out.insert(out.end(), best_rest.begin(), best_rest.end());
    return out;
  }
  return out;
}

}  // namespace

Diagram exchange_normal_form(const Polygraph& P, const Diagram& d) {
  Diagram out = identity(d.src);
  for (const Slice& s : schedule(P, d.slices, 0)) append_slice(P, out, s.left, s.cell);
  if (out.tgt != d.tgt) throw MalformedDiagram("exchange normalization changed the boundary");
  return out;
}

bool diagram_equal(const Polygraph& P, const Diagram& a, const Diagram& b) {
  Diagram na = exchange_normal_form(P, a);
  Diagram nb = exchange_normal_form(P, b);
  if (na.src != nb.src || na.tgt != nb.tgt || na.slices.size() != nb.slices.size()) return false;
  for (size_t i = 0; i < na.slices.size(); ++i) {
    if (na.slices[i].left != nb.slices[i].left || na.slices[i].cell != nb.slices[i].cell) return false;
  }
  return true;
}

// -- validation ------------------------------------------------------------------

std::string ValidationReport::to_string() const {
  if (issues.empty()) return "OK";
  std::ostringstream os;
  for (const auto& is : issues) os << is.code << " at " << is.where << ": " << is.detail << "\n";
  return os.str();
}

ValidationReport validate_polygraph(const Polygraph& P) {
  ValidationReport rep;
  auto issue = [&](const std::string& code, const std::string& where, const std::string& detail) {
    rep.issues.push_back({code, where, detail});
  };

  for (const auto& tc : P.two_cells) {
    for (CellId x : tc.src)
      if (x < 0 || x >= static_cast<CellId>(P.one_cells.size())) issue("UnknownSort", tc.name, "bad source wire");
    for (CellId x : tc.tgt)
      if (x < 0 || x >= static_cast<CellId>(P.one_cells.size())) issue("UnknownSort", tc.name, "bad target wire");
    if (tc.kind == CellKind::Constructor && tc.coarity() != 1)
      issue("ConstructorShape", tc.name, "constructor must have coarity 1");
    if (tc.kind == CellKind::Structure) {
      switch (tc.tag) {
        case StructureTag::Tau:
          if (tc.src != Word{tc.p0, tc.p1} || tc.tgt != Word{tc.p1, tc.p0})
            issue("StructureShape", tc.name, "tau boundaries wrong");
          break;
        case StructureTag::Delta:
          if (tc.src != Word{tc.p0} || tc.tgt != Word{tc.p0, tc.p0})
            issue("StructureShape", tc.name, "delta boundaries wrong");
          break;
        case StructureTag::Eps:
          if (tc.src != Word{tc.p0} || !tc.tgt.empty()) issue("StructureShape", tc.name, "eps boundaries wrong");
          break;
        default:
          issue("StructureShape", tc.name, "structure cell without tag");
      }
    }
  }

  for (const auto& r : P.three_cells) {
    try {
      check_diagram(P, r.lhs);
      check_diagram(P, r.rhs);
    } catch (const std::exception& e) {
      issue("MalformedDiagram", r.name, e.what());
      continue;
    }
    if (r.lhs.src != r.rhs.src || r.lhs.tgt != r.rhs.tgt)
      issue("GlobularViolation", r.name, "lhs and rhs are not parallel");

    // Pattern shape: constructors above a single full-width head cell, the
    // head being a function cell (computation) or structure cell (structure
    // rules). Wires are linear in a planar diagram, so left-linearity is
    // forced once the shape holds.
    Diagram lhs = exchange_normal_form(P, r.lhs);
    if (lhs.slices.empty()) {
      issue("PatternShapeViolation", r.name, "lhs is degenerate");
      continue;
    }
    const Slice& head = lhs.slices.back();
    const TwoCell& hc = P.cell(head.cell);
    CellKind want = (r.kind == RuleKind::Computation) ? CellKind::Function : CellKind::Structure;
    if (hc.kind != want)
      issue("PatternShapeViolation", r.name, "lhs head cell has wrong kind: " + hc.name);
    if (head.left != 0 || head.right != 0)
      issue("PatternShapeViolation", r.name, "lhs head cell must consume the full boundary");
    for (size_t j = 0; j + 1 < lhs.slices.size(); ++j) {
      if (P.cell(lhs.slices[j].cell).kind != CellKind::Constructor) {
        issue("PatternShapeViolation", r.name,
              "lhs contains non-constructor cell " + P.cell(lhs.slices[j].cell).name + " above the head");
      }
    }
  }
  return rep;
}

}  // namespace poly
