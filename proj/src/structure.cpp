#include "poly/structure.hpp"

namespace poly {

std::vector<CellId> generate_structure_cells(Polygraph& P) {
  std::vector<CellId> added;
  size_t n = P.one_cells.size();
  for (CellId a = 0; a < static_cast<CellId>(n); ++a) {
    for (CellId b = 0; b < static_cast<CellId>(n); ++b) {
      if (P.tau(a, b) >= 0) continue;
      TwoCell c;
      c.name = "tau(" + P.one_cells[a] + "," + P.one_cells[b] + ")";
      c.src = {a, b};
      c.tgt = {b, a};
      c.kind = CellKind::Structure;
      c.tag = StructureTag::Tau;
      c.p0 = a;
      c.p1 = b;
      added.push_back(P.add_two_cell(std::move(c)));
    }
  }
  for (CellId a = 0; a < static_cast<CellId>(n); ++a) {
    if (P.delta(a) < 0) {
      TwoCell c;
      c.name = "delta(" + P.one_cells[a] + ")";
      c.src = {a};
      c.tgt = {a, a};
      c.kind = CellKind::Structure;
      c.tag = StructureTag::Delta;
      c.p0 = a;
      added.push_back(P.add_two_cell(std::move(c)));
    }
    if (P.eps(a) < 0) {
      TwoCell c;
      c.name = "eps(" + P.one_cells[a] + ")";
      c.src = {a};
      c.kind = CellKind::Structure;
      c.tag = StructureTag::Eps;
      c.p0 = a;
      added.push_back(P.add_two_cell(std::move(c)));
    }
  }
  return added;
}

// tau_{u,xi}: u.xi => xi.u, by recursion on u from the right:
// tau_{*,xi} = id, tau_{v.z,xi} = (id_v * tau(z,xi)) ; (tau_{v,xi} * id_z).
Diagram crossing_word_cell(const Polygraph& P, const Word& u, CellId xi) {
  Word src = u;
  src.push_back(xi);
  Diagram d = identity(src);
  // Bubble xi leftwards across u, one adjacent crossing per step.
  for (int i = static_cast<int>(u.size()) - 1; i >= 0; --i) {
    CellId t = P.tau(u[i], xi);
    if (t < 0) throw PolyError("missing structure cell tau(" + P.one_cells[u[i]] + "," + P.one_cells[xi] + ")");
    append_slice(P, d, i, t);
  }
  return d;
}

Diagram crossing_cell_word(const Polygraph& P, CellId xi, const Word& u) {
  Word src{xi};
  src.insert(src.end(), u.begin(), u.end());
  Diagram d = identity(src);
  for (size_t i = 0; i < u.size(); ++i) {
    CellId t = P.tau(xi, u[i]);
    if (t < 0) throw PolyError("missing structure cell tau(" + P.one_cells[xi] + "," + P.one_cells[u[i]] + ")");
    append_slice(P, d, static_cast<int>(i), t);
  }
  return d;
}

Diagram crossing_word_word(const Polygraph& P, const Word& u, const Word& v) {
  Word src = u;
  src.insert(src.end(), v.begin(), v.end());
  Diagram d = identity(src);
  // Move each wire of v in turn to the left of the remaining block of u.
  for (size_t k = 0; k < v.size(); ++k) {
    // v[k] currently sits at position k + |u|.
    for (int i = static_cast<int>(u.size()) - 1; i >= 0; --i) {
      CellId t = P.tau(u[i], v[k]);
      if (t < 0) throw PolyError("missing structure cell");
      append_slice(P, d, static_cast<int>(k) + i, t);
    }
  }
  return d;
}

Diagram dup_word(const Polygraph& P, const Word& u) {
  if (u.empty()) return identity({});
  if (u.size() == 1) {
    CellId dl = P.delta(u[0]);
    if (dl < 0) throw PolyError("missing structure cell delta(" + P.one_cells[u[0]] + ")");
    return whisker_cell(P, {}, dl, {});
  }
  // delta_{x.v} = (delta_x * delta_v) ; (id_x * tau_{x,v} * id_v)
  Word head{u[0]};
  Word rest(u.begin() + 1, u.end());
  Diagram d = compose0(P, dup_word(P, head), dup_word(P, rest));
  Diagram mid = compose0(P, identity(head), compose0(P, crossing_cell_word(P, u[0], rest), identity(rest)));
  return compose1(P, d, mid);
}

Diagram erase_word(const Polygraph& P, const Word& u) {
  Diagram d = identity(u);
  for (size_t i = 0; i < u.size(); ++i) {
    CellId e = P.eps(u[i]);
    if (e < 0) throw PolyError("missing structure cell eps(" + P.one_cells[u[i]] + ")");
    append_slice(P, d, 0, e);
  }
  d.tgt.clear();
  d.tgt = {};
  return d;
}

size_t generate_structure_rules(Polygraph& P) {
  size_t count = 0;
  std::vector<CellId> ctors;
  for (CellId c = 0; c < static_cast<CellId>(P.two_cells.size()); ++c)
    if (P.cell(c).kind == CellKind::Constructor) ctors.push_back(c);

  for (CellId c : ctors) {
    const TwoCell tc = P.cell(c);  // copy: P.two_cells is stable here anyway
    CellId xi = tc.tgt[0];
    const Word& x = tc.src;
    for (CellId z = 0; z < static_cast<CellId>(P.one_cells.size()); ++z) {
      Word zw{z};
      {
        // (phi * id_z) ; tau(xi,z)  =>  tau_{x,z} ; (id_z * phi)
        ThreeCell r;
        r.name = "S[" + tc.name + "/tau." + P.one_cells[z] + "]";
        r.kind = RuleKind::Structure;
        Diagram lhs = compose0(P, whisker_cell(P, {}, c, {}), identity(zw));
        lhs = compose1(P, lhs, whisker_cell(P, {}, P.tau(xi, z), {}));
        Diagram rhs = crossing_word_cell(P, x, z);
        rhs = compose1(P, rhs, compose0(P, identity(zw), whisker_cell(P, {}, c, {})));
        r.lhs = exchange_normal_form(P, lhs);
        r.rhs = exchange_normal_form(P, rhs);
        P.three_cells.push_back(std::move(r));
        ++count;
      }
      {
        // (id_z * phi) ; tau(z,xi)  =>  tau_{z,x} ; (phi * id_z)
        ThreeCell r;
        r.name = "S[tau." + P.one_cells[z] + "\\" + tc.name + "]";
        r.kind = RuleKind::Structure;
        Diagram lhs = compose0(P, identity(zw), whisker_cell(P, {}, c, {}));
        lhs = compose1(P, lhs, whisker_cell(P, {}, P.tau(z, xi), {}));
        Diagram rhs = crossing_cell_word(P, z, x);
        rhs = compose1(P, rhs, compose0(P, whisker_cell(P, {}, c, {}), identity(zw)));
        r.lhs = exchange_normal_form(P, lhs);
        r.rhs = exchange_normal_form(P, rhs);
        P.three_cells.push_back(std::move(r));
        ++count;
      }
    }
    {
      // phi ; delta(xi)  =>  delta_x ; (phi * phi)
      ThreeCell r;
      r.name = "S[" + tc.name + "/delta]";
      r.kind = RuleKind::Structure;
      Diagram lhs = whisker_cell(P, {}, c, {});
      lhs = compose1(P, lhs, whisker_cell(P, {}, P.delta(xi), {}));
      Diagram rhs = dup_word(P, x);
      rhs = compose1(P, rhs, compose0(P, whisker_cell(P, {}, c, {}), whisker_cell(P, {}, c, {})));
      r.lhs = exchange_normal_form(P, lhs);
      r.rhs = exchange_normal_form(P, rhs);
      P.three_cells.push_back(std::move(r));
      ++count;
    }
    {
      // phi ; eps(xi)  =>  eps_x
      ThreeCell r;
      r.name = "S[" + tc.name + "/eps]";
      r.kind = RuleKind::Structure;
      Diagram lhs = whisker_cell(P, {}, c, {});
      lhs = compose1(P, lhs, whisker_cell(P, {}, P.eps(xi), {}));
      r.lhs = exchange_normal_form(P, lhs);
      r.rhs = exchange_normal_form(P, erase_word(P, x));
      P.three_cells.push_back(std::move(r));
      ++count;
    }
  }
  return count;
}

}  // namespace poly
