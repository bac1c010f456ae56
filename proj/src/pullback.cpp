#include "fpcore/pullback.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <set>
#include <sstream>

namespace fpcore {

namespace {

std::vector<int> product_set(const FiniteGroup& g, const Subgroup& l, int c,
                             const Subgroup& r) {
  std::set<int> out;
  for (int a : l)
    for (int b : r) out.insert(g.mul(g.mul(a, c), b));
  return {out.begin(), out.end()};
}

int min_common(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> common;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(common));
  if (common.empty()) throw error("pullback: incompatible cell data");
  return common.front();
}

struct UnionFind {
  std::vector<int> up;
  explicit UnionFind(int n) : up(n) {
    for (int i = 0; i < n; ++i) up[i] = i;
  }
  int find(int x) {
    while (up[x] != x) x = up[x] = up[up[x]];
    return x;
  }
  void join(int a, int b) { up[find(a)] = find(b); }
};

}  // namespace

PullbackGraph pullback(const HGraph& left, const HGraph& right) {
  if (left.spec != right.spec)
    throw error("pullback: the marked graphs use different specs");
  if (!left.folded || !right.folded || !left.marked() || !right.marked())
    throw error("pullback: both graphs must be folded and marked");
  const AmbientSpec& spec = *left.spec;
  const FiniteGroup& amal = spec.amalgam;

  PullbackGraph p;
  p.left = &left;
  p.right = &right;
  p.spec = &spec;

  std::map<std::tuple<int, int, int>, int> base_id;
  for (int b = 0; b < (int)left.bases.size(); ++b) {
    if (!left.bases[b].alive) continue;
    for (int b2 = 0; b2 < (int)right.bases.size(); ++b2) {
      if (!right.bases[b2].alive) continue;
      for (auto& block :
           double_cosets(amal, left.bases[b].p, right.bases[b2].p)) {
        int delta = block.front();
        PullbackGraph::BaseCell cell;
        cell.b = b;
        cell.b2 = b2;
        cell.delta = delta;
        cell.p = subgroup_intersection(
            conjugate_subgroup(amal, left.bases[b].p, amal.inv(delta)),
            right.bases[b2].p);
        base_id[{b, b2, delta}] = (int)p.base_cells.size();
        p.base_cells.push_back(std::move(cell));
      }
    }
  }
  auto find_base = [&](int b, int b2, int delta_any) {
    int key = coset_min(amal, left.bases[b].p, delta_any, right.bases[b2].p);
    auto it = base_id.find({b, b2, key});
    assert(it != base_id.end());
    return it->second;
  };

  std::map<std::tuple<int, int, int>, int> factor_id;
  for (int c = 0; c < (int)p.base_cells.size(); ++c) {
    const auto cell = p.base_cells[c];
    for (int i = 0; i < spec.num_factors(); ++i) {
      auto el = left.factor_edge_at(cell.b, i);
      auto er = right.factor_edge_at(cell.b2, i);
      if (!el || !er) continue;
      const FiniteGroup& G = spec.factors[i];
      const auto& fel = left.fedges[*el];
      const auto& fer = right.fedges[*er];
      int ub = G.mul(fel.rep, spec.phi(i, cell.delta));
      int ubp = fer.rep;
      int d_exact = G.mul(ub, G.inv(ubp));
      int dmin = coset_min(G, left.fvs[fel.v].s, d_exact,
                           right.fvs[fer.v].s);
      auto key = std::make_tuple(fel.v, fer.v, dmin);
      auto it = factor_id.find(key);
      int fc;
      if (it == factor_id.end()) {
        PullbackGraph::FactorCell fcell;
        fcell.v = fel.v;
        fcell.v2 = fer.v;
        fcell.d = dmin;
        fcell.u0 = ub;
        fcell.u0p = ubp;
        fcell.s = subgroup_intersection(
            conjugate_subgroup(G, left.fvs[fel.v].s, G.inv(ub)),
            conjugate_subgroup(G, right.fvs[fer.v].s, G.inv(ubp)));
        fc = (int)p.factor_cells.size();
        factor_id[key] = fc;
        p.factor_cells.push_back(std::move(fcell));
      } else {
        fc = it->second;
      }
      const auto& fcell = p.factor_cells[fc];
      // label of the induced intersection edge
      int m = min_common(
          product_set(G, conjugate_subgroup(G, left.fvs[fel.v].s,
                                            G.inv(fcell.u0)),
                      G.mul(G.inv(fcell.u0), ub), trivial_subgroup()),
          product_set(G, conjugate_subgroup(G, right.fvs[fer.v].s,
                                            G.inv(fcell.u0p)),
                      G.mul(G.inv(fcell.u0p), ubp), trivial_subgroup()));
      Subgroup pim;
      for (int q : cell.p) pim.push_back(spec.phi(i, q));
      std::sort(pim.begin(), pim.end());
      m = coset_min(G, fcell.s, m, pim);
      p.edge_cells.push_back({c, fc, *el, *er, m});
    }
  }

  for (int el = 0; el < (int)left.xedges.size(); ++el) {
    const auto& xl = left.xedges[el];
    if (!xl.alive) continue;
    for (int er = 0; er < (int)right.xedges.size(); ++er) {
      const auto& xr = right.xedges[er];
      if (!xr.alive || xr.gen != xl.gen) continue;
      int src = find_base(xl.src, xr.src, amal.mul(xl.d, amal.inv(xr.d)));
      int dst = find_base(xl.dst, xr.dst, amal.mul(xl.d2, amal.inv(xr.d2)));
      const auto& sc = p.base_cells[src];
      const auto& dc = p.base_cells[dst];
      int d = min_common(
          product_set(amal,
                      conjugate_subgroup(amal, left.bases[xl.src].p,
                                         amal.inv(sc.delta)),
                      amal.mul(amal.inv(sc.delta), xl.d), trivial_subgroup()),
          product_set(amal, right.bases[xr.src].p, xr.d, trivial_subgroup()));
      int d2 = min_common(
          product_set(amal,
                      conjugate_subgroup(amal, left.bases[xl.dst].p,
                                         amal.inv(dc.delta)),
                      amal.mul(amal.inv(dc.delta), xl.d2), trivial_subgroup()),
          product_set(amal, right.bases[xr.dst].p, xr.d2, trivial_subgroup()));
      d = coset_min(amal, sc.p, d, trivial_subgroup());
      d2 = coset_min(amal, dc.p, d2, trivial_subgroup());
      p.free_cells.push_back({src, dst, el, er, xl.gen, d, d2});
    }
  }

  p.basepoint_cell =
      find_base(left.basepoint, right.basepoint,
                amal.mul(left.mark, amal.inv(right.mark)));
  {
    const auto& bp = p.base_cells[p.basepoint_cell];
    int mark = min_common(
        product_set(amal,
                    conjugate_subgroup(amal, left.bases[left.basepoint].p,
                                       amal.inv(bp.delta)),
                    amal.mul(amal.inv(bp.delta), left.mark),
                    trivial_subgroup()),
        product_set(amal, right.bases[right.basepoint].p, right.mark,
                    trivial_subgroup()));
    p.mark = coset_min(amal, bp.p, mark, trivial_subgroup());
  }

  // components over base + factor cells
  const int nb = (int)p.base_cells.size();
  UnionFind uf(nb + (int)p.factor_cells.size());
  for (const auto& e : p.edge_cells) uf.join(e.base_cell, nb + e.factor_cell);
  for (const auto& e : p.free_cells) uf.join(e.src_cell, e.dst_cell);
  std::map<int, int> comp_of;
  auto comp = [&](int node) {
    int r = uf.find(node);
    auto it = comp_of.find(r);
    if (it != comp_of.end()) return it->second;
    int id = (int)comp_of.size();
    comp_of[r] = id;
    return id;
  };
  for (int c = 0; c < nb; ++c) p.base_cells[c].component = comp(c);
  for (int f = 0; f < (int)p.factor_cells.size(); ++f)
    p.factor_cells[f].component = comp(nb + f);
  p.num_components = (int)comp_of.size();
  return p;
}

IntersectionResult intersection_core(const PullbackGraph& p) {
  IntersectionResult r;
  const int comp = p.base_cells[p.basepoint_cell].component;
  HGraph& g = r.graph;
  g.spec = p.spec;
  std::vector<int> blocal(p.base_cells.size(), -1),
      flocal(p.factor_cells.size(), -1);
  for (int c = 0; c < (int)p.base_cells.size(); ++c) {
    if (p.base_cells[c].component != comp) continue;
    blocal[c] = (int)g.bases.size();
    g.bases.push_back({p.base_cells[c].p, true});
    r.base_cell_of.push_back(c);
  }
  for (int f = 0; f < (int)p.factor_cells.size(); ++f) {
    if (p.factor_cells[f].component != comp) continue;
    flocal[f] = (int)g.fvs.size();
    g.fvs.push_back({p.left->fvs[p.factor_cells[f].v].factor,
                     p.factor_cells[f].s, true});
    r.factor_cell_of.push_back(f);
  }
  for (int e = 0; e < (int)p.edge_cells.size(); ++e) {
    const auto& ec = p.edge_cells[e];
    if (p.base_cells[ec.base_cell].component != comp) continue;
    g.fedges.push_back(
        {blocal[ec.base_cell], flocal[ec.factor_cell], ec.rep, true});
    r.edge_cell_of.push_back(e);
  }
  for (int e = 0; e < (int)p.free_cells.size(); ++e) {
    const auto& fc = p.free_cells[e];
    if (p.base_cells[fc.src_cell].component != comp) continue;
    g.xedges.push_back({blocal[fc.src_cell], blocal[fc.dst_cell], fc.gen,
                        fc.d, fc.d2, true});
    r.free_cell_of.push_back(e);
  }
  g.basepoint = blocal[p.basepoint_cell];
  g.mark = p.mark;
  g.folded = true;
  if (auto why = folded_violation(g))
    throw error("intersection_core: component is not folded: " + *why);
  r.core = trim_core(g);
  r.generators = extract_generators(g);
  return r;
}

namespace {

int n_eff_impl(const PullbackGraph& p, const IntersectionResult& ir) {
  CoreFlags fl = trim_flags(ir.graph);
  std::map<std::pair<int, int>, int> fibers;
  for (int e = 0; e < (int)ir.graph.fedges.size(); ++e) {
    if (!fl.fe[e]) continue;
    const auto& ec = p.edge_cells[ir.edge_cell_of[e]];
    fibers[{ec.fe_left, ~ec.fe_right}]++;
  }
  for (int e = 0; e < (int)ir.graph.xedges.size(); ++e) {
    if (!fl.xe[e]) continue;
    const auto& fc = p.free_cells[ir.free_cell_of[e]];
    fibers[{~fc.xe_left, fc.xe_right}]++;
  }
  int best = 1;
  for (auto& [k, v] : fibers) best = std::max(best, v);
  return best;
}

}  // namespace

int n_eff(const PullbackGraph& p) {
  IntersectionResult ir = intersection_core(p);
  return n_eff_impl(p, ir);
}

std::string pullback_to_dot(const PullbackGraph& p) {
  std::ostringstream os;
  const int comp = p.base_cells[p.basepoint_cell].component;
  std::map<std::pair<int, int>, int> edge_fibers;
  for (const auto& e : p.edge_cells)
    if (p.base_cells[e.base_cell].component == comp)
      edge_fibers[{e.fe_left, e.fe_right}]++;
  os << "graph pullback {\n";
  for (int c = 0; c < (int)p.base_cells.size(); ++c) {
    const auto& cell = p.base_cells[c];
    os << "  c" << c << " [shape=point, xlabel=\"(" << cell.b << ","
       << cell.b2 << "," << cell.delta << ")\"";
    if (cell.component == comp) os << ", color=red";
    os << "];\n";
  }
  for (int f = 0; f < (int)p.factor_cells.size(); ++f) {
    const auto& cell = p.factor_cells[f];
    os << "  v" << f << " [label=\"(" << cell.v << "," << cell.v2
       << ") |S|=" << cell.s.size() << "\"";
    if (cell.component == comp) os << ", color=red";
    os << "];\n";
  }
  for (const auto& e : p.edge_cells) {
    os << "  c" << e.base_cell << " -- v" << e.factor_cell;
    auto it = edge_fibers.find({e.fe_left, e.fe_right});
    if (it != edge_fibers.end())
      os << " [label=\"fiber " << it->second << "\"]";
    os << ";\n";
  }
  for (const auto& e : p.free_cells)
    os << "  c" << e.src_cell << " -- c" << e.dst_cell << " [label=\"x"
       << (e.gen + 1) << "\"];\n";
  os << "}\n";
  return os.str();
}

FiberReport fiber_check(const PullbackGraph& p, const SubgroupOracle& h,
                        const SubgroupOracle& k) {
  const AmbientSpec& spec = *p.spec;
  const FiniteGroup& amal = spec.amalgam;
  IntersectionResult ir = intersection_core(p);
  FiberReport rep;
  rep.n_eff = n_eff_impl(p, ir);
  CoreFlags fl_left = trim_flags(*p.left), fl_right = trim_flags(*p.right);
  rep.m_left = max_degenerate_stab(*p.left, fl_left);
  rep.m_right = max_degenerate_stab(*p.right, fl_right);

  BaseWalks bw = base_walks(ir.graph);
  auto witness_of = [&](int graph_base) {
    return normalize(spec, bw.word[graph_base]);
  };
  // walk a witness through one side to get frame offsets there
  auto side_state = [&](const HGraph& side, const NormalForm& w) {
    auto st = walk_word(side, WalkState{side.basepoint, side.mark}, w);
    if (!st) throw error("fiber_check: witness fails to project");
    return *st;
  };
  auto conj_sub = [&](const FiniteGroup& grp, const Subgroup& s, int by) {
    return conjugate_subgroup(grp, s, grp.inv(by));  // by^-1 s by
  };

  // base-vertex fibers over core image pairs
  std::map<std::pair<int, int>, std::vector<int>> base_groups;
  for (int b = 0; b < (int)ir.graph.bases.size(); ++b) {
    const auto& cell = p.base_cells[ir.base_cell_of[b]];
    if (!fl_left.base[cell.b] || !fl_right.base[cell.b2]) continue;
    base_groups[{cell.b, cell.b2}].push_back(b);
  }
  for (auto& [img, cells] : base_groups) {
    FiberReport::Cell row;
    row.kind = 'b';
    row.image_left = img.first;
    row.image_right = img.second;
    row.count = (int)cells.size();
    NormalForm w = witness_of(cells.front());
    WalkState sl = side_state(*p.left, w), sr = side_state(*p.right, w);
    FiberCellQuery q;
    q.witness = w;
    q.factor_cell = false;
    q.hx = conj_sub(amal, p.left->bases[sl.base].p, sl.alpha);
    q.kx = conj_sub(amal, p.right->bases[sr.base].p, sr.alpha);
    FiberCount fc = oracle_fiber_count(h, k, q);
    row.oracle_count = fc.count;
    row.verified = fc.verified;
    row.match = !fc.verified || fc.count == row.count;
    if (!fc.verified) rep.unverified++;
    if (!row.match) rep.mismatches++;
    rep.cells.push_back(row);
  }

  // factor-vertex fibers
  std::map<std::pair<int, int>, std::vector<int>> fv_groups;
  for (int v = 0; v < (int)ir.graph.fvs.size(); ++v) {
    const auto& cell = p.factor_cells[ir.factor_cell_of[v]];
    if (!fl_left.fv[cell.v] || !fl_right.fv[cell.v2]) continue;
    fv_groups[{cell.v, cell.v2}].push_back(v);
  }
  // an incident edge cell provides the witness frame for a factor cell
  std::vector<int> some_edge(ir.graph.fvs.size(), -1);
  for (int e = 0; e < (int)ir.graph.fedges.size(); ++e)
    if (some_edge[ir.graph.fedges[e].v] < 0)
      some_edge[ir.graph.fedges[e].v] = e;
  for (auto& [img, cells] : fv_groups) {
    FiberReport::Cell row;
    row.kind = 'v';
    row.image_left = img.first;
    row.image_right = img.second;
    row.count = (int)cells.size();
    int ge = some_edge[cells.front()];
    assert(ge >= 0);
    int gb = ir.graph.fedges[ge].b;
    int factor = ir.graph.fvs[cells.front()].factor;
    const FiniteGroup& G = spec.factors[factor];
    NormalForm w = witness_of(gb);
    WalkState sl = side_state(*p.left, w), sr = side_state(*p.right, w);
    auto ein_l = p.left->factor_edge_at(sl.base, factor);
    auto ein_r = p.right->factor_edge_at(sr.base, factor);
    assert(ein_l && ein_r);
    int ul = G.mul(p.left->fedges[*ein_l].rep, spec.phi(factor, sl.alpha));
    int ur = G.mul(p.right->fedges[*ein_r].rep, spec.phi(factor, sr.alpha));
    FiberCellQuery q;
    q.witness = w;
    q.factor_cell = true;
    q.factor = factor;
    q.hx = conj_sub(G, p.left->fvs[p.left->fedges[*ein_l].v].s, ul);
    q.kx = conj_sub(G, p.right->fvs[p.right->fedges[*ein_r].v].s, ur);
    FiberCount fc = oracle_fiber_count(h, k, q);
    row.oracle_count = fc.count;
    row.verified = fc.verified;
    row.match = !fc.verified || fc.count == row.count;
    if (!fc.verified) rep.unverified++;
    if (!row.match) rep.mismatches++;
    rep.cells.push_back(row);
  }

  // factor-edge fibers: same coordinates as their base endpoints
  std::map<std::pair<int, int>, std::vector<int>> e_groups;
  for (int e = 0; e < (int)ir.graph.fedges.size(); ++e) {
    const auto& ec = p.edge_cells[ir.edge_cell_of[e]];
    if (!fl_left.fe[ec.fe_left] || !fl_right.fe[ec.fe_right]) continue;
    e_groups[{ec.fe_left, ec.fe_right}].push_back(e);
  }
  for (auto& [img, cells] : e_groups) {
    FiberReport::Cell row;
    row.kind = 'e';
    row.image_left = img.first;
    row.image_right = img.second;
    row.count = (int)cells.size();
    int gb = ir.graph.fedges[cells.front()].b;
    NormalForm w = witness_of(gb);
    WalkState sl = side_state(*p.left, w), sr = side_state(*p.right, w);
    FiberCellQuery q;
    q.witness = w;
    q.factor_cell = false;
    q.hx = conj_sub(amal, p.left->bases[sl.base].p, sl.alpha);
    q.kx = conj_sub(amal, p.right->bases[sr.base].p, sr.alpha);
    FiberCount fc = oracle_fiber_count(h, k, q);
    row.oracle_count = fc.count;
    row.verified = fc.verified;
    row.match = !fc.verified || fc.count == row.count;
    if (!fc.verified) rep.unverified++;
    if (!row.match) rep.mismatches++;
    rep.cells.push_back(row);
  }
  return rep;
}

}  // namespace fpcore
