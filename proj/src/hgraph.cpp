#include "fpcore/hgraph.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <random>
#include <set>
#include <sstream>

namespace fpcore {

namespace {

Subgroup closure_with(const FiniteGroup& g, const Subgroup& s, int extra) {
  std::vector<int> gens(s.begin(), s.end());
  gens.push_back(extra);
  return subgroup_closure(g, gens);
}

}  // namespace

int HGraph::num_alive_bases() const {
  int n = 0;
  for (auto& b : bases) n += b.alive;
  return n;
}

int HGraph::num_alive_factors() const {
  int n = 0;
  for (auto& v : fvs) n += v.alive;
  return n;
}

int HGraph::num_alive_edges() const {
  int n = 0;
  for (auto& e : fedges) n += e.alive;
  for (auto& e : xedges) n += e.alive;
  return n;
}

int HGraph::valence_base(int b) const {
  int n = 0;
  for (auto& e : fedges) n += e.alive && e.b == b;
  for (auto& e : xedges) {
    if (!e.alive) continue;
    n += e.src == b;
    n += e.dst == b;
  }
  return n;
}

int HGraph::valence_factor(int v) const {
  int n = 0;
  for (auto& e : fedges) n += e.alive && e.v == v;
  return n;
}

std::optional<int> HGraph::factor_edge_at(int b, int factor) const {
  for (size_t i = 0; i < fedges.size(); ++i) {
    const FEdge& e = fedges[i];
    if (e.alive && e.b == b && fvs[e.v].factor == factor) return (int)i;
  }
  return std::nullopt;
}

bool HGraph::base_degenerate(int b) const {
  // a factor edge has stabilizer P_b, a free edge the trivial group; a
  // vertex with no incident edge matches no edge stabilizer
  bool has_factor = false, has_free = false;
  for (auto& e : fedges)
    if (e.alive && e.b == b) has_factor = true;
  for (auto& e : xedges)
    if (e.alive && (e.src == b || e.dst == b)) has_free = true;
  if (has_factor) return true;
  if (has_free) return bases[b].p.size() == 1;
  return false;
}

bool HGraph::factor_degenerate(int v) const {
  if (valence_factor(v) == 0) return false;
  const Subgroup img = spec->a_image(fvs[v].factor);
  for (int x : fvs[v].s)
    if (!subgroup_contains(img, x)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// construction

HGraph build_from_generators(const AmbientSpec& spec,
                             const std::vector<NormalForm>& gens) {
  HGraph g;
  g.spec = &spec;
  g.bases.push_back({});
  g.basepoint = 0;
  g.mark = 0;
  const FiniteGroup& amal = spec.amalgam;

  for (const NormalForm& w : gens) {
    if (w.is_identity())
      throw error("build_from_generators: trivial generator");
    int cur = g.basepoint;
    int alpha = w.head;
    for (const Letter& l : w.letters) {
      if (l.kind == Letter::Kind::Factor) {
        const FiniteGroup& gi = spec.factors[l.idx];
        int m = gi.mul(spec.phi(l.idx, alpha), l.elem);
        int v = (int)g.fvs.size();
        g.fvs.push_back({l.idx, {0}, true});
        g.fedges.push_back({cur, v, 0, true});
        int rep = coset_min(gi, trivial_subgroup(), m, spec.a_image(l.idx));
        auto a = spec.phi_inv(l.idx, gi.mul(gi.inv(rep), m));
        assert(a.has_value());
        int b2 = (int)g.bases.size();
        g.bases.push_back({});
        g.fedges.push_back({b2, v, rep, true});
        cur = b2;
        alpha = *a;
      } else {
        int b2 = (int)g.bases.size();
        g.bases.push_back({});
        if (l.sign > 0) {
          g.xedges.push_back({cur, b2, l.idx, alpha, 0, true});
        } else {
          g.xedges.push_back({b2, cur, l.idx, 0, alpha, true});
        }
        cur = b2;
        alpha = l.dec;
      }
    }
    // close the path: the generator lies in H, so g_cur = h g_beta (mark *
    // alpha^-1)
    int tau = amal.mul(g.mark, amal.inv(alpha));
    if (cur == g.basepoint) {
      if (!subgroup_contains(g.bases[cur].p, tau))
        g.bases[cur].p = closure_with(amal, g.bases[cur].p, tau);
    } else {
      // cur is a fresh tail vertex: rewire its edges onto the basepoint
      for (auto& e : g.fedges)
        if (e.alive && e.b == cur) {
          int f = g.fvs[e.v].factor;
          e.b = g.basepoint;
          e.rep = spec.factors[f].mul(e.rep,
                                      spec.factors[f].inv(spec.phi(f, tau)));
        }
      for (auto& e : g.xedges) {
        if (!e.alive) continue;
        if (e.src == cur) {
          e.src = g.basepoint;
          e.d = amal.mul(tau, e.d);
        }
        if (e.dst == cur) {
          e.dst = g.basepoint;
          e.d2 = amal.mul(tau, e.d2);
        }
      }
      g.bases[cur].alive = false;
    }
  }
  fold(g);
  return g;
}

// ---------------------------------------------------------------------------
// folding

namespace {

struct Folder {
  HGraph& g;
  const AmbientSpec& spec;
  const FiniteGroup& amal;
  std::mt19937_64 rng;
  bool shuffle;

  Folder(HGraph& gr, uint64_t seed)
      : g(gr),
        spec(*gr.spec),
        amal(gr.spec->amalgam),
        rng(seed ? seed : 1),
        shuffle(seed != 0) {}

  const FiniteGroup& gi(int v) const { return spec.factors[g.fvs[v].factor]; }

  void grow_p(int b, int a) {
    if (subgroup_contains(g.bases[b].p, a)) return;
    g.bases[b].p = closure_with(amal, g.bases[b].p, a);
  }
  void grow_s(int v, int x) {
    if (subgroup_contains(g.fvs[v].s, x)) return;
    g.fvs[v].s = closure_with(gi(v), g.fvs[v].s, x);
  }

  // premise: g_{b2} = h * g_{b1} * tau
  void merge_base(int b2, int b1, int tau) {
    if (b2 == b1) {
      grow_p(b1, tau);
      return;
    }
    for (int x : g.bases[b2].p) grow_p(b1, amal.conj(tau, x));
    for (auto& e : g.fedges)
      if (e.alive && e.b == b2) {
        int f = g.fvs[e.v].factor;
        e.b = b1;
        e.rep =
            spec.factors[f].mul(e.rep, spec.factors[f].inv(spec.phi(f, tau)));
      }
    for (auto& e : g.xedges) {
      if (!e.alive) continue;
      if (e.src == b2) {
        e.src = b1;
        e.d = amal.mul(tau, e.d);
      }
      if (e.dst == b2) {
        e.dst = b1;
        e.d2 = amal.mul(tau, e.d2);
      }
    }
    if (g.basepoint == b2) {
      g.basepoint = b1;
      g.mark = amal.mul(tau, g.mark);
    }
    g.bases[b2].alive = false;
  }

  // premise: g_{v2} = h * g_{v1} * t, same factor
  void merge_factor(int v2, int v1, int t) {
    assert(v2 != v1);
    const FiniteGroup& G = gi(v1);
    for (int x : g.fvs[v2].s) grow_s(v1, G.conj(t, x));
    for (auto& e : g.fedges)
      if (e.alive && e.v == v2) {
        e.v = v1;
        e.rep = G.mul(t, e.rep);
      }
    g.fvs[v2].alive = false;
  }

  bool step() {
    struct Event {
      int kind;  // 1 FF at a base, 2 label collision at a factor vertex,
                 // 3 FB out, 4 FB in, 5 S misses conj(P), 6 P misses A-part
      int x, y;
    };
    std::vector<Event> events;

    for (int b = 0; b < (int)g.bases.size(); ++b) {
      if (!g.bases[b].alive) continue;
      std::map<int, int> seen;
      for (int e = 0; e < (int)g.fedges.size(); ++e) {
        if (!g.fedges[e].alive || g.fedges[e].b != b) continue;
        int f = g.fvs[g.fedges[e].v].factor;
        auto it = seen.find(f);
        if (it != seen.end())
          events.push_back({1, it->second, e});
        else
          seen[f] = e;
      }
    }
    for (int v = 0; v < (int)g.fvs.size(); ++v) {
      if (!g.fvs[v].alive) continue;
      std::map<int, int> seen;
      const Subgroup img = spec.a_image(g.fvs[v].factor);
      for (int e = 0; e < (int)g.fedges.size(); ++e) {
        if (!g.fedges[e].alive || g.fedges[e].v != v) continue;
        int key = coset_min(gi(v), g.fvs[v].s, g.fedges[e].rep, img);
        auto it = seen.find(key);
        if (it != seen.end())
          events.push_back({2, it->second, e});
        else
          seen[key] = e;
      }
    }
    for (int b = 0; b < (int)g.bases.size(); ++b) {
      if (!g.bases[b].alive) continue;
      std::map<std::pair<int, int>, int> out, in;
      for (int e = 0; e < (int)g.xedges.size(); ++e) {
        const auto& x = g.xedges[e];
        if (!x.alive) continue;
        if (x.src == b) {
          int key = coset_min(amal, g.bases[b].p, x.d, trivial_subgroup());
          auto it = out.find({x.gen, key});
          if (it != out.end())
            events.push_back({3, it->second, e});
          else
            out[{x.gen, key}] = e;
        }
        if (x.dst == b) {
          int key = coset_min(amal, g.bases[b].p, x.d2, trivial_subgroup());
          auto it = in.find({x.gen, key});
          if (it != in.end())
            events.push_back({4, it->second, e});
          else
            in[{x.gen, key}] = e;
        }
      }
    }
    for (int e = 0; e < (int)g.fedges.size(); ++e) {
      const auto& fe = g.fedges[e];
      if (!fe.alive) continue;
      int f = g.fvs[fe.v].factor;
      const FiniteGroup& G = spec.factors[f];
      for (int p : g.bases[fe.b].p) {
        if (!subgroup_contains(g.fvs[fe.v].s,
                               G.conj(fe.rep, spec.phi(f, p)))) {
          events.push_back({5, e, p});
          break;
        }
      }
      for (int sx : g.fvs[fe.v].s) {
        auto a = spec.phi_inv(f, G.conj(G.inv(fe.rep), sx));
        if (a && !subgroup_contains(g.bases[fe.b].p, *a)) {
          events.push_back({6, e, sx});
          break;
        }
      }
    }

    if (events.empty()) return false;
    const Event ev = shuffle ? events[rng() % events.size()] : events.front();
    switch (ev.kind) {
      case 1: {
        auto& e1 = g.fedges[ev.x];
        auto& e2 = g.fedges[ev.y];
        const FiniteGroup& G = gi(e1.v);
        if (e1.v == e2.v) {
          grow_s(e1.v, G.mul(e1.rep, G.inv(e2.rep)));
          e2.alive = false;
        } else {
          int t = G.mul(e1.rep, G.inv(e2.rep));
          int dead = e2.v;
          e2.alive = false;
          merge_factor(dead, e1.v, t);
        }
        break;
      }
      case 2: {
        auto& e1 = g.fedges[ev.x];
        auto& e2 = g.fedges[ev.y];
        const FiniteGroup& G = gi(e1.v);
        int tau = -1;
        for (int s : g.fvs[e1.v].s) {
          int x = G.mul(G.inv(G.mul(s, e1.rep)), e2.rep);
          if (auto a = spec.phi_inv(g.fvs[e1.v].factor, x)) {
            tau = *a;
            break;
          }
        }
        assert(tau >= 0);
        int b1 = e1.b, b2 = e2.b;
        e2.alive = false;
        merge_base(b2, b1, tau);
        break;
      }
      case 3: {
        auto& e1 = g.xedges[ev.x];
        auto& e2 = g.xedges[ev.y];
        int tau = amal.mul(e1.d2, amal.inv(e2.d2));
        int b2 = e2.dst, b1 = e1.dst;
        e2.alive = false;
        merge_base(b2, b1, tau);
        break;
      }
      case 4: {
        auto& e1 = g.xedges[ev.x];
        auto& e2 = g.xedges[ev.y];
        int tau = amal.mul(e1.d, amal.inv(e2.d));
        int b2 = e2.src, b1 = e1.src;
        e2.alive = false;
        merge_base(b2, b1, tau);
        break;
      }
      case 5: {
        const auto& fe = g.fedges[ev.x];
        int f = g.fvs[fe.v].factor;
        grow_s(fe.v, spec.factors[f].conj(fe.rep, spec.phi(f, ev.y)));
        break;
      }
      case 6: {
        const auto& fe = g.fedges[ev.x];
        int f = g.fvs[fe.v].factor;
        const FiniteGroup& G = spec.factors[f];
        auto a = spec.phi_inv(f, G.conj(G.inv(fe.rep), ev.y));
        assert(a.has_value());
        grow_p(fe.b, *a);
        break;
      }
    }
    return true;
  }

  void run() {
    while (step()) {
    }
    for (auto& e : g.fedges) {
      if (!e.alive) continue;
      int f = g.fvs[e.v].factor;
      Subgroup pim;
      for (int p : g.bases[e.b].p) pim.push_back(spec.phi(f, p));
      std::sort(pim.begin(), pim.end());
      e.rep = coset_min(gi(e.v), g.fvs[e.v].s, e.rep, pim);
    }
    for (auto& e : g.xedges) {
      if (!e.alive) continue;
      e.d = coset_min(amal, g.bases[e.src].p, e.d, trivial_subgroup());
      e.d2 = coset_min(amal, g.bases[e.dst].p, e.d2, trivial_subgroup());
    }
  }
};

}  // namespace

void fold(HGraph& g, uint64_t shuffle_seed) {
  Folder f(g, shuffle_seed);
  f.run();
  compact(g);
  g.folded = true;
  if (auto why = folded_violation(g))
    throw error("fold: fixpoint violates invariants: " + *why);
}

std::optional<std::string> folded_violation(const HGraph& g) {
  const AmbientSpec& spec = *g.spec;
  for (int b = 0; b < (int)g.bases.size(); ++b) {
    if (!g.bases[b].alive) continue;
    std::set<int> factors_seen;
    for (auto& e : g.fedges)
      if (e.alive && e.b == b) {
        int f = g.fvs[e.v].factor;
        if (!factors_seen.insert(f).second)
          return "base " + std::to_string(b) + " has two factor-" +
                 std::to_string(f) + " edges";
      }
    std::set<std::pair<int, int>> out, in;
    for (auto& e : g.xedges) {
      if (!e.alive) continue;
      if (e.src == b) {
        int key =
            coset_min(spec.amalgam, g.bases[b].p, e.d, trivial_subgroup());
        if (!out.insert({e.gen, key}).second)
          return "base " + std::to_string(b) + " has duplicate out-edges";
      }
      if (e.dst == b) {
        int key =
            coset_min(spec.amalgam, g.bases[b].p, e.d2, trivial_subgroup());
        if (!in.insert({e.gen, key}).second)
          return "base " + std::to_string(b) + " has duplicate in-edges";
      }
    }
  }
  for (int v = 0; v < (int)g.fvs.size(); ++v) {
    if (!g.fvs[v].alive) continue;
    const FiniteGroup& G = spec.factors[g.fvs[v].factor];
    const Subgroup img = spec.a_image(g.fvs[v].factor);
    std::set<int> keys;
    for (auto& e : g.fedges)
      if (e.alive && e.v == v) {
        int key = coset_min(G, g.fvs[v].s, e.rep, img);
        if (!keys.insert(key).second)
          return "factor vertex " + std::to_string(v) + " has equal labels";
      }
  }
  for (auto& e : g.fedges) {
    if (!e.alive) continue;
    int f = g.fvs[e.v].factor;
    const FiniteGroup& G = spec.factors[f];
    for (int p : g.bases[e.b].p)
      if (!subgroup_contains(g.fvs[e.v].s, G.conj(e.rep, spec.phi(f, p))))
        return "S_v misses a conjugate of P_b";
    for (int sx : g.fvs[e.v].s) {
      auto a = spec.phi_inv(f, G.conj(G.inv(e.rep), sx));
      if (a && !subgroup_contains(g.bases[e.b].p, *a))
        return "P_b misses the A-part of S_v";
    }
  }
  return std::nullopt;
}

void compact(HGraph& g) {
  std::vector<int> bmap(g.bases.size(), -1), vmap(g.fvs.size(), -1);
  std::vector<HGraph::BaseV> nb;
  std::vector<HGraph::FactorV> nv;
  for (size_t i = 0; i < g.bases.size(); ++i)
    if (g.bases[i].alive) {
      bmap[i] = (int)nb.size();
      nb.push_back(g.bases[i]);
    }
  for (size_t i = 0; i < g.fvs.size(); ++i)
    if (g.fvs[i].alive) {
      vmap[i] = (int)nv.size();
      nv.push_back(g.fvs[i]);
    }
  std::vector<HGraph::FEdge> nf;
  for (auto& e : g.fedges)
    if (e.alive) nf.push_back({bmap[e.b], vmap[e.v], e.rep, true});
  std::vector<HGraph::XEdge> nx;
  for (auto& e : g.xedges)
    if (e.alive)
      nx.push_back({bmap[e.src], bmap[e.dst], e.gen, e.d, e.d2, true});
  if (g.basepoint >= 0) g.basepoint = bmap[g.basepoint];
  g.bases = std::move(nb);
  g.fvs = std::move(nv);
  g.fedges = std::move(nf);
  g.xedges = std::move(nx);
}

// ---------------------------------------------------------------------------
// walking / acceptance

std::optional<WalkState> walk_amalgam(const HGraph& g, WalkState st, int a) {
  st.alpha = g.spec->amalgam.mul(st.alpha, a);
  return st;
}

std::optional<WalkState> walk_factor(const HGraph& g, WalkState st, int factor,
                                     int elem) {
  const AmbientSpec& spec = *g.spec;
  const FiniteGroup& G = spec.factors[factor];
  auto ein = g.factor_edge_at(st.base, factor);
  if (!ein) return std::nullopt;
  int v = g.fedges[*ein].v;
  int m = G.mul(G.mul(g.fedges[*ein].rep, spec.phi(factor, st.alpha)), elem);
  for (size_t e = 0; e < g.fedges.size(); ++e) {
    const auto& fe = g.fedges[e];
    if (!fe.alive || fe.v != v) continue;
    for (int s : g.fvs[v].s) {
      int x = G.mul(G.inv(G.mul(s, fe.rep)), m);
      if (auto a = spec.phi_inv(factor, x)) return WalkState{fe.b, *a};
    }
  }
  return std::nullopt;
}

std::optional<WalkState> walk_free(const HGraph& g, WalkState st, int gen,
                                   int sign) {
  const FiniteGroup& amal = g.spec->amalgam;
  for (const auto& e : g.xedges) {
    if (!e.alive || e.gen != gen) continue;
    if (sign > 0 && e.src == st.base) {
      if (subgroup_contains(g.bases[st.base].p,
                            amal.mul(st.alpha, amal.inv(e.d))))
        return WalkState{e.dst, e.d2};
    }
    if (sign < 0 && e.dst == st.base) {
      if (subgroup_contains(g.bases[st.base].p,
                            amal.mul(st.alpha, amal.inv(e.d2))))
        return WalkState{e.src, e.d};
    }
  }
  return std::nullopt;
}

std::optional<WalkState> walk_word(const HGraph& g, WalkState st,
                                   const NormalForm& w) {
  std::optional<WalkState> cur = walk_amalgam(g, st, w.head);
  for (const Letter& l : w.letters) {
    if (!cur) return std::nullopt;
    if (l.kind == Letter::Kind::Factor) {
      cur = walk_factor(g, *cur, l.idx, l.elem);
    } else {
      cur = walk_free(g, *cur, l.idx, l.sign);
      if (cur && l.dec != 0) cur = walk_amalgam(g, *cur, l.dec);
    }
  }
  return cur;
}

bool accepts(const HGraph& g, const NormalForm& w) {
  if (!g.folded || !g.marked())
    throw error("accepts: graph must be folded and marked");
  auto st = walk_word(g, WalkState{g.basepoint, g.mark}, w);
  if (!st || st->base != g.basepoint) return false;
  const FiniteGroup& amal = g.spec->amalgam;
  return subgroup_contains(g.bases[g.basepoint].p,
                           amal.mul(st->alpha, amal.inv(g.mark)));
}

// ---------------------------------------------------------------------------
// core and complexity

int flag_valence_base(const HGraph& g, const CoreFlags& f, int b) {
  int n = 0;
  for (int e = 0; e < (int)g.fedges.size(); ++e)
    n += f.fe[e] && g.fedges[e].b == b;
  for (int e = 0; e < (int)g.xedges.size(); ++e) {
    if (!f.xe[e]) continue;
    n += g.xedges[e].src == b;
    n += g.xedges[e].dst == b;
  }
  return n;
}

int flag_valence_factor(const HGraph& g, const CoreFlags& f, int v) {
  int n = 0;
  for (int e = 0; e < (int)g.fedges.size(); ++e)
    n += f.fe[e] && g.fedges[e].v == v;
  return n;
}

bool flag_base_degenerate(const HGraph& g, const CoreFlags& f, int b) {
  bool has_factor = false, has_free = false;
  for (int e = 0; e < (int)g.fedges.size(); ++e)
    if (f.fe[e] && g.fedges[e].b == b) has_factor = true;
  for (int e = 0; e < (int)g.xedges.size(); ++e)
    if (f.xe[e] && (g.xedges[e].src == b || g.xedges[e].dst == b))
      has_free = true;
  if (has_factor) return true;
  if (has_free) return g.bases[b].p.size() == 1;
  return false;
}

bool flag_factor_degenerate(const HGraph& g, const CoreFlags& f, int v) {
  if (flag_valence_factor(g, f, v) == 0) return false;
  const Subgroup img = g.spec->a_image(g.fvs[v].factor);
  for (int x : g.fvs[v].s)
    if (!subgroup_contains(img, x)) return false;
  return true;
}

CoreFlags trim_flags(const HGraph& g) {
  CoreFlags f;
  f.base.assign(g.bases.size(), 0);
  f.fv.assign(g.fvs.size(), 0);
  f.fe.assign(g.fedges.size(), 0);
  f.xe.assign(g.xedges.size(), 0);
  for (size_t i = 0; i < g.bases.size(); ++i) f.base[i] = g.bases[i].alive;
  for (size_t i = 0; i < g.fvs.size(); ++i) f.fv[i] = g.fvs[i].alive;
  for (size_t i = 0; i < g.fedges.size(); ++i) f.fe[i] = g.fedges[i].alive;
  for (size_t i = 0; i < g.xedges.size(); ++i) f.xe[i] = g.xedges[i].alive;
  bool changed = true;
  while (changed) {
    changed = false;
    for (int b = 0; b < (int)g.bases.size() && !changed; ++b) {
      if (!f.base[b]) continue;
      if (flag_valence_base(g, f, b) <= 1 && flag_base_degenerate(g, f, b)) {
        for (int e = 0; e < (int)g.fedges.size(); ++e)
          if (f.fe[e] && g.fedges[e].b == b) f.fe[e] = 0;
        for (int e = 0; e < (int)g.xedges.size(); ++e)
          if (f.xe[e] &&
              (g.xedges[e].src == b || g.xedges[e].dst == b))
            f.xe[e] = 0;
        f.base[b] = 0;
        changed = true;
      }
    }
    for (int v = 0; v < (int)g.fvs.size() && !changed; ++v) {
      if (!f.fv[v]) continue;
      if (flag_valence_factor(g, f, v) <= 1 &&
          flag_factor_degenerate(g, f, v)) {
        for (int e = 0; e < (int)g.fedges.size(); ++e)
          if (f.fe[e] && g.fedges[e].v == v) f.fe[e] = 0;
        f.fv[v] = 0;
        changed = true;
      }
    }
  }
  f.all_trimmed = true;
  for (char c : f.base)
    if (c) f.all_trimmed = false;
  for (char c : f.fv)
    if (c) f.all_trimmed = false;
  return f;
}

int max_degenerate_stab(const HGraph& g, const CoreFlags& f) {
  int m = 1;
  for (int b = 0; b < (int)g.bases.size(); ++b)
    if (f.base[b] && flag_base_degenerate(g, f, b))
      m = std::max(m, (int)g.bases[b].p.size());
  for (int v = 0; v < (int)g.fvs.size(); ++v)
    if (f.fv[v] && flag_factor_degenerate(g, f, v))
      m = std::max(m, (int)g.fvs[v].s.size());
  return m;
}

HGraph trim_core(const HGraph& g) {
  CoreFlags f = trim_flags(g);
  HGraph c = g;
  c.basepoint = -1;
  c.mark = 0;
  for (size_t i = 0; i < c.bases.size(); ++i) c.bases[i].alive = f.base[i];
  for (size_t i = 0; i < c.fvs.size(); ++i) c.fvs[i].alive = f.fv[i];
  for (size_t i = 0; i < c.fedges.size(); ++i) c.fedges[i].alive = f.fe[i];
  for (size_t i = 0; i < c.xedges.size(); ++i) c.xedges[i].alive = f.xe[i];
  if (f.all_trimmed) {
    c.bases.clear();
    c.fvs.clear();
    c.fedges.clear();
    c.xedges.clear();
    c.bases.push_back({});
  }
  compact(c);
  return c;
}

bool is_elliptic(const HGraph& core) { return core.num_alive_edges() == 0; }

bool is_edge_free(const HGraph& g) {
  for (auto& b : g.bases)
    if (b.alive && b.p.size() > 1) return false;
  for (int v = 0; v < (int)g.fvs.size(); ++v) {
    if (!g.fvs[v].alive) continue;
    const Subgroup img = g.spec->a_image(g.fvs[v].factor);
    if (subgroup_intersection(g.fvs[v].s, img).size() > 1) return false;
  }
  return true;
}

ComplexityReport complexity(const HGraph& core) {
  ComplexityReport r;
  r.elliptic = is_elliptic(core);
  int nondeg = 0;
  for (int b = 0; b < (int)core.bases.size(); ++b)
    if (core.bases[b].alive && !core.base_degenerate(b)) ++nondeg;
  for (int v = 0; v < (int)core.fvs.size(); ++v)
    if (core.fvs[v].alive && !core.factor_degenerate(v)) ++nondeg;
  r.n_nondegenerate = nondeg;
  if (r.elliptic) {
    r.rank_r = 0;
    r.c = 1;
  } else {
    int vtx = core.num_alive_bases() + core.num_alive_factors();
    r.rank_r = core.num_alive_edges() - vtx + 1;
    r.c = r.rank_r + r.n_nondegenerate;
  }
  r.c_bar = std::max(r.c - 1, 0);
  if (is_edge_free(core)) r.kurosh_rank = r.c;
  return r;
}

namespace {

Graph skeleton(const HGraph& g, std::vector<int>* base_of = nullptr,
               std::vector<int>* fv_of = nullptr) {
  Graph x;
  std::vector<int> bm(g.bases.size(), -1), vm(g.fvs.size(), -1);
  for (int b = 0; b < (int)g.bases.size(); ++b)
    if (g.bases[b].alive) bm[b] = x.add_vertex();
  for (int v = 0; v < (int)g.fvs.size(); ++v)
    if (g.fvs[v].alive) vm[v] = x.add_vertex();
  for (auto& e : g.fedges)
    if (e.alive) x.add_edge(bm[e.b], vm[e.v]);
  for (auto& e : g.xedges)
    if (e.alive) x.add_edge(bm[e.src], bm[e.dst]);
  if (base_of) *base_of = bm;
  if (fv_of) *fv_of = vm;
  return x;
}

}  // namespace

Graph tilde_graph(const HGraph& core) {
  if (is_elliptic(core)) throw error("tilde_graph: elliptic core");
  std::vector<int> bm, vm;
  Graph x = skeleton(core, &bm, &vm);
  for (int b = 0; b < (int)core.bases.size(); ++b)
    if (core.bases[b].alive && !core.base_degenerate(b))
      x.add_edge(bm[b], bm[b], "loop");
  for (int v = 0; v < (int)core.fvs.size(); ++v)
    if (core.fvs[v].alive && !core.factor_degenerate(v))
      x.add_edge(vm[v], vm[v], "loop");
  return x;
}

bool lemma1_check(const HGraph& core) {
  Graph x = tilde_graph(core);
  int cbar = complexity(core).c_bar;
  int rr = reduced_rank(x);
  long long s = 0;
  for (int v = 0; v < x.num_vertices(); ++v) s += x.degree(v) - 2;
  return cbar == rr && s % 2 == 0 && cbar == s / 2;
}

Graph to_labeled_graph(const HGraph& g) {
  const AmbientSpec& spec = *g.spec;
  Graph x;
  std::vector<int> bm(g.bases.size(), -1), vm(g.fvs.size(), -1);
  auto order_profile = [](const FiniteGroup& grp, const Subgroup& s) {
    std::multiset<int> prof;
    for (int e : s) prof.insert(grp.elem_order(e));
    std::string out;
    for (int o : prof) out += std::to_string(o) + ",";
    return out;
  };
  for (int b = 0; b < (int)g.bases.size(); ++b)
    if (g.bases[b].alive)
      bm[b] = x.add_vertex("B:" + order_profile(spec.amalgam, g.bases[b].p));
  for (int v = 0; v < (int)g.fvs.size(); ++v)
    if (g.fvs[v].alive)
      vm[v] = x.add_vertex(
          "F" + std::to_string(g.fvs[v].factor) + ":" +
          order_profile(spec.factors[g.fvs[v].factor], g.fvs[v].s));
  for (auto& e : g.fedges) {
    if (!e.alive) continue;
    const FiniteGroup& G = spec.factors[g.fvs[e.v].factor];
    Subgroup img = spec.a_image(g.fvs[e.v].factor);
    std::set<int> cls;
    for (int s : g.fvs[e.v].s)
      for (int a : img) cls.insert(G.mul(G.mul(s, e.rep), a));
    x.add_edge(bm[e.b], vm[e.v], "e:" + std::to_string(cls.size()));
  }
  for (auto& e : g.xedges) {
    if (!e.alive) continue;
    int mid = x.add_vertex("dir");
    x.add_edge(bm[e.src], mid, "xo" + std::to_string(e.gen));
    x.add_edge(mid, bm[e.dst], "xi" + std::to_string(e.gen));
  }
  return x;
}

// ---------------------------------------------------------------------------
// generators

BaseWalks base_walks(const HGraph& g) {
  if (!g.folded || !g.marked())
    throw error("base_walks: graph must be folded and marked");
  const AmbientSpec& spec = *g.spec;
  const FiniteGroup& amal = spec.amalgam;
  BaseWalks w;
  w.word.resize(g.bases.size());
  w.alpha.assign(g.bases.size(), -1);
  w.fv_entry.assign(g.fvs.size(), -1);
  w.fedge_tree.assign(g.fedges.size(), 0);
  w.xedge_tree.assign(g.xedges.size(), 0);

  w.alpha[g.basepoint] = g.mark;
  std::vector<int> queue{g.basepoint};
  for (size_t qi = 0; qi < queue.size(); ++qi) {
    int b = queue[qi];
    for (int e = 0; e < (int)g.fedges.size(); ++e) {
      const auto& fe = g.fedges[e];
      if (!fe.alive || fe.b != b) continue;
      if (w.fv_entry[fe.v] >= 0) continue;
      w.fv_entry[fe.v] = e;
      w.fedge_tree[e] = 1;
      int f = g.fvs[fe.v].factor;
      const FiniteGroup& G = spec.factors[f];
      for (int e2 = 0; e2 < (int)g.fedges.size(); ++e2) {
        const auto& fe2 = g.fedges[e2];
        if (!fe2.alive || fe2.v != fe.v || e2 == e) continue;
        if (w.alpha[fe2.b] >= 0) continue;
        w.fedge_tree[e2] = 1;
        int gelt =
            G.mul(G.inv(G.mul(fe.rep, spec.phi(f, w.alpha[b]))), fe2.rep);
        w.word[fe2.b] = w.word[b];
        w.word[fe2.b].push_back(Letter::factor(f, gelt));
        w.alpha[fe2.b] = 0;
        queue.push_back(fe2.b);
      }
    }
    for (int e = 0; e < (int)g.xedges.size(); ++e) {
      const auto& xe = g.xedges[e];
      if (!xe.alive) continue;
      if (xe.src == b && w.alpha[xe.dst] < 0) {
        w.xedge_tree[e] = 1;
        w.word[xe.dst] = w.word[b];
        w.word[xe.dst].push_back(
            Letter::amalgam(amal.mul(amal.inv(w.alpha[b]), xe.d)));
        w.word[xe.dst].push_back(Letter::free_gen(xe.gen, 1));
        w.alpha[xe.dst] = xe.d2;
        queue.push_back(xe.dst);
      } else if (xe.dst == b && w.alpha[xe.src] < 0) {
        w.xedge_tree[e] = 1;
        w.word[xe.src] = w.word[b];
        w.word[xe.src].push_back(
            Letter::amalgam(amal.mul(amal.inv(w.alpha[b]), xe.d2)));
        w.word[xe.src].push_back(Letter::free_gen(xe.gen, -1));
        w.alpha[xe.src] = xe.d;
        queue.push_back(xe.src);
      }
    }
  }
  return w;
}

std::vector<NormalForm> extract_generators(const HGraph& g) {
  if (!g.folded || !g.marked())
    throw error("extract_generators: graph must be folded and marked");
  const AmbientSpec& spec = *g.spec;
  const FiniteGroup& amal = spec.amalgam;

  BaseWalks bw = base_walks(g);
  const auto& base_alpha = bw.alpha;
  const auto& base_word = bw.word;
  const auto& fv_entry = bw.fv_entry;
  const auto& fedge_tree = bw.fedge_tree;
  const auto& xedge_tree = bw.xedge_tree;

  std::vector<NormalForm> gens;
  auto path_word = [&](int b) { return normalize(spec, base_word[b]); };
  auto add = [&](const NormalForm& w) {
    if (!w.is_identity()) gens.push_back(w);
  };

  for (int e = 0; e < (int)g.fedges.size(); ++e) {
    const auto& fe = g.fedges[e];
    if (!fe.alive || fedge_tree[e]) continue;
    int ein = fv_entry[fe.v];
    assert(ein >= 0 && ein != e);
    int b1 = g.fedges[ein].b;
    int f = g.fvs[fe.v].factor;
    const FiniteGroup& G = spec.factors[f];
    int gelt = G.mul(
        G.inv(G.mul(g.fedges[ein].rep, spec.phi(f, base_alpha[b1]))), fe.rep);
    std::vector<Letter> raw = base_word[b1];
    raw.push_back(Letter::factor(f, gelt));
    raw.push_back(Letter::amalgam(base_alpha[fe.b]));
    NormalForm w =
        multiply(spec, normalize(spec, raw), invert(spec, path_word(fe.b)));
    add(w);
  }
  for (int e = 0; e < (int)g.xedges.size(); ++e) {
    const auto& xe = g.xedges[e];
    if (!xe.alive || xedge_tree[e]) continue;
    std::vector<Letter> raw = base_word[xe.src];
    raw.push_back(
        Letter::amalgam(amal.mul(amal.inv(base_alpha[xe.src]), xe.d)));
    raw.push_back(Letter::free_gen(xe.gen, 1));
    raw.push_back(
        Letter::amalgam(amal.mul(amal.inv(xe.d2), base_alpha[xe.dst])));
    NormalForm w =
        multiply(spec, normalize(spec, raw), invert(spec, path_word(xe.dst)));
    add(w);
  }
  for (int v = 0; v < (int)g.fvs.size(); ++v) {
    if (!g.fvs[v].alive || g.fvs[v].s.size() <= 1) continue;
    int ein = fv_entry[v];
    assert(ein >= 0);
    int b1 = g.fedges[ein].b;
    int f = g.fvs[v].factor;
    const FiniteGroup& G = spec.factors[f];
    int u = G.mul(g.fedges[ein].rep, spec.phi(f, base_alpha[b1]));
    for (int s : subgroup_generators(G, g.fvs[v].s)) {
      std::vector<Letter> raw = base_word[b1];
      raw.push_back(Letter::factor(f, G.mul(G.mul(G.inv(u), s), u)));
      NormalForm w =
          multiply(spec, normalize(spec, raw), invert(spec, path_word(b1)));
      add(w);
    }
  }
  for (int b = 0; b < (int)g.bases.size(); ++b) {
    if (!g.bases[b].alive || g.bases[b].p.size() <= 1) continue;
    for (int p : subgroup_generators(amal, g.bases[b].p)) {
      std::vector<Letter> raw = base_word[b];
      raw.push_back(Letter::amalgam(
          amal.mul(amal.mul(amal.inv(base_alpha[b]), p), base_alpha[b])));
      NormalForm w =
          multiply(spec, normalize(spec, raw), invert(spec, path_word(b)));
      add(w);
    }
  }
  return gens;
}

std::string hgraph_to_dot(const HGraph& g, const std::string& name) {
  std::ostringstream os;
  os << "graph " << name << " {\n";
  for (int b = 0; b < (int)g.bases.size(); ++b) {
    if (!g.bases[b].alive) continue;
    os << "  b" << b << " [shape=point";
    if (g.bases[b].p.size() > 1)
      os << ", xlabel=\"|P|=" << g.bases[b].p.size() << "\"";
    if (b == g.basepoint) os << ", color=red";
    os << "];\n";
  }
  for (int v = 0; v < (int)g.fvs.size(); ++v) {
    if (!g.fvs[v].alive) continue;
    os << "  f" << v << " [label=\"G" << (g.fvs[v].factor + 1)
       << " |S|=" << g.fvs[v].s.size() << "\"];\n";
  }
  for (auto& e : g.fedges)
    if (e.alive)
      os << "  b" << e.b << " -- f" << e.v << " [label=\"" << e.rep
         << "\"];\n";
  for (auto& e : g.xedges)
    if (e.alive) {
      os << "  b" << e.src << " -- b" << e.dst << " [label=\"x"
         << (e.gen + 1);
      if (e.d || e.d2) os << ":" << e.d << "," << e.d2;
      os << "\"];\n";
    }
  os << "}\n";
  return os.str();
}

}  // namespace fpcore
