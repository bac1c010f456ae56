#include "fpcore/oracle.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <map>
#include <set>

namespace fpcore {

namespace {

bool word_less(const NormalForm& a, const NormalForm& b) {
  auto ea = encode(a), eb = encode(b);
  if (ea.size() != eb.size()) return ea.size() < eb.size();
  return ea < eb;
}

int total_gen_length(const std::vector<NormalForm>& gens) {
  int n = 0;
  for (auto& g : gens) n += syllable_length(g);
  return n;
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

BallEnumeration bfs_subgroup(const AmbientSpec& spec,
                             const std::vector<NormalForm>& gens,
                             int length_budget, size_t node_cap) {
  BallEnumeration out;
  out.limit = length_budget;
  const int slack = std::min(24, 2 * total_gen_length(gens));
  const int explore = length_budget + slack;
  std::vector<NormalForm> dirs;
  for (auto& g : gens) {
    dirs.push_back(g);
    auto gi = invert(spec, g);
    if (!(gi == g)) dirs.push_back(gi);
  }
  std::unordered_set<NormalForm, NormalFormHash> seen;
  std::deque<NormalForm> queue;
  NormalForm id = normalize(spec, {});
  seen.insert(id);
  queue.push_back(id);
  while (!queue.empty()) {
    if (seen.size() >= node_cap) {
      out.truncated = true;
      break;
    }
    NormalForm w = queue.front();
    queue.pop_front();
    for (auto& g : dirs) {
      NormalForm m = multiply(spec, w, g);
      if (syllable_length(m) > explore) continue;
      if (seen.insert(m).second) queue.push_back(m);
    }
  }
  for (auto& w : seen)
    if (syllable_length(w) <= length_budget) out.elements.push_back(w);
  std::sort(out.elements.begin(), out.elements.end(), word_less);
  return out;
}

SubgroupOracle::SubgroupOracle(const AmbientSpec& spec,
                               std::vector<NormalForm> gens, int length_budget,
                               size_t node_cap)
    : spec_(&spec), gens_(std::move(gens)) {
  ball_ = bfs_subgroup(spec, gens_, length_budget, node_cap);
  set_.insert(ball_.elements.begin(), ball_.elements.end());
}

OracleVerdict SubgroupOracle::member(const NormalForm& g) const {
  return set_.count(g) ? OracleVerdict::Yes : OracleVerdict::NoAtBudget;
}

OracleVerdict hk_member(const SubgroupOracle& h, const SubgroupOracle& k,
                        const NormalForm& t) {
  const AmbientSpec& spec = h.spec();
  for (const auto& hw : h.ball().elements) {
    NormalForm rest = multiply(spec, invert(spec, hw), t);
    if (k.member(rest) == OracleVerdict::Yes) return OracleVerdict::Yes;
  }
  return OracleVerdict::NoAtBudget;
}

std::vector<NormalForm> oracle_intersection_elements(const SubgroupOracle& h,
                                                     const SubgroupOracle& k) {
  std::vector<NormalForm> out;
  for (const auto& w : h.ball().elements) {
    if (w.is_identity()) continue;
    if (k.member(w) == OracleVerdict::Yes) out.push_back(w);
  }
  return out;
}

InstanceAlphabet alphabet_of(const AmbientSpec& spec,
                             const std::vector<NormalForm>& gens) {
  std::set<int> fs, xs;
  for (auto& g : gens)
    for (auto& l : g.letters) {
      if (l.kind == Letter::Kind::Factor)
        fs.insert(l.idx);
      else
        xs.insert(l.idx);
    }
  (void)spec;
  InstanceAlphabet a;
  a.factors.assign(fs.begin(), fs.end());
  a.free_gens.assign(xs.begin(), xs.end());
  return a;
}

InstanceAlphabet full_alphabet(const AmbientSpec& spec) {
  InstanceAlphabet a;
  for (int i = 0; i < spec.num_factors(); ++i) a.factors.push_back(i);
  for (int j = 0; j < spec.free_rank; ++j) a.free_gens.push_back(j);
  return a;
}

namespace {

// canonical nonidentity letters of a factor: one representative per right
// image(A)-coset outside the image (PLAIN: every nonidentity element)
std::vector<int> factor_letter_pool(const AmbientSpec& spec, int i) {
  const FiniteGroup& g = spec.factors[i];
  const Subgroup img = spec.a_image(i);
  std::set<int> reps;
  for (int x = 1; x < g.order(); ++x) {
    if (subgroup_contains(img, x)) continue;
    reps.insert(coset_min(g, trivial_subgroup(), x, img));
  }
  return {reps.begin(), reps.end()};
}

}  // namespace

bool enumerate_ball(const AmbientSpec& spec, const InstanceAlphabet& alpha,
                    int len, size_t cap, std::vector<NormalForm>* out) {
  out->clear();
  std::vector<std::vector<int>> pools(spec.num_factors());
  for (int i : alpha.factors) pools[i] = factor_letter_pool(spec, i);
  const int aord = spec.a_order();

  bool complete = true;
  std::vector<Letter> cur;
  auto rec = [&](auto&& self, int remaining) -> void {
    if (!complete) return;
    for (int head = 0; head < aord; ++head) {
      NormalForm w;
      w.head = head;
      w.letters = cur;
      out->push_back(std::move(w));
      if (out->size() > cap) {
        complete = false;
        return;
      }
    }
    if (remaining == 0) return;
    const bool have_last = !cur.empty();
    const Letter last = have_last ? cur.back() : Letter{};
    for (int i : alpha.factors) {
      if (have_last && last.kind == Letter::Kind::Factor && last.idx == i)
        continue;
      for (int e : pools[i]) {
        cur.push_back(Letter::factor(i, e));
        self(self, remaining - 1);
        cur.pop_back();
        if (!complete) return;
      }
    }
    for (int j : alpha.free_gens)
      for (int sign : {1, -1}) {
        if (have_last && last.kind == Letter::Kind::Free && last.idx == j &&
            last.sign == -sign && last.dec == 0)
          continue;
        for (int dec = 0; dec < aord; ++dec) {
          cur.push_back(Letter::free_gen(j, sign, dec));
          self(self, remaining - 1);
          cur.pop_back();
          if (!complete) return;
        }
      }
  };
  rec(rec, len);
  return complete;
}

// ---------------------------------------------------------------------------
// tree-ball quotient

namespace {

struct BallVertex {
  NormalForm rep;  // canonical coset representative word
  bool factor = false;
  int factor_idx = -1;
  int dist = 0;
};

NormalForm word_min(std::vector<NormalForm> cands) {
  return *std::min_element(cands.begin(), cands.end(), word_less);
}

NormalForm coset_rep_base(const AmbientSpec& spec, const NormalForm& w) {
  std::vector<NormalForm> c;
  for (int a = 0; a < spec.a_order(); ++a)
    c.push_back(multiply(spec, w, normalize(spec, {Letter::amalgam(a)})));
  return word_min(std::move(c));
}

NormalForm coset_rep_factor(const AmbientSpec& spec, const NormalForm& w,
                            int i) {
  std::vector<NormalForm> c{w};
  for (int g = 1; g < spec.factors[i].order(); ++g)
    c.push_back(multiply(spec, w, normalize(spec, {Letter::factor(i, g)})));
  return word_min(std::move(c));
}

}  // namespace

TreeBallQuotient tree_ball_quotient(const AmbientSpec& spec,
                                    const std::vector<NormalForm>& gens,
                                    int radius, int length_budget,
                                    size_t vertex_cap) {
  TreeBallQuotient out;
  BallEnumeration hball = bfs_subgroup(spec, gens, length_budget);
  out.truncated = hball.truncated;

  std::map<std::vector<int64_t>, int> vid;
  std::vector<BallVertex> verts;
  auto key_of = [](const NormalForm& rep, int factor_tag) {
    auto k = encode(rep);
    k.push_back(-1000 - factor_tag);
    return k;
  };
  auto intern = [&](const NormalForm& rep, bool factor, int fidx,
                    int dist) -> int {
    auto k = key_of(rep, factor ? fidx : -1);
    auto it = vid.find(k);
    if (it != vid.end()) return it->second;
    int id = (int)verts.size();
    vid[k] = id;
    verts.push_back({rep, factor, fidx, dist});
    return id;
  };

  NormalForm one = normalize(spec, {});
  int root = intern(coset_rep_base(spec, one), false, -1, 0);
  std::deque<int> queue{root};
  bool overflow = false;
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    if (verts.size() > vertex_cap) {
      overflow = true;
      break;
    }
    const BallVertex cur = verts[v];
    if (cur.dist >= radius) continue;
    if (!cur.factor) {
      for (int i = 0; i < spec.num_factors(); ++i) {
        int u =
            intern(coset_rep_factor(spec, cur.rep, i), true, i, cur.dist + 1);
        if (verts[u].dist == cur.dist + 1) queue.push_back(u);
      }
      for (int j = 0; j < spec.free_rank; ++j)
        for (int a = 0; a < spec.a_order(); ++a)
          for (int sign : {1, -1}) {
            NormalForm g =
                multiply(spec, cur.rep, normalize(spec, {Letter::amalgam(a)}));
            NormalForm tgt =
                multiply(spec, g, normalize(spec, {Letter::free_gen(j, sign)}));
            int u = intern(coset_rep_base(spec, tgt), false, -1, cur.dist + 1);
            if (verts[u].dist == cur.dist + 1) queue.push_back(u);
          }
    } else {
      for (int g = 0; g < spec.factors[cur.factor_idx].order(); ++g) {
        NormalForm nxt =
            g == 0 ? cur.rep
                   : multiply(
                         spec, cur.rep,
                         normalize(spec, {Letter::factor(cur.factor_idx, g)}));
        int u = intern(coset_rep_base(spec, nxt), false, -1, cur.dist + 1);
        if (verts[u].dist == cur.dist + 1) queue.push_back(u);
      }
    }
  }
  out.truncated = out.truncated || overflow;

  // free edges with both endpoints inside the ball
  struct FreeEdge {
    NormalForm g;
    int gen;
    int src, dst;
  };
  std::vector<FreeEdge> elist;
  std::map<std::vector<int64_t>, int> eid;
  for (int v = 0; v < (int)verts.size(); ++v) {
    if (verts[v].factor) continue;
    for (int j = 0; j < spec.free_rank; ++j)
      for (int a = 0; a < spec.a_order(); ++a) {
        NormalForm g =
            multiply(spec, verts[v].rep, normalize(spec, {Letter::amalgam(a)}));
        NormalForm tgt =
            multiply(spec, g, normalize(spec, {Letter::free_gen(j, 1)}));
        auto it = vid.find(key_of(coset_rep_base(spec, tgt), -1));
        if (it == vid.end()) continue;
        auto ek = encode(g);
        ek.push_back(-2000 - j);
        if (!eid.count(ek)) {
          eid[ek] = (int)elist.size();
          elist.push_back({g, j, v, it->second});
        }
      }
  }

  UnionFind uf((int)verts.size());
  UnionFind euf(std::max(1, (int)elist.size()));
  for (const auto& h : hball.elements) {
    if (h.is_identity()) continue;
    for (int v = 0; v < (int)verts.size(); ++v) {
      NormalForm moved = multiply(spec, h, verts[v].rep);
      NormalForm rep = verts[v].factor
                           ? coset_rep_factor(spec, moved, verts[v].factor_idx)
                           : coset_rep_base(spec, moved);
      auto it =
          vid.find(key_of(rep, verts[v].factor ? verts[v].factor_idx : -1));
      if (it != vid.end()) uf.join(v, it->second);
    }
    for (int e = 0; e < (int)elist.size(); ++e) {
      NormalForm moved = multiply(spec, h, elist[e].g);
      auto mk = encode(moved);
      mk.push_back(-2000 - elist[e].gen);
      auto it = eid.find(mk);
      if (it != eid.end()) euf.join(e, it->second);
    }
  }

  auto stab_order = [&](int v) -> int {
    std::set<std::vector<int64_t>> stab;
    std::vector<NormalForm> elems;
    for (const auto& h : hball.elements) {
      NormalForm moved = multiply(spec, h, verts[v].rep);
      NormalForm rep = verts[v].factor
                           ? coset_rep_factor(spec, moved, verts[v].factor_idx)
                           : coset_rep_base(spec, moved);
      if (rep == verts[v].rep && stab.insert(encode(h)).second)
        elems.push_back(h);
    }
    for (size_t i = 0; i < elems.size() && elems.size() < 512; ++i)
      for (size_t j = 0; j < elems.size() && elems.size() < 512; ++j) {
        NormalForm p = multiply(spec, elems[i], elems[j]);
        if (stab.insert(encode(p)).second) elems.push_back(p);
      }
    return (int)elems.size();
  };

  std::map<int, int> class_of, cls_stab;
  for (int v = 0; v < (int)verts.size(); ++v) {
    int r = uf.find(v);
    if (!class_of.count(r)) {
      class_of[r] = (int)out.vertices.size();
      cls_stab[r] = stab_order(r);
      out.vertices.push_back(
          {verts[r].factor, verts[r].factor_idx, cls_stab[r], verts[r].dist});
    }
  }
  out.base_class = class_of[uf.find(root)];

  // factor edges share their A-coset with the base endpoint, so base-vertex
  // orbits index them
  std::set<std::pair<int, int>> fedge_seen;
  for (int v = 0; v < (int)verts.size(); ++v) {
    if (verts[v].factor) continue;
    for (int i = 0; i < spec.num_factors(); ++i) {
      auto it = vid.find(key_of(coset_rep_factor(spec, verts[v].rep, i), i));
      if (it == vid.end()) continue;
      if (fedge_seen.insert({uf.find(v), i}).second)
        out.edges.push_back({class_of[uf.find(v)],
                             class_of[uf.find(it->second)], false, -1,
                             cls_stab[uf.find(v)], true});
    }
  }
  std::set<int> xedge_seen;
  for (int e = 0; e < (int)elist.size(); ++e) {
    int r = euf.find(e);
    if (!xedge_seen.insert(r).second) continue;
    out.edges.push_back({class_of[uf.find(elist[e].src)],
                         class_of[uf.find(elist[e].dst)], true, elist[e].gen,
                         1, true});
  }
  return out;
}

Graph TreeBallQuotient::comparison_graph() const {
  Graph g;
  std::vector<int> vm(vertices.size());
  for (size_t v = 0; v < vertices.size(); ++v) {
    const auto& x = vertices[v];
    vm[v] = g.add_vertex(x.factor ? "F" + std::to_string(x.factor_idx) + ":" +
                                        std::to_string(x.stab)
                                  : "B:" + std::to_string(x.stab));
  }
  for (const auto& e : edges) {
    if (!e.free_edge) {
      g.add_edge(vm[e.a], vm[e.b], "e:" + std::to_string(e.stab));
    } else {
      int mid = g.add_vertex("dir");
      g.add_edge(vm[e.a], mid, "xo" + std::to_string(e.gen));
      g.add_edge(mid, vm[e.b], "xi" + std::to_string(e.gen));
    }
  }
  return g;
}

TreeBallQuotient TreeBallQuotient::stripped() const {
  TreeBallQuotient t = *this;
  std::vector<char> valive(t.vertices.size(), 1), ealive(t.edges.size(), 1);
  bool changed = true;
  while (changed) {
    changed = false;
    for (int v = 0; v < (int)t.vertices.size(); ++v) {
      if (!valive[v]) continue;
      int valence = 0;
      bool degenerate = false;
      for (int e = 0; e < (int)t.edges.size(); ++e) {
        if (!ealive[e]) continue;
        if (t.edges[e].a == v) ++valence;
        if (t.edges[e].b == v) ++valence;
        if (t.edges[e].a == v || t.edges[e].b == v) {
          int es = t.edges[e].free_edge ? 1 : t.edges[e].stab;
          if (es == t.vertices[v].stab) degenerate = true;
        }
      }
      if (valence == 1 && degenerate) {
        valive[v] = 0;
        for (int e = 0; e < (int)t.edges.size(); ++e)
          if (ealive[e] && (t.edges[e].a == v || t.edges[e].b == v))
            ealive[e] = 0;
        changed = true;
      }
    }
  }
  TreeBallQuotient res;
  res.truncated = t.truncated;
  std::vector<int> vm(t.vertices.size(), -1);
  for (int v = 0; v < (int)t.vertices.size(); ++v)
    if (valive[v]) {
      vm[v] = (int)res.vertices.size();
      res.vertices.push_back(t.vertices[v]);
    }
  for (int e = 0; e < (int)t.edges.size(); ++e)
    if (ealive[e]) {
      auto edge = t.edges[e];
      edge.a = vm[edge.a];
      edge.b = vm[edge.b];
      res.edges.push_back(edge);
    }
  res.base_class =
      t.base_class >= 0 && valive[t.base_class] ? vm[t.base_class] : -1;
  return res;
}

Graph core_comparison_graph(const HGraph& core) {
  Graph g;
  std::vector<int> bm(core.bases.size(), -1), vm(core.fvs.size(), -1);
  for (int b = 0; b < (int)core.bases.size(); ++b)
    if (core.bases[b].alive)
      bm[b] = g.add_vertex("B:" + std::to_string((int)core.bases[b].p.size()));
  for (int v = 0; v < (int)core.fvs.size(); ++v)
    if (core.fvs[v].alive)
      vm[v] = g.add_vertex("F" + std::to_string(core.fvs[v].factor) + ":" +
                           std::to_string((int)core.fvs[v].s.size()));
  for (auto& e : core.fedges)
    if (e.alive)
      g.add_edge(bm[e.b], vm[e.v],
                 "e:" + std::to_string((int)core.bases[e.b].p.size()));
  for (auto& e : core.xedges)
    if (e.alive) {
      int mid = g.add_vertex("dir");
      g.add_edge(bm[e.src], mid, "xo" + std::to_string(e.gen));
      g.add_edge(mid, bm[e.dst], "xi" + std::to_string(e.gen));
    }
  return g;
}

FiberCount oracle_fiber_count(const SubgroupOracle& h, const SubgroupOracle& k,
                              const FiberCellQuery& q) {
  const AmbientSpec& spec = h.spec();
  const FiniteGroup& coords =
      q.factor_cell ? spec.factors[q.factor] : spec.amalgam;
  NormalForm winv = invert(spec, q.witness);
  std::vector<char> inset(coords.order(), 0);
  bool unverified = false;
  for (int m = 0; m < coords.order(); ++m) {
    Letter l = q.factor_cell ? Letter::factor(q.factor, m) : Letter::amalgam(m);
    NormalForm t =
        multiply(spec, multiply(spec, q.witness, normalize(spec, {l})), winv);
    if (hk_member(h, k, t) == OracleVerdict::Yes)
      inset[m] = 1;
    else
      unverified = true;  // semi-decided: might still lie in HK
  }
  std::vector<char> seen(coords.order(), 0);
  int count = 0;
  for (int m = 0; m < coords.order(); ++m) {
    if (!inset[m] || seen[m]) continue;
    ++count;
    for (int a : q.hx)
      for (int b : q.kx) {
        int x = coords.mul(coords.mul(a, m), b);
        if (inset[x]) seen[x] = 1;
      }
  }
  FiberCount fc;
  fc.count = count;
  fc.verified = !unverified && !h.truncated() && !k.truncated();
  return fc;
}

}  // namespace fpcore
