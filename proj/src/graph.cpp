#include "fpcore/graph.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace fpcore {

int Graph::add_vertex(std::string label) {
  vertex_label_.push_back(std::move(label));
  return num_vertices() - 1;
}

int Graph::add_edge(int u, int v, std::string label) {
  if (u < 0 || u >= num_vertices() || v < 0 || v >= num_vertices())
    throw error("Graph::add_edge: bad endpoint");
  int e = num_half_edges();
  init_.push_back(u);
  init_.push_back(v);
  edge_label_.push_back(std::move(label));
  return e;
}

int Graph::degree(int v) const {
  int d = 0;
  for (int e = 0; e < num_half_edges(); ++e)
    if (init_[e] == v) ++d;
  return d;
}

std::vector<int> Graph::star(int v) const {
  std::vector<int> s;
  for (int e = 0; e < num_half_edges(); ++e)
    if (init_[e] == v) s.push_back(e);
  return s;
}

int Graph::num_components() const {
  int n = num_vertices();
  std::vector<int> comp(n, -1);
  int c = 0;
  for (int s = 0; s < n; ++s) {
    if (comp[s] >= 0) continue;
    comp[s] = c;
    std::vector<int> stack{s};
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int e = 0; e < num_half_edges(); ++e)
        if (init_[e] == v && comp[terminal(e)] < 0) {
          comp[terminal(e)] = c;
          stack.push_back(terminal(e));
        }
    }
    ++c;
  }
  return c;
}

bool Graph::connected() const { return num_components() <= 1; }

void Graph::subdivide(int half_edge) {
  int e = half_edge & ~1;
  int u = init_[e], v = init_[e + 1];
  int w = add_vertex(vertex_label_[u]);
  // e becomes u -- w, a fresh pair becomes w -- v
  init_[e + 1] = w;
  add_edge(w, v, edge_label_[e / 2]);
  (void)u;
}

std::string Graph::to_dot(const std::string& name) const {
  std::ostringstream os;
  os << "graph " << name << " {\n";
  for (int v = 0; v < num_vertices(); ++v) {
    os << "  v" << v;
    if (!vertex_label_[v].empty()) os << " [label=\"" << vertex_label_[v] << "\"]";
    os << ";\n";
  }
  for (int e = 0; e < num_half_edges(); e += 2) {
    os << "  v" << init_[e] << " -- v" << init_[e + 1];
    if (!edge_label_[e / 2].empty()) os << " [label=\"" << edge_label_[e / 2] << "\"]";
    os << ";\n";
  }
  os << "}\n";
  return os.str();
}

int rank(const Graph& x) {
  return x.num_geometric_edges() - x.num_vertices() + x.num_components();
}

int reduced_rank(const Graph& x) {
  if (!x.connected()) throw error("reduced_rank: graph is disconnected");
  return x.num_geometric_edges() - x.num_vertices();
}

namespace {

// degree- and label-aware backtracking; graphs are tiny
struct IsoSearch {
  const Graph& x;
  const Graph& y;
  std::vector<int> map;      // x vertex -> y vertex
  std::vector<char> used;

  IsoSearch(const Graph& a, const Graph& b)
      : x(a), y(b), map(a.num_vertices(), -1), used(b.num_vertices(), 0) {}

  // multiset of (edge label, neighbor mapped?, neighbor image or -1)
  bool compatible(int xv, int yv) {
    if (x.vertex_label(xv) != y.vertex_label(yv)) return false;
    if (x.degree(xv) != y.degree(yv)) return false;
    // every mapped x-edge must be matchable to a distinct y-edge
    auto xs = x.star(xv);
    auto ys = y.star(yv);
    std::vector<char> taken(ys.size(), 0);
    for (int e : xs) {
      int t = x.terminal(e);
      if (map[t] < 0 && t != xv) continue;
      int want = (t == xv) ? yv : map[t];
      bool ok = false;
      for (size_t k = 0; k < ys.size(); ++k) {
        if (taken[k]) continue;
        if (y.terminal(ys[k]) == want &&
            y.edge_label(ys[k]) == x.edge_label(e)) {
          taken[k] = 1;
          ok = true;
          break;
        }
      }
      if (!ok) return false;
    }
    return true;
  }

  bool run(int v) {
    if (v == x.num_vertices()) return verify();
    for (int w = 0; w < y.num_vertices(); ++w) {
      if (used[w] || !compatible(v, w)) continue;
      map[v] = w;
      used[w] = 1;
      if (run(v + 1)) return true;
      used[w] = 0;
      map[v] = -1;
    }
    return false;
  }

  bool verify() {
    // full multiset check of mapped edges
    std::map<std::tuple<int, int, std::string>, int> xe, ye;
    for (int e = 0; e < x.num_half_edges(); e += 2) {
      int a = map[x.initial(e)], b = map[x.terminal(e)];
      if (a > b) std::swap(a, b);
      xe[{a, b, x.edge_label(e)}]++;
    }
    for (int e = 0; e < y.num_half_edges(); e += 2) {
      int a = y.initial(e), b = y.terminal(e);
      if (a > b) std::swap(a, b);
      ye[{a, b, y.edge_label(e)}]++;
    }
    return xe == ye;
  }
};

}  // namespace

bool graphs_isomorphic(const Graph& x, const Graph& y,
                       std::vector<int>* witness) {
  if (x.num_vertices() != y.num_vertices()) return false;
  if (x.num_geometric_edges() != y.num_geometric_edges()) return false;
  IsoSearch s(x, y);
  if (!s.run(0)) return false;
  if (witness) *witness = s.map;
  return true;
}

GraphOfGroups build_psi(const AmbientSpec& spec) {
  GraphOfGroups g;
  g.wedge = g.psi.add_vertex("u0");
  g.vertex_group_order.push_back(spec.a_order());
  for (int i = 0; i < spec.num_factors(); ++i) {
    int u = g.psi.add_vertex("u" + std::to_string(i + 1));
    g.vertex_group_order.push_back(spec.factors[i].order());
    g.psi.add_edge(g.wedge, u, "e" + std::to_string(i + 1));
    g.edge_group_order.push_back(spec.a_order());
    g.factor_vertex.push_back(u);
  }
  for (int j = 0; j < spec.free_rank; ++j) {
    g.psi.add_edge(g.wedge, g.wedge, "l" + std::to_string(j + 1));
    g.edge_group_order.push_back(1);
  }
  return g;
}

}  // namespace fpcore
