#include "doctest.h"
#include "fpcore/graph.hpp"

#include <algorithm>
#include <random>

using namespace fpcore;

namespace {

Graph circle(int n) {
  Graph g;
  for (int i = 0; i < n; ++i) g.add_vertex();
  for (int i = 0; i < n; ++i) g.add_edge(i, (i + 1) % n);
  return g;
}

}  // namespace

TEST_CASE("rank basics") {
  auto c4 = circle(4);
  CHECK(rank(c4) == 1);
  CHECK(reduced_rank(c4) == 0);

  Graph wedge;
  int v = wedge.add_vertex();
  wedge.add_edge(v, v);
  wedge.add_edge(v, v);
  CHECK(rank(wedge) == 2);
  CHECK(reduced_rank(wedge) == 1);

  Graph tree;
  int a = tree.add_vertex(), b = tree.add_vertex(), c = tree.add_vertex();
  tree.add_edge(a, b);
  tree.add_edge(b, c);
  CHECK(rank(tree) == 0);
  CHECK(reduced_rank(tree) == -1);

  Graph two = circle(3);
  two.add_vertex();
  CHECK(two.num_components() == 2);
  CHECK_THROWS_AS(reduced_rank(two), error);
}

TEST_CASE("rank invariant under subdivision") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 30; ++trial) {
    Graph g;
    int n = 3 + (int)(rng() % 5);
    for (int i = 0; i < n; ++i) g.add_vertex();
    int m = 1 + (int)(rng() % 8);
    for (int i = 0; i < m; ++i)
      g.add_edge((int)(rng() % n), (int)(rng() % n));
    int r = rank(g);
    for (int s = 0; s < 5; ++s) {
      g.subdivide((int)(rng() % g.num_half_edges()));
      CHECK(rank(g) == r);
    }
  }
}

TEST_CASE("isomorphism") {
  auto c4 = circle(4);
  std::vector<int> w;
  CHECK(graphs_isomorphic(c4, c4, &w));
  for (size_t i = 0; i < w.size(); ++i) CHECK(w[i] >= 0);

  CHECK(!graphs_isomorphic(circle(4), circle(5)));

  // random relabeling of the same graph
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    Graph g;
    int n = 4 + (int)(rng() % 4);
    std::vector<std::string> labels = {"p", "q"};
    for (int i = 0; i < n; ++i) g.add_vertex(labels[rng() % 2]);
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n + 2; ++i)
      edges.push_back({(int)(rng() % n), (int)(rng() % n)});
    for (auto [u, v] : edges) g.add_edge(u, v, "e");

    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    Graph h;
    std::vector<int> inv(n);
    for (int i = 0; i < n; ++i) inv[perm[i]] = i;
    for (int i = 0; i < n; ++i) h.add_vertex(g.vertex_label(inv[i]));
    auto shuffled = edges;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    for (auto [u, v] : shuffled) h.add_edge(perm[u], perm[v], "e");
    CHECK(graphs_isomorphic(g, h));
  }

  // labels must match
  Graph a, b;
  a.add_vertex("x");
  b.add_vertex("y");
  CHECK(!graphs_isomorphic(a, b));
}

TEST_CASE("build_psi") {
  auto spec = plain_spec({FiniteGroup::cyclic(2), FiniteGroup::cyclic(3)}, 0);
  auto g = build_psi(spec);
  CHECK(g.psi.num_vertices() == 3);
  CHECK(g.psi.num_geometric_edges() == 2);
  CHECK(rank(g.psi) == 0);

  auto bouquet = build_psi(plain_spec({}, 2));
  CHECK(bouquet.psi.num_vertices() == 1);
  CHECK(bouquet.psi.num_geometric_edges() == 2);
  CHECK(rank(bouquet.psi) == 2);

  EmbeddingMap e{{0, 2}};
  auto am = amalgamated_spec({FiniteGroup::cyclic(4), FiniteGroup::cyclic(4)},
                             FiniteGroup::cyclic(2), {e, e}, 0);
  auto ga = build_psi(am);
  CHECK(ga.vertex_group_order[ga.wedge] == 2);
  CHECK(ga.edge_group_order[0] == 2);
  CHECK(ga.edge_group_order[1] == 2);

  // psi has rank == free_rank
  for (int fr = 0; fr <= 3; ++fr) {
    auto s = plain_spec({FiniteGroup::cyclic(2)}, fr);
    CHECK(rank(build_psi(s).psi) == fr);
  }
}

TEST_CASE("dot export is stable") {
  auto g = circle(3);
  auto d1 = g.to_dot("X");
  auto d2 = g.to_dot("X");
  CHECK(d1 == d2);
  CHECK(d1.find("v0 -- v1") != std::string::npos);
}
