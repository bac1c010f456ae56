#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fpcore/ambient.hpp"

namespace fpcore {

/// Graph in the Serre sense: oriented half-edges with a fixed-point free
/// involution and an initial-vertex map. A geometric edge is an involution
/// orbit {e, inv(e)}.
class Graph {
 public:
  int add_vertex(std::string label = "");
  /// Adds the half-edge pair u -> v / v -> u; returns the id of the u -> v
  /// half. Its partner is the returned id xor 1.
  int add_edge(int u, int v, std::string label = "");

  int num_vertices() const { return (int)vertex_label_.size(); }
  int num_half_edges() const { return (int)init_.size(); }
  int num_geometric_edges() const { return num_half_edges() / 2; }

  int inv(int e) const { return e ^ 1; }
  int initial(int e) const { return init_[e]; }
  int terminal(int e) const { return init_[e ^ 1]; }

  const std::string& vertex_label(int v) const { return vertex_label_[v]; }
  const std::string& edge_label(int e) const { return edge_label_[e / 2]; }
  void set_vertex_label(int v, std::string s) { vertex_label_[v] = std::move(s); }

  int degree(int v) const;
  std::vector<int> star(int v) const;  // half-edges with initial vertex v
  int num_components() const;
  bool connected() const;

  /// Subdivides geometric edge e/2 by one new vertex (rank-invariance tests).
  void subdivide(int half_edge);

  std::string to_dot(const std::string& name = "G") const;

 private:
  std::vector<std::string> vertex_label_;
  std::vector<int> init_;                 // per half-edge
  std::vector<std::string> edge_label_;   // per geometric edge
};

/// rank = geometric edges - vertices + components (fundamental-group rank of
/// the disjoint union); reduced_rank = edges - vertices, connected input only.
int rank(const Graph& x);
int reduced_rank(const Graph& x);

/// Label-preserving isomorphism by backtracking; witness maps vertices of x
/// to vertices of y.
bool graphs_isomorphic(const Graph& x, const Graph& y,
                       std::vector<int>* witness = nullptr);

/// Graph of groups for the ambient spec: wedge point u0, one open edge to a
/// factor vertex per factor, free_rank loops at u0. In AMALGAMATED the wedge
/// point and the open edges carry A; loops always carry the trivial group.
struct GraphOfGroups {
  Graph psi;
  int wedge = -1;                       // vertex id of u0
  std::vector<int> factor_vertex;       // per factor
  std::vector<int> vertex_group_order;  // per vertex
  std::vector<int> edge_group_order;    // per geometric edge
};
GraphOfGroups build_psi(const AmbientSpec& spec);

}  // namespace fpcore
