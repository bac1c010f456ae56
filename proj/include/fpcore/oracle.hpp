#pragma once

#include <unordered_set>
#include <vector>

#include "fpcore/graph.hpp"
#include "fpcore/hgraph.hpp"
#include "fpcore/word.hpp"

namespace fpcore {

/// Oracles never consult the folding machinery: everything here is bounded
/// enumeration over ambient-group word arithmetic. Verdicts are
/// semi-decisions, and every negative answer carries its budget.

struct BallEnumeration {
  std::vector<NormalForm> elements;  // normal forms of syllable length <= limit
  int limit = 0;
  bool truncated = false;  // node cap hit: the set may be incomplete
};

/// Subgroup elements of syllable length <= length_budget reachable by
/// generator products whose intermediate normal forms stay within a slack
/// region (length_budget + 2 * total generator length, capped). Monotone in
/// the budget.
BallEnumeration bfs_subgroup(const AmbientSpec& spec,
                             const std::vector<NormalForm>& gens,
                             int length_budget, size_t node_cap = 400000);

enum class OracleVerdict { Yes, NoAtBudget };

/// Cached ball plus constant-time membership answers.
class SubgroupOracle {
 public:
  SubgroupOracle(const AmbientSpec& spec, std::vector<NormalForm> gens,
                 int length_budget, size_t node_cap = 400000);

  OracleVerdict member(const NormalForm& g) const;
  const BallEnumeration& ball() const { return ball_; }
  const std::vector<NormalForm>& gens() const { return gens_; }
  const AmbientSpec& spec() const { return *spec_; }
  bool truncated() const { return ball_.truncated; }

 private:
  const AmbientSpec* spec_;
  std::vector<NormalForm> gens_;
  BallEnumeration ball_;
  std::unordered_set<NormalForm, NormalFormHash> set_;
};

/// t in HK iff some h in the H-ball has h^-1 t in the K-ball.
OracleVerdict hk_member(const SubgroupOracle& h, const SubgroupOracle& k,
                        const NormalForm& t);

/// Elements common to both balls (identity excluded): generators for the
/// bounded approximation of the intersection subgroup.
std::vector<NormalForm> oracle_intersection_elements(const SubgroupOracle& h,
                                                     const SubgroupOracle& k);

/// Letters available to an instance: the factors and free generators its
/// generating words mention.
struct InstanceAlphabet {
  std::vector<int> factors;
  std::vector<int> free_gens;
};
InstanceAlphabet alphabet_of(const AmbientSpec& spec,
                             const std::vector<NormalForm>& gens);
InstanceAlphabet full_alphabet(const AmbientSpec& spec);

/// All canonical normal forms over the alphabet with syllable length <= len.
/// Returns true when complete, false when the cap stopped enumeration.
bool enumerate_ball(const AmbientSpec& spec, const InstanceAlphabet& alpha,
                    int len, size_t cap, std::vector<NormalForm>* out);

/// Quotient of the radius-R ball of the Bass-Serre tree by the bounded
/// subgroup ball. Vertices/edges carry stabilizer orders (computed from the
/// ball, hence lower bounds at small budgets).
struct TreeBallQuotient {
  struct Vertex {
    bool factor = false;
    int factor_idx = -1;
    int stab = 1;
    int dist = 0;
  };
  struct Edge {
    int a = -1, b = -1;  // vertex class ids
    bool free_edge = false;
    int gen = -1;  // free edges
    int stab = 1;
    bool a_to_b = true;  // orientation for free edges
  };
  std::vector<Vertex> vertices;
  std::vector<Edge> edges;
  int base_class = -1;
  bool truncated = false;

  /// Comparison graph in the same label format as core_comparison_graph.
  Graph comparison_graph() const;
  /// Removes hair: valence-<=1 vertices whose stabilizer matches an
  /// incident edge stabilizer, iterated.
  TreeBallQuotient stripped() const;
};
TreeBallQuotient tree_ball_quotient(const AmbientSpec& spec,
                                    const std::vector<NormalForm>& gens,
                                    int radius, int length_budget,
                                    size_t vertex_cap = 4000);

/// Same label format for a trimmed core, so the two sides can be compared
/// with graphs_isomorphic.
Graph core_comparison_graph(const HGraph& core);

/// One pullback cell described independently of the pullback structures:
/// a witness word reaching the tree object, which coordinate group carries
/// its stabilizer, and the two side stabilizers in those coordinates.
struct FiberCellQuery {
  NormalForm witness;
  bool factor_cell = false;
  int factor = -1;  // valid when factor_cell
  Subgroup hx{0};   // in G_factor coords (factor cell) or A coords
  Subgroup kx{0};
};
struct FiberCount {
  bool verified = false;
  int count = 0;  // |hx \ (G_x cap HK) / kx| over the verified part
};
FiberCount oracle_fiber_count(const SubgroupOracle& h, const SubgroupOracle& k,
                              const FiberCellQuery& q);

}  // namespace fpcore
